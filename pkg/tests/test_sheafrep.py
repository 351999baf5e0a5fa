from __future__ import annotations

import pytest
from conftest import TREFOIL
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import p1_walk_count

from legendrian_lab import cylindrical_closure, parse_braid, rainbow_closure
from legendrian_lab.augvar import dgas_for, enumerate_augmentations, point_counts
from legendrian_lab.errors import DisconnectedClosureError, DomainError
from legendrian_lab.sheafrep import (
    QuiverRep,
    act,
    build_quiver,
    equivariance_and_injectivity,
    phi_of_augmentation,
    projective_line,
    sheaf_count_oracle_n2,
    theta,
    validate_rep,
)

B = parse_braid(TREFOIL)
AUG3 = enumerate_augmentations(dgas_for(B)[0], 3)


def test_trefoil_quiver():
    Q = build_quiver(rainbow_closure(B))
    assert {v: Q.d(v) for v in Q.vertices} == {"L-": 0, "1": 1, "2": 1, "3": 1, "4": 1, "U": 2, "U1": 1, "L+": 0}
    assert Q.is_acyclic()
    assert [sq.crossing for sq in Q.squares] == ["a1", "a2", "a3"]
    sq = Q.squares[1]
    assert (sq.N, sq.W, sq.E, sq.S) == ("U", "2", "3", "L-")
    assert set(Q.to_json()) == {"kind", "vertices", "arcs", "relations"}


def test_cylindrical_quiver_is_acyclic():
    Q = build_quiver(cylindrical_closure(parse_braid("2: 1")))
    assert Q.kind == "cylindrical"
    assert Q.is_acyclic()
    assert len(Q.squares) == 3  # sigma_1 Delta^2 has three crossings


def test_phi_is_valid_on_every_trefoil_augmentation():
    for e in AUG3:
        rep = phi_of_augmentation(e, B)
        assert validate_rep(rep).ok
        assert rep.maps["u1"] == ((0, 1),)


def test_equal_consecutive_lines_fail_at_the_crossing():
    rep = phi_of_augmentation(AUG3[0], B)
    maps = dict(rep.maps)
    maps["s1.3"] = maps["s1.2"]
    report = validate_rep(QuiverRep(rep.quiver, rep.q, maps))
    assert not report.ok
    assert report.failure.startswith("a2")


def test_non_injective_map_is_reported():
    rep = phi_of_augmentation(AUG3[0], B)
    maps = dict(rep.maps)
    maps["s1.1"] = ((0,), (0,))
    assert "not injective" in validate_rep(QuiverRep(rep.quiver, rep.q, maps)).failure


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(AUG3), st.tuples(st.integers(1, 2), st.integers(1, 2)),
       st.tuples(st.integers(1, 2), st.integers(1, 2)))
def test_theta_action_composes(e, lam, mu):
    rep = phi_of_augmentation(e, B)
    Q = rep.quiver
    prod = tuple(x * y % 3 for x, y in zip(lam, mu))
    assert act(theta(lam, B, Q), act(theta(mu, B, Q), rep)).key() == act(theta(prod, B, Q), rep).key()
    assert act(theta((2, 2), B, Q), rep).key() == rep.key()


@pytest.mark.parametrize("text", [TREFOIL, "3: 1 2 2 2", "3: 1 1 2 1"])
@pytest.mark.parametrize("q", [2, 3])
def test_equivariance_and_injectivity(text, q):
    b = parse_braid(text)
    rep = equivariance_and_injectivity(dgas_for(b)[0], q)
    assert rep.ok, rep.counterexample
    for e in enumerate_augmentations(dgas_for(b)[0], q):
        assert validate_rep(phi_of_augmentation(e, b)).ok


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_projective_line(q):
    pts = projective_line(q)
    assert len(pts) == len(set(pts)) == q + 1


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 6])
@pytest.mark.parametrize("q", [2, 3])
def test_line_tuple_closed_form(N, q):
    b = parse_braid(f"2: 1^{N}")
    if not b.is_connected():
        with pytest.raises(DisconnectedClosureError):
            sheaf_count_oracle_n2(b, q)
        return
    count = sheaf_count_oracle_n2(b, q)
    assert count == p1_walk_count(N, q)
    da, ds = dgas_for(b)
    assert count == (q - 1) * point_counts(da, q, ds).mb


def test_oracle_needs_two_strands():
    with pytest.raises(DomainError):
        sheaf_count_oracle_n2(parse_braid("3: 1 2"), 2)
