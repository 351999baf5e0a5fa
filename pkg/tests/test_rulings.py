from __future__ import annotations

from collections import Counter

import pytest
from conftest import CORPUS, TREFOIL
from hypothesis import given, settings
from oracles import brute_force_rulings
from test_braidfront import braids

from legendrian_lab import cylindrical_closure, parse_braid, rainbow_closure
from legendrian_lab.errors import DisconnectedClosureError, DomainError, InvariantViolation
from legendrian_lab.rulings import (
    NormalRuling,
    cell_dual_boundary,
    classify_and_count,
    dimension_and_top_ruling,
    dual_boundary_type,
    enumerate_rulings,
    eye_decomposition,
    is_normal_switch,
    nested,
    predicted_counts,
    validate_ruling,
)


def _rulings(text: str):
    return enumerate_rulings(rainbow_closure(parse_braid(text)))


def test_trefoil_rulings():
    rs = _rulings(TREFOIL)
    assert [(r.key, "".join(r.kinds)) for r in rs] == [("111", "SSS"), ("100", "SDR"), ("001", "DRS")]
    assert rs[1].to_json() == {"key": "100", "s": 1, "r": 1, "d": 1, "switches": ["a1"], "returns": ["a3"],
                               "departures": ["a2"]}


def test_sigma1_fifth_census():
    assert Counter((r.s, r.r) for r in _rulings("2: 1^5")) == Counter({(5, 0): 1, (3, 1): 4, (1, 2): 3})


@settings(max_examples=60, deadline=None)
@given(braids(max_n=4, max_len=8))
def test_sweep_matches_brute_force(b):
    got = [(r.key, "".join(r.kinds)) for r in enumerate_rulings(rainbow_closure(b))]
    assert got == brute_force_rulings(b.n, b.letters)


@settings(max_examples=60, deadline=None)
@given(braids(max_n=4, max_len=8))
def test_index_constant_and_eyes(b):
    rs = enumerate_rulings(rainbow_closure(b))
    assert len({r.s + 2 * r.r for r in rs}) <= 1
    for r in rs:
        validate_ruling(r)
        assert r.s + r.r + r.d == len(b.letters)
        assert r.r == r.d
        if b.is_connected():
            stats = classify_and_count(r, b)
            assert stats.euler == b.n - r.s
            assert eye_decomposition(r).circles == b.n


def test_nested_and_normality():
    assert nested(4) == (4, 3, 2, 1)
    # strands 2,3 paired with 1 and 4: nested, a switch there is normal
    assert is_normal_switch((4, 3, 2, 1), 2) is False  # 2 and 3 are paired together
    assert is_normal_switch((6, 5, 4, 3, 2, 1), 2)
    assert not is_normal_switch((3, 4, 1, 2), 2)


def test_validate_rejects_misclassified_crossing():
    r = _rulings(TREFOIL)[1]
    bad = NormalRuling(r.n, r.letters, r.involutions, ("S", "R", "R"))
    with pytest.raises(InvariantViolation):
        validate_ruling(bad)
    bad = NormalRuling(r.n, r.letters, r.involutions[:-1], r.kinds)
    with pytest.raises(InvariantViolation):
        validate_ruling(bad)


def test_trefoil_top_ruling_eyes():
    top = _rulings(TREFOIL)[0]
    eyes = eye_decomposition(top)
    assert len(eyes.eyes) == 2
    assert [c for c, _, _ in eyes.switch_incidence] == ["a1", "a2", "a3"]
    assert all({e1, e2} == {1, 2} for _, e1, e2 in eyes.switch_incidence)


@pytest.mark.parametrize("text,d,genus", [("2: 1", 0, 0), (TREFOIL, 2, 1), ("2: 1^5", 4, 2), ("3: 1 2 2 2", 2, 1),
                                          ("3: 2 1 2 2 1 2 2 1", 6, 3), ("4: 2 2 1 2 3", 2, 1)])
def test_dimension_and_genus(text, d, genus):
    b = parse_braid(text)
    top = dimension_and_top_ruling(rainbow_closure(b))
    assert top.d == d == len(b.letters) - b.n + 1
    assert top.index == len(b.letters)
    assert classify_and_count(top.top, b).genus == genus


def test_genus_counts_link_components():
    # sigma_1^2 closes to a two-component link: s - n + 2 - b = 2 - 2 + 2 - 2 = 0
    b = parse_braid("2: 1 1")
    assert classify_and_count(enumerate_rulings(rainbow_closure(b))[0], b).genus == 0


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_predicted_counts_trefoil(q):
    pc = predicted_counts(rainbow_closure(parse_braid(TREFOIL)), q)
    assert pc.aug_total == (q - 1) * (q * q + 1)
    assert pc.mb_total == q * q + 1
    assert {row[0]: row[4] for row in pc.per_ruling} == {"111": (q - 1) ** 2, "100": q, "001": q}


def test_cell_dual_boundary():
    assert cell_dual_boundary(3, 0) == "S^2"
    assert cell_dual_boundary(2, 0) == "S^1"
    assert cell_dual_boundary(1, 3) == "contractible"
    assert cell_dual_boundary(2, 1) == "contractible"
    assert cell_dual_boundary(0, 0) == "empty"
    with pytest.raises(DomainError):
        cell_dual_boundary(-1, 0)


@pytest.mark.parametrize("text", [t for t in CORPUS if parse_braid(t).is_connected() and t != "2: 1"])
def test_dual_boundary_is_a_sphere(text):
    rep = dual_boundary_type(rainbow_closure(parse_braid(text)))
    assert rep.dual_boundary == f"S^{rep.d - 1}"
    sizes = [a + b for _, a, b, _ in rep.removal_order]
    assert sizes == sorted(sizes)
    cells = rep.to_json()["removal_order"]
    assert cells[-1]["cell"] == rep.dual_boundary and cells[-1]["b"] == 0
    assert all(c["cell"] == "contractible" for c in cells[:-1])


def test_domain_errors():
    with pytest.raises(DomainError):
        dual_boundary_type(rainbow_closure(parse_braid("2: 1")))
    with pytest.raises(DisconnectedClosureError):
        dimension_and_top_ruling(rainbow_closure(parse_braid("3: 1 2 1")))
    with pytest.raises(DisconnectedClosureError):
        predicted_counts(rainbow_closure(parse_braid("2: 1 1")), 2)
    with pytest.raises(DomainError):
        enumerate_rulings(cylindrical_closure(parse_braid("2: 1")))
