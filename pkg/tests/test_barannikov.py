from __future__ import annotations

import pytest
from conftest import RANDOM_CORPUS, TREFOIL
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import trefoil_frames

from legendrian_lab import parse_braid
from legendrian_lab.algebra import get_field, mat_mul, mat_solve
from legendrian_lab.augvar import dgas_for, enumerate_augmentations
from legendrian_lab.barannikov import (
    FilteredComplex,
    barannikov_normal_form,
    morse_frames,
    r_coordinate,
    r_coordinate_census,
    r_vector,
    ruling_of,
)
from legendrian_lab.errors import InvariantViolation

B = parse_braid(TREFOIL)
F5 = get_field(5)
AUG5 = enumerate_augmentations(dgas_for(B)[0], 5)


def test_trefoil_frames_match_closed_forms():
    for e in AUG5:
        a1, a2, a3 = e.alpha()
        for s, (e1, e2) in zip(morse_frames(e, B), trefoil_frames(a1, a2, a3, F5)):
            assert [row[0] for row in s.frame] == list(e1)
            assert [row[1] for row in s.frame] == list(e2)


def _inv(x: int) -> int:
    return F5.inv(x)


def _neg(x: int) -> int:
    return F5.neg(x)


def _expected_r(key: str, a1: int, a2: int, a3: int) -> tuple[int, int, int]:
    add, mul = F5.add, F5.mul
    if key == "100":
        return _neg(a1), 0, _neg(add(_inv(a2), a3))
    if key == "001":
        return 0, _neg(a2), _neg(a3)
    one = add(1, mul(a1, a2))
    return _neg(a1), _neg(mul(_inv(a1), one)), _neg(mul(_inv(one), add(add(a1, a3), mul(mul(a1, a2), a3))))


def test_trefoil_r_coordinates_per_ruling():
    seen = set()
    for e in AUG5:
        a1, a2, a3 = e.alpha()
        key = ruling_of(e, B).key
        seen.add(key)
        assert tuple(r_coordinate(e, B, m) for m in (1, 2, 3)) == _expected_r(key, a1, a2, a3)
    assert seen == {"001", "100", "111"}


def test_trefoil_a34_coefficients():
    for e in AUG5:
        a1, a2, _ = e.alpha()
        key = ruling_of(e, B).key
        forms = [barannikov_normal_form(s.complex) for s in morse_frames(e, B)]
        a34 = [nf.a.get((3, 4), 0) for nf in forms]  # a34 at x_1 .. x_4
        if key == "100":
            assert a34[1:3] == [_inv(a1), _inv(a2)]
        elif key == "001":
            assert a34[1:3] == [0, 0]
        else:
            assert a34[2] == F5.mul(_inv(F5.add(1, F5.mul(a1, a2))), a1)


def test_trefoil_pairings():
    e = next(x for x in AUG5 if ruling_of(x, B).key == "111")
    forms = [barannikov_normal_form(s.complex) for s in morse_frames(e, B)]
    # basis e2+, e1+, e1(x), e2(x): at x_1 the nested pairing (1 4)(2 3)
    assert forms[0].rho == (4, 3, 2, 1)
    rho = r_vector(e, B)[0]
    assert rho.crossings_of("S") == (1, 2, 3)


def _check_normal_form(C: FilteredComplex) -> None:
    F = get_field(C.q)
    nf = barannikov_normal_form(C)
    m = C.size
    phi = nf.phi0
    for i in range(m):
        assert phi[i][i] == 1
        assert all(phi[r][i] == 0 for r in range(i))
    D = mat_solve(phi, mat_mul([list(r) for r in C.d], phi, F), F)
    for j in range(m):
        p = nf.rho[j] - 1
        for r in range(m):
            if r == p and j < p:
                assert D[r][j] == nf.u[j + 1] != 0
            else:
                assert D[r][j] == 0


_CASES = []
for _text in RANDOM_CORPUS[:4]:
    _b = parse_braid(_text)
    _CASES += [(_b, e) for e in enumerate_augmentations(dgas_for(_b)[0], 3)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(_CASES))
def test_normal_form_is_unipotent_and_normal(case):
    b, e = case
    for s in morse_frames(e, b):
        _check_normal_form(s.complex)


def test_wrong_degrees_are_rejected():
    # d f1 = f2 with deg f1 = deg f2 cannot be a pairing
    C = FilteredComplex(1, (0, 0), ((0, 0), (1, 0)), 3)
    with pytest.raises(InvariantViolation):
        barannikov_normal_form(C)


def test_non_acyclic_complex_is_rejected():
    C = FilteredComplex(1, (-1, 0), ((0, 0), (0, 0)), 3)
    with pytest.raises(InvariantViolation):
        barannikov_normal_form(C)


@pytest.mark.parametrize("text", [TREFOIL, "2: 1^5", "3: 1 2 2 2", "3: 1 2 1"])
@pytest.mark.parametrize("q", [2, 3])
def test_r_coordinates_biject_onto_strata(text, q):
    census = r_coordinate_census(dgas_for(parse_braid(text))[0], q)
    assert census
    assert all(c.bijective for c in census), census
