from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from legendrian_lab import BraidWord, cylindrical_closure, ng_resolution, parse_braid, rainbow_closure
from legendrian_lab.braidfront import half_twist, is_half_twist_word
from legendrian_lab.errors import DisconnectedClosureError, DomainError, ParseError


def braids(max_n: int = 4, max_len: int = 8):
    return st.integers(2, max_n).flatmap(
        lambda n: st.lists(st.integers(1, n - 1), max_size=max_len).map(lambda w: BraidWord(n, tuple(w)))
    )


def test_parse_powers_and_empty_word():
    assert parse_braid("2: 1^3") == parse_braid("2: 1 1 1") == BraidWord(2, (1, 1, 1))
    assert parse_braid("3:") == BraidWord(3, ())
    assert str(parse_braid(" 3 : 1 2^2 ")) == "3: 1 2 2"


@pytest.mark.parametrize("text", ["", "1 2", "2: x", "2: 1^", "3: 1 -2"])
def test_parse_rejects_malformed_text(text):
    with pytest.raises(ParseError):
        parse_braid(text)


@pytest.mark.parametrize("text", ["2: 2", "3: 0", "0:"])
def test_letters_out_of_range(text):
    with pytest.raises(DomainError):
        parse_braid(text)


def test_permutation_and_components():
    assert parse_braid("2: 1 1 1").is_connected()
    assert not parse_braid("2: 1 1").is_connected()
    b = parse_braid("3: 1 2 1")
    assert b.permutation() == (3, 2, 1)
    assert sorted(map(sorted, b.cycles())) == [[1, 3], [2]]
    assert parse_braid("3: 1 2").is_connected()


@given(braids(), st.data())
def test_permutation_of_concatenation_composes(b, data):
    w = data.draw(st.lists(st.integers(1, b.n - 1), max_size=6))
    c = BraidWord(b.n, tuple(w))
    pb, pc = b.permutation(), c.permutation()
    both = BraidWord(b.n, b.letters + c.letters).permutation()
    assert both == tuple(pc[pb[k] - 1] for k in range(b.n))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_half_twist_is_longest_element(n):
    assert is_half_twist_word(n, half_twist(n))
    assert len(half_twist(n)) == n * (n - 1) // 2
    assert not is_half_twist_word(3, (1, 1, 2))


@given(braids())
def test_rainbow_closure_shape(b):
    f = rainbow_closure(b)
    assert f.kind == "rainbow"
    assert len(f.cusps) == 2 * b.n
    assert len(f.crossings) == len(b.letters)
    assert sorted(f.maslov.values()) == [0] * b.n + [1] * b.n
    assert len(f.basepoints) == b.n


@given(braids())
def test_ng_resolution_chords_and_gradings(b):
    L = ng_resolution(rainbow_closure(b))
    names = [c.name for c in L.chords]
    assert names == [f"a{m}" for m in range(1, len(b.letters) + 1)] + [f"c{j}" for j in range(1, b.n + 1)]
    assert all(c.grading == (0 if c.name[0] == "a" else 1) for c in L.chords)


def test_single_mode_puts_one_basepoint_on_the_outer_cusp():
    f = rainbow_closure(parse_braid("3: 1 2"), "single")
    assert [bp.location for bp in f.basepoints] == [("right_cusp", 3)]
    with pytest.raises(DisconnectedClosureError):
        rainbow_closure(parse_braid("2: 1 1"), "single")


def test_cylindrical_closure_appends_full_twist():
    f = cylindrical_closure(parse_braid("3: 1 2"))
    assert f.kind == "cylindrical"
    assert f.word == (1, 2) + half_twist(3) * 2
    assert not f.cusps


def test_front_json_is_plain_data():
    data = rainbow_closure(parse_braid("2: 1")).to_json()
    assert data["letters"] == [1]
    assert data["maslov"] == {"b1": 0, "b2": 0, "u1": 1, "u2": 1}
