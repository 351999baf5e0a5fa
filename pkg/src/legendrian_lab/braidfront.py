"""Positive braid words, their rainbow and cylindrical closure fronts, the
resolved (xy) diagram of a rainbow closure, and component bookkeeping."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .errors import DisconnectedClosureError, DomainError, ParseError

BasepointMode = Literal["all_cusps", "single"]


@dataclass(frozen=True)
class BraidWord:
    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"strand count must be >= 1, got {self.n}")
        for i in self.letters:
            if not 1 <= i <= self.n - 1:
                raise DomainError(f"letter {i} out of range [1, {self.n - 1}]")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return f"{self.n}: " + " ".join(map(str, self.letters)) if self.letters else f"{self.n}:"

    def permutation(self) -> tuple[int, ...]:
        """pi[k-1] = right slot reached by the strand entering at left slot k."""
        pos = list(range(1, self.n + 1))  # pos[k-1] = current slot of strand k
        where = list(range(1, self.n + 1))  # where[slot-1] = strand at slot
        for i in self.letters:
            a, b = where[i - 1], where[i]
            where[i - 1], where[i] = b, a
            pos[a - 1], pos[b - 1] = i + 1, i
        return tuple(pos)

    def cycles(self) -> list[tuple[int, ...]]:
        pi = self.permutation()
        seen, out = set(), []
        for k in range(1, self.n + 1):
            if k in seen:
                continue
            cyc = []
            j = k
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = pi[j - 1]
            out.append(tuple(cyc))
        return out

    def is_connected(self) -> bool:
        return len(self.cycles()) == 1


_BRAID_RE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*$")
_LETTER_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


def parse_braid(text: str) -> BraidWord:
    m = _BRAID_RE.match(text)
    if not m:
        raise ParseError(f"braid text must look like '<n>: <letters>', got {text!r}")
    n = int(m.group(1))
    letters: list[int] = []
    body = m.group(2)
    for tok in body.split() if body else []:
        lm = _LETTER_RE.match(tok)
        if not lm:
            raise ParseError(f"malformed braid letter {tok!r}")
        reps = int(lm.group(2)) if lm.group(2) else 1
        letters.extend([int(lm.group(1))] * reps)
    return BraidWord(n, tuple(letters))


def half_twist(n: int) -> tuple[int, ...]:
    """Delta = s1 (s2 s1) (s3 s2 s1) ... (s_{n-1} ... s1)."""
    out: list[int] = []
    for k in range(1, n):
        out.extend(range(k, 0, -1))
    return tuple(out)


def is_half_twist_word(n: int, word: Sequence[int]) -> bool:
    """A positive word equals Delta iff it is a reduced word of the longest permutation."""
    if len(word) != n * (n - 1) // 2:
        return False
    return BraidWord(n, tuple(word)).permutation() == tuple(range(n, 0, -1))


# ---------------------------------------------------------------------------
# Front diagrams


@dataclass(frozen=True)
class Crossing:
    x: int
    letter: int  # braid generator index
    position: int  # upper of the two adjacent slots switched, counted in the full slice


@dataclass(frozen=True)
class Cusp:
    x: int
    side: Literal["left", "right"]
    index: int  # 1 = innermost
    position: int  # slot of the upper strand next to the cusp


@dataclass(frozen=True)
class Strand:
    name: str
    kind: Literal["upper", "braid"]
    index: int
    maslov: int
    left_x: int
    right_x: int


@dataclass(frozen=True)
class BasePoint:
    location: tuple[str, int]  # ("right_cusp", j)
    index: int


@dataclass(frozen=True)
class FrontDiagram:
    kind: Literal["rainbow", "cylindrical"]
    braid: BraidWord
    word: tuple[int, ...]  # letters actually drawn (beta, or beta Delta^2)
    crossings: tuple[Crossing, ...]
    cusps: tuple[Cusp, ...]
    strands: tuple[Strand, ...]
    basepoints: tuple[BasePoint, ...]
    xslices: tuple[float, ...]
    basepoint_mode: BasepointMode | None = None

    @property
    def n(self) -> int:
        return self.braid.n

    @property
    def maslov(self) -> dict[str, int]:
        return {s.name: s.maslov for s in self.strands}

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "letters": list(self.word),
            "crossings": [{"x": c.x, "letter": c.letter, "slots": [c.position, c.position + 1]} for c in self.crossings],
            "cusps": [{"x": c.x, "side": c.side, "index": c.index, "slots": [c.position, c.position + 1]} for c in self.cusps],
            "maslov": dict(sorted(self.maslov.items())),
            "basepoints": [{"location": list(b.location), "index": b.index} for b in self.basepoints],
        }


def rainbow_closure(b: BraidWord, basepoint_mode: BasepointMode = "all_cusps") -> FrontDiagram:
    n, N = b.n, len(b.letters)
    if basepoint_mode not in ("all_cusps", "single"):
        raise DomainError(f"unknown base point mode {basepoint_mode!r}")
    if basepoint_mode == "single" and not b.is_connected():
        raise DisconnectedClosureError(f"single base point needs a connected closure; {b} has {len(b.cycles())} components")
    left_x = {j: n - j for j in range(1, n + 1)}
    right_x = {j: n + N + j - 1 for j in range(1, n + 1)}
    cusps = [Cusp(left_x[j], "left", j, n - j + 1) for j in range(n, 0, -1)]
    crossings = tuple(Crossing(n + m, i, n + i) for m, i in enumerate(b.letters))
    cusps += [Cusp(right_x[j], "right", j, n - j + 1) for j in range(1, n + 1)]
    pi = b.permutation()
    strands = [Strand(f"u{j}", "upper", j, 1, left_x[j], right_x[j]) for j in range(1, n + 1)]
    strands += [Strand(f"b{k}", "braid", k, 0, left_x[k], right_x[pi[k - 1]]) for k in range(1, n + 1)]
    if basepoint_mode == "all_cusps":
        bps = tuple(BasePoint(("right_cusp", j), j) for j in range(1, n + 1))
    else:
        bps = (BasePoint(("right_cusp", n), 1),)
    total = 2 * n + N
    return FrontDiagram(
        "rainbow", b, b.letters, crossings, tuple(cusps), tuple(strands), bps,
        tuple(k + 0.5 for k in range(total - 1)), basepoint_mode,
    )


def cylindrical_closure(b: BraidWord, delta: Sequence[int] | None = None) -> FrontDiagram:
    n = b.n
    if delta is None:
        delta = half_twist(n)
    elif not is_half_twist_word(n, delta):
        raise DomainError(f"{list(delta)} is not a positive word for the half twist on {n} strands")
    word = tuple(b.letters) + tuple(delta) * 2
    crossings = tuple(Crossing(m, i, i) for m, i in enumerate(word))
    M = len(word)
    strands = tuple(Strand(f"b{k}", "braid", k, 0, 0, max(M - 1, 0)) for k in range(1, n + 1))
    slices = tuple(m + 0.5 for m in range(max(M, 1)))
    return FrontDiagram("cylindrical", b, word, crossings, (), strands, (), slices, None)


# ---------------------------------------------------------------------------
# Resolved diagram

QUADRANTS = ("top", "left", "bottom", "right")
# Reeb signs are the same at every crossing of the resolution
REEB_SIGNS = {"top": -1, "bottom": -1, "left": 1, "right": 1}


def orientation_signs(grading: int) -> dict[str, int]:
    e = (-1) ** (grading - 1)
    return {"top": 1, "left": 1, "bottom": e, "right": e}


@dataclass(frozen=True)
class ReebChord:
    name: str
    kind: Literal["crossing", "cusp"]
    index: int
    x: int
    position: int
    over: str
    under: str
    grading: int
    reeb_signs: dict = field(hash=False, compare=False)
    orientation_signs: dict = field(hash=False, compare=False)


@dataclass(frozen=True)
class LagEvent:
    kind: Literal["left_turn", "crossing", "loop"]
    index: int
    position: int  # upper of the two strands involved, in the slice where both exist


@dataclass(frozen=True)
class LagrangianDiagram:
    front: FrontDiagram
    chords: tuple[ReebChord, ...]
    events: tuple[LagEvent, ...]
    # loop index -> t index, for loops carrying a base point
    basepoints: tuple[tuple[int, int], ...]
    orientation: dict = field(hash=False, compare=False)

    @property
    def n(self) -> int:
        return self.front.n

    @property
    def mode(self) -> BasepointMode:
        return self.front.basepoint_mode

    def chord(self, name: str) -> ReebChord:
        for c in self.chords:
            if c.name == name:
                return c
        raise KeyError(name)

    def t_index_at_loop(self, j: int) -> int | None:
        for loop, t in self.basepoints:
            if loop == j:
                return t
        return None


def ng_resolution(f: FrontDiagram) -> LagrangianDiagram:
    if f.kind != "rainbow":
        raise DomainError("the resolution is only defined here for rainbow closures")
    n = f.n
    pi = f.braid.permutation()
    pi_inv = {pi[k - 1]: k for k in range(1, n + 1)}
    events: list[LagEvent] = [LagEvent("left_turn", j, n - j + 1) for j in range(n, 0, -1)]
    chords: list[ReebChord] = []
    where = list(range(1, n + 1))  # braid strand (by left slot) at each slot
    for m, c in enumerate(f.crossings, start=1):
        i = c.letter
        over, under = f"b{where[i - 1]}", f"b{where[i]}"
        chords.append(ReebChord(f"a{m}", "crossing", m, c.x, c.position, over, under, 0,
                                dict(REEB_SIGNS), orientation_signs(0)))
        events.append(LagEvent("crossing", m, c.position))
        where[i - 1], where[i] = where[i], where[i - 1]
    for cusp in f.cusps:
        if cusp.side != "right":
            continue
        j = cusp.index
        chords.append(ReebChord(f"c{j}", "cusp", j, cusp.x, cusp.position, f"u{j}", f"b{pi_inv[j]}", 1,
                                dict(REEB_SIGNS), orientation_signs(1)))
        events.append(LagEvent("loop", j, cusp.position))
    bps = tuple((bp.location[1], bp.index) for bp in f.basepoints)
    orient = {s.name: ("left" if s.kind == "upper" else "right") for s in f.strands}
    return LagrangianDiagram(f, tuple(chords), tuple(events), bps, orient)


# ---------------------------------------------------------------------------
# Components


@dataclass(frozen=True)
class ComponentMap:
    B: int
    r: dict = field(hash=False)
    c: dict = field(hash=False)

    def row(self, s) -> int:
        kind, idx, power = s
        name = f"{kind}{idx}"
        return self.r[name] if power == 1 else self.c[name]

    def col(self, s) -> int:
        kind, idx, power = s
        name = f"{kind}{idx}"
        return self.c[name] if power == 1 else self.r[name]

    def composable(self, word, start: int, end: int) -> bool:
        if not word:
            return start == end
        if self.row(word[0]) != start or self.col(word[-1]) != end:
            return False
        return all(self.col(a) == self.row(b) for a, b in zip(word, word[1:]))


@dataclass(frozen=True)
class Connectivity:
    link_components: int
    connected: bool
    graph_edges: tuple[tuple[int, int], ...]  # one per base point, on diagram components
    graph_connected: bool


def _graph_connected(B: int, edges) -> bool:
    parent = list(range(B + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(v) for v in range(1, B + 1)}) == 1


def components_and_connectivity(L: LagrangianDiagram) -> tuple[ComponentMap, Connectivity]:
    """Label the arcs of the curve minus base points.

    With one base point per right cusp, C_k runs from the base point at loop k
    along the (left-moving) upper strand k, through left cusp k and along the
    braid strand entering at slot k up to the base point of the loop it reaches.
    """
    f = L.front
    n = f.n
    pi = f.braid.permutation()
    pi_inv = {pi[k - 1]: k for k in range(1, n + 1)}
    links = len(f.braid.cycles())
    r: dict[str, int] = {}
    c: dict[str, int] = {}
    if L.mode == "single":
        B = 1
        for ch in L.chords:
            r[ch.name] = c[ch.name] = 1
        for _, t in L.basepoints:
            r[f"t{t}"] = c[f"t{t}"] = 1
        edges = ((1, 1),)
    else:
        B = n
        for ch in L.chords:
            if ch.kind == "crossing":
                r[ch.name] = int(ch.over[1:])
                c[ch.name] = int(ch.under[1:])
            else:
                r[ch.name] = ch.index
                c[ch.name] = pi_inv[ch.index]
        for j, t in L.basepoints:
            r[f"t{t}"] = pi_inv[j]
            c[f"t{t}"] = j
        edges = tuple((pi_inv[j], j) for j, _ in L.basepoints)
    cm = ComponentMap(B, r, c)
    return cm, Connectivity(links, links == 1, edges, _graph_connected(B, edges))
