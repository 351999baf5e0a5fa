"""Chekanov-Eliashberg DGA of a resolved rainbow closure.

Disks are found by sweeping an interval (upper boundary slot, lower boundary slot)
leftward from the positive corner.  Slots count strands from the top in the
current slice.  Moving left across

* a crossing at slots (p, p+1): a boundary on p or p+1 either follows its strand
  (and changes slot) or turns at a convex corner.  A lower boundary on p may turn
  (top quadrant), an upper boundary on p+1 may turn (bottom quadrant).  The
  other two incidences force a pass, and an interval equal to (p, p+1) pinches
  into a positive quadrant and dies;
* a loop lying inside the interval: the disk either covers the loop or splits
  around it into an upper part ending on the loop's lower strand and a lower
  part starting on its upper strand; the boundary then passes the loop's base
  point;
* a left turn: the interval closes if it equals the pair being born; touching it
  on one side only is not a disk.

The boundary word is read counterclockwise from the positive corner: corners on
the upper boundary in sweep order, then the split parts, then corners on the
lower boundary in reverse sweep order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .algebra import NCSum, Sym, Word, sym
from .braidfront import ComponentMap, LagrangianDiagram, components_and_connectivity
from .errors import DiskSearchError

SEARCH_BUDGET = 2_000_000


@dataclass(frozen=True)
class Generator:
    name: str
    kind: str  # "t", "a" or "c"
    index: int
    degree: int


@dataclass(frozen=True)
class Disk:
    positive: str
    quadrant: str
    corners: tuple[tuple[str, str], ...]  # (chord, quadrant) in boundary order
    word: Word
    sign: int

    def weight(self) -> NCSum:
        return NCSum.word(self.word, self.sign)


@dataclass
class DGA:
    generators: tuple[Generator, ...]
    differentials: dict[str, NCSum]
    components: ComponentMap | None = None
    lagrangian: LagrangianDiagram | None = None
    disks: dict[str, tuple[Disk, ...]] = field(default_factory=dict)

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def degree(self, s: Sym) -> int:
        return self.generator(f"{s[0]}{s[1]}").degree

    def differential(self, name: str) -> NCSum:
        return self.differentials.get(name, NCSum.zero())

    @property
    def n_cusps(self) -> int:
        return sum(1 for g in self.generators if g.kind == "c")

    @property
    def n_crossings(self) -> int:
        return sum(1 for g in self.generators if g.kind == "a")

    @property
    def t_names(self) -> list[str]:
        return [g.name for g in self.generators if g.kind == "t"]

    @property
    def a_names(self) -> list[str]:
        return [g.name for g in self.generators if g.kind == "a"]

    @property
    def mode(self) -> str | None:
        return self.lagrangian.mode if self.lagrangian else None

    def to_json(self) -> dict:
        return {
            "generators": [{"name": g.name, "degree": g.degree} for g in self.generators],
            "differentials": {g.name: str(self.differential(g.name)) for g in self.generators},
        }


def _corner(chord: str, quadrant: str) -> tuple[str, str]:
    return (chord, quadrant)


class _Sweeper:
    def __init__(self, L: LagrangianDiagram):
        self.L = L
        self.events = L.events
        self.calls = 0
        self.orient = {c.name: c.orientation_signs for c in L.chords}

    def _tick(self):
        self.calls += 1
        if self.calls > SEARCH_BUDGET:
            raise DiskSearchError("disk search budget exceeded")

    def left(self, u: int, l: int, idx: int) -> list[tuple[int, Word, tuple]]:
        """Disk pieces to the left of event idx+1 bounded by slots u < l."""
        self._tick()
        if idx < 0:
            return []
        ev = self.events[idx]
        p = ev.position
        if ev.kind == "left_turn":
            if (u, l) == (p, p + 1):
                return [(1, (), ())]
            if u in (p, p + 1) or l in (p, p + 1):
                return []
            return self.left(u - 2 if u > p + 1 else u, l - 2 if l > p + 1 else l, idx - 1)
        if ev.kind == "loop":
            if not (u < p <= l):
                return self.left(u + 2 if u >= p else u, l + 2 if l >= p else l, idx - 1)
            out = list(self.left(u, l + 2, idx - 1))
            t = self.L.t_index_at_loop(ev.index)
            mid: Word = (sym("t", t, 1),) if t is not None else ()
            uppers = self.left(u, p + 1, idx - 1)
            if uppers:
                lowers = self.left(p, l + 2, idx - 1)
                for s1, w1, c1 in uppers:
                    for s2, w2, c2 in lowers:
                        out.append((s1 * s2, w1 + mid + w2, c1 + c2))
            return out
        # crossing
        name = f"a{ev.index}"
        a: Word = (sym("a", ev.index),)
        if (u, l) == (p, p + 1):
            return []
        if l == p:
            out = self.left(u, p + 1, idx - 1)
            s = self.orient[name]["top"]
            out += [(s * s1, w + a, c + (_corner(name, "top"),)) for s1, w, c in self.left(u, p, idx - 1)]
            return out
        if u == p + 1:
            out = self.left(p, l, idx - 1)
            s = self.orient[name]["bottom"]
            out += [(s * s1, a + w, (_corner(name, "bottom"),) + c) for s1, w, c in self.left(p + 1, l, idx - 1)]
            return out
        if l == p + 1:
            return self.left(u, p, idx - 1)
        if u == p:
            return self.left(p + 1, l, idx - 1)
        return self.left(u, l, idx - 1)

    def right(self, u: int, l: int, idx: int) -> list[tuple[int, Word, tuple]]:
        """Mirror sweep for a positive corner in a right quadrant of a crossing.

        Such pieces can only close at a right turn, i.e. inside a loop, which
        needs the two boundaries to pass through the loop crossing; so beyond
        the corner moves this search only ever dies.  It is kept to make the
        enumeration complete rather than rely on a degree argument.
        """
        self._tick()
        if idx >= len(self.events):
            return []
        ev = self.events[idx]
        p = ev.position
        if ev.kind == "loop":
            if u in (p, p + 1) or l in (p, p + 1):
                return []
            return self.right(u - 2 if u > p + 1 else u, l - 2 if l > p + 1 else l, idx + 1)
        if ev.kind == "left_turn":
            return []
        name = f"a{ev.index}"
        a: Word = (sym("a", ev.index),)
        if (u, l) == (p, p + 1):
            return []
        if l == p:
            out = self.right(u, p + 1, idx + 1)
            s = self.orient[name]["top"]
            out += [(s * s1, a + w, (_corner(name, "top"),) + c) for s1, w, c in self.right(u, p, idx + 1)]
            return out
        if u == p + 1:
            out = self.right(p, l, idx + 1)
            s = self.orient[name]["bottom"]
            out += [(s * s1, w + a, c + (_corner(name, "bottom"),)) for s1, w, c in self.right(p + 1, l, idx + 1)]
            return out
        if l == p + 1:
            return self.right(u, p, idx + 1)
        if u == p:
            return self.right(p + 1, l, idx + 1)
        return self.right(u, l, idx + 1)


def enumerate_disks(L: LagrangianDiagram, chord: str) -> tuple[Disk, ...]:
    c = L.chord(chord)
    idx = next(i for i, ev in enumerate(L.events)
               if (ev.kind == "loop" and c.kind == "cusp" and ev.index == c.index)
               or (ev.kind == "crossing" and c.kind == "crossing" and ev.index == c.index))
    sw = _Sweeper(L)
    p = c.position
    disks: list[Disk] = []
    s_left = c.orientation_signs["left"]
    for s, w, corners in sw.left(p, p + 1, idx - 1):
        disks.append(Disk(chord, "left", corners, w, s_left * s))
    s_right = c.orientation_signs["right"]
    if c.kind == "cusp":
        # the loop itself; its boundary runs against the component orientation at the base point
        t = L.t_index_at_loop(c.index)
        w: Word = (sym("t", t, -1),) if t is not None else ()
        disks.append(Disk(chord, "right", (), w, s_right))
    else:
        for s, w, corners in sw.right(p, p + 1, idx + 1):
            disks.append(Disk(chord, "right", corners, w, s_right * s))
    return tuple(disks)


def differential_of(dga: DGA, g: str) -> NCSum:
    return dga.differential(g)


def build_dga(L: LagrangianDiagram) -> DGA:
    gens: list[Generator] = [Generator(f"t{t}", "t", t, 0) for _, t in sorted(L.basepoints, key=lambda bt: bt[1])]
    gens += [Generator(c.name, "a", c.index, c.grading) for c in L.chords if c.kind == "crossing"]
    gens += [Generator(c.name, "c", c.index, c.grading) for c in L.chords if c.kind == "cusp"]
    diffs: dict[str, NCSum] = {}
    disks: dict[str, tuple[Disk, ...]] = {}
    for c in L.chords:
        ds = enumerate_disks(L, c.name)
        disks[c.name] = ds
        total = NCSum.zero()
        for d in ds:
            total = total + d.weight()
        diffs[c.name] = total
    cm, _ = components_and_connectivity(L)
    return DGA(tuple(gens), diffs, cm, L, disks)


def dga_from_data(degrees: Mapping[str, int], differentials: Mapping[str, str | NCSum]) -> DGA:
    """Hand-built DGA (generator name -> degree), e.g. for exercising the checks."""
    gens = []
    for name, deg in degrees.items():
        gens.append(Generator(name, name[0], int(name[1:]), deg))
    diffs = {k: (v if isinstance(v, NCSum) else NCSum.parse(v)) for k, v in differentials.items()}
    return DGA(tuple(gens), diffs)


def apply_differential(dga: DGA, s: NCSum) -> NCSum:
    """Extend d to words by the graded Leibniz rule; d(t^{+-1}) = 0."""
    out = NCSum.zero()
    for w, coeff in s.terms.items():
        deg = 0
        for i, smb in enumerate(w):
            if smb[0] != "t":
                d = dga.differential(f"{smb[0]}{smb[1]}")
                if d:
                    left = NCSum.word(w[:i], coeff * (-1) ** deg)
                    out = out + left * d * NCSum.word(w[i + 1:])
            deg += dga.degree(smb)
    return out


@dataclass(frozen=True)
class DSquaredReport:
    ok: bool
    degree_ok: bool
    composable_ok: bool
    failures: tuple[tuple[str, str], ...]  # (generator, residual or reason)


def word_degree(dga: DGA, w: Word) -> int:
    return sum(dga.degree(s) for s in w)


def check_d_squared(dga: DGA) -> DSquaredReport:
    failures = []
    degree_ok = composable_ok = True
    for g in dga.generators:
        d = dga.differential(g.name)
        for w in d.terms:
            if word_degree(dga, w) != g.degree - 1:
                degree_ok = False
                failures.append((g.name, f"word {w} has the wrong degree"))
        if dga.components is not None:
            cm = dga.components
            gs = (g.kind, g.index, 1)
            for w in d.terms:
                if not cm.composable(w, cm.row(gs), cm.col(gs)):
                    composable_ok = False
                    failures.append((g.name, f"word {w} is not composable"))
        dd = apply_differential(dga, d)
        if dd:
            failures.append((g.name, str(dd)))
    ok = not failures
    return DSquaredReport(ok, degree_ok, composable_ok, tuple(failures))
