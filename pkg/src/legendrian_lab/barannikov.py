"""Barannikov normal form of the Morse complexes along the front, and the
ruling and r-coordinates it assigns to an augmentation.

At each braid slice x the complex has basis f = (e_n^+, .., e_1^+, e_1(x), .., e_n(x)),
one vector per strand from top to bottom, degrees -mu, and d(e_i^+) = -e_i written
in the frame e(x).  The filtration is by suffixes of f.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Field, get_field
from .braidfront import BraidWord
from .errors import InvariantViolation
from .rulings import NormalRuling, ruling_from_involutions, strand_maslov

Matrix = list[list[int]]  # row-major, entries in F_q


def identity(m: int) -> Matrix:
    return [[int(i == j) for j in range(m)] for i in range(m)]


@dataclass(frozen=True)
class FilteredComplex:
    slice: int
    degrees: tuple[int, ...]
    d: tuple[tuple[int, ...], ...]  # d[r][c]: coefficient of f_r in d(f_c), 0-based
    q: int

    @property
    def size(self) -> int:
        return len(self.degrees)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.d]


@dataclass(frozen=True)
class MorseSlice:
    slice: int
    frame: Matrix  # column i is e_{i+1}(x) in standard coordinates
    complex: FilteredComplex


def morse_frames(eps, braid: BraidWord) -> list[MorseSlice]:
    """Frames and complexes at the braid slices x_1 .. x_{N+1}."""
    F = get_field(eps.q)
    n = braid.n
    E = identity(n)
    Einv = identity(n)
    out = [MorseSlice(1, [r[:] for r in E], _complex(1, Einv, n, F))]
    for m, i in enumerate(braid.letters, start=1):
        a = eps[f"a{m}"]
        for r in E:
            ei, ej = r[i - 1], r[i]
            r[i - 1], r[i] = ej, F.sub(ei, F.mul(a, ej))
        ri, rj = Einv[i - 1], Einv[i]
        Einv[i - 1] = [F.add(F.mul(a, x), y) for x, y in zip(ri, rj)]
        Einv[i] = ri
        out.append(MorseSlice(m + 1, [r[:] for r in E], _complex(m + 1, Einv, n, F)))
    return out


def _complex(x: int, Einv: Matrix, n: int, F: Field) -> FilteredComplex:
    m = 2 * n
    d = [[0] * m for _ in range(m)]
    for i in range(1, n + 1):
        col = n - i  # position of e_i^+
        for r in range(n):
            d[n + r][col] = F.neg(Einv[r][i - 1])
    degrees = tuple(-mu for mu in strand_maslov(n))
    return FilteredComplex(x, degrees, tuple(map(tuple, d)), F.q)


@dataclass(frozen=True)
class NormalFormData:
    rho: tuple[int, ...]  # 1-based involution on basis positions
    a: dict[tuple[int, int], int]  # (i, j) -> a_ij with f_i' = f_i + sum a_ij f_j
    u: dict[int, int]  # upper index i -> pivot u_{i rho(i)}
    phi0: Matrix  # column j is phi0(f_j)


def barannikov_normal_form(C: FilteredComplex) -> NormalFormData:
    F = get_field(C.q)
    m = C.size
    R = [C.column(j) for j in range(m)]
    V = [[int(r == j) for r in range(m)] for j in range(m)]
    pivot_owner: dict[int, int] = {}
    pivots: dict[int, int] = {}

    def low(col: list[int]) -> int | None:
        return next((r for r, v in enumerate(col) if v), None)

    for j in range(m - 1, -1, -1):
        p = low(R[j])
        while p is not None and p in pivot_owner:
            k = pivot_owner[p]
            c = F.mul(R[j][p], F.inv(R[k][p]))
            R[j] = [F.sub(x, F.mul(c, y)) for x, y in zip(R[j], R[k])]
            V[j] = [F.sub(x, F.mul(c, y)) for x, y in zip(V[j], V[k])]
            p = low(R[j])
        if p is not None:
            pivot_owner[p] = j
            pivots[j] = p
    rho = [0] * m
    for j, p in pivots.items():
        if p <= j or rho[j] or rho[p]:
            raise InvariantViolation(f"reduction at slice {C.slice} produced an invalid pairing")
        rho[j], rho[p] = p + 1, j + 1
    if not all(rho):
        raise InvariantViolation(f"complex at slice {C.slice} is not acyclic; no fixed-point free pairing")
    for j, p in pivots.items():
        if C.degrees[j] + 1 != C.degrees[p]:
            raise InvariantViolation(f"pair ({j + 1},{p + 1}) has the wrong degrees")
    phi0 = [[0] * m for _ in range(m)]
    a: dict[tuple[int, int], int] = {}
    u: dict[int, int] = {}
    for j, p in pivots.items():
        allowed = {j} | {k for k in range(j + 1, m) if k < rho[k] - 1 < p and C.degrees[k] == C.degrees[j]}
        for r, v in enumerate(V[j]):
            if v and r not in allowed:
                raise InvariantViolation(f"f_{j + 1}' leaves its admissible span at slice {C.slice}")
            phi0[r][j] = v
        u[j + 1] = R[j][p]
        ui = F.inv(R[j][p])
        for r, v in enumerate(R[j]):
            phi0[r][p] = F.mul(v, ui)
    for c in range(m):
        for r in range(m):
            if r != c and phi0[r][c]:
                a[(c + 1, r + 1)] = phi0[r][c]
    return NormalFormData(tuple(rho), a, u, phi0)


def ruling_of(eps, braid: BraidWord) -> NormalRuling:
    invs = tuple(barannikov_normal_form(s.complex).rho for s in morse_frames(eps, braid))
    return ruling_from_involutions(braid.n, braid.letters, invs)


def r_coordinate(eps, braid: BraidWord, m: int) -> int:
    """r_q = -<phi0(f_k), f_{k+1}> - eps(q) at the slice left of crossing m."""
    F = get_field(eps.q)
    k = braid.n + braid.letters[m - 1]
    nf = barannikov_normal_form(morse_frames(eps, braid)[m - 1].complex)
    return F.sub(F.neg(nf.phi0[k][k - 1]), eps[f"a{m}"])


def r_vector(eps, braid: BraidWord) -> tuple[NormalRuling, tuple[int, ...]]:
    """The ruling of eps and its r-coordinates on switches then returns."""
    F = get_field(eps.q)
    slices = morse_frames(eps, braid)
    forms = [barannikov_normal_form(s.complex) for s in slices]
    rho = ruling_from_involutions(braid.n, braid.letters, tuple(f.rho for f in forms))
    r = {}
    for m, i in enumerate(braid.letters, start=1):
        k = braid.n + i
        r[m] = F.sub(F.neg(forms[m - 1].phi0[k][k - 1]), eps[f"a{m}"])
    for m in rho.crossings_of("D"):
        if r[m]:
            raise InvariantViolation(f"departure a{m} has r = {r[m]} != 0")
    for m in rho.crossings_of("S"):
        if not r[m]:
            raise InvariantViolation(f"switch a{m} has r = 0")
    return rho, tuple(r[m] for m in rho.crossings_of("S") + rho.crossings_of("R"))


@dataclass(frozen=True)
class StratumCensus:
    key: str
    s: int
    r: int
    size: int
    distinct_r: int
    expected: int

    @property
    def bijective(self) -> bool:
        return self.size == self.distinct_r == self.expected


def r_coordinate_census(dga, q: int) -> list[StratumCensus]:
    """Per stratum of Aug (all cusps): size, distinct r-vectors and (q-1)^s q^r."""
    from .augvar import enumerate_augmentations

    braid = dga.lagrangian.front.braid
    seen: dict[str, tuple[NormalRuling, set, list]] = {}
    for e in enumerate_augmentations(dga, q, "all_cusps"):
        rho, r = r_vector(e, braid)
        entry = seen.setdefault(rho.key, (rho, set(), []))
        entry[1].add(r)
        entry[2].append(e)
    out = []
    for key, (rho, rs, augs) in sorted(seen.items()):
        out.append(StratumCensus(key, rho.s, rho.r, len(augs), len(rs), (q - 1) ** rho.s * q ** rho.r))
    return out
