"""Normal rulings of rainbow closure fronts, eyes, dimension and the dual
boundary report."""

from __future__ import annotations

from dataclasses import dataclass

from .braidfront import BraidWord, FrontDiagram
from .errors import DisconnectedClosureError, DomainError, InvariantViolation

Involution = tuple[int, ...]  # 1-based partner of each strand, top to bottom


@dataclass(frozen=True)
class NormalRuling:
    n: int
    letters: tuple[int, ...]
    involutions: tuple[Involution, ...]  # at the braid slices x_1 .. x_{N+1}
    kinds: tuple[str, ...]  # "S", "R" or "D" per crossing

    @property
    def key(self) -> str:
        return "".join("1" if k == "S" else "0" for k in self.kinds)

    def crossings_of(self, kind: str) -> tuple[int, ...]:
        return tuple(m for m, k in enumerate(self.kinds, start=1) if k == kind)

    @property
    def s(self) -> int:
        return self.kinds.count("S")

    @property
    def r(self) -> int:
        return self.kinds.count("R")

    @property
    def d(self) -> int:
        return self.kinds.count("D")

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "s": self.s,
            "r": self.r,
            "d": self.d,
            "switches": [f"a{m}" for m in self.crossings_of("S")],
            "returns": [f"a{m}" for m in self.crossings_of("R")],
            "departures": [f"a{m}" for m in self.crossings_of("D")],
        }


def strand_maslov(n: int) -> tuple[int, ...]:
    return (1,) * n + (0,) * n


def nested(m: int) -> Involution:
    return tuple(m + 1 - i for i in range(1, m + 1))


def _swap(rho: Involution, k: int) -> Involution:
    """Conjugate by the transposition (k k+1)."""
    t = {k: k + 1, k + 1: k}
    out = [0] * len(rho)
    for i in range(1, len(rho) + 1):
        out[t.get(i, i) - 1] = t.get(rho[i - 1], rho[i - 1])
    return tuple(out)


def is_normal_switch(rho: Involution, k: int) -> bool:
    a, b = rho[k - 1], rho[k]
    return (a < k and k + 1 < b) or (k + 1 < b < a) or (b < a < k)


def _normal_at(rho: Involution, k: int) -> bool:
    return is_normal_switch(rho, k)


def _check_involution(rho: Involution, mu: tuple[int, ...]) -> None:
    for i, j in enumerate(rho, start=1):
        if j == i or rho[j - 1] != i:
            raise InvariantViolation(f"{rho} is not a fixed-point free involution")
        if i < j and mu[i - 1] != mu[j - 1] + 1:
            raise InvariantViolation(f"pair ({i},{j}) of {rho} violates mu(upper) = mu(lower) + 1")


def validate_ruling(rho: NormalRuling) -> None:
    n, N = rho.n, len(rho.letters)
    mu = strand_maslov(n)
    if len(rho.involutions) != N + 1 or len(rho.kinds) != N:
        raise InvariantViolation("ruling has the wrong number of slices")
    if rho.involutions[0] != nested(2 * n) or rho.involutions[-1] != nested(2 * n):
        raise InvariantViolation("cusp pairings fail at the ends of the braid")
    for inv in rho.involutions:
        _check_involution(inv, mu)
    for m, i in enumerate(rho.letters):
        k = n + i
        before, after, kind = rho.involutions[m], rho.involutions[m + 1], rho.kinds[m]
        if before[k - 1] == k + 1:
            raise InvariantViolation(f"crossing a{m + 1} joins two paired strands")
        if kind == "S":
            if after != before or not is_normal_switch(before, k):
                raise InvariantViolation(f"switch a{m + 1} is not normal")
        else:
            if after != _swap(before, k):
                raise InvariantViolation(f"non-switch a{m + 1} does not conjugate the pairing")
            expect = "D" if _normal_at(before, k) else "R"
            if kind != expect or not (_normal_at(before, k) ^ _normal_at(after, k)):
                raise InvariantViolation(f"a{m + 1} misclassified as {kind}")


def ruling_from_involutions(n: int, letters: tuple[int, ...], involutions: tuple[Involution, ...]) -> NormalRuling:
    kinds = []
    for m, i in enumerate(letters):
        k = n + i
        before, after = involutions[m], involutions[m + 1]
        if after == before:
            kinds.append("S")
        else:
            kinds.append("D" if _normal_at(before, k) else "R")
    rho = NormalRuling(n, tuple(letters), tuple(involutions), tuple(kinds))
    validate_ruling(rho)
    return rho


def enumerate_rulings(f: FrontDiagram) -> list[NormalRuling]:
    if f.kind != "rainbow":
        raise DomainError("rulings are enumerated for rainbow closures")
    n, letters = f.n, f.word
    start = nested(2 * n)
    out: list[NormalRuling] = []

    def sweep(m: int, path: list[Involution]) -> None:
        rho = path[-1]
        if m == len(letters):
            if rho == start:
                out.append(ruling_from_involutions(n, letters, tuple(path)))
            return
        k = n + letters[m]
        if rho[k - 1] == k + 1:
            return
        if is_normal_switch(rho, k):
            sweep(m + 1, path + [rho])
        sweep(m + 1, path + [_swap(rho, k)])

    sweep(0, [start])
    return sorted(out, key=lambda r: r.key, reverse=True)


# ---------------------------------------------------------------------------
# Eyes and counts


@dataclass(frozen=True)
class Eye:
    index: int
    left_cusp: int
    right_cusp: int
    upper: str
    lower_slots: tuple[int, ...]  # braid slot of the lower path at each braid slice


@dataclass(frozen=True)
class EyeDecomposition:
    eyes: tuple[Eye, ...]
    switch_incidence: tuple[tuple[str, int, int], ...]  # (crossing, eye, eye)
    circles: int


def eye_decomposition(rho: NormalRuling) -> EyeDecomposition:
    n = rho.n
    eyes = []
    for j in range(1, n + 1):
        pos = n + 1 - j
        slots = tuple(inv[pos - 1] - n for inv in rho.involutions)
        eyes.append(Eye(j, j, slots[-1], f"u{j}", slots))
    incidence = []
    for m, (i, kind) in enumerate(zip(rho.letters, rho.kinds), start=1):
        if kind == "S":
            inv = rho.involutions[m - 1]
            k = n + i
            e1, e2 = n + 1 - inv[k - 1], n + 1 - inv[k]
            incidence.append((f"a{m}", e1, e2))
    # cut at switches, follow the resulting paths from each left cusp
    end = {}
    for j in range(1, n + 1):
        slot = j
        for i, kind in zip(rho.letters, rho.kinds):
            if kind != "S" and slot in (i, i + 1):
                slot = 2 * i + 1 - slot
        end[j] = slot
    seen, circles = set(), 0
    for j in range(1, n + 1):
        if j in seen:
            continue
        circles += 1
        while j not in seen:
            seen.add(j)
            j = end[j]
    return EyeDecomposition(tuple(eyes), tuple(incidence), circles)


@dataclass(frozen=True)
class RulingStats:
    s: int
    r: int
    d: int
    euler: int
    genus: int
    eyes: EyeDecomposition


def classify_and_count(rho: NormalRuling, braid: BraidWord | None = None) -> RulingStats:
    n = rho.n
    braid = braid or BraidWord(n, rho.letters)
    eyes = eye_decomposition(rho)
    if eyes.circles != n:
        raise InvariantViolation(f"cutting at switches gives {eyes.circles} circles, expected {n}")
    b = len(braid.cycles())
    twice_genus = rho.s - n + 2 - b
    if twice_genus % 2 or twice_genus < 0:
        raise InvariantViolation(f"s - n + 2 - b = {twice_genus} is not a nonnegative even number")
    return RulingStats(rho.s, rho.r, rho.d, n - rho.s, twice_genus // 2, eyes)


@dataclass(frozen=True)
class TopRuling:
    d: int
    top: NormalRuling
    index: int  # the constant value of s + 2r


def dimension_and_top_ruling(f: FrontDiagram) -> TopRuling:
    if not f.braid.is_connected():
        raise DisconnectedClosureError(f"{f.braid} has a disconnected closure")
    rulings = enumerate_rulings(f)
    tops = [r for r in rulings if r.r == 0]
    if len(tops) != 1:
        raise InvariantViolation(f"expected a unique ruling with no returns, found {len(tops)}")
    top = tops[0]
    if top.s != len(f.word):
        raise InvariantViolation("the ruling with no returns is not the all-switch ruling")
    indices = {r.s + 2 * r.r for r in rulings}
    if len(indices) != 1:
        raise InvariantViolation(f"s + 2r takes several values: {sorted(indices)}")
    return TopRuling(top.s - f.n + 1, top, indices.pop())


@dataclass(frozen=True)
class PredictedCounts:
    q: int
    per_ruling: tuple[tuple[str, int, int, int, int], ...]  # key, s, r, aug, mb
    aug_total: int
    mb_total: int


def predicted_counts(f: FrontDiagram, q: int) -> PredictedCounts:
    if not f.braid.is_connected():
        raise DisconnectedClosureError(f"{f.braid} has a disconnected closure")
    n = f.n
    rows = []
    for rho in enumerate_rulings(f):
        aug = (q - 1) ** rho.s * q ** rho.r
        mb = (q - 1) ** (rho.s - n + 1) * q ** rho.r
        rows.append((rho.key, rho.s, rho.r, aug, mb))
    return PredictedCounts(q, tuple(rows), sum(r[3] for r in rows), sum(r[4] for r in rows))


def cell_dual_boundary(a: int, b: int) -> str:
    """Homotopy type of the dual boundary complex of G_m^a x A^b."""
    if a < 0 or b < 0:
        raise DomainError("cell exponents must be nonnegative")
    if b > 0:
        return "contractible"
    if a >= 1:
        return f"S^{a - 1}"
    return "empty"


@dataclass(frozen=True)
class DualBoundaryReport:
    d: int
    dual_boundary: str
    removal_order: tuple[tuple[str, int, int, str], ...]  # key, a, b, cell type

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "dual_boundary": self.dual_boundary,
            "removal_order": [{"ruling": k, "a": a, "b": b, "cell": t} for k, a, b, t in self.removal_order],
        }


def dual_boundary_type(f: FrontDiagram) -> DualBoundaryReport:
    top = dimension_and_top_ruling(f)
    if top.d == 0:
        raise DomainError("the moduli space is a point; its dual boundary complex is undefined")
    n = f.n
    cells = []
    for rho in enumerate_rulings(f):
        a, b = rho.s - n + 1, rho.r
        cells.append((a + b, rho.key, a, b))
    cells.sort()
    order = tuple((key, a, b, cell_dual_boundary(a, b)) for _, key, a, b in cells)
    for key, a, b, t in order[:-1]:
        if t != "contractible":
            raise InvariantViolation(f"stratum {key} is not of the form A^1 x Y")
    if order[-1][0] != top.top.key or order[-1][3] != f"S^{top.d - 1}":
        raise InvariantViolation("the open stratum is not the torus of the all-switch ruling")
    return DualBoundaryReport(top.d, f"S^{top.d - 1}", order)
