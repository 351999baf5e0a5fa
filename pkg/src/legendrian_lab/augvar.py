"""Augmentations over F_q, the torus action, orbit representatives and point counts."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .algebra import Elimination, Field, NCSum, eliminate_t, evaluate, evaluate_array, get_field
from .braidfront import BraidWord, ng_resolution, rainbow_closure
from .dga import DGA, build_dga
from .errors import DisconnectedClosureError, DomainError, InvariantViolation

CHUNK = 1 << 18


@dataclass(frozen=True)
class Augmentation:
    q: int
    names: tuple[str, ...]
    values: tuple[int, ...]

    def __getitem__(self, name: str) -> int:
        return self.values[self.names.index(name)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.names, self.values))

    def alpha(self) -> tuple[int, ...]:
        return tuple(v for k, v in zip(self.names, self.values) if k.startswith("a"))


@dataclass(frozen=True)
class TorusElement:
    q: int
    lam: tuple[int, ...]

    def __post_init__(self):
        if any(x == 0 for x in self.lam):
            raise DomainError("torus elements must have nonzero entries")


def _elimination(dga: DGA) -> Elimination:
    cached = getattr(dga, "_elimination", None)
    if cached is None:
        cached = eliminate_t(dga)
        dga._elimination = cached
    return cached


def _alpha_chunks(N: int, q: int) -> Iterator[np.ndarray]:
    total = q ** N
    weights = q ** np.arange(N - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        yield (idx[None, :] // weights[:, None]) % q


def _solve_chunk(dga: DGA, F: Field, alpha: np.ndarray, mode: str) -> tuple[np.ndarray, list[np.ndarray]]:
    """Valid mask and t-values for a block of crossing assignments (shape (N, M))."""
    M = alpha.shape[1]
    if mode == "all_cusps":
        elim = _elimination(dga)
        qv = [Qi.evaluate_array(alpha, F) for Qi in elim.Q]
        mask = np.ones(M, dtype=bool)
        for v in qv:
            mask &= v != 0
        safe = [np.where(mask, v, 1) for v in qv]
        ts = []
        for Pi, v in zip(elim.P, safe):
            den = np.ones(M, dtype=np.int64)
            for k, e in enumerate(Pi.den):
                for _ in range(e):
                    den = F.mul_table[den, safe[k]]
            ts.append(F.neg_table[F.mul_table[den, F.inv_table[v]]])
        return mask, ts
    arrays = {f"a{m + 1}": alpha[m] for m in range(alpha.shape[0])}
    n = dga.n_cusps
    mask = np.ones(M, dtype=bool)
    for j in range(1, n):
        d = dga.differential(f"c{j}")
        if any(s[0] == "t" for s in d.symbols()):
            raise InvariantViolation(f"single-mode d(c{j}) should not involve t: {d}")
        mask &= evaluate_array(d, arrays, F, M) == 0
    d = dga.differential(f"c{n}")
    lead = (("t", 1, -1),)
    if d.terms.get(lead) != 1 or any(s[0] == "t" for w in d.terms if w != lead for s in w):
        raise InvariantViolation(f"single-mode d(c{n}) is not t^-1 + f(a): {d}")
    f = evaluate_array(d - NCSum.word(lead), arrays, F, M)
    mask &= f != 0
    t = F.neg_table[F.inv_table[np.where(f != 0, f, 1)]]
    return mask, [t]


def count_augmentations(dga: DGA, q: int, mode: str | None = None) -> int:
    mode = mode or dga.mode
    F = get_field(q)
    total = 0
    for alpha in _alpha_chunks(dga.n_crossings, q):
        mask, _ = _solve_chunk(dga, F, alpha, mode)
        total += int(mask.sum())
    return total


def enumerate_augmentations(dga: DGA, q: int, mode: str | None = None) -> list[Augmentation]:
    """All augmentations, ordered lexicographically by the crossing values."""
    mode = mode or dga.mode
    if mode != dga.mode:
        raise DomainError(f"dga was built with base point mode {dga.mode}, not {mode}")
    F = get_field(q)
    names = tuple(dga.t_names + dga.a_names + [f"c{j}" for j in range(1, dga.n_cusps + 1)])
    zeros = (0,) * dga.n_cusps
    out = []
    for alpha in _alpha_chunks(dga.n_crossings, q):
        mask, ts = _solve_chunk(dga, F, alpha, mode)
        cols = np.nonzero(mask)[0]
        block = np.vstack(ts + [alpha])[:, cols].T if len(cols) else np.zeros((0, 0), dtype=np.int64)
        for row in block.tolist():
            out.append(Augmentation(q, names, tuple(row) + zeros))
    return out


def is_augmentation(dga: DGA, eps: Augmentation) -> bool:
    F = get_field(eps.q)
    vals = eps.as_dict()
    if any(vals[t] == 0 for t in dga.t_names):
        return False
    if any(vals[g.name] != 0 for g in dga.generators if g.degree != 0):
        return False
    return all(evaluate(dga.differential(g.name), vals, F) == 0 for g in dga.generators)


def torus_act(lam: TorusElement | Sequence[int], eps: Augmentation, dga: DGA) -> Augmentation:
    """(lam . eps)(b) = lam_{r(b)}^-1 eps(b) lam_{c(b)}."""
    lv = lam.lam if isinstance(lam, TorusElement) else tuple(lam)
    F = get_field(eps.q)
    cm = dga.components
    if cm is None or dga.mode != "all_cusps":
        raise DomainError("the torus action needs one base point per right cusp")
    if len(lv) != cm.B:
        raise DomainError(f"torus element has {len(lv)} entries, expected {cm.B}")
    vals = []
    for name, v in zip(eps.names, eps.values):
        if v:
            v = F.mul(F.mul(F.inv(lv[cm.r[name] - 1]), v), lv[cm.c[name] - 1])
        vals.append(v)
    return Augmentation(eps.q, eps.names, tuple(vals))


def torus(q: int, B: int) -> list[tuple[int, ...]]:
    return list(product(range(1, q), repeat=B))


def normalize_representative(eps: Augmentation, dga: DGA) -> Augmentation:
    """The unique point of the orbit with eps(t_i) = 1 for i < n."""
    lag = dga.lagrangian
    if lag is None or dga.mode != "all_cusps":
        raise DomainError("normalization needs one base point per right cusp")
    if not lag.front.braid.is_connected():
        raise DisconnectedClosureError("the torus does not act freely modulo scalars on a disconnected closure")
    F = get_field(eps.q)
    cm = dga.components
    n = cm.B
    lam: dict[int, int] = {1: 1}
    edges = [(cm.r[f"t{i}"], cm.c[f"t{i}"], eps[f"t{i}"]) for i in range(1, n)]
    changed = True
    while changed:
        changed = False
        for r, c, t in edges:
            if r in lam and c not in lam:
                lam[c] = F.mul(lam[r], F.inv(t))
                changed = True
            elif c in lam and r not in lam:
                lam[r] = F.mul(t, lam[c])
                changed = True
    if len(lam) != n:
        raise InvariantViolation("base point graph minus the last edge does not span the components")
    out = torus_act(tuple(lam[k] for k in range(1, n + 1)), eps, dga)
    if any(out[f"t{i}"] != 1 for i in range(1, n)):
        raise InvariantViolation("normalization failed to set eps(t_i) = 1")
    return out


def orbit_representative_lex(eps: Augmentation, dga: DGA) -> Augmentation:
    """Lexicographically smallest orbit point; usable on disconnected closures."""
    return min((torus_act(lam, eps, dga) for lam in torus(eps.q, dga.components.B)), key=lambda e: e.values)


def single_from_normalized(eps: Augmentation, dga_single: DGA) -> Augmentation:
    """Read a normalized all-cusps augmentation as a single-base-point one."""
    n = dga_single.n_cusps
    names = tuple(dga_single.t_names + dga_single.a_names + [f"c{j}" for j in range(1, n + 1)])
    vals = {"t1": eps[f"t{n}"]}
    vals.update({a: eps[a] for a in dga_single.a_names})
    return Augmentation(eps.q, names, tuple(vals.get(k, 0) for k in names))


def dgas_for(b: BraidWord) -> tuple[DGA, DGA | None]:
    dga_all = build_dga(ng_resolution(rainbow_closure(b, "all_cusps")))
    dga_single = build_dga(ng_resolution(rainbow_closure(b, "single"))) if b.is_connected() else None
    return dga_all, dga_single


@dataclass(frozen=True)
class PointCounts:
    q: int
    aug_all_cusps: int
    aug_single: int
    mb: int


def point_counts(dga: DGA, q: int, dga_single: DGA | None = None) -> PointCounts:
    b = dga.lagrangian.front.braid
    if not b.is_connected():
        raise DisconnectedClosureError(f"{b} has a disconnected closure")
    if dga_single is None:
        dga_single = build_dga(ng_resolution(rainbow_closure(b, "single")))
    n = b.n
    all_ = count_augmentations(dga, q, "all_cusps")
    single = count_augmentations(dga_single, q, "single")
    scale = (q - 1) ** (n - 1)
    if all_ % scale or all_ // scale != single:
        raise InvariantViolation(f"|Aug| = {all_} is not (q-1)^(n-1) * {single} at q={q}")
    return PointCounts(q, all_, single, single)


def stratify(dga: DGA, q: int, normalized: bool = False) -> dict[str, list[Augmentation]]:
    """Group augmentations by the ruling of their Barannikov sweep (key = switch bits)."""
    from .barannikov import ruling_of

    b = dga.lagrangian.front.braid
    augs = enumerate_augmentations(dga, q, "all_cusps")
    if normalized:
        augs = [e for e in augs if all(e[f"t{i}"] == 1 for i in range(1, b.n))]
    out: dict[str, list[Augmentation]] = {}
    for e in augs:
        out.setdefault(ruling_of(e, b).key, []).append(e)
    return dict(sorted(out.items()))
