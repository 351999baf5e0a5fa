"""Formal types at an irregular singularity, their Stokes diagrams on the circle
of directions and the braid words read from them; Newton polygon slopes."""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .braidfront import BraidWord
from .errors import DegenerateFormalTypeError, DomainError, InvariantViolation, ParseError

SAMPLES = 4096
BISECTION_STEPS = 60
TOL = 1e-9
DEFAULT_EPS = 0.1


@dataclass(frozen=True)
class Term:
    re: Fraction
    im: Fraction
    m: int  # the term is (re + i im) t^-m

    @property
    def coeff(self) -> complex:
        return complex(float(self.re), float(self.im))


@dataclass(frozen=True)
class Exponent:
    terms: tuple[Term, ...]

    def __str__(self) -> str:
        return " + ".join(f"{t.re},{t.im} t^-{t.m}" for t in self.terms)

    def coefficients(self) -> dict[int, complex]:
        out: dict[int, complex] = {}
        for t in self.terms:
            out[t.m] = out.get(t.m, 0) + t.coeff
        return {m: c for m, c in out.items() if c != 0}

    def orbit_size(self, N: int) -> int:
        g = reduce(math.gcd, self.coefficients(), N)
        return N // g


@dataclass(frozen=True)
class FormalType:
    N: int
    exponents: tuple[Exponent, ...]
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("ramification order must be positive")
        if self.eps <= 0:
            raise DomainError("sampling radius must be positive")
        for g in self.exponents:
            if not g.coefficients():
                raise DomainError("an exponent must have a nonzero term")
            if any(t.m < 1 for t in g.terms):
                raise DomainError("exponents of t must be at least 1")
        seen = [g.coefficients() for g in self.exponents]
        for a in range(len(seen)):
            for b in range(a):
                if seen[a] == seen[b]:
                    raise DegenerateFormalTypeError(f"exponents {b + 1} and {a + 1} coincide")


_TERM = re.compile(r"^\s*([-+]?\d+(?:/\d+)?)\s*,\s*([-+]?\d+(?:/\d+)?)\s*t\^-(\d+)\s*$")


def parse_formal_type(text: str, eps: float = DEFAULT_EPS) -> FormalType:
    """``N=<int>; g = <re>,<im> t^-<m> [+ ...] ; ...`` with lines or ';' between parts."""
    parts = [p.strip() for p in re.split(r"[;\n]", text) if p.strip()]
    if not parts or not parts[0].replace(" ", "").startswith("N="):
        raise ParseError("formal type must start with N=<int>")
    try:
        N = int(parts[0].replace(" ", "")[2:])
    except ValueError as exc:
        raise ParseError(f"bad ramification order in {parts[0]!r}") from exc
    gs = []
    for p in parts[1:]:
        head, _, body = p.partition("=")
        if head.strip() != "g" or not body.strip():
            raise ParseError(f"expected 'g = ...', got {p!r}")
        terms = []
        for chunk in body.split("+"):
            m = _TERM.match(chunk)
            if not m:
                raise ParseError(f"bad term {chunk.strip()!r}")
            terms.append(Term(Fraction(m.group(1)), Fraction(m.group(2)), int(m.group(3))))
        gs.append(Exponent(tuple(terms)))
    if not gs:
        raise ParseError("formal type has no exponents")
    return FormalType(N, tuple(gs), eps)


def airy_formal_type(n: int, eps: float = DEFAULT_EPS) -> FormalType:
    """Exponents +-(2/(n+2)) t^-(n+2) with t^2 = x, for f'' = z^n f at infinity."""
    c = Fraction(2, n + 2)
    gs = (Exponent((Term(-c, Fraction(0), n + 2),)), Exponent((Term(c, Fraction(0), n + 2),)))
    return FormalType(2, gs, eps)


# ---------------------------------------------------------------------------
# Galois orbits


def galois_action(g: dict[int, complex], N: int, j: int = 1) -> dict[int, complex]:
    """(sigma^j)^* g: c t^-m -> c zeta^(-jm) t^-m with zeta = exp(2 pi i / N)."""
    return {m: c * cmath.exp(-2j * math.pi * j * m / N) for m, c in g.items()}


def _close(a: dict[int, complex], b: dict[int, complex]) -> bool:
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0) - b.get(k, 0)) < 1e-12 for k in keys)


@dataclass(frozen=True)
class Orbit:
    representative: Exponent
    size: int
    members: tuple[dict, ...]  # coefficient maps of sigma^j g, j < size


@dataclass(frozen=True)
class OrbitReport:
    orbits: tuple[Orbit, ...]
    sizes: tuple[int, ...]
    lcm: int
    reduced: bool


def galois_orbits(tau: FormalType) -> OrbitReport:
    orbits: list[Orbit] = []
    for g in tau.exponents:
        coeffs = g.coefficients()
        if any(_close(coeffs, mem) for o in orbits for mem in o.members):
            continue
        k = g.orbit_size(tau.N)
        members = tuple(galois_action(coeffs, tau.N, j) for j in range(k))
        orbits.append(Orbit(g, k, members))
    sizes = tuple(o.size for o in orbits)
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), sizes, 1)
    return OrbitReport(tuple(orbits), sizes, lcm, lcm == tau.N)


# ---------------------------------------------------------------------------
# Stokes diagrams


@dataclass(frozen=True)
class StokesCrossing:
    theta: float
    upper: int  # branch ids
    lower: int
    letter: int


@dataclass
class StokesDiagram:
    tau: FormalType
    thetas: np.ndarray  # samples on [0, 2 pi], endpoints included
    values: np.ndarray  # (branches, samples)
    labels: tuple[tuple[int, int], ...]  # (orbit, member) per branch
    crossings: tuple[StokesCrossing, ...]
    word: BraidWord

    def to_json(self) -> dict:
        return {
            "strands": self.word.n,
            "word": str(self.word),
            "crossings": [
                {"theta": round(c.theta, 9), "letter": c.letter, "branches": [c.upper, c.lower]}
                for c in self.crossings
            ],
        }


def _branch_values(orbits: Sequence[Orbit], N: int, eps: float, theta: np.ndarray) -> tuple[np.ndarray, list]:
    rows, labels = [], []
    r = eps ** (1.0 / N)
    for oi, o in enumerate(orbits):
        for j, coeffs in enumerate(o.members):
            t = r * np.exp(1j * theta / N)
            val = np.zeros_like(theta, dtype=complex)
            for m, c in coeffs.items():
                val = val + c * t ** (-m)
            rows.append(val.real)
            labels.append((oi, j))
    return np.array(rows).reshape(len(rows), len(theta)), labels


def stokes_diagram(tau: FormalType, samples: int = SAMPLES) -> StokesDiagram:
    rep = galois_orbits(tau)
    orbits = rep.orbits
    # staggered grid: crossings at simple rational multiples of pi avoid the samples
    step = 2 * math.pi / samples
    thetas = np.concatenate(([0.0], (np.arange(samples) + 0.5) * step, [2 * math.pi]))
    values, labels = _branch_values(orbits, tau.N, tau.eps, thetas)
    B = len(labels)
    scale = max(1.0, float(np.max(np.abs(values))))

    def value(b: int, th: float) -> float:
        oi, j = labels[b]
        return float(_branch_values([Orbit(orbits[oi].representative, 1, (orbits[oi].members[j],))],
                                    tau.N, tau.eps, np.array([th]))[0][0, 0])

    found: list[tuple[float, int, int]] = []
    for a in range(B):
        for b in range(a + 1, B):
            diff = values[a] - values[b]
            if np.all(np.abs(diff) < TOL * scale):
                raise DegenerateFormalTypeError(f"branches {labels[a]} and {labels[b]} coincide")
            idx = np.nonzero(np.sign(diff[:-1]) * np.sign(diff[1:]) < 0)[0]
            exact = np.nonzero(diff == 0)[0]
            if len(exact):
                th = float(thetas[exact[0]])
                raise DegenerateFormalTypeError(f"branches {labels[a]} and {labels[b]} meet exactly at angle {th:.12f}")
            for k in idx:
                lo, hi = float(thetas[k]), float(thetas[k + 1])
                flo = value(a, lo) - value(b, lo)
                for _ in range(BISECTION_STEPS):
                    mid = 0.5 * (lo + hi)
                    fm = value(a, mid) - value(b, mid)
                    if (fm < 0) == (flo < 0):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                found.append((0.5 * (lo + hi), a, b))
    found.sort()
    for (t1, *_), (t2, *_) in zip(found, found[1:]):
        if t2 - t1 < TOL:
            raise DegenerateFormalTypeError(f"two crossings at angle {t1:.12f}; not transversal")
    if found and (found[0][0] < TOL or 2 * math.pi - found[-1][0] < TOL):
        raise DegenerateFormalTypeError("a crossing sits at the base angle 0")
    order = sorted(range(B), key=lambda b: -values[b, 0])
    start = list(order)
    crossings = []
    letters = []
    for th, a, b in found:
        pa, pb = order.index(a), order.index(b)
        if abs(pa - pb) != 1:
            raise InvariantViolation(f"crossing at {th:.6f} joins non-adjacent branches")
        p = min(pa, pb)
        upper, lower = order[p], order[p + 1]
        order[p], order[p + 1] = lower, upper
        crossings.append(StokesCrossing(th, upper, lower, p + 1))
        letters.append(p + 1)
    # going once around the u-circle moves member j of an orbit to member j+1
    index = {lab: b for b, lab in enumerate(labels)}
    shifted = [index[(labels[b][0], (labels[b][1] + 1) % orbits[labels[b][0]].size)] for b in order]
    if shifted != start:
        raise InvariantViolation("strand order after a full turn does not match the monodromy")
    word = BraidWord(max(B, 1), tuple(letters)) if B else BraidWord(1, ())
    return StokesDiagram(tau, thetas, values, tuple(labels), tuple(crossings), word)


def stokes_braid(tau: FormalType, samples: int = SAMPLES) -> BraidWord:
    return stokes_diagram(tau, samples).word


def stable_under_halving(tau: FormalType, samples: int = SAMPLES) -> bool:
    """Crossing combinatorics agree at eps and eps/2."""
    half = FormalType(tau.N, tau.exponents, tau.eps / 2)
    return stokes_braid(tau, samples) == stokes_braid(half, samples)


# ---------------------------------------------------------------------------
# Newton polygons


def newton_slopes(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Positive slopes of the Newton polygon of monomials x^j delta^i given as (i, j)."""
    if not points:
        raise DomainError("operator has no monomials")
    low: dict[int, int] = {}
    for i, j in points:
        low[i] = min(j, low.get(i, j))
    jmin = min(low.values())
    i0 = max(i for i, j in low.items() if j == jmin)
    pts = sorted((i, j) for i, j in low.items() if i >= i0)
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    slopes = [Fraction(y2 - y1, x2 - x1) for (x1, y1), (x2, y2) in zip(hull, hull[1:])]
    return [s for s in slopes if s > 0]


def parse_operator(text: str) -> list[tuple[int, int]]:
    """Monomials of an operator such as ``d^2 + d - x^-3`` as (delta power, x power)."""
    out = []
    s = text.replace(" ", "").replace("δ", "d").replace("−", "-")
    for chunk in re.split(r"(?<!\^)[+-]", s):
        if not chunk:
            continue
        m = re.fullmatch(r"(?:\d+\*?)?(?:d(?:\^(\d+))?)?\*?(?:x(?:\^(-?\d+))?)?", chunk)
        if not m or not chunk.strip("0123456789*"):
            if re.fullmatch(r"\d+", chunk):
                out.append((0, 0))
                continue
            raise ParseError(f"bad monomial {chunk!r}")
        i = int(m.group(1)) if m.group(1) else (1 if "d" in chunk else 0)
        j = int(m.group(2)) if m.group(2) else (1 if "x" in chunk else 0)
        out.append((i, j))
    if not out:
        raise ParseError("empty operator")
    return out
