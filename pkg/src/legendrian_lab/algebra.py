"""Exact arithmetic: small finite fields, noncommutative Laurent words, commutative
polynomials over the integers, and elimination of the t variables."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvariantViolation, ParseError, UnsupportedFieldError

SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9)

# (characteristic, modulus coefficients low -> high) for the non-prime fields
_EXTENSIONS = {
    4: (2, (1, 1, 1)),  # x^2 + x + 1
    8: (2, (1, 1, 0, 1)),  # x^3 + x + 1
    9: (3, (1, 0, 1)),  # x^2 + 1
}


class Field:
    """F_q with elements encoded as integers 0..q-1.

    For q = p^k an element is the base-p number whose digits are the coefficients
    of its polynomial representative, so the integer c maps to c mod p.
    """

    def __init__(self, q: int):
        if q not in SUPPORTED_Q:
            raise UnsupportedFieldError(f"unsupported field order q={q}")
        self.q = q
        if q in _EXTENSIONS:
            self.p, modulus = _EXTENSIONS[q]
        else:
            self.p, modulus = q, None
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(q):
                add[x, y] = self._add_slow(x, y)
                mul[x, y] = self._mul_slow(x, y, modulus)
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([int(np.nonzero(add[x] == 0)[0][0]) for x in range(q)], dtype=np.int64)
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.nonzero(mul[x] == 1)[0][0])
        self.inv_table = inv
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = self.neg_table.tolist()
        self._inv = inv.tolist()
        self._check_axioms()

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self._degree()):
            out.append(x % self.p)
            x //= self.p
        return out

    def _degree(self) -> int:
        k, m = 0, 1
        while m < self.q:
            m *= self.p
            k += 1
        return k

    def _undigits(self, ds: Sequence[int]) -> int:
        x = 0
        for d in reversed(ds):
            x = x * self.p + d
        return x

    def _add_slow(self, x: int, y: int) -> int:
        a, b = self._digits(x), self._digits(y)
        return self._undigits([(u + v) % self.p for u, v in zip(a, b)])

    def _mul_slow(self, x: int, y: int, modulus) -> int:
        if modulus is None:
            return (x * y) % self.q
        a, b = self._digits(x), self._digits(y)
        prod_ = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                prod_[i + j] = (prod_[i + j] + u * v) % self.p
        k = len(modulus) - 1
        # reduce using the monic modulus
        for deg in range(len(prod_) - 1, k - 1, -1):
            c = prod_[deg]
            if c:
                for i, m in enumerate(modulus):
                    prod_[deg - k + i] = (prod_[deg - k + i] - c * m) % self.p
        return self._undigits(prod_[:k])

    def _check_axioms(self) -> None:
        q, add, mul = self.q, self.add_table, self.mul_table
        ok = (
            np.array_equal(add, add.T)
            and np.array_equal(mul, mul.T)
            and all(add[0, x] == x and mul[1, x] == x for x in range(q))
            and all(mul[x, self.inv_table[x]] == 1 for x in range(1, q))
        )
        if ok:
            for x, y, z in product(range(q), repeat=3):
                if mul[x, add[y, z]] != add[mul[x, y], mul[x, z]] or add[x, add[y, z]] != add[add[x, y], z]:
                    ok = False
                    break
        if not ok:
            raise InvariantViolation(f"field tables for q={q} fail the field axioms")

    # scalar operations
    def add(self, x: int, y: int) -> int:
        return self._add[x][y]

    def sub(self, x: int, y: int) -> int:
        return self._add[x][self._neg[y]]

    def mul(self, x: int, y: int) -> int:
        return self._mul[x][y]

    def neg(self, x: int) -> int:
        return self._neg[x]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self._inv[x]

    def from_int(self, c: int) -> int:
        return int(c) % self.p

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            x, e = self.inv(x), -e
        r = 1
        for _ in range(e):
            r = self._mul[r][x]
        return r

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def units(self) -> range:
        return range(1, self.q)

    def __repr__(self) -> str:
        return f"Field({self.q})"


@lru_cache(maxsize=None)
def get_field(q: int) -> Field:
    return Field(q)


def field_arith(q: int, op: str, x: int, y: int | None = None) -> int:
    F = get_field(q)
    if op == "add":
        return F.add(x, y)
    if op == "mul":
        return F.mul(x, y)
    if op == "neg":
        return F.neg(x)
    if op == "inv":
        return F.inv(x)
    raise ValueError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# Noncommutative Laurent words

# A symbol is (kind, index, power): kind in {"a", "c", "t"}, power is +1 or -1
# (only t may carry -1).
Sym = tuple[str, int, int]
Word = tuple[Sym, ...]


def sym(kind: str, index: int, power: int = 1) -> Sym:
    return (kind, index, power)


def sym_name(s: Sym) -> str:
    kind, idx, power = s
    return f"{kind}{idx}" if power == 1 else f"{kind}{idx}^-1"


def base_name(s: Sym) -> str:
    return f"{s[0]}{s[1]}"


def _reduce_word(word: Iterable[Sym]) -> Word:
    out: list[Sym] = []
    for s in word:
        if out and s[0] == "t" and out[-1][0] == "t" and out[-1][1] == s[1] and out[-1][2] == -s[2]:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def _join(w1: Word, w2: Word) -> Word:
    """Product of two reduced words; cancellation can only happen at the seam."""
    i = 0
    while i < len(w1) and i < len(w2):
        a, b = w1[-1 - i], w2[i]
        if not (a[0] == "t" and b[0] == "t" and a[1] == b[1] and a[2] == -b[2]):
            break
        i += 1
    return w1[:len(w1) - i] + w2[i:]


def word_str(word: Word) -> str:
    return "*".join(sym_name(s) for s in word) if word else "1"


_KIND_ORDER = {"t": 0, "a": 1, "c": 2}


def word_key(word: Word):
    return (len(word), [(_KIND_ORDER[k], i, p) for k, i, p in word])


class NCSum:
    """Integer combination of reduced noncommutative words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, int] | None = None):
        acc: dict[Word, int] = {}
        for w, c in (terms or {}).items():
            if c:
                rw = _reduce_word(w)
                acc[rw] = acc.get(rw, 0) + c
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def word(cls, word: Sequence[Sym], coeff: int = 1) -> "NCSum":
        return cls({tuple(word): coeff})

    @classmethod
    def one(cls) -> "NCSum":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "NCSum":
        return cls()

    @classmethod
    def _reduced(cls, terms: dict[Word, int]) -> "NCSum":
        out = cls.__new__(cls)
        out.terms = {w: c for w, c in terms.items() if c}
        return out

    def __add__(self, other: "NCSum") -> "NCSum":
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t.get(w, 0) + c
        return NCSum._reduced(t)

    def __neg__(self) -> "NCSum":
        return NCSum._reduced({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCSum") -> "NCSum":
        return self + (-other)

    def __mul__(self, other: "NCSum | int") -> "NCSum":
        if isinstance(other, int):
            return NCSum({w: c * other for w, c in self.terms.items()})
        t: dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = _join(w1, w2)
                t[w] = t.get(w, 0) + c1 * c2
        return NCSum._reduced(t)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NCSum) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def sorted_terms(self) -> list[tuple[Word, int]]:
        return sorted(self.terms.items(), key=lambda wc: word_key(wc[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (w, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = word_str(w)
            if mag != 1:
                body = f"{mag}" if not w else f"{mag}*{body}"
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    __repr__ = __str__

    def symbols(self) -> set[Sym]:
        return {s for w in self.terms for s in w}

    @classmethod
    def parse(cls, text: str) -> "NCSum":
        return _NCParser(text).parse()


_TOKEN = re.compile(r"\s*(?:(\d+)|([act])(\d+)|(\^)|([-+*()]))")


class _NCParser:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"cannot parse word expression at {text[pos:]!r}")
            pos = m.end()
            if m.group(1):
                self.tokens.append(("int", int(m.group(1))))
            elif m.group(2):
                self.tokens.append(("sym", (m.group(2), int(m.group(3)))))
            elif m.group(4):
                self.tokens.append(("^", None))
            else:
                self.tokens.append((m.group(5), None))
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> NCSum:
        s = self.sum()
        if self.i != len(self.tokens):
            raise ParseError("trailing tokens in word expression")
        return s

    def sum(self) -> NCSum:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        acc = self.term() * sign
        while self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            acc = acc + self.term() * sign
        return acc

    def term(self) -> NCSum:
        acc = self.factor()
        while self.peek() in ("*", "int", "sym", "("):
            if self.peek() == "*":
                self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> NCSum:
        kind = self.peek()
        if kind == "int":
            return NCSum.one() * self.take()[1]
        if kind == "(":
            self.take()
            inner = self.sum()
            if self.peek() != ")":
                raise ParseError("unbalanced parenthesis")
            self.take()
            return inner
        if kind == "sym":
            letter, idx = self.take()[1]
            power = 1
            if self.peek() == "^":
                self.take()
                neg = False
                if self.peek() == "-":
                    self.take()
                    neg = True
                if self.peek() != "int":
                    raise ParseError("exponent must be an integer")
                power = self.take()[1] * (-1 if neg else 1)
            if power < 0 and letter != "t":
                raise ParseError(f"only t generators are invertible, got {letter}{idx}^{power}")
            s = NCSum.one()
            for _ in range(abs(power)):
                s = s * NCSum.word([(letter, idx, 1 if power > 0 else -1)])
            return s
        raise ParseError(f"unexpected token {kind!r}")


def evaluate(s: NCSum, values: Mapping[str, int], F: Field) -> int:
    """Image of s under the algebra map sending generator names to field values."""
    total = 0
    for w, c in s.terms.items():
        v = F.from_int(c)
        for smb in w:
            name = base_name(smb)
            if name not in values:
                raise KeyError(f"no value assigned to {name}")
            x = values[name]
            v = F.mul(v, x if smb[2] == 1 else F.inv(x))
        total = F.add(total, v)
    return total


def evaluate_array(s: NCSum, arrays: Mapping[str, np.ndarray], F: Field, size: int) -> np.ndarray:
    """Vectorized evaluate over many assignments at once; inverses must be nonzero."""
    total = np.zeros(size, dtype=np.int64)
    for w, c in s.terms.items():
        v = np.full(size, F.from_int(c), dtype=np.int64)
        for smb in w:
            x = arrays[base_name(smb)]
            if smb[2] == -1:
                x = F.inv_table[x]
            v = F.mul_table[v, x]
        total = F.add_table[total, v]
    return total


# ---------------------------------------------------------------------------
# Commutative polynomials


class Poly:
    """Integer polynomial in variables alpha_1..alpha_nvars (exponent-tuple keyed)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        m = [0] * nvars
        m[i - 1] = 1
        return cls(nvars, {tuple(m): 1})

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(self.nvars, t)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly | int") -> "Poly":
        if isinstance(other, int):
            return Poly(self.nvars, {m: c * other for m, c in self.terms.items()})
        t: dict[tuple[int, ...], int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        r = Poly.const(self.nvars, 1)
        for _ in range(e):
            r = r * self
        return r

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree_in(self, i: int) -> int:
        return max((m[i - 1] for m in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (sum(mc[0]), [-e for e in mc[0]]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [f"a{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
            parts.append("*".join([str(c)] + factors))
        return "+".join(parts).replace("+-", "-")

    __repr__ = __str__

    def evaluate(self, values: Sequence[int], F: Field) -> int:
        total = 0
        for m, c in self.terms.items():
            v = F.from_int(c)
            for x, e in zip(values, m):
                if e:
                    v = F.mul(v, F.pow(x, e))
            total = F.add(total, v)
        return total

    def evaluate_array(self, alpha: np.ndarray, F: Field) -> np.ndarray:
        """alpha has shape (nvars, M); returns shape (M,)."""
        size = alpha.shape[1]
        powers: dict[tuple[int, int], np.ndarray] = {}

        def power(i: int, e: int) -> np.ndarray:
            key = (i, e)
            if key not in powers:
                powers[key] = alpha[i] if e == 1 else F.mul_table[power(i, e - 1), alpha[i]]
            return powers[key]

        total = np.zeros(size, dtype=np.int64)
        for m, c in self.terms.items():
            v = np.full(size, F.from_int(c), dtype=np.int64)
            for i, e in enumerate(m):
                if e:
                    v = F.mul_table[v, power(i, e)]
            total = F.add_table[total, v]
        return total


@dataclass(frozen=True)
class RatFn:
    """num / prod_k Q_k^den[k] with den an exponent vector over the earlier Q's."""

    num: Poly
    den: tuple[int, ...]

    def __str__(self) -> str:
        dens = [f"Q{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(self.den) if e]
        return f"({self.num})" + (f"/({'*'.join(dens)})" if dens else "")


@dataclass(frozen=True)
class Elimination:
    P: tuple[RatFn, ...]
    Q: tuple[Poly, ...]
    nvars: int

    def t_values(self, alpha: Sequence[int], F: Field) -> list[int] | None:
        """t_i = -P_i(alpha)^-1, or None when some Q_i vanishes."""
        qv = []
        for Qi in self.Q:
            v = Qi.evaluate(alpha, F)
            if v == 0:
                return None
            qv.append(v)
        ts = []
        for Pi, v in zip(self.P, qv):
            den = 1
            for k, e in enumerate(Pi.den):
                den = F.mul(den, F.pow(qv[k], e))
            ts.append(F.neg(F.mul(den, F.inv(v))))
        return ts


def eliminate_t(dga) -> Elimination:
    """Solve d(c_i) = t_i^-1 + f_i(a, t_<i) = 0 successively for t_i.

    ``dga`` must come from a rainbow closure with one base point per right cusp.
    """
    n = dga.n_cusps
    nvars = dga.n_crossings
    Ps: list[RatFn] = []
    Qs: list[Poly] = []
    for i in range(1, n + 1):
        d = dga.differential(f"c{i}")
        lead = (("t", i, -1),)
        if d.terms.get(lead) != 1:
            raise InvariantViolation(f"d(c{i}) lacks the leading term t{i}^-1: {d}")
        f = d - NCSum.word(lead)
        for w in f.terms:
            for s in w:
                if s[0] == "c" or (s[0] == "t" and s[1] >= i):
                    raise InvariantViolation(f"d(c{i}) is not of the form t{i}^-1 + f(a, t_<{i}): {d}")
        terms: list[tuple[Poly, list[int]]] = []
        for w, c in f.terms.items():
            num = Poly.const(nvars, c)
            exps = [0] * (i - 1)
            for kind, idx, power in w:
                if kind == "a":
                    num = num * Poly.var(nvars, idx)
                    continue
                # t_j = -D_j / Q_j where D_j = prod Q^Ps[j].den
                num = -num
                dj = Ps[idx - 1].den
                exps[idx - 1] += power
                for k, e in enumerate(dj):
                    exps[k] -= power * e
            terms.append((num, exps))
        target = [max([0] + [e[k] for _, e in terms]) for k in range(i - 1)]
        P_num = Poly(nvars)
        for num, exps in terms:
            for k in range(i - 1):
                missing = target[k] - exps[k]
                if missing:
                    num = num * (Qs[k] ** missing)
            P_num = P_num + num
        Ps.append(RatFn(P_num, tuple(target)))
        Qs.append(P_num)
    return Elimination(tuple(Ps), tuple(Qs), nvars)


# ---------------------------------------------------------------------------
# Small dense matrices over F_q (lists of rows)


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], F: Field) -> list[list[int]]:
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        r = []
        for j in range(cols):
            acc = 0
            for k, a in enumerate(row):
                if a and B[k][j]:
                    acc = F.add(acc, F.mul(a, B[k][j]))
            r.append(acc)
        out.append(r)
    return out


def _echelon(A: Sequence[Sequence[int]], F: Field) -> tuple[list[list[int]], list[int]]:
    M = [list(r) for r in A]
    pivots: list[int] = []
    row = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        p = next((r for r in range(row, len(M)) if M[r][col]), None)
        if p is None:
            continue
        M[row], M[p] = M[p], M[row]
        inv = F.inv(M[row][col])
        M[row] = [F.mul(inv, x) for x in M[row]]
        for r in range(len(M)):
            if r != row and M[r][col]:
                c = M[r][col]
                M[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
    return M, pivots


def mat_rank(A: Sequence[Sequence[int]], F: Field) -> int:
    if not A or not A[0]:
        return 0
    return len(_echelon(A, F)[1])


def mat_solve(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], F: Field) -> list[list[int]] | None:
    """The unique X with A X = B for A of full column rank, or None."""
    m = len(A)
    k = len(A[0]) if A else 0
    c = len(B[0]) if B else 0
    if k == 0:
        return [] if all(not any(r) for r in B) else None
    aug = [list(A[i]) + list(B[i]) for i in range(m)]
    M, piv = _echelon(aug, F)
    if piv[:k] != list(range(k)) or any(p >= k for p in piv):
        return None
    return [M[i][k:k + c] for i in range(k)]
