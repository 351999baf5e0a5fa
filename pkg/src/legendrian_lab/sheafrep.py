"""Quivers of the closed fronts and the rank one representation attached to an
augmentation of a rainbow closure.

Regions of the rainbow closure (with the dashed cusp lines added):

* ``L-`` below the braid and ``L+`` above the outermost arc, both of rank 0;
* ``U`` between the innermost arc and braid slot 1 (rank n) and ``U{i}``
  between arcs i and i+1 (rank n - i), so U_0 = U and U_n = L+;
* faces of the braid: gap g (between slots g and g+1) is cut by the crossings
  with letter g into faces m = 0 .. c_g, each of rank n - g.

Arrows point from the region below an arc to the region above it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .algebra import get_field, mat_mul, mat_rank, mat_solve
from .braidfront import BraidWord, FrontDiagram, rainbow_closure
from .errors import DomainError, FrameSolveError, InvariantViolation

Mat = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Vertex:
    name: str
    d: int


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    dst: str
    maslov: int
    dashed: bool = False


@dataclass(frozen=True)
class Relation:
    name: str
    left: tuple[str, ...]  # arrow names, first applied first
    right: tuple[str, ...]


@dataclass(frozen=True)
class Square:
    """The four regions around a crossing."""

    crossing: str
    N: str
    W: str
    E: str
    S: str
    sw: str
    se: str
    wn: str
    en: str


@dataclass
class Quiver:
    kind: str
    n: int
    vertices: dict[str, Vertex]
    arrows: dict[str, Arrow]
    relations: list[Relation]
    squares: list[Square]
    face_index: dict[tuple[int, int], str] = field(default_factory=dict)  # (gap, m) -> vertex

    def d(self, v: str) -> int:
        return self.vertices[v].d

    def is_acyclic(self) -> bool:
        succ: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arrows.values():
            succ[a.src].append(a.dst)
        state: dict[str, int] = {}

        def visit(v: str) -> bool:
            state[v] = 1
            for w in succ[v]:
                if state.get(w) == 1 or (w not in state and not visit(w)):
                    return False
            state[v] = 2
            return True

        return all(v in state or visit(v) for v in self.vertices)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [{"id": v.name, "d": v.d} for v in self.vertices.values()],
            "arcs": [
                {"id": a.name, "src": a.src, "dst": a.dst, "maslov": a.maslov, "dashed": a.dashed}
                for a in self.arrows.values()
            ],
            "relations": [{"id": r.name, "left": list(r.left), "right": list(r.right)} for r in self.relations],
        }


def _face_name(n: int, g: int, m: int) -> str:
    if n == 2:
        return str(m + 1)
    return f"F{g}.{m}"


def _counts_before(word: tuple[int, ...], x: int, letter: int) -> int:
    return sum(1 for i in word[:x] if i == letter)


def build_quiver(f: FrontDiagram) -> Quiver:
    if f.kind == "rainbow":
        return _rainbow_quiver(f)
    return _cylindrical_quiver(f)


def _rainbow_quiver(f: FrontDiagram) -> Quiver:
    n, word = f.n, f.word
    N = len(word)
    V: dict[str, Vertex] = {"L-": Vertex("L-", 0)}
    faces: dict[tuple[int, int], str] = {}
    for g in range(1, n):
        for m in range(word.count(g) + 1):
            name = _face_name(n, g, m)
            faces[(g, m)] = name
            V[name] = Vertex(name, n - g)
    V["U"] = Vertex("U", n)
    for i in range(1, n):
        V[f"U{i}"] = Vertex(f"U{i}", n - i)
    V["L+"] = Vertex("L+", 0)

    def region(g: int, x: int) -> str:
        """Region in gap g at slice index x (0 = left of every crossing)."""
        if g == 0:
            return "U"
        if g == n:
            return "L-"
        return faces[(g, _counts_before(word, x, g))]

    def u(i: int) -> str:
        return "U" if i == 0 else ("L+" if i == n else f"U{i}")

    A: dict[str, Arrow] = {}
    seg_at: dict[tuple[int, int], str] = {}  # (slot, slice) -> arrow
    for j in range(1, n + 1):
        seg = 0
        prev = None
        for x in range(N + 1):
            key = (region(j, x), region(j - 1, x))
            if key != prev:
                seg += 1
                name = f"s{j}.{seg}"
                A[name] = Arrow(name, key[0], key[1], 0)
                prev = key
            seg_at[(j, x)] = f"s{j}.{seg}"
    for i in range(1, n + 1):
        A[f"u{i}"] = Arrow(f"u{i}", u(i - 1), u(i), 1)
    relations: list[Relation] = []
    for side, x in (("L", 0), ("R", N)):
        path: tuple[str, ...] = ()
        for i in range(1, n + 1):
            path = (seg_at[(i, x)],) + path + (f"u{i}",)
            src = region(i, x)
            name = f"D{side}{i}"
            A[name] = Arrow(name, src, u(i), 0, dashed=True)
            relations.append(Relation(name, (name,), path))
    squares = []
    for m, j in enumerate(word, start=1):
        sq = Square(
            f"a{m}", region(j - 1, m - 1), region(j, m - 1), region(j, m), region(j + 1, m - 1),
            seg_at[(j + 1, m - 1)], seg_at[(j + 1, m)], seg_at[(j, m - 1)], seg_at[(j, m)],
        )
        squares.append(sq)
        relations.append(Relation(sq.crossing, (sq.sw, sq.wn), (sq.se, sq.en)))
    return Quiver("rainbow", n, V, A, relations, squares, faces)


def _cylindrical_quiver(f: FrontDiagram) -> Quiver:
    """Regions of (beta Delta^2) closed up on a cylinder; crossing m sits at angle m."""
    n, word = f.n, f.word
    M = len(word)
    V: dict[str, Vertex] = {"L": Vertex("L", 0)}
    faces: dict[tuple[int, int], str] = {}
    for g in range(1, n):
        for m in range(max(word.count(g), 1)):
            faces[(g, m)] = f"F{g}.{m}"
            V[f"F{g}.{m}"] = Vertex(f"F{g}.{m}", n - g)
    V["U"] = Vertex("U", n)

    def region(g: int, x: int) -> str:
        if g == 0:
            return "U"
        if g == n:
            return "L"
        c = word.count(g)
        return faces[(g, _counts_before(word, x, g) % c if c else 0)]

    A: dict[str, Arrow] = {}
    seg_at: dict[tuple[int, int], str] = {}
    for j in range(1, n + 1):
        events = [x for x, i in enumerate(word) if i in (j - 1, j)]
        if not events:
            name = f"s{j}.1"
            A[name] = Arrow(name, region(j, 0), region(j - 1, 0), 0)
            for x in range(M + 1):
                seg_at[(j, x)] = name
            continue
        # segment k starts just after events[k] and wraps around the cylinder
        for k, x0 in enumerate(events):
            name = f"s{j}.{k + 1}"
            A[name] = Arrow(name, region(j, x0 + 1), region(j - 1, x0 + 1), 0)
        for x in range(M + 1):
            before = [k for k, e in enumerate(events) if e < x]
            k = before[-1] if before else len(events) - 1
            seg_at[(j, x)] = f"s{j}.{k + 1}"
    relations, squares = [], []
    for m, j in enumerate(word, start=1):
        x = m - 1
        sq = Square(
            f"a{m}", region(j - 1, x), region(j, x), region(j, x + 1), region(j + 1, x),
            seg_at[(j + 1, x)], seg_at[(j + 1, x + 1)], seg_at[(j, x)], seg_at[(j, x + 1)],
        )
        squares.append(sq)
        relations.append(Relation(sq.crossing, (sq.sw, sq.wn), (sq.se, sq.en)))
    return Quiver("cylindrical", n, V, A, relations, squares, faces)


# ---------------------------------------------------------------------------
# Representations


@dataclass
class QuiverRep:
    quiver: Quiver
    q: int
    maps: dict[str, Mat]  # arrow -> d(dst) x d(src) matrix

    def key(self) -> tuple:
        return tuple(sorted(self.maps.items()))


def _zeros(r: int, c: int) -> Mat:
    return tuple((0,) * c for _ in range(r))


def _compose(rep: QuiverRep, path: tuple[str, ...]) -> Mat:
    F = get_field(rep.q)
    Q = rep.quiver
    first = Q.arrows[path[0]]
    d0 = Q.d(first.src)
    M: Mat = tuple(tuple(int(i == j) for j in range(d0)) for i in range(d0))
    for a in path:
        A = rep.maps[a]
        if not A or not M or not M[0]:
            M = _zeros(Q.d(Q.arrows[a].dst), d0)
        else:
            M = tuple(map(tuple, mat_mul(A, M, F)))
    return M


def _frame_columns(E: list[list[int]], lo: int, n: int) -> list[list[int]]:
    """Rows of the n x (n-lo+1) matrix [e_lo .. e_n] (1-based)."""
    return [row[lo - 1:n] for row in E]


def phi_of_augmentation(eps, braid: BraidWord) -> QuiverRep:
    from .barannikov import morse_frames

    f = rainbow_closure(braid, "all_cusps")
    Q = build_quiver(f)
    F = get_field(eps.q)
    n = braid.n
    frames = [s.frame for s in morse_frames(eps, braid)]
    # frame of every region with positive rank, read at x_L'(R)
    frame_of: dict[str, list[list[int]]] = {"U": frames[0]}
    for (g, m), name in Q.face_index.items():
        if m == 0:
            x = 0
        else:
            x = [k for k, i in enumerate(braid.letters, start=1) if i == g][m - 1]
        frame_of[name] = _frame_columns(frames[x], g + 1, n)
    maps: dict[str, Mat] = {}
    for a in Q.arrows.values():
        ds, dn = Q.d(a.src), Q.d(a.dst)
        if a.dashed:
            continue
        if a.maslov == 1:
            maps[a.name] = tuple(tuple(int(c == r + 1) for c in range(ds)) for r in range(dn))
        elif ds == 0:
            maps[a.name] = _zeros(dn, 0)
        else:
            X = mat_solve(frame_of[a.dst], frame_of[a.src], F)
            if X is None:
                raise FrameSolveError(f"frame of {a.src} is not inside the frame of {a.dst}")
            maps[a.name] = tuple(map(tuple, X))
    rep = QuiverRep(Q, eps.q, maps)
    for r in Q.relations:
        if r.name.startswith("D"):
            maps[r.name] = _compose(rep, r.right)
    return rep


@dataclass(frozen=True)
class RepReport:
    ok: bool
    failure: str | None = None


def validate_rep(rep: QuiverRep) -> RepReport:
    F = get_field(rep.q)
    Q = rep.quiver
    for a in Q.arrows.values():
        M = rep.maps[a.name]
        ds, dn = Q.d(a.src), Q.d(a.dst)
        if len(M) != dn or any(len(r) != ds for r in M):
            return RepReport(False, f"{a.name}: matrix shape does not match {dn}x{ds}")
        rk = mat_rank(M, F) if dn and ds else 0
        if a.dashed:
            if ds != dn or rk != ds:
                return RepReport(False, f"{a.name}: dashed arrow is not an isomorphism")
        elif a.maslov == 0 and rk != ds:
            return RepReport(False, f"{a.name}: not injective")
        elif a.maslov == 1 and rk != dn:
            return RepReport(False, f"{a.name}: not surjective")
    for r in Q.relations:
        if _compose(rep, r.left) != _compose(rep, r.right):
            return RepReport(False, f"{r.name}: relation fails")
    for sq in Q.squares:
        # 0 -> F(S) -> F(W) + F(E) -> F(N) -> 0 must be exact
        dS, dW, dE, dN = (Q.d(v) for v in (sq.S, sq.W, sq.E, sq.N))
        first = [list(r) for r in rep.maps[sq.sw]] + [list(r) for r in rep.maps[sq.se]]
        second = [list(a) + [F.neg(x) for x in b] for a, b in zip(rep.maps[sq.wn], rep.maps[sq.en])]
        r1 = mat_rank(first, F) if dS else 0
        r2 = mat_rank(second, F) if dN and dW + dE else 0
        if r1 != dS or r2 != dN or r1 + r2 != dW + dE:
            return RepReport(False, f"{sq.crossing}: total complex is not acyclic (transversality fails)")
    return RepReport(True)


def theta(lam: tuple[int, ...], braid: BraidWord, Q: Quiver) -> dict[str, tuple[int, ...]]:
    """Diagonal of theta_R(lam) for every region: components of the strands below R at x_L'(R)."""
    n = braid.n
    perm = list(range(1, n + 1))  # perm[slot-1] = left slot (= component) of the strand there
    comps = [tuple(perm)]
    for i in braid.letters:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        comps.append(tuple(perm))
    out = {"U": tuple(lam[c - 1] for c in comps[0])}
    for i in range(1, n):
        out[f"U{i}"] = tuple(lam[c - 1] for c in comps[0][i:])
    out["L-"] = out["L+"] = ()
    for (g, m), name in Q.face_index.items():
        x = 0 if m == 0 else [k for k, i in enumerate(braid.letters, start=1) if i == g][m - 1]
        out[name] = tuple(lam[c - 1] for c in comps[x][g:])
    return out


def act(th: dict[str, tuple[int, ...]], rep: QuiverRep) -> QuiverRep:
    """g . F with F(e_s) -> g_N F(e_s) g_S^-1 for diagonal g."""
    F = get_field(rep.q)
    maps = {}
    for a in rep.quiver.arrows.values():
        gn, gs = th[a.dst], th[a.src]
        maps[a.name] = tuple(
            tuple(F.mul(F.mul(gn[r], v), F.inv(gs[c])) for c, v in enumerate(row))
            for r, row in enumerate(rep.maps[a.name])
        )
    return QuiverRep(rep.quiver, rep.q, maps)


@dataclass(frozen=True)
class EquivarianceReport:
    ok: bool
    equivariant: bool
    injective: bool
    orbit_injective: bool
    checked: int
    counterexample: str | None = None


def equivariance_and_injectivity(dga, q: int) -> EquivarianceReport:
    from .augvar import enumerate_augmentations, torus, torus_act

    braid = dga.lagrangian.front.braid
    if not braid.is_connected():
        from .errors import DisconnectedClosureError

        raise DisconnectedClosureError(f"{braid} has a disconnected closure")
    augs = enumerate_augmentations(dga, q, "all_cusps")
    reps = {e: phi_of_augmentation(e, braid) for e in augs}
    by_key = {}
    injective = True
    for e, rep in reps.items():
        k = rep.key()
        if k in by_key:
            injective = False
        by_key[k] = e
    equivariant = orbit_ok = True
    bad = None
    checked = 0
    Q = next(iter(reps.values())).quiver if reps else None
    for lam in torus(q, braid.n):
        th = theta(lam, braid, Q)
        for e, rep in reps.items():
            checked += 1
            moved = act(th, rep)
            le = torus_act(lam, e, dga)
            if phi_of_augmentation(le, braid).key() != moved.key():
                equivariant = False
                bad = bad or f"Phi(lam.eps) != theta(lam).Phi(eps) at lam={lam}, eps={e.values}"
            if by_key.get(moved.key()) != le:
                orbit_ok = False
                bad = bad or f"theta(lam).Phi(eps) is not Phi of lam.eps at lam={lam}, eps={e.values}"
    return EquivarianceReport(equivariant and injective and orbit_ok, equivariant, injective, orbit_ok, checked, bad)


# ---------------------------------------------------------------------------
# Two strands: lines in P^1


def projective_line(q: int) -> list[tuple[int, int]]:
    """Normalized points [x:y] of P^1(F_q): [1:y] and [0:1]."""
    return [(1, y) for y in range(q)] + [(0, 1)]


def sheaf_count_oracle_n2(b: BraidWord, q: int) -> int:
    """Tuples of lines with the first fixed to infinity = [0:1], consecutive lines
    distinct and the last different from 0 = [1:0]."""
    if b.n != 2:
        raise DomainError("the line-tuple oracle is for two-strand braids")
    if not b.is_connected():
        from .errors import DisconnectedClosureError

        raise DisconnectedClosureError(f"{b} has a disconnected closure")
    get_field(q)
    pts = projective_line(q)
    inf, zero = (0, 1), (1, 0)
    count = 0
    for lines in product(pts, repeat=len(b.letters)):
        walk = (inf,) + lines
        if all(a != c for a, c in zip(walk, walk[1:])) and walk[-1] != zero:
            count += 1
    return count

