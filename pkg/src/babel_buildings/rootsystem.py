"""Rational root data for A1, A2 and B2.

Roots are abstract symbols over the simple-root basis; all inner products
come from a rational Gram matrix, so no irrational coordinates ever enter
the arithmetic.  Conventions:

* A1: (a,a) = 1, so the fundamental chamber is the interval (0, 1).
* A2: (a,a) = (b,b) = 4, (a,b) = -2 (b at 120 degrees to a, |a| = |b| = 2).
* B2: from a = (2,0), b = (-2,2): (a,a) = 4, (b,b) = 8, (a,b) = -4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import DimensionMismatch, UnsupportedType
from .lexring import LexPoly, LinLex, Q

Vec = tuple[Q, ...]
Mat = tuple[tuple[int, ...], ...]

_GRAM = {
    "A1": ((Q(1),),),
    "A2": ((Q(4), Q(-2)), (Q(-2), Q(4))),
    "B2": ((Q(4), Q(-4)), (Q(-4), Q(8))),
}

_POSITIVE = {
    "A1": ((1,),),
    "A2": ((1, 0), (0, 1), (1, 1)),
    "B2": ((1, 0), (0, 1), (1, 1), (2, 1)),
}


def _qdot(gram, u, v) -> Q:
    return sum(u[i] * gram[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


@dataclass(frozen=True)
class RootDatum:
    """Roots, coroots and the finite Weyl group of one type, all rational."""

    type_tag: str
    rank: int
    gram: tuple[tuple[Q, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    coroots: dict = field(repr=False, compare=False)
    finite_weyl: tuple[Mat, ...] = field(repr=False, compare=False)
    alcove_vertices: tuple[Vec, ...] = field(repr=False, compare=False)

    @property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        return self.positive_roots + tuple(
            tuple(-c for c in r) for r in self.positive_roots
        )

    @property
    def simple_roots(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(1 if j == i else 0 for j in range(self.rank))
            for i in range(self.rank)
        )

    def pairing(self, u: Vec, v: Vec) -> Q:
        """Rational inner product of two coordinate vectors."""
        if len(u) != self.rank or len(v) != self.rank:
            raise DimensionMismatch("vector length does not match the rank")
        return _qdot(self.gram, u, v)

    def coroot(self, root: tuple[int, ...]) -> Vec:
        """2a/(a,a) as a rational vector on the simple-root basis."""
        key = tuple(root)
        if key not in self.coroots:
            raise DimensionMismatch(f"{root} is not a root of {self.type_tag}")
        return self.coroots[key]

    def reflection_matrix(self, root: tuple[int, ...]) -> Mat:
        """Integer matrix of s_a on the simple-root basis."""
        av = self.coroot(root)
        cols = []
        for e in self.simple_roots:
            pair = self.pairing(av, tuple(Q(c) for c in e))
            col = tuple(Q(e[i]) - pair * root[i] for i in range(self.rank))
            cols.append(col)
        rows = tuple(
            tuple(int(cols[j][i]) for j in range(self.rank)) for i in range(self.rank)
        )
        return rows


def _close_group(gens: list[Mat], rank: int) -> tuple[Mat, ...]:
    """BFS closure from the identity; word-length order, identity first."""

    def matmul(A: Mat, B: Mat) -> Mat:
        return tuple(
            tuple(sum(A[i][k] * B[k][j] for k in range(rank)) for j in range(rank))
            for i in range(rank)
        )

    ident = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
    order = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = matmul(s, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        nxt.sort()
        order.extend(nxt)
        frontier = nxt
    return tuple(order)


def _alcove_vertices(tag: str, gram, positive) -> tuple[Vec, ...]:
    """Vertices of the closure of {v : 0 < (a,v) < 1 for all positive a}."""
    rank = len(gram)
    constraints = []
    for r in positive:
        rv = tuple(Q(c) for c in r)
        constraints.append((rv, Q(0)))
        constraints.append((rv, Q(1)))
    verts: list[Vec] = []
    for combo in combinations(constraints, rank):
        sol = _solve(gram, combo, rank)
        if sol is None:
            continue
        ok = all(
            Q(0) <= _qdot(gram, tuple(Q(c) for c in r), sol) <= Q(1) for r in positive
        )
        if ok and sol not in verts:
            verts.append(sol)
    return tuple(sorted(verts))


def _solve(gram, combo, rank) -> Vec | None:
    """Solve (r_i, x) = k_i by Gaussian elimination over Q."""
    rows = [[_qdot(gram, r, e) for e in _basis(rank)] + [k] for r, k in combo]
    for col in range(rank):
        piv = next((i for i in range(col, rank) if rows[i][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        pv = rows[col][col]
        rows[col] = [x / pv for x in rows[col]]
        for i in range(rank):
            if i != col and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return tuple(rows[i][rank] for i in range(rank))


def _basis(rank):
    return [tuple(Q(1) if j == i else Q(0) for j in range(rank)) for i in range(rank)]


_CACHE: dict[str, RootDatum] = {}


def root_datum(type_tag: str) -> RootDatum:
    """The root datum for tag A1, A2 or B2."""
    tag = type_tag.upper()
    if tag not in _GRAM:
        raise UnsupportedType(f"unsupported root system {type_tag!r}")
    if tag in _CACHE:
        return _CACHE[tag]
    gram = _GRAM[tag]
    rank = len(gram)
    positive = _POSITIVE[tag]
    coroots = {}
    for r in positive:
        rv = tuple(Q(c) for c in r)
        norm2 = _qdot(gram, rv, rv)
        co = tuple(2 * c / norm2 for c in rv)
        coroots[tuple(r)] = co
        coroots[tuple(-c for c in r)] = tuple(-c for c in co)
    datum = RootDatum(
        type_tag=tag,
        rank=rank,
        gram=gram,
        positive_roots=positive,
        coroots=coroots,
        finite_weyl=(),
        alcove_vertices=_alcove_vertices(tag, gram, positive),
    )
    gens = [
        datum.reflection_matrix(tuple(1 if j == i else 0 for j in range(rank)))
        for i in range(rank)
    ]
    weyl = _close_group(gens, rank)
    datum = RootDatum(
        type_tag=tag,
        rank=rank,
        gram=gram,
        positive_roots=positive,
        coroots=coroots,
        finite_weyl=weyl,
        alcove_vertices=datum.alcove_vertices,
    )
    _CACHE[tag] = datum
    return datum


def inner(datum: RootDatum, u, v) -> LexPoly:
    """Bilinear extension of the Gram pairing to LinLex coordinate vectors."""
    u = [c if isinstance(c, LinLex) else LinLex.real(_guess_n(u, v), c) for c in u]
    v = [c if isinstance(c, LinLex) else LinLex.real(u[0].n, c) for c in v]
    if len(u) != datum.rank or len(v) != datum.rank:
        raise DimensionMismatch("vector length does not match the rank")
    n = u[0].n
    total = LexPoly.zero(n)
    for i in range(datum.rank):
        for j in range(datum.rank):
            g = datum.gram[i][j]
            if g != 0:
                total = total + (u[i].as_lexpoly() * v[j].as_lexpoly()).scale(g)
    return total


def _guess_n(u, v) -> int:
    for c in list(u) + list(v):
        if isinstance(c, LinLex):
            return c.n
    return 1
