"""The n-level Weyl group W_n = W(Phi) semidirect Z^n(coroot lattice).

Elements are stored in semidirect normal form (finite part as an integer
matrix on the simple-root basis, translation as a vector of LinLex with
coefficients in the coroot lattice).  For n > 1 the group is not Coxeter
and carries no length function, so words are only ever *evaluated* to
normal form, never reduced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DatumMismatch, NotARoot
from .lexring import LexPoly, LinLex, Q
from .rootsystem import Mat, RootDatum, inner

PointCoords = tuple[LinLex, ...]


@dataclass(frozen=True)
class WeylElement:
    datum: RootDatum
    n: int
    fin: Mat
    trans: PointCoords

    def __post_init__(self):
        if len(self.trans) != self.datum.rank:
            raise DatumMismatch("translation length does not match the rank")

    def key(self):
        """Total order on normal forms, used for canonical tie-breaking.

        The finite part is ranked by word length from the identity (so the
        identity is least), then the translation lexicographically.
        """
        try:
            rank = self.datum.finite_weyl.index(self.fin)
        except ValueError:  # pragma: no cover - fins always live in the group
            rank = len(self.datum.finite_weyl)
        flat_tr = tuple(c for t in self.trans for c in t.coeffs)
        return (rank, flat_tr)

    def is_identity(self) -> bool:
        ident = _identity_mat(self.datum.rank)
        return self.fin == ident and all(t.is_zero() for t in self.trans)

    def __repr__(self) -> str:
        return f"W({self.fin}, {list(self.trans)})"


def _identity_mat(rank: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))


def _matmul(A: Mat, B: Mat) -> Mat:
    r = len(A)
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(r)) for j in range(r))
        for i in range(r)
    )


def _matinv(A: Mat) -> Mat:
    r = len(A)
    if r == 1:
        if abs(A[0][0]) != 1:
            raise ValueError("not unimodular")
        return A
    if r == 2:
        det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
        if abs(det) != 1:
            raise ValueError("not unimodular")
        d = det
        return (
            (A[1][1] * d, -A[0][1] * d),
            (-A[1][0] * d, A[0][0] * d),
        ) if d == 1 else (
            (-A[1][1], A[0][1]),
            (A[1][0], -A[0][0]),
        )
    raise ValueError("rank > 2 not supported")


def _apply_mat(M: Mat, v: PointCoords) -> PointCoords:
    r = len(M)
    out = []
    for i in range(r):
        acc = LinLex.zero(v[0].n)
        for j in range(r):
            if M[i][j]:
                acc = acc + v[j].scale(M[i][j])
        out.append(acc)
    return tuple(out)


def zero_coords(datum: RootDatum, n: int) -> PointCoords:
    return tuple(LinLex.zero(n) for _ in range(datum.rank))


def identity(datum: RootDatum, n: int) -> WeylElement:
    return WeylElement(datum, n, _identity_mat(datum.rank), zero_coords(datum, n))


def translation(datum: RootDatum, n: int, trans: PointCoords) -> WeylElement:
    return WeylElement(datum, n, _identity_mat(datum.rank), tuple(trans))


def reflection(datum: RootDatum, n: int, root, k: LinLex) -> WeylElement:
    """The hyper-affine reflection in the wall (a, v) = k, k integral.

    Normal form: v -> s_a(v) + k * a_vee.
    """
    root = tuple(root)
    if root not in datum.coroots:
        raise NotARoot(f"{root} is not a root of {datum.type_tag}")
    if not isinstance(k, LinLex):
        k = LinLex.real(n, k)
    if not k.is_integral():
        raise ValueError("reflection level k must have integer coefficients")
    fin = datum.reflection_matrix(root)
    av = datum.coroot(root)
    trans = tuple(k.scale(c) for c in av)
    return WeylElement(datum, n, fin, trans)


def compose(w1: WeylElement, w2: WeylElement) -> WeylElement:
    """w1 after w2: p -> w1(w2(p))."""
    _check_pair(w1, w2)
    fin = _matmul(w1.fin, w2.fin)
    moved = _apply_mat(w1.fin, w2.trans)
    trans = tuple(a + b for a, b in zip(moved, w1.trans))
    return WeylElement(w1.datum, w1.n, fin, trans)


def inverse(w: WeylElement) -> WeylElement:
    fin = _matinv(w.fin)
    trans = tuple(-t for t in _apply_mat(fin, w.trans))
    return WeylElement(w.datum, w.n, fin, trans)


def act(w: WeylElement, p: PointCoords) -> PointCoords:
    moved = _apply_mat(w.fin, p)
    return tuple(a + b for a, b in zip(moved, w.trans))


def _check_pair(w1: WeylElement, w2: WeylElement) -> None:
    if w1.datum.type_tag != w2.datum.type_tag or w1.n != w2.n:
        raise DatumMismatch("elements belong to different groups")


def pair_root(datum: RootDatum, root, p: PointCoords) -> LinLex:
    """(a, p) for an integer root vector and LinLex coordinates."""
    n = p[0].n
    acc = LinLex.zero(n)
    for i in range(datum.rank):
        for j in range(datum.rank):
            c = Q(root[i]) * datum.gram[i][j]
            if c != 0:
                acc = acc + p[j].scale(c)
    return acc


def coroot_coordinates(datum: RootDatum, v: PointCoords) -> PointCoords:
    """Coordinates of v on the simple-coroot basis (exact)."""
    rank = datum.rank
    cols = [datum.coroot(s) for s in datum.simple_roots]
    n = v[0].n
    # Solve C x = v where C has the simple coroots as columns.
    if rank == 1:
        return (v[0].scale(1 / cols[0][0]),)
    a, b = cols[0][0], cols[1][0]
    c, d = cols[0][1], cols[1][1]
    det = a * d - b * c
    x0 = v[0].scale(d / det) + v[1].scale(-b / det)
    x1 = v[0].scale(-c / det) + v[1].scale(a / det)
    return (x0, x1)


def in_coroot_lattice_zn(datum: RootDatum, v: PointCoords) -> bool:
    """v in Z^n(coroot lattice): integral coroot coordinates."""
    return all(x.is_integral() for x in coroot_coordinates(datum, v))


# -- the standard level-2 A1 presentation ------------------------------


def a1_generators(datum: RootDatum, n: int) -> dict[str, WeylElement]:
    """s and w_1..w_n with s = s_{a,0}, w_i = s_{a, omega_i}."""
    if datum.type_tag != "A1":
        raise DatumMismatch("generators s, w_i are specific to A1")
    a = datum.positive_roots[0]
    gens = {"s": reflection(datum, n, a, LinLex.zero(n))}
    for i in range(1, n + 1):
        gens[f"w{i}"] = reflection(datum, n, a, LinLex.omega(n, i))
    return gens


def verify_presentation_a1_level2(datum: RootDatum) -> bool:
    """s^2 = w1^2 = w2^2 = (s w1 w2)^2 = 1 in normal form."""
    if datum.type_tag != "A1":
        raise DatumMismatch("the presentation check is specific to A1")
    g = a1_generators(datum, 2)
    s, w1, w2 = g["s"], g["w1"], g["w2"]
    sq = lambda w: compose(w, w)
    swsw = compose(s, compose(w1, w2))
    return all(
        sq(w).is_identity() for w in (s, w1, w2)
    ) and sq(swsw).is_identity()


def eval_word(datum: RootDatum, n: int, word: str) -> WeylElement:
    """Evaluate a whitespace-separated word of reflections to normal form.

    Tokens: ``s`` / ``w<i>`` (A1 shortcuts), ``s<r>`` for the r-th simple
    reflection with k = 0, or ``s<r>:c_n,...,c_1`` with integer k-vector
    coefficients ordered omega_n first.  Applied left to right as maps,
    i.e. the leftmost token acts last.
    """
    result = identity(datum, n)
    for token in word.split():
        result = compose(result, _token(datum, n, token))
    return result


def _token(datum: RootDatum, n: int, token: str) -> WeylElement:
    if datum.type_tag == "A1":
        gens = a1_generators(datum, n)
        if token in gens:
            return gens[token]
    body, _, kspec = token.partition(":")
    if not body.startswith("s"):
        raise NotARoot(f"unknown generator token {token!r}")
    idx = int(body[1:]) - 1
    if not 0 <= idx < datum.rank:
        raise NotARoot(f"simple-root index out of range in {token!r}")
    if kspec:
        coeffs = [int(c) for c in kspec.split(",")]
        if len(coeffs) != n:
            raise NotARoot(f"k-vector in {token!r} must have {n} entries")
        k = LinLex(n, list(reversed(coeffs)))
    else:
        k = LinLex.zero(n)
    return reflection(datum, n, datum.simple_roots[idx], k)


# -- Bruhat order -------------------------------------------------------


def lattice_in_interval(
    lo: LinLex, hi: LinLex, include_lo: bool = True, include_hi: bool = False
) -> bool:
    """Whether some k in Z^n satisfies lo <= k < hi (bounds adjustable).

    Decided coordinate by coordinate from omega_n down; once a coordinate
    is strictly inside the interval the remaining ones are unconstrained.
    """
    if lo.n != hi.n:
        raise DatumMismatch("mixed levels in lattice interval")
    return _lattice_rec(
        list(lo.descending()), list(hi.descending()), include_lo, include_hi
    )


def _lattice_rec(lo, hi, incl_lo, incl_hi) -> bool:
    if not lo:
        return incl_lo and incl_hi
    u1, v1 = lo[0], hi[0]
    if math.floor(u1) + 1 < v1:
        return True
    if u1.denominator == 1:
        if u1 < v1:
            return True if len(lo) > 1 else incl_lo
        if u1 == v1:
            return _lattice_rec(lo[1:], hi[1:], incl_lo, incl_hi)
    if v1.denominator == 1 and v1 > u1:
        return True if len(lo) > 1 else incl_hi
    return False


def chamber_min(datum: RootDatum, w: WeylElement, root) -> LinLex:
    """min over the closed fundamental chamber of (root, w(y))."""
    consts = []
    for vert in datum.alcove_vertices:
        moved = tuple(
            sum(Q(w.fin[i][j]) * vert[j] for j in range(datum.rank))
            for i in range(datum.rank)
        )
        consts.append(
            sum(
                Q(root[i]) * datum.gram[i][j] * moved[j]
                for i in range(datum.rank)
                for j in range(datum.rank)
            )
        )
    base = pair_root(datum, root, w.trans)
    return base + LinLex.real(w.n, min(consts))


def bruhat_leq(v: WeylElement, w: WeylElement) -> bool:
    """v <= w: every half-space containing C0 and wC0 contains vC0.

    Per root a, the half-spaces {(a,.) + k >= 0} containing both chambers
    are exactly those with k >= K0; containment of vC0 fails iff some
    lattice k lies in [K0, K1) with K1 = -min over vC0 of (a,.).
    """
    _check_pair(v, w)
    datum = v.datum
    e = identity(datum, v.n)
    for root in datum.roots:
        k0 = -_linlex_min(chamber_min(datum, e, root), chamber_min(datum, w, root))
        k1 = -chamber_min(datum, v, root)
        if lattice_in_interval(k0, k1, include_lo=True, include_hi=False):
            return False
    return True


def _linlex_min(a: LinLex, b: LinLex) -> LinLex:
    return a if a <= b else b
