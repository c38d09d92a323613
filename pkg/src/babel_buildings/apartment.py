"""The n-level apartment Sigma(n, Phi) and its hyper-metric geometry.

The apartment is the orbit of the closed fundamental chamber under the
n-level Weyl group.  A coordinate point lies in it iff every omega_j
component (j >= 2) is a coroot-lattice vector; the real part is free.
All predicates are exact: membership, location, enclosure, sectors and
circumcenters reduce to rational linear algebra plus lex comparisons.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import (
    DegenerateBasis,
    Disjoint,
    EmptyOmega,
    InvalidConfiguration,
    MixedLevels,
    NotASector,
    NotInApartment,
    PreconditionViolated,
)
from .lexring import LexPoly, LinLex, Q, SqrtExpr
from .rootsystem import RootDatum, inner
from .weyl import (
    WeylElement,
    act,
    compose,
    identity,
    inverse,
    lattice_in_interval,
    pair_root,
    reflection,
    translation,
)


@dataclass(frozen=True)
class Point:
    """Point of the enveloping space: one LinLex per simple-root coordinate."""

    coords: tuple[LinLex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def n(self) -> int:
        return self.coords[0].n

    def __add__(self, other: "Point") -> "Point":
        return Point(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        return Point(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "Point":
        return Point(tuple(a.scale(c) for a in self.coords))

    def level_component(self, j: int) -> tuple[Q, ...]:
        """The vector of omega_j coefficients (rational)."""
        return tuple(c.coeffs[j - 1] for c in self.coords)

    def __repr__(self) -> str:
        return f"Point({list(self.coords)})"


@dataclass(frozen=True)
class Sector:
    """i-level sector with the canonical dominant direction."""

    apex: Point
    level: int


def point_from_rationals(n: int, reals, **levels) -> Point:
    """Point with given real coordinates; levels like j2=(1,0) add omega_j parts."""
    rank = len(reals)
    rows = [[Q(0)] * n for _ in range(rank)]
    for i, c in enumerate(reals):
        rows[i][0] = Q(c)
    for key, vec in levels.items():
        j = int(key[1:])
        for i, c in enumerate(vec):
            rows[i][j - 1] = Q(c)
    return Point(tuple(LinLex(n, row) for row in rows))


class Apartment:
    """Sigma(n, Phi) for a fixed root datum and level count n."""

    def __init__(self, datum: RootDatum, n: int):
        if n < 1:
            raise InvalidConfiguration("n must be >= 1")
        self.datum = datum
        self.n = n

    # -- membership and location --------------------------------------

    def zero(self) -> Point:
        return Point(tuple(LinLex.zero(self.n) for _ in range(self.datum.rank)))

    def _coroot_coords_rat(self, vec: tuple[Q, ...]) -> tuple[Q, ...]:
        cols = [self.datum.coroot(s) for s in self.datum.simple_roots]
        if self.datum.rank == 1:
            return (vec[0] / cols[0][0],)
        a, b = cols[0][0], cols[1][0]
        c, d = cols[0][1], cols[1][1]
        det = a * d - b * c
        return (
            (vec[0] * d - vec[1] * b) / det,
            (-vec[0] * c + vec[1] * a) / det,
        )

    def contains(self, p: Point) -> bool:
        for j in range(2, self.n + 1):
            comp = p.level_component(j)
            if any(x.denominator != 1 for x in self._coroot_coords_rat(comp)):
                return False
        return True

    def locate(self, p: Point) -> WeylElement:
        """Some w with p in w(closed chamber); lexicographically least on ties."""
        if not self.contains(p):
            raise NotInApartment(f"{p!r} is not in Sigma({self.n},{self.datum.type_tag})")
        n, rank = self.n, self.datum.rank
        high = tuple(
            LinLex(n, [Q(0)] + list(c.coeffs[1:])) for c in p.coords
        )
        x = list(p.level_component(1))
        f_acc = identity(self.datum, n)
        tau = [Q(0)] * rank

        # Pre-translate by coroot-coordinate floors to bound the walk.
        cc = self._coroot_coords_rat(tuple(x))
        floors = [Q(int(c.__floor__())) for c in cc]
        for i, s in enumerate(self.datum.simple_roots):
            co = self.datum.coroot(s)
            for k in range(rank):
                shift = floors[i] * co[k]
                x[k] -= shift
                tau[k] += shift

        # Alcove walk: reflect across violated walls until inside.
        guard = 0
        while True:
            guard += 1
            if guard > 10_000:
                raise RuntimeError("alcove walk failed to terminate")
            moved = False
            for root in self.datum.positive_roots:
                val = self._pair_rat(root, tuple(x))
                if val < 0:
                    x = self._reflect_rat(root, Q(0), x)
                    f_acc = compose(
                        reflection(self.datum, n, root, LinLex.zero(n)), f_acc
                    )
                    moved = True
                    break
                if val > 1:
                    x = self._reflect_rat(root, Q(1), x)
                    f_acc = compose(
                        reflection(self.datum, n, root, LinLex.real(n, 1)), f_acc
                    )
                    moved = True
                    break
            if not moved:
                break

        # p_real = tau + f_acc^{-1}(x_final); assemble w with the high part.
        w_real = compose(
            translation(self.datum, n, tuple(LinLex.real(n, t) for t in tau)),
            inverse(f_acc),
        )
        w = compose(translation(self.datum, n, high), w_real)
        y = tuple(LinLex.real(n, c) for c in x)
        return self._least_equivalent(w, y)

    def _pair_rat(self, root, vec: tuple[Q, ...]) -> Q:
        return sum(
            Q(root[i]) * self.datum.gram[i][j] * vec[j]
            for i in range(self.datum.rank)
            for j in range(self.datum.rank)
        )

    def _reflect_rat(self, root, k: Q, vec) -> list[Q]:
        norm2 = self._pair_rat(root, tuple(Q(c) for c in root))
        factor = 2 * (self._pair_rat(root, tuple(vec)) - k) / norm2
        return [vec[i] - factor * Q(root[i]) for i in range(self.datum.rank)]

    def _least_equivalent(self, w: WeylElement, y) -> WeylElement:
        """Minimize (fin, trans) over w * Stab(y); y is a real chamber point."""
        refls = []
        for root in self.datum.positive_roots:
            val = self._pair_rat(root, tuple(c.coeffs[0] for c in y))
            for k in (Q(0), Q(1)):
                if val == k:
                    refls.append(
                        reflection(self.datum, self.n, root, LinLex.real(self.n, k))
                    )
        stab = {identity(self.datum, self.n).key(): identity(self.datum, self.n)}
        frontier = list(stab.values())
        while frontier:
            nxt = []
            for g in frontier:
                for r in refls:
                    h = compose(g, r)
                    if h.key() not in stab:
                        stab[h.key()] = h
                        nxt.append(h)
            frontier = nxt
            if len(stab) > 128:  # vertex stabilizers in rank <= 2 are far smaller
                raise RuntimeError("stabilizer closure overflow")
        best = min((compose(w, g) for g in stab.values()), key=lambda e: e.key())
        return best

    # -- metric --------------------------------------------------------

    def dist2(self, p: Point, q: Point) -> LexPoly:
        d = p - q
        return inner(self.datum, d.coords, d.coords)

    def dist(self, p: Point, q: Point) -> SqrtExpr:
        return SqrtExpr(self.dist2(p, q))

    def dist_level(self, p: Point, q: Point) -> int:
        """Smallest i with d(p,q) in the i-level field."""
        return self.dist2(p, q).level()

    def parallelogram_check(self, x: Point, y: Point, z: Point, t) -> bool:
        """d2(p_t,z) = (1-t) d2(x,z) + t d2(y,z) - t(1-t) d2(x,y), exactly."""
        t = Q(t)
        pt = x.scale(1 - t) + y.scale(t)
        lhs = self.dist2(pt, z)
        rhs = (
            self.dist2(x, z).scale(1 - t)
            + self.dist2(y, z).scale(t)
            - self.dist2(x, y).scale(t * (1 - t))
        )
        return lhs == rhs

    def unique_from_distances(self, basis: list[Point], p: Point, q: Point) -> bool:
        """If all basis distances agree, p and q must coincide."""
        if len(basis) != self.datum.rank + 1:
            raise DegenerateBasis(
                f"need {self.datum.rank + 1} affinely independent points"
            )
        diffs = [b - basis[0] for b in basis[1:]]
        if self._affine_det(diffs).is_zero():
            raise DegenerateBasis("basis points are affinely dependent")
        same = all(self.dist2(b, p) == self.dist2(b, q) for b in basis)
        if not same:
            return True
        return p == q

    def _affine_det(self, diffs: list[Point]) -> LexPoly:
        if self.datum.rank == 1:
            return diffs[0].coords[0].as_lexpoly()
        a = diffs[0].coords[0].as_lexpoly()
        b = diffs[1].coords[0].as_lexpoly()
        c = diffs[0].coords[1].as_lexpoly()
        d = diffs[1].coords[1].as_lexpoly()
        return a * d - b * c

    # -- retraction ----------------------------------------------------

    def retract_tau(self, chamber: WeylElement, p: Point) -> Point:
        """Retraction of the apartment onto the closed chamber uC0."""
        w = self.locate(p)
        y = Point(act(inverse(w), p.coords))
        return Point(act(chamber, y.coords))

    # -- enclosure -----------------------------------------------------

    def enclosure_contains(self, omega: list[Point], z: Point) -> bool:
        """z in cl(omega): no wall separates z from omega (and z in Sigma)."""
        if not omega:
            raise EmptyOmega("enclosure of the empty set")
        for w in omega:
            if not self.contains(w):
                raise NotInApartment("omega must lie in the apartment")
        if not self.contains(z):
            return False
        for root in self.datum.roots:
            vals = [pair_root(self.datum, root, w.coords) for w in omega]
            lo = vals[0]
            for v in vals[1:]:
                if v < lo:
                    lo = v
            k0 = -lo
            k1 = -pair_root(self.datum, root, z.coords)
            if lattice_in_interval(k0, k1, include_lo=True, include_hi=False):
                return False
        return True

    def cl_fix_check(
        self, g: WeylElement, omega: list[Point], samples: int, seed: int = 0
    ) -> tuple[bool, Point | None]:
        """Sample cl(omega) and verify g fixes it pointwise.

        Returns (True, None) or (False, witness).  Precondition: g fixes
        omega pointwise (exactly), else PreconditionViolated.
        """
        if not omega:
            raise EmptyOmega("enclosure of the empty set")
        for w in omega:
            if Point(act(g, w.coords)) != w:
                raise PreconditionViolated("g moves a point of omega")
        checked = 0
        for z in self._enclosure_candidates(omega, samples, seed):
            if not self.enclosure_contains(omega, z):
                continue
            if Point(act(g, z.coords)) != z:
                return False, z
            checked += 1
            if checked >= samples:
                break
        return True, None

    def _enclosure_candidates(self, omega: list[Point], samples: int, seed: int):
        for w in omega:
            yield w
        weights = [Q(1, 4), Q(1, 3), Q(1, 2), Q(2, 3), Q(3, 4)]
        for p, q in combinations(omega, 2):
            for t in weights:
                yield p.scale(1 - t) + q.scale(t)
        rng = random.Random(seed)
        base = omega[0]
        for _ in range(samples * 4):
            t = Q(rng.randint(0, 8), 8)
            p = rng.choice(omega)
            q = rng.choice(omega)
            mid = p.scale(1 - t) + q.scale(t)
            jitter = self._random_real_vector(rng)
            yield mid + jitter

    def _random_real_vector(self, rng) -> Point:
        return Point(
            tuple(
                LinLex.real(self.n, Q(rng.randint(-4, 4), rng.choice([1, 2, 3, 4])))
                for _ in range(self.datum.rank)
            )
        )

    # -- sectors ---------------------------------------------------------

    def direction_contains(self, level: int, d: Point) -> bool:
        """d in the canonical dominant fundamental domain D_level."""
        if not self.contains(d):
            return False
        if level == 0:
            if any(
                any(c != 0 for c in d.level_component(j))
                for j in range(2, self.n + 1)
            ):
                return False
            vec = d.level_component(1)
            return all(
                Q(0) <= self._pair_rat(r, vec) <= Q(1)
                for r in self.datum.positive_roots
            )
        for j in range(level + 1, self.n + 1):
            if any(c != 0 for c in d.level_component(j)):
                return False
        return all(
            pair_root(self.datum, r, d.coords).sign() >= 0
            for r in self.datum.positive_roots
        )

    def sector_contains(self, s: Sector, p: Point) -> bool:
        return self.direction_contains(s.level, p - s.apex)

    def sector_intersect(self, s1: Sector, s2: Sector) -> Sector:
        """Intersection of two same-level canonical-direction sectors.

        The apex of the result is the coordinate-wise dominant-order join
        of the apices in root-pairing coordinates.  Raises Disjoint when
        the intersection is empty and NotASector when the join leaves the
        apartment (the intersection is then not a translate of D_level).
        """
        if s1.level != s2.level:
            raise InvalidConfiguration("sector levels differ")
        if s1.level == 0:
            if s1.apex == s2.apex:
                return s1
            raise InvalidConfiguration(
                "chamber (level-0) intersection is not a sector operation"
            )
        level = s1.level
        for j in range(level + 1, self.n + 1):
            if s1.apex.level_component(j) != s2.apex.level_component(j):
                raise Disjoint("sectors live in different higher components")
        mu = []
        for root in self.datum.simple_roots:
            v1 = pair_root(self.datum, root, s1.apex.coords)
            v2 = pair_root(self.datum, root, s2.apex.coords)
            mu.append(v1 if v1 >= v2 else v2)
        apex = self._solve_pairing(mu)
        if not self.contains(apex):
            raise NotASector(
                "join of apices leaves the apartment; the intersection is "
                "not a canonical-direction sector"
            )
        d2l = self.dist2(s1.apex, s2.apex).level()
        assert d2l <= level, "apex distance must live at the sector level"
        return Sector(apex, level)

    def _solve_pairing(self, mu: list[LinLex]) -> Point:
        """The point z with (simple_i, z) = mu_i (Gram system solve)."""
        g = self.datum.gram
        if self.datum.rank == 1:
            return Point((mu[0].scale(1 / g[0][0]),))
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        z0 = mu[0].scale(g[1][1] / det) + mu[1].scale(-g[0][1] / det)
        z1 = mu[0].scale(-g[1][0] / det) + mu[1].scale(g[0][0] / det)
        return Point((z0, z1))

    # -- residue partition ----------------------------------------------

    def residue_point_filter(self, p: Point, q: Point) -> bool:
        """d(p,q) in the (n-1)-level field: dist2 is free of omega_n."""
        return self.dist2(p, q).level() <= self.n - 1

    # -- circumcenters ----------------------------------------------------

    def _common_high_part(self, points: list[Point]) -> Point:
        for p, q in combinations(points, 2):
            if self.dist2(p, q).level() > 1:
                raise MixedLevels("points span more than one real component")
        base = points[0]
        return Point(
            tuple(LinLex(self.n, [Q(0)] + list(c.coeffs[1:])) for c in base.coords)
        )

    def circumradius2(self, c: Point, points: list[Point]) -> LexPoly:
        """max over points of dist2(c, .), exact."""
        if not points:
            raise EmptyOmega("circumradius of the empty set")
        best = self.dist2(c, points[0])
        for p in points[1:]:
            d = self.dist2(c, p)
            if d > best:
                best = d
        return best

    def circumcenter(self, points: list[Point]) -> tuple[Point, Q]:
        """Exact minimum enclosing ball center within one real component."""
        if not points:
            raise EmptyOmega("circumcenter of the empty set")
        high = self._common_high_part(points)
        reals = [p.level_component(1) for p in points]
        best: tuple[Q, tuple[Q, ...]] | None = None
        for center, r2 in self._meb_candidates(reals):
            if all(self._dist2_rat(center, v) <= r2 for v in reals):
                if best is None or r2 < best[0]:
                    best = (r2, center)
        assert best is not None
        r2, center = best
        pt = Point(
            tuple(LinLex.real(self.n, c) for c in center)
        )
        return pt + high, r2

    def _meb_candidates(self, reals):
        for v in reals:
            yield v, Q(0)
        for p, q in combinations(reals, 2):
            mid = tuple((a + b) / 2 for a, b in zip(p, q))
            yield mid, self._dist2_rat(mid, p)
        if self.datum.rank >= 2:
            for p, q, r in combinations(reals, 3):
                c = self._circumcenter3(p, q, r)
                if c is not None:
                    yield c, self._dist2_rat(c, p)

    def _dist2_rat(self, u, v) -> Q:
        d = tuple(a - b for a, b in zip(u, v))
        return self._pair_rat_vec(d, d)

    def _pair_rat_vec(self, u, v) -> Q:
        g = self.datum.gram
        return sum(
            u[i] * g[i][j] * v[j]
            for i in range(self.datum.rank)
            for j in range(self.datum.rank)
        )

    def _circumcenter3(self, p, q, r):
        """Equidistant point of three planar points, None when collinear."""
        # (c,q-p) = (|q|^2-|p|^2)/2 and (c,r-p) = (|r|^2-|p|^2)/2 in Gram form.
        g = self.datum.gram
        rows = []
        for other in (q, r):
            d = tuple(a - b for a, b in zip(other, p))
            coeffs = [
                sum(d[i] * g[i][j] for i in range(self.datum.rank))
                for j in range(self.datum.rank)
            ]
            rhs = (self._pair_rat_vec(other, other) - self._pair_rat_vec(p, p)) / 2
            rows.append(coeffs + [rhs])
        det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        if det == 0:
            return None
        cx = (rows[0][2] * rows[1][1] - rows[0][1] * rows[1][2]) / det
        cy = (rows[0][0] * rows[1][2] - rows[0][2] * rows[1][0]) / det
        return (cx, cy)

    def circumcenter_verdict(self, points: list[Point], candidate: Point) -> dict:
        """Compare a candidate center against the exact minimum enclosing ball."""
        center, r2 = self.circumcenter(points)
        cand_r2 = self.circumradius2(candidate, points)
        min_r2 = LexPoly.const(self.n, r2)
        return {
            "center": center,
            "radius2": r2,
            "candidate_radius2": cand_r2,
            "is_circumcenter": cand_r2 == min_r2,
        }

    def circumcenter_contradiction(
        self, points: list[Point], c1: Point, c2: Point
    ) -> dict:
        """CAT(0) midpoint witness that two distinct minimal centers cannot coexist.

        With t = 1/2 the parallelogram identity gives
        r2(mid) <= r2 - t(1-t) d2(c1,c2), so d2 > 0 forces a strictly
        better center; the returned inequality t(1-t) d2 <= 0 must fail.
        """
        r2_1 = self.circumradius2(c1, points)
        r2_2 = self.circumradius2(c2, points)
        r2 = r2_1 if r2_1 >= r2_2 else r2_2
        mid = c1.scale(Q(1, 2)) + c2.scale(Q(1, 2))
        r2_mid = self.circumradius2(mid, points)
        d2 = self.dist2(c1, c2)
        quarter_d2 = d2.scale(Q(1, 4))
        return {
            "midpoint": mid,
            "radius2_midpoint": r2_mid,
            "radius2_claimed": r2,
            "d2": d2,
            "midpoint_improves": r2_mid <= r2 - quarter_d2,
            "forced_nonpositive_holds": quarter_d2 <= LexPoly.zero(self.n),
            "contradiction": (d2.sign() > 0) and (r2_mid <= r2 - quarter_d2),
        }

    # -- sampling helpers ------------------------------------------------

    def random_point(
        self, rng: random.Random, span: int = 3, denominators=(1, 2, 3, 4)
    ) -> Point:
        """Random apartment member: lattice high parts, rational real part."""
        rank = self.datum.rank
        rows = [[Q(0)] * self.n for _ in range(rank)]
        for i in range(rank):
            rows[i][0] = Q(rng.randint(-4 * span, 4 * span), rng.choice(denominators))
        for j in range(2, self.n + 1):
            coeffs = [rng.randint(-span, span) for _ in range(rank)]
            vec = [Q(0)] * rank
            for idx, s in enumerate(self.datum.simple_roots):
                co = self.datum.coroot(s)
                for k in range(rank):
                    vec[k] += coeffs[idx] * co[k]
            for k in range(rank):
                rows[k][j - 1] = vec[k]
        return Point(tuple(LinLex(self.n, row) for row in rows))
