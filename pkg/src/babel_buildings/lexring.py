"""Exact arithmetic in the ordered ring Q[w_2,...,w_n].

The symbol w_i ("omega_i") is an i-level infinitely large unit: it exceeds
every polynomial in w_2,...,w_{i-1} with rational coefficients, and w_1 = 1.
A polynomial is compared by the sign of its leading coefficient, where
monomials are ordered lexicographically reading the exponent of the highest
variable first.  All coefficients are exact rationals, so every comparison
is decided exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import DimensionMismatch, NegativeRadicand

Q = Fraction

# A monomial is the exponent tuple (e_n, ..., e_2); the empty tuple (all
# exponents zero) is the rational/omega_1 part.  Plain tuple comparison is
# the magnitude order because w_j dominates every polynomial in lower w's.
Monomial = tuple[int, ...]


def _as_q(x) -> Q:
    if isinstance(x, Q):
        return x
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        return Q(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


class LexPoly:
    """Element of Q[w_2,...,w_n] with n fixed at construction.

    ``terms`` maps exponent tuples of length n-1 to nonzero rationals.
    Instances are immutable; all operations return new values.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Monomial, Q] | None = None):
        if n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "n", n)
        clean: dict[Monomial, Q] = {}
        if terms:
            for mono, coeff in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != n - 1:
                    raise DimensionMismatch(
                        f"monomial {mono} has {len(mono)} slots, expected {n - 1}"
                    )
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in monomial {mono}")
                c = _as_q(coeff)
                if c != 0:
                    clean[mono] = clean.get(mono, Q(0)) + c
                    if clean[mono] == 0:
                        del clean[mono]
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("LexPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, n: int, c) -> "LexPoly":
        c = _as_q(c)
        return cls(n, {(0,) * (n - 1): c} if c != 0 else {})

    @classmethod
    def omega(cls, n: int, i: int) -> "LexPoly":
        """The generator w_i (w_1 is the constant 1)."""
        if not 1 <= i <= n:
            raise ValueError(f"omega index {i} out of range 1..{n}")
        if i == 1:
            return cls.const(n, 1)
        mono = tuple(1 if n - slot == i else 0 for slot in range(n - 1))
        return cls(n, {mono: Q(1)})

    @classmethod
    def zero(cls, n: int) -> "LexPoly":
        return cls(n, {})

    # -- ring structure -----------------------------------------------

    def _check(self, other: "LexPoly") -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"mixed levels {self.n} and {other.n}")

    def __add__(self, other) -> "LexPoly":
        other = coerce(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, Q(0)) + c
            if s == 0:
                out.pop(mono, None)
            else:
                out[mono] = s
        return LexPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "LexPoly":
        return LexPoly(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "LexPoly":
        return self + (-coerce(self.n, other))

    def __rsub__(self, other) -> "LexPoly":
        return coerce(self.n, other) - self

    def __mul__(self, other) -> "LexPoly":
        other = coerce(self.n, other)
        self._check(other)
        out: dict[Monomial, Q] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, Q(0)) + c1 * c2
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return LexPoly(self.n, out)

    __rmul__ = __mul__

    def scale(self, c) -> "LexPoly":
        c = _as_q(c)
        if c == 0:
            return LexPoly.zero(self.n)
        return LexPoly(self.n, {m: c * v for m, v in self.terms.items()})

    # -- order --------------------------------------------------------

    def leading(self) -> tuple[Monomial, Q] | None:
        """Largest monomial and its coefficient, or None for zero."""
        if not self.terms:
            return None
        mono = max(self.terms)
        return mono, self.terms[mono]

    def sign(self) -> int:
        lead = self.leading()
        if lead is None:
            return 0
        return 1 if lead[1] > 0 else -1

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LexPoly.const(self.n, other)
        if not isinstance(other, LexPoly):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __lt__(self, other) -> bool:
        return (self - coerce(self.n, other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - coerce(self.n, other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - coerce(self.n, other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - coerce(self.n, other)).sign() >= 0

    def __abs__(self) -> "LexPoly":
        return -self if self.sign() < 0 else self

    # -- structure ----------------------------------------------------

    def level(self) -> int:
        """Largest j such that w_j occurs, or 1 for constants."""
        lvl = 1
        for mono in self.terms:
            for slot, e in enumerate(mono):
                if e > 0:
                    lvl = max(lvl, self.n - slot)
                    break
        return lvl

    def constant_part(self) -> Q:
        return self.terms.get((0,) * (self.n - 1), Q(0))

    def as_linlex(self) -> "LinLex | None":
        """Degree-<=1 polynomials viewed as sum(r_i w_i); None otherwise."""
        coeffs = [Q(0)] * self.n
        for mono, c in self.terms.items():
            deg = sum(mono)
            if deg == 0:
                coeffs[0] = c
            elif deg == 1:
                slot = next(s for s, e in enumerate(mono) if e == 1)
                coeffs[self.n - slot - 1] = c
            else:
                return None
        return LinLex(self.n, coeffs)

    def sorted_terms(self) -> list[tuple[Monomial, Q]]:
        """Terms sorted descending by monomial (canonical output order)."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for mono, c in self.sorted_terms():
            names = [
                f"w{self.n - slot}" + (f"^{e}" if e > 1 else "")
                for slot, e in enumerate(mono)
                if e > 0
            ]
            body = "*".join(names)
            bits.append(f"{c}" + (f"*{body}" if body else ""))
        return " + ".join(bits).replace("+ -", "- ")


def coerce(n: int, x) -> LexPoly:
    if isinstance(x, LexPoly):
        return x
    if isinstance(x, LinLex):
        return x.as_lexpoly()
    return LexPoly.const(n, x)


def lex_cmp(p: LexPoly, q: LexPoly | int | Q) -> int:
    """Sign of p - q: -1, 0 or +1."""
    return (p - coerce(p.n, q)).sign()


def level_of(p: LexPoly) -> int:
    return p.level()


class LinLex:
    """Element of the lattice span  Q w_1 + ... + Q w_n  (degree <= 1).

    Closed under addition and rational scaling, not under multiplication;
    coordinate i (0-based) is the coefficient of w_{i+1}.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable):
        cs = tuple(_as_q(c) for c in coeffs)
        if len(cs) != n:
            raise DimensionMismatch(f"expected {n} coefficients, got {len(cs)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("LinLex is immutable")

    @classmethod
    def zero(cls, n: int) -> "LinLex":
        return cls(n, [0] * n)

    @classmethod
    def omega(cls, n: int, i: int) -> "LinLex":
        if not 1 <= i <= n:
            raise ValueError(f"omega index {i} out of range 1..{n}")
        return cls(n, [1 if j == i - 1 else 0 for j in range(n)])

    @classmethod
    def real(cls, n: int, c) -> "LinLex":
        return cls(n, [c] + [0] * (n - 1))

    def _check(self, other: "LinLex") -> None:
        if self.n != other.n:
            raise DimensionMismatch(f"mixed levels {self.n} and {other.n}")

    def __add__(self, other: "LinLex") -> "LinLex":
        self._check(other)
        return LinLex(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "LinLex") -> "LinLex":
        self._check(other)
        return LinLex(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "LinLex":
        return LinLex(self.n, [-a for a in self.coeffs])

    def scale(self, c) -> "LinLex":
        c = _as_q(c)
        return LinLex(self.n, [c * a for a in self.coeffs])

    def sign(self) -> int:
        for c in reversed(self.coeffs):
            if c != 0:
                return 1 if c > 0 else -1
        return 0

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinLex):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs))

    def __lt__(self, other: "LinLex") -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: "LinLex") -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: "LinLex") -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: "LinLex") -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> "LinLex":
        return -self if self.sign() < 0 else self

    def level(self) -> int:
        for i in range(self.n, 0, -1):
            if self.coeffs[i - 1] != 0:
                return i
        return 1

    def as_lexpoly(self) -> LexPoly:
        n = self.n
        terms: dict[Monomial, Q] = {}
        if self.coeffs[0] != 0:
            terms[(0,) * (n - 1)] = self.coeffs[0]
        for i in range(2, n + 1):
            if self.coeffs[i - 1] != 0:
                mono = tuple(1 if n - slot == i else 0 for slot in range(n - 1))
                terms[mono] = self.coeffs[i - 1]
        return LexPoly(n, terms)

    def descending(self) -> tuple[Q, ...]:
        """Coefficients ordered w_n first (wire order)."""
        return tuple(reversed(self.coeffs))

    def __iter__(self) -> Iterator[Q]:
        return iter(self.coeffs)

    def __repr__(self) -> str:
        bits = [f"{c}*w{i + 1}" for i, c in enumerate(self.coeffs) if c != 0]
        return " + ".join(bits) if bits else "0"


def _q_sqrt(c: Q) -> Q | None:
    """Exact square root of a non-negative rational, or None."""
    if c < 0:
        return None
    rn = math.isqrt(c.numerator)
    rd = math.isqrt(c.denominator)
    if rn * rn == c.numerator and rd * rd == c.denominator:
        return Q(rn, rd)
    return None


class SqrtExpr:
    """Formal square root of a non-negative LexPoly.

    Only the comparison forms needed by metric checks are supported:
    radicand-vs-radicand order, and the three-way comparison
    sqrt(a) + sqrt(b) against sqrt(c) (see :func:`sqrt_sum_cmp`).
    """

    __slots__ = ("radicand",)

    def __init__(self, radicand: LexPoly):
        if radicand.sign() < 0:
            raise NegativeRadicand(f"radicand {radicand!r} is negative")
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("SqrtExpr is immutable")

    def cmp(self, other: "SqrtExpr") -> int:
        return lex_cmp(self.radicand, other.radicand)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SqrtExpr):
            return NotImplemented
        return self.radicand == other.radicand

    def __hash__(self) -> int:
        return hash(("sqrt", self.radicand))

    def __lt__(self, other: "SqrtExpr") -> bool:
        return self.cmp(other) < 0

    def __le__(self, other: "SqrtExpr") -> bool:
        return self.cmp(other) <= 0

    def is_zero(self) -> bool:
        return self.radicand.is_zero()

    def as_linlex(self) -> LinLex | None:
        """Normalize to the non-negative LinLex v with v^2 = radicand, if one exists.

        Writing v = sum r_i w_i, the radicand must match
        sum r_i^2 w_i^2 + 2 sum_{i<j} r_i r_j w_i w_j term by term.
        """
        n = self.radicand.n
        if self.radicand.is_zero():
            return LinLex.zero(n)
        mono_of = {i: LexPoly.omega(n, i).leading()[0] for i in range(2, n + 1)}
        # Leading level k: coefficient of w_k^2 (or the constant for k = 1).
        k = None
        for i in range(n, 1, -1):
            sq = tuple(2 * e for e in mono_of[i])
            if sq in self.radicand.terms:
                k = i
                break
        coeffs = [Q(0)] * n
        if k is None:
            c = self.radicand.constant_part()
            r = _q_sqrt(c)
            if r is None:
                return None
            coeffs[0] = r
        else:
            sq = tuple(2 * e for e in mono_of[k])
            r = _q_sqrt(self.radicand.terms[sq])
            if r is None:
                return None
            coeffs[k - 1] = r
            for i in range(1, k):
                if i == 1:
                    cross = mono_of[k]
                else:
                    cross = tuple(a + b for a, b in zip(mono_of[i], mono_of[k]))
                coeffs[i - 1] = self.radicand.terms.get(cross, Q(0)) / (2 * r)
        cand = LinLex(n, coeffs)
        if cand.sign() < 0:
            cand = -cand
        if cand.as_lexpoly() * cand.as_lexpoly() == self.radicand:
            return cand
        return None

    def __repr__(self) -> str:
        lin = self.as_linlex()
        if lin is not None:
            return repr(lin)
        return f"sqrt({self.radicand!r})"


def sqrt_sum_cmp(a: SqrtExpr, b: SqrtExpr, c: SqrtExpr) -> int:
    """Exact order of sqrt(A) + sqrt(B) against sqrt(C): -1, 0 or +1.

    Squaring preserves order on non-negatives, so the comparison reduces to
    the sign of D = C - A - B and, when D >= 0, of D^2 - 4AB.
    """
    A, B, C = a.radicand, b.radicand, c.radicand
    for r in (A, B, C):
        if r.sign() < 0:  # constructor enforces this; guard mutated inputs
            raise NegativeRadicand(f"radicand {r!r} is negative")
    D = C - A - B
    if D.sign() < 0:
        return 1
    disc = D * D - (A * B).scale(4)
    s = disc.sign()
    if s > 0:
        return -1
    if s < 0:
        return 1
    return 0
