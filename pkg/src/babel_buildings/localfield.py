"""Exact truncated arithmetic in F = F_q((t1))((t2)) with rank-2 valuation.

An LS1 is a sparse Laurent series in t1 over F_q known modulo t1^prec
(prec None means exact).  An LS2 maps t2-exponents to LS1 levels and is
known modulo t2^prec.  Stored slots are exact; everything at or beyond a
precision bound is unknown.  Precision flows through every operation with
standard valuation-shifted bookkeeping, and any comparison that the
tracked precision cannot decide raises PrecisionExhausted rather than
guessing.

Valuations are pairs (j, i) = j*omega_2 + i*omega_1 ordered
lexicographically, so v(t1) = (0,1) and v(t2) = (1,0).
"""

from __future__ import annotations

import math
import random
from typing import Iterable, NamedTuple

from .errors import NotInScrOF, PrecisionExhausted, ZeroToPrecision
from .lexring import LinLex, Q

DEFAULT_PREC1 = 12
DEFAULT_PREC2 = 6


class Val2(NamedTuple):
    """Rank-2 valuation (t2-order, t1-order), lex ordered."""

    j: int
    i: int

    def as_linlex(self, n: int = 2) -> LinLex:
        return LinLex(n, [self.i, self.j])

    def __neg__(self) -> "Val2":
        return Val2(-self.j, -self.i)

    def add(self, other: "Val2") -> "Val2":
        return Val2(self.j + other.j, self.i + other.i)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def _check_q(q: int) -> int:
    if not _is_prime(q):
        raise ValueError(f"q = {q} must be prime")
    return q


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class LS1:
    """Sparse truncated Laurent series over F_q in one variable."""

    __slots__ = ("q", "terms", "prec")

    def __init__(self, q: int, terms=None, prec: int | None = None):
        self.q = q
        clean: dict[int, int] = {}
        if terms:
            for e, c in dict(terms).items():
                c = c % q
                if c and (prec is None or e < prec):
                    clean[int(e)] = c
        self.terms = clean
        self.prec = prec

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, q: int) -> "LS1":
        return cls(q)

    @classmethod
    def one(cls, q: int) -> "LS1":
        return cls(q, {0: 1})

    @classmethod
    def monomial(cls, q: int, e: int, c: int = 1) -> "LS1":
        return cls(q, {e: c})

    # -- structure ------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return not self.terms and self.prec is None

    def is_zero_to_prec(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Exact t1-order; always decidable when terms exist."""
        if not self.terms:
            raise ZeroToPrecision("t1-order of a (possibly) zero series")
        return min(self.terms)

    def order_bound(self) -> int | float:
        """A sound lower bound on the true t1-order."""
        lo: int | float = math.inf
        if self.terms:
            lo = min(self.terms)
        if self.prec is not None:
            lo = min(lo, self.prec)
        return lo

    def leading(self) -> tuple[int, int]:
        e = self.order()
        return e, self.terms[e]

    def truncate(self, prec: int | None) -> "LS1":
        p = _min_prec(self.prec, prec)
        return LS1(self.q, self.terms, p)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "LS1") -> "LS1":
        assert self.q == other.q
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = (out.get(e, 0) + c) % self.q
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LS1(self.q, out, _min_prec(self.prec, other.prec))

    def __neg__(self) -> "LS1":
        return LS1(self.q, {e: self.q - c for e, c in self.terms.items()}, self.prec)

    def __sub__(self, other: "LS1") -> "LS1":
        return self + (-other)

    def __mul__(self, other: "LS1") -> "LS1":
        assert self.q == other.q
        if self.is_exact_zero() or other.is_exact_zero():
            return LS1.zero(self.q)
        prec = None
        if self.prec is not None:
            prec = _min_prec(prec, self.prec + _int_or(other.order_bound()))
        if other.prec is not None:
            prec = _min_prec(prec, other.prec + _int_or(self.order_bound()))
        out: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if prec is not None and e >= prec:
                    continue
                s = (out.get(e, 0) + c1 * c2) % self.q
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return LS1(self.q, out, prec)

    def scale(self, c: int) -> "LS1":
        c %= self.q
        if c == 0:
            return LS1(self.q, {}, self.prec)
        return LS1(self.q, {e: (v * c) % self.q for e, v in self.terms.items()}, self.prec)

    def shift(self, k: int) -> "LS1":
        return LS1(
            self.q,
            {e + k: c for e, c in self.terms.items()},
            None if self.prec is None else self.prec + k,
        )

    def inverse(self, rel_prec: int | None = None) -> "LS1":
        """Multiplicative inverse via leading-monomial factor and geometric series.

        For exact inputs that are not monomials the result is truncated at
        ``rel_prec`` significant exponents (default DEFAULT_PREC1).
        """
        if self.is_zero_to_prec():
            if self.is_exact_zero():
                raise ZeroDivisionError("inverse of zero")
            raise PrecisionExhausted("divisor is zero to its precision")
        i0, c0 = self.leading()
        c0inv = pow(c0, -1, self.q)
        rest = LS1(
            self.q,
            {e - i0: (v * c0inv) % self.q for e, v in self.terms.items() if e != i0},
            None if self.prec is None else self.prec - i0,
        )
        if rest.is_exact_zero():
            return LS1.monomial(self.q, -i0, c0inv).truncate(
                None if self.prec is None else self.prec - 2 * i0
            )
        if self.prec is not None:
            rel = self.prec - i0
        else:
            rel = rel_prec if rel_prec is not None else DEFAULT_PREC1
        # 1/(1+rest) = sum (-rest)^k, truncated at relative precision rel.
        acc = LS1.one(self.q).truncate(rel)
        term = LS1.one(self.q).truncate(rel)
        neg = (-rest).truncate(rel)
        vr = max(1, _int_or(neg.order_bound(), 1))
        for _ in range(0, max(1, (rel + vr - 1) // vr)):
            term = (term * neg).truncate(rel)
            if term.is_zero_to_prec() and not term.terms:
                break
            acc = acc + term
        out = acc.shift(-i0).scale(c0inv)
        return out.truncate(None if self.prec is None else self.prec - 2 * i0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LS1):
            return NotImplemented
        return self.q == other.q and self.terms == other.terms and self.prec == other.prec

    def __hash__(self):
        return hash((self.q, frozenset(self.terms.items()), self.prec))

    def __repr__(self) -> str:
        bits = [f"{c}*t1^{e}" for e, c in sorted(self.terms.items())] or ["0"]
        tail = f" + O(t1^{self.prec})" if self.prec is not None else ""
        return " + ".join(bits) + tail


def _int_or(x, default: int = 0) -> int:
    return default if x is math.inf else int(x)


class LS2:
    """Truncated element of F_q((t1))((t2)): t2-levels of LS1 series."""

    __slots__ = ("q", "levels", "prec")

    def __init__(self, q: int, levels=None, prec: int | None = None):
        self.q = _check_q(q)
        clean: dict[int, LS1] = {}
        if levels:
            for j, s in dict(levels).items():
                j = int(j)
                if prec is not None and j >= prec:
                    continue
                if s.is_exact_zero():
                    continue
                clean[j] = s
        self.levels = clean
        self.prec = prec

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, q: int) -> "LS2":
        return cls(q)

    @classmethod
    def one(cls, q: int) -> "LS2":
        return cls(q, {0: LS1.one(q)})

    @classmethod
    def t1(cls, q: int, k: int = 1) -> "LS2":
        return cls(q, {0: LS1.monomial(q, k)})

    @classmethod
    def t2(cls, q: int, k: int = 1) -> "LS2":
        return cls(q, {k: LS1.one(q)})

    @classmethod
    def monomial(cls, q: int, j: int, i: int, c: int = 1) -> "LS2":
        return cls(q, {j: LS1.monomial(q, i, c)})

    @classmethod
    def from_terms(
        cls,
        q: int,
        terms: Iterable[tuple[int, int, int]],
        prec2: int | None = DEFAULT_PREC2,
        prec1: int | None = DEFAULT_PREC1,
    ) -> "LS2":
        levels: dict[int, LS1] = {}
        for j, i, c in terms:
            levels.setdefault(j, LS1(q, {}, prec1))
            levels[j] = levels[j] + LS1(q, {i: c}, prec1)
        if prec1 is not None:
            for j in list(levels):
                levels[j] = levels[j].truncate(prec1)
        return cls(q, levels, prec2)

    @classmethod
    def constant(cls, q: int, c: int) -> "LS2":
        c %= q
        return cls(q, {0: LS1(q, {0: c})} if c else {})

    # -- structure ------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return not self.levels and self.prec is None

    def is_zero_to_prec(self) -> bool:
        return all(s.is_zero_to_prec() for s in self.levels.values())

    def _leading_level(self, strict: bool = True) -> int:
        """Least stored level with definite terms.

        In strict mode a zero-to-precision level below the leading one makes
        the valuation undecidable (lex order weights the t2-level first); in
        canonical mode such levels are read as the stored zero.
        """
        definite = [j for j, s in self.levels.items() if s.terms]
        if not definite:
            if self.is_exact_zero():
                raise ZeroToPrecision("valuation of exact zero is infinite")
            raise PrecisionExhausted("element is zero to its precision")
        j0 = min(definite)
        if strict:
            for j, s in self.levels.items():
                if j < j0 and s.is_zero_to_prec():
                    raise PrecisionExhausted(
                        f"level {j} is undetermined below the leading level {j0}"
                    )
        return j0

    def valuation(self, strict: bool = True) -> Val2:
        j0 = self._leading_level(strict)
        s = self.levels[j0]
        return Val2(j0, s.order())

    def val_bounds(self) -> list[tuple]:
        """Sound lower bounds (j, i) on every possible content position.

        Stored terms give exact positions; level uncertainties give
        (j, prec1_j); the t2-tail gives (prec, -inf).
        """
        out = []
        for j, s in self.levels.items():
            if s.terms:
                out.append((j, min(s.terms)))
            if s.prec is not None:
                out.append((j, s.prec))
        if self.prec is not None:
            out.append((self.prec, -math.inf))
        return out

    def truncate(self, prec2: int | None = None, prec1: int | None = None) -> "LS2":
        p2 = _min_prec(self.prec, prec2)
        levels = {
            j: (s.truncate(prec1) if prec1 is not None else s)
            for j, s in self.levels.items()
        }
        return LS2(self.q, levels, p2)

    def canonical(self) -> "LS2":
        """The stored representative: levels cancelled within precision read as zero."""
        if self.is_zero_to_prec() and self.levels:
            return LS2.zero(self.q) if self.prec is None else LS2(self.q, {}, self.prec)
        return LS2(self.q, {j: s for j, s in self.levels.items() if s.terms}, self.prec)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "LS2") -> "LS2":
        assert self.q == other.q
        prec = _min_prec(self.prec, other.prec)
        out = dict(self.levels)
        for j, s in other.levels.items():
            out[j] = out[j] + s if j in out else s
        return LS2(self.q, out, prec)

    def __neg__(self) -> "LS2":
        return LS2(self.q, {j: -s for j, s in self.levels.items()}, self.prec)

    def __sub__(self, other: "LS2") -> "LS2":
        return self + (-other)

    def _t2_order_bound(self) -> int | float:
        lo: int | float = math.inf
        if self.levels:
            lo = min(self.levels)
        if self.prec is not None:
            lo = min(lo, self.prec)
        return lo

    def __mul__(self, other: "LS2") -> "LS2":
        assert self.q == other.q
        if self.is_exact_zero() or other.is_exact_zero():
            return LS2.zero(self.q)
        prec = None
        if self.prec is not None:
            prec = _min_prec(prec, self.prec + _int_or(other._t2_order_bound()))
        if other.prec is not None:
            prec = _min_prec(prec, other.prec + _int_or(self._t2_order_bound()))
        out: dict[int, LS1] = {}
        for j1, s1 in self.levels.items():
            for j2, s2 in other.levels.items():
                j = j1 + j2
                if prec is not None and j >= prec:
                    continue
                prod = s1 * s2
                out[j] = out[j] + prod if j in out else prod
        return LS2(self.q, out, prec)

    def scale(self, c: int) -> "LS2":
        return LS2(self.q, {j: s.scale(c) for j, s in self.levels.items()}, self.prec)

    def shift(self, j: int = 0, i: int = 0) -> "LS2":
        levels = {jj + j: (s.shift(i) if i else s) for jj, s in self.levels.items()}
        return LS2(self.q, levels, None if self.prec is None else self.prec + j)

    def inverse(
        self, rel_prec2: int | None = None, rel_prec1: int | None = None
    ) -> "LS2":
        """Inverse via leading-level factor and a t2-adic geometric series.

        Operates on the canonical representative: zero-to-precision levels
        below the lead are read as zero (the result is exact for the stored
        data and sound modulo the tracked precision).
        """
        j0 = self._leading_level(strict=False)
        x0 = self.levels[j0]
        x0inv = x0.inverse(rel_prec1)
        if self.prec is not None:
            rel = self.prec - j0
        else:
            rel = rel_prec2 if rel_prec2 is not None else DEFAULT_PREC2
        higher = {j - j0: s for j, s in self.levels.items() if j > j0}
        if not higher and self.prec is None:
            return LS2(self.q, {-j0: x0inv})
        eps = LS2(self.q, {j: s * x0inv for j, s in higher.items()}, rel)
        acc = LS2.one(self.q).truncate(rel)
        term = LS2.one(self.q).truncate(rel)
        for _ in range(rel):
            term = (term * (-eps)).truncate(rel)
            if not term.levels:
                break
            acc = acc + term
        out = acc * LS2(self.q, {-j0: x0inv})
        return out.truncate(None if self.prec is None else self.prec - 2 * j0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LS2):
            return NotImplemented
        return (
            self.q == other.q and self.levels == other.levels and self.prec == other.prec
        )

    def __hash__(self):
        return hash((self.q, frozenset(self.levels.items()), self.prec))

    def __repr__(self) -> str:
        bits = [f"t2^{j}*({s!r})" for j, s in sorted(self.levels.items())] or ["0"]
        tail = f" + O(t2^{self.prec})" if self.prec is not None else ""
        return " + ".join(bits) + tail


def divide(x: LS2, y: LS2) -> LS2:
    return x * y.inverse()


def equal_to_precision(x: LS2, y: LS2) -> bool:
    """x - y indistinguishable from zero at the joint precision."""
    return (x - y).is_zero_to_prec()


# -- ring membership and residue -----------------------------------------


def ring_membership(x: LS2) -> dict[str, bool]:
    """Flags {in_OF, in_ScrOF}: v >= 0 lex, and t2-order >= 0."""
    if x.is_exact_zero():
        return {"in_OF": True, "in_ScrOF": True}
    stored = [(j, min(s.terms)) for j, s in x.levels.items() if s.terms]
    bounds = x.val_bounds()
    zero = (0, 0)

    if any(pos < zero for pos in stored):
        in_of = False
    elif all(b >= zero for b in bounds):
        in_of = True
    else:
        raise PrecisionExhausted("membership in O_F undecidable at this precision")

    if any(j < 0 for j, _ in stored):
        in_scr = False
    elif all(b[0] >= 0 for b in bounds):
        in_scr = True
    else:
        raise PrecisionExhausted("membership in ScrO_F undecidable at this precision")
    return {"in_OF": in_of, "in_ScrOF": in_scr}


def is_unit_OF(x: LS2) -> bool:
    """Valuation exactly (0,0); PrecisionExhausted when unclear."""
    if x.is_exact_zero():
        return False
    stored = [(j, min(s.terms)) for j, s in x.levels.items() if s.terms]
    if not stored:
        raise PrecisionExhausted("unit test on a zero-to-precision element")
    lead = min(stored)
    if lead < (0, 0):
        return False
    uncertain = [b for b in x.val_bounds() if b not in stored]
    if any(b <= (0, 0) for b in uncertain):
        raise PrecisionExhausted("unit test undecidable at this precision")
    return lead == (0, 0)


def residue_to_F1(x: LS2) -> LS1:
    """Reduction modulo t2 (the j = 0 level); requires x in ScrO_F."""
    flags = ring_membership(x)
    if not flags["in_ScrOF"]:
        raise NotInScrOF("element has a pole in t2")
    if x.prec is not None and x.prec <= 0:
        raise PrecisionExhausted("level 0 is not covered by the t2-precision")
    return x.levels.get(0, LS1.zero(x.q))


def embed_F1(s: LS1, q: int | None = None, prec2: int | None = None) -> LS2:
    """View an LS1 as the t2-level-0 part of an LS2."""
    q = q or s.q
    if s.is_exact_zero():
        return LS2(q, {}, prec2)
    return LS2(q, {0: s}, prec2)


# -- deterministic sampling -------------------------------------------------


def random_series(
    rng: random.Random,
    q: int = 5,
    prec2: int = DEFAULT_PREC2,
    prec1: int = DEFAULT_PREC1,
    jrange: tuple[int, int] = (-2, 2),
    irange: tuple[int, int] = (-3, 3),
    terms: int = 3,
    unit: bool = False,
) -> LS2:
    """Seed-deterministic sparse series with valuation inside the window.

    Coefficients are uniform over F_q^x for the leading slot and uniform
    over F_q elsewhere; ``unit`` forces valuation (0,0).
    """
    if unit:
        j0, i0 = 0, 0
    else:
        j0 = rng.randint(*jrange)
        i0 = rng.randint(*irange)
    out = LS2.from_terms(q, [(j0, i0, rng.randint(1, q - 1))], prec2, prec1)
    for _ in range(terms - 1):
        dj = rng.randint(0, max(0, prec2 - 1 - j0))
        di = rng.randint(1, 4) if dj == 0 else rng.randint(-3, 3)
        c = rng.randint(0, q - 1)
        if c:
            out = out + LS2.from_terms(q, [(j0 + dj, i0 + di, c)], prec2, prec1)
    return out
