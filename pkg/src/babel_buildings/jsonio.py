"""JSON wire formats for points, polynomials, series and matrices.

Rationals are integers when integral, "p/q" strings otherwise; LinLex
vectors are arrays ordered omega_n first; LexPoly is a canonical list of
{"exps": [e_n,...,e_2], "num": .., "den": ..} sorted descending; field
elements are {"q", "prec": [P2, P1], "terms": [{"j", "i", "c"}, ...]}.
"""

from __future__ import annotations

from fractions import Fraction

from .apartment import Point
from .errors import InputError
from .lexring import LexPoly, LinLex, Q
from .localfield import LS2
from .sl2 import SL2


def rational_to_json(x: Q):
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def rational_from_json(v) -> Q:
    if isinstance(v, bool):
        raise InputError(f"not a rational: {v!r}")
    if isinstance(v, int):
        return Q(v)
    if isinstance(v, str):
        try:
            return Q(v)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad rational {v!r}: {e}") from None
    if isinstance(v, list) and len(v) == 2:
        return Q(int(v[0]), int(v[1]))
    if isinstance(v, float) and v.is_integer():
        return Q(int(v))
    raise InputError(f"not a rational: {v!r}")


def linlex_to_json(v: LinLex) -> list:
    return [rational_to_json(c) for c in v.descending()]


def linlex_from_json(data, n: int) -> LinLex:
    if not isinstance(data, list) or len(data) != n:
        raise InputError(f"LinLex needs {n} coefficients ordered omega_{n} first")
    return LinLex(n, [rational_from_json(c) for c in reversed(data)])


def lexpoly_to_json(p: LexPoly) -> list:
    return [
        {"exps": list(mono), "num": c.numerator, "den": c.denominator}
        for mono, c in p.sorted_terms()
    ]


def lexpoly_from_json(data, n: int) -> LexPoly:
    if not isinstance(data, list):
        raise InputError("LexPoly must be a list of terms")
    terms = {}
    for item in data:
        try:
            mono = tuple(int(e) for e in item["exps"])
            coeff = Q(int(item["num"]), int(item.get("den", 1)))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad LexPoly term {item!r}: {e}") from None
        terms[mono] = terms.get(mono, Q(0)) + coeff
    return LexPoly(n, terms)


def point_to_json(p: Point) -> list:
    return [linlex_to_json(c) for c in p.coords]


def point_from_json(data, n: int, rank: int) -> Point:
    if not isinstance(data, list) or len(data) != rank:
        raise InputError(f"point needs {rank} coordinates")
    return Point(tuple(linlex_from_json(c, n) for c in data))


def series_to_json(x: LS2) -> dict:
    terms = []
    prec1 = None
    for j, s in sorted(x.levels.items()):
        for e, c in sorted(s.terms.items()):
            terms.append({"j": j, "i": e, "c": c})
        if s.prec is not None:
            prec1 = s.prec if prec1 is None else min(prec1, s.prec)
    return {
        "q": x.q,
        "prec": [x.prec, prec1],
        "terms": terms,
    }


def series_from_json(data) -> LS2:
    if not isinstance(data, dict) or "terms" not in data:
        raise InputError("series must be {'q', 'prec', 'terms'}")
    q = int(data.get("q", 5))
    prec = data.get("prec", [None, None])
    if not isinstance(prec, list) or len(prec) != 2:
        raise InputError("prec must be [P2, P1]")
    p2 = None if prec[0] is None else int(prec[0])
    p1 = None if prec[1] is None else int(prec[1])
    terms = []
    for item in data["terms"]:
        try:
            terms.append((int(item["j"]), int(item["i"]), int(item["c"])))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"bad series term {item!r}: {e}") from None
    return LS2.from_terms(q, terms, p2, p1)


def matrix_to_json(g: SL2) -> dict:
    return {
        "q": g.q,
        "entries": [series_to_json(e) for e in g.entries()],
    }


def matrix_from_json(data) -> SL2:
    if not isinstance(data, dict) or "entries" not in data:
        raise InputError("matrix must be {'q', 'entries': [a, b, c, d]}")
    entries = data["entries"]
    if not isinstance(entries, list) or len(entries) != 4:
        raise InputError("matrix needs exactly 4 entries")
    q = data.get("q")
    es = []
    for e in entries:
        if isinstance(e, dict) and "q" not in e and q is not None:
            e = {**e, "q": q}
        es.append(series_from_json(e))
    return SL2(*es)


def weyl_to_json(w) -> dict:
    return {
        "fin": [list(row) for row in w.fin],
        "trans": [linlex_to_json(t) for t in w.trans],
    }
