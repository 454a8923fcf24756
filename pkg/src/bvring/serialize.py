"""Stable JSON forms for ring elements, tau vectors and matrices.

Rationals travel as strings (``"3/2"``, or ``"24"`` when integral), never as
floats. Output is compact and key order is fixed, so identical inputs give
byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Mapping, Sequence

from .combinat import PerfectMatching
from .tautoring import Monomial, RingElement, RingParams


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def rational(c) -> str:
    return str(Fraction(c))


def monomial_json(mono: Monomial) -> dict:
    return {
        "tau_pairs": [[i, j] for i, j in mono.tau],
        "l_factors": [[s, j] for j, s in mono.l],
        "o_indices": list(mono.o),
    }


def element_json(a: RingElement) -> dict:
    return {
        "n": a.params.n,
        "terms": [{"coef": rational(c), **monomial_json(mono)} for mono, c in a.items()],
    }


def element_from_json(doc: Mapping, p: RingParams) -> RingElement:
    if doc["n"] != p.n:
        raise ValueError(f"document is for n={doc['n']}, ring has n={p.n}")
    terms = {}
    for t in doc["terms"]:
        mono = Monomial.make(
            t["tau_pairs"],
            [(j, s) for s, j in t["l_factors"]],
            t["o_indices"],
        )
        terms[mono] = Fraction(t["coef"])
    return RingElement(p, terms)


def tau_vector_json(v: Mapping[PerfectMatching, Fraction], d: int) -> dict:
    """A tau vector written as an element of R(S^d)."""
    items = sorted(v.items())
    return {
        "n": d,
        "terms": [
            {"coef": rational(c), "tau_pairs": [list(p) for p in m.pairs], "l_factors": [], "o_indices": []}
            for m, c in items
        ],
    }


def matrix_json(rows: Sequence[Sequence]) -> list[list]:
    """Integral entries as JSON integers, anything else as a rational string."""
    out = []
    for row in rows:
        out.append([int(a) if Fraction(a).denominator == 1 else rational(a) for a in row])
    return out
