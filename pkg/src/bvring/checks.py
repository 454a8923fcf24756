"""Exhaustive relation and block-structure checks on small rings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .tautoring import (
    RingElement,
    RingParams,
    complement_dual,
    enumerate_monomials,
    gen_delta,
    gen_l,
    gen_o,
    gen_tau,
    mul,
    one,
    pair_monomials,
    scale,
    zero,
)


@dataclass
class CheckReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, label: str, got: RingElement, want: RingElement) -> None:
        self.checked += 1
        if got != want:
            self.failures.append(f"{label}: got {got!r}, expected {want!r}")

    def to_dict(self) -> dict:
        return {"check": self.name, "checked": self.checked, "failures": self.failures, "passed": self.passed}


def check_bv_relations(p: RingParams) -> CheckReport:
    """The local rewriting rules, for every ordered index pattern of the ring."""
    rep = CheckReport("bv-relations")
    idx = range(1, p.n + 1)
    labels = range(1, p.rho + 1)
    o, l, tau = (lambda i: gen_o(p, i)), (lambda s, i: gen_l(p, s, i)), (lambda i, j: gen_tau(p, i, j))
    for i in idx:
        rep.expect(f"o_{i}^2", mul(o(i), o(i)), zero(p))
        for s in labels:
            rep.expect(f"l^{s}_{i} o_{i}", mul(l(s, i), o(i)), zero(p))
            rep.expect(f"l^{s}_{i}^2", mul(l(s, i), l(s, i)), scale(p.degrees[s - 1], o(i)))
            for t in labels:
                if t != s:
                    rep.expect(f"l^{s}_{i} l^{t}_{i}", mul(l(s, i), l(t, i)), zero(p))
    for i, j in permutations(idx, 2):
        rep.expect(f"tau_{i}{j} o_{i}", mul(tau(i, j), o(i)), zero(p))
        for s in labels:
            rep.expect(f"tau_{i}{j} l^{s}_{i}", mul(tau(i, j), l(s, i)), zero(p))
        rep.expect(f"tau_{i}{j}^2", mul(tau(i, j), tau(i, j)), scale(p.x, mul(o(i), o(j))))
    for i, j, k in permutations(idx, 3):
        rep.expect(f"tau_{i}{j} tau_{i}{k}", mul(tau(i, j), tau(i, k)), mul(tau(j, k), o(i)))
    return rep


def check_delta_closure(p: RingParams) -> CheckReport:
    """The original diagonal relations; only expected to hold when x = 22 - rho."""
    rep = CheckReport("delta-closure")
    o, l, delta = (lambda i: gen_o(p, i)), (lambda s, i: gen_l(p, s, i)), (lambda i, j: gen_delta(p, i, j))
    idx = range(1, p.n + 1)
    for i, j in permutations(idx, 2):
        rep.expect(f"delta_{i}{j} o_{i}", mul(delta(i, j), o(i)), mul(o(i), o(j)))
        for s in range(1, p.rho + 1):
            rep.expect(
                f"delta_{i}{j} l^{s}_{i}",
                mul(delta(i, j), l(s, i)),
                mul(l(s, i), o(j)) + mul(o(i), l(s, j)),
            )
        rep.expect(f"delta_{i}{j}^2", mul(delta(i, j), delta(i, j)), scale(24, mul(o(i), o(j))))
    for i, j, k in permutations(idx, 3):
        rhs = (
            mul(delta(i, j), o(k)) + mul(delta(i, k), o(j)) + mul(delta(j, k), o(i))
            - mul(o(i), o(j)) - mul(o(i), o(k)) - mul(o(j), o(k))
        )
        rep.expect(f"delta_{i}{j} delta_{i}{k}", mul(delta(i, j), delta(i, k)), rhs)
    return rep


def _support_condition(a, b, n: int) -> bool:
    return a.I == b.I and a.J == b.J and a.l == b.l and b.K == frozenset(range(1, n + 1)) - (a.I | a.J | a.K)


def check_block_structure(p: RingParams) -> CheckReport:
    """A monomial pairs nontrivially only with its complement dual's block."""
    rep = CheckReport("block-structure")
    for m in range(0, 2 * p.n + 1):
        rows = enumerate_monomials(p, m)
        cols = enumerate_monomials(p, 2 * p.n - m)
        for a in rows:
            for b in cols:
                rep.checked += 1
                value = pair_monomials(p, a, b)
                if value != 0 and not _support_condition(a, b, p.n):
                    rep.failures.append(f"<{a}, {b}> = {value} outside the diagonal blocks")
            dual = complement_dual(a, p.n)
            want = p.x ** (len(a.I) // 2)
            for _, s in a.l:
                want *= p.degrees[s - 1]
            rep.checked += 1
            if pair_monomials(p, a, dual) != want:
                rep.failures.append(f"<{a}, {dual}> = {pair_monomials(p, a, dual)}, expected {want}")
    return rep


def unit_check(p: RingParams) -> bool:
    return all(
        mul(one(p), RingElement(p, {mono: Fraction(1)})) == RingElement(p, {mono: Fraction(1)})
        for m in range(2 * p.n + 1)
        for mono in enumerate_monomials(p, m)
    )
