"""The formal ring R(S^n) generated by point, divisor and diagonal classes.

Elements are finite rational combinations of square-free monomials
``tau_{I,alpha} * l_{J,beta} * o_K``. Multiplication concatenates factors and
rewrites them index by index until every index occurs at most once:

    o_i o_i = 0          l^s_i o_i = 0          l^s_i l^s_i = d_s o_i
    l^s_i l^t_i = 0 (s != t)
    tau_ij o_i = 0       tau_ij l^s_i = 0       tau_ij tau_ij = x o_i o_j
    tau_ij tau_ik = tau_jk o_i

``d_s`` is the self-intersection of the s-th divisor class and ``x`` plays the
role of the transcendental rank (22 - rho for an actual K3 surface).
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .combinat import enumerate_matchings

Rational = Union[int, Fraction]
Pair = tuple[int, int]


class ParameterMismatch(ValueError):
    pass


class NotHomogeneous(ValueError):
    pass


@dataclass(frozen=True)
class RingParams:
    """One ring instance: ``n`` factors, divisor self-intersections, and ``x``."""

    n: int
    degrees: tuple[Fraction, ...] = ()
    x: Fraction = Fraction(22)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        degrees = tuple(Fraction(d) for d in self.degrees)
        if any(d == 0 for d in degrees):
            raise ValueError("divisor self-intersections must be nonzero")
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "x", Fraction(self.x))

    @property
    def rho(self) -> int:
        return len(self.degrees)

    @classmethod
    def k3(cls, n: int, degrees: Sequence[Rational] = ()) -> "RingParams":
        """Parameters of an actual K3 surface: x = 22 - rho."""
        return cls(n, tuple(degrees), Fraction(22 - len(degrees)))

    def with_n(self, n: int) -> "RingParams":
        return RingParams(n, self.degrees, self.x)


@dataclass(frozen=True, order=True)
class Monomial:
    """Canonical square-free monomial.

    ``tau`` holds the pairs of alpha as sorted ``(i, j)`` with ``i < j``;
    ``l`` holds ``(j, s)`` for the factor ``l^s_j``, sorted by index;
    ``o`` holds K sorted. Field order doubles as the canonical ordering.
    """

    tau: tuple[Pair, ...] = ()
    l: tuple[Pair, ...] = ()
    o: tuple[int, ...] = ()

    @classmethod
    def make(
        cls,
        tau: Iterable[Sequence[int]] = (),
        l: Iterable[Sequence[int]] = (),
        o: Iterable[int] = (),
    ) -> "Monomial":
        tau_c = tuple(sorted((min(i, j), max(i, j)) for i, j in tau))
        l_c = tuple(sorted((j, s) for j, s in l))
        o_c = tuple(sorted(o))
        seen: list[int] = [i for p in tau_c for i in p]
        seen += [j for j, _ in l_c]
        seen += list(o_c)
        if len(seen) != len(set(seen)):
            raise ValueError("monomial indices must be pairwise distinct")
        if any(i < 1 for i in seen) or any(s < 1 for _, s in l_c):
            raise ValueError("indices and divisor labels start at 1")
        return cls(tau_c, l_c, o_c)

    @property
    def I(self) -> frozenset[int]:
        return frozenset(i for p in self.tau for i in p)

    @property
    def alpha(self) -> tuple[Pair, ...]:
        return self.tau

    @property
    def J(self) -> frozenset[int]:
        return frozenset(j for j, _ in self.l)

    @property
    def beta(self) -> dict[int, int]:
        return dict(self.l)

    @property
    def K(self) -> frozenset[int]:
        return frozenset(self.o)

    @property
    def support(self) -> frozenset[int]:
        return self.I | self.J | self.K

    @property
    def codegree(self) -> int:
        return 2 * len(self.tau) + len(self.l) + 2 * len(self.o)

    def max_index(self) -> int:
        return max(self.support, default=0)

    def relabel(self, g: Mapping[int, int]) -> "Monomial":
        return Monomial.make(
            ((g[i], g[j]) for i, j in self.tau),
            ((g[j], s) for j, s in self.l),
            (g[k] for k in self.o),
        )

    def __str__(self) -> str:
        return monomial_text(self)


ONE = Monomial()


def monomial_text(m: Monomial) -> str:
    """Human-readable form in the usual notation, e.g. ``τ_{1,2}·l^1_3·o_4``."""
    parts = [f"τ_{{{i},{j}}}" for i, j in m.tau]
    parts += [f"l^{s}_{j}" for j, s in m.l]
    parts += [f"o_{k}" for k in m.o]
    return "·".join(parts) if parts else "1"


def monomial_expr(m: Monomial) -> str:
    """Form accepted back by the expression parser, e.g. ``tau(1,2)*l(1,3)*o(4)``."""
    parts = [f"tau({i},{j})" for i, j in m.tau]
    parts += [f"l({s},{j})" for j, s in m.l]
    parts += [f"o({k})" for k in m.o]
    return "*".join(parts)


@dataclass(frozen=True, eq=False)
class RingElement:
    """Finite rational combination of canonical monomials. Treat as immutable."""

    params: RingParams
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            c = Fraction(c)
            if c != 0:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self):
        return hash((self.params, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in canonical monomial order."""
        return sorted(self.terms.items())

    def __add__(self, other):
        if isinstance(other, RingElement):
            return add(self, other)
        return NotImplemented

    def __neg__(self):
        return scale(-1, self)

    def __sub__(self, other):
        if isinstance(other, RingElement):
            return add(self, scale(-1, other))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(other, self)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are undefined")
        result = one(self.params)
        for _ in range(k):
            result = mul(result, self)
        return result

    def __repr__(self):
        return f"RingElement(n={self.params.n}, {element_text(self)})"


def element_text(a: RingElement) -> str:
    if not a.terms:
        return "0"
    out = []
    for mono, c in a.items():
        sign = "-" if c < 0 else "+"
        c = abs(c)
        body = monomial_text(mono)
        if c == 1:
            term = body
        elif mono == ONE:
            term = str(c)
        else:
            term = f"{c}·{body}"
        out.append((sign, term))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, term in out[1:]:
        text += f" {sign} {term}"
    return text


def element_expr(a: RingElement) -> str:
    """Canonical text that the expression parser reads back to ``a``."""
    if not a.terms:
        return "0"
    pieces = []
    for mono, c in a.items():
        body = monomial_expr(mono)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        pieces.append(("-" if c < 0 else "+", text))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def _check_index(p: RingParams, i: int) -> None:
    if not isinstance(i, int) or not 1 <= i <= p.n:
        raise IndexError(f"index {i} out of range 1..{p.n}")


def monomial_element(p: RingParams, mono: Monomial, coef: Rational = 1) -> RingElement:
    if mono.max_index() > p.n:
        raise IndexError(f"monomial uses an index beyond n={p.n}")
    if any(s > p.rho for _, s in mono.l):
        raise IndexError(f"divisor label beyond rho={p.rho}")
    return RingElement(p, {mono: Fraction(coef)})


def zero(p: RingParams) -> RingElement:
    return RingElement(p, {})


def one(p: RingParams) -> RingElement:
    return RingElement(p, {ONE: Fraction(1)})


def gen_o(p: RingParams, i: int) -> RingElement:
    _check_index(p, i)
    return RingElement(p, {Monomial(o=(i,)): Fraction(1)})


def gen_l(p: RingParams, s: int, i: int) -> RingElement:
    _check_index(p, i)
    if not isinstance(s, int) or not 1 <= s <= p.rho:
        raise IndexError(f"divisor label {s} out of range 1..{p.rho}")
    return RingElement(p, {Monomial(l=((i, s),)): Fraction(1)})


def gen_tau(p: RingParams, i: int, j: int) -> RingElement:
    _check_index(p, i)
    _check_index(p, j)
    if i == j:
        raise ValueError(f"tau needs two distinct indices, got ({i}, {j})")
    return RingElement(p, {Monomial(tau=((min(i, j), max(i, j)),)): Fraction(1)})


def gen_delta(p: RingParams, i: int, j: int) -> RingElement:
    """Diagonal class: tau_ij + o_i + o_j + sum_s l^s_i l^s_j / d_s."""
    terms = dict(gen_tau(p, i, j).terms)
    terms[Monomial(o=(i,))] = Fraction(1)
    terms[Monomial(o=(j,))] = Fraction(1)
    for s, d in enumerate(p.degrees, start=1):
        terms[Monomial.make(l=((i, s), (j, s)))] = 1 / d
    return RingElement(p, terms)


def _same_params(a: RingElement, b: RingElement) -> RingParams:
    if a.params != b.params:
        raise ParameterMismatch("ring elements belong to different rings")
    return a.params


def add(a: RingElement, b: RingElement) -> RingElement:
    p = _same_params(a, b)
    terms = dict(a.terms)
    for mono, c in b.terms.items():
        terms[mono] = terms.get(mono, 0) + c
    return RingElement(p, terms)


def scale(c: Rational, a: RingElement) -> RingElement:
    c = Fraction(c)
    if c == 0:
        return zero(a.params)
    return RingElement(a.params, {mono: c * v for mono, v in a.terms.items()})


def linear_combination(p: RingParams, pairs: Iterable[tuple[Rational, RingElement]]) -> RingElement:
    terms: dict[Monomial, Fraction] = defaultdict(Fraction)
    for c, a in pairs:
        if a.params != p:
            raise ParameterMismatch("ring elements belong to different rings")
        for mono, v in a.terms.items():
            terms[mono] += c * v
    return RingElement(p, terms)


def degree(a: RingElement) -> int:
    degs = {mono.codegree for mono in a.terms}
    if len(degs) != 1:
        raise NotHomogeneous("degree is defined only for nonzero homogeneous elements")
    return degs.pop()


@lru_cache(maxsize=1 << 16)
def multiply_monomials(
    a: Monomial, b: Monomial, degrees: tuple[Fraction, ...], x: Fraction
) -> tuple[Fraction, Monomial] | None:
    """Product of two monomials as ``(coefficient, monomial)``, or None if zero.

    Every rewriting rule sends a monomial to a scalar multiple of a single
    monomial, so the product never splits into several terms.
    """
    taus: list[Pair] = list(a.tau) + list(b.tau)
    ls: list[Pair] = list(a.l) + list(b.l)
    os_: list[int] = list(a.o) + list(b.o)
    coef = Fraction(1)
    while True:
        # o annihilates every other factor sharing its index
        ocount = Counter(os_)
        if any(v > 1 for v in ocount.values()):
            return None
        if any(j in ocount for j, _ in ls):
            return None
        if any(i in ocount or j in ocount for i, j in taus):
            return None

        labels: dict[int, list[int]] = defaultdict(list)
        for j, s in ls:
            labels[j].append(s)
        clash = min((j for j, v in labels.items() if len(v) > 1), default=None)
        if clash is not None:
            s, t = labels[clash][:2]
            if s != t:
                return None
            coef *= degrees[s - 1]
            ls.remove((clash, s))
            ls.remove((clash, s))
            os_.append(clash)
            continue

        if any(i in labels or j in labels for i, j in taus):
            return None

        ends: dict[int, list[int]] = defaultdict(list)
        for pos, (i, j) in enumerate(taus):
            ends[i].append(pos)
            ends[j].append(pos)
        shared = min((i for i, v in ends.items() if len(v) > 1), default=None)
        if shared is None:
            break
        others = sorted(
            (taus[pos][1] if taus[pos][0] == shared else taus[pos][0], pos)
            for pos in ends[shared]
        )
        (j, pj), (k, pk) = others[:2]
        for pos in sorted((pj, pk), reverse=True):
            del taus[pos]
        if j == k:
            coef *= x
            os_ += [shared, j]
        else:
            taus.append((j, k))
            os_.append(shared)
        if coef == 0:
            return None
    return coef, Monomial.make(taus, ls, os_)


def mul(a: RingElement, b: RingElement) -> RingElement:
    p = _same_params(a, b)
    terms: dict[Monomial, Fraction] = defaultdict(Fraction)
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            res = multiply_monomials(ma, mb, p.degrees, p.x)
            if res is not None:
                c, mono = res
                terms[mono] += ca * cb * c
    return RingElement(p, terms)


def product_of(p: RingParams, factors: Iterable[RingElement]) -> RingElement:
    result = one(p)
    for f in factors:
        result = mul(result, f)
    return result


def _as_mapping(g: Sequence[int] | Mapping[int, int], n: int) -> dict[int, int]:
    if isinstance(g, Mapping):
        mapping = {i: g.get(i, i) for i in range(1, n + 1)}
    else:
        if len(g) != n:
            raise ValueError(f"permutation has length {len(g)}, expected {n}")
        mapping = {i + 1: v for i, v in enumerate(g)}
    if sorted(mapping.values()) != list(range(1, n + 1)):
        raise ValueError("not a permutation of 1..n")
    return mapping


def apply_permutation(g: Sequence[int] | Mapping[int, int], a: RingElement) -> RingElement:
    """Relabel index i as g(i). ``g`` is one-line notation or a mapping."""
    mapping = _as_mapping(g, a.params.n)
    return RingElement(a.params, {mono.relabel(mapping): c for mono, c in a.terms.items()})


def complement_dual(mono: Monomial, n: int) -> Monomial:
    """Keep tau and l factors, put o on every index they leave uncovered."""
    if mono.max_index() > n:
        raise IndexError(f"monomial uses an index beyond n={n}")
    covered = mono.I | mono.J | mono.K
    rest = tuple(i for i in range(1, n + 1) if i not in covered)
    return Monomial(mono.tau, mono.l, rest)


def top_coefficient(a: RingElement) -> Fraction:
    n = a.params.n
    top = Monomial(o=tuple(range(1, n + 1)))
    for mono in a.terms:
        if mono != top:
            raise NotHomogeneous(f"element is not of top codegree {2 * n}")
    return a.terms.get(top, Fraction(0))


def pair(a: RingElement, b: RingElement) -> Fraction:
    """Top-degree pairing: coefficient of o_1...o_n in a*b."""
    n = _same_params(a, b).n
    if a.terms and b.terms and degree(a) + degree(b) != 2 * n:
        raise NotHomogeneous(f"degrees {degree(a)} + {degree(b)} do not sum to {2 * n}")
    return top_coefficient(mul(a, b))


def pair_monomials(p: RingParams, a: Monomial, b: Monomial) -> Fraction:
    res = multiply_monomials(a, b, p.degrees, p.x)
    return Fraction(0) if res is None else res[0]


def _monomials_on(indices: Sequence[int], rho: int, m: int) -> Iterator[Monomial]:
    idx = list(indices)
    for i_size in range(0, min(len(idx), m) + 1, 2):
        for I in combinations(idx, i_size):
            rest = [i for i in idx if i not in I]
            for J_size in range(0, min(len(rest), m - i_size) + 1):
                k_double = m - i_size - J_size
                if k_double % 2:
                    continue
                k_size = k_double // 2
                if rho == 0 and J_size:
                    continue
                for J in combinations(rest, J_size):
                    rest2 = [i for i in rest if i not in J]
                    if k_size > len(rest2):
                        continue
                    for K in combinations(rest2, k_size):
                        for alpha in enumerate_matchings(I):
                            for beta in product(range(1, rho + 1), repeat=J_size):
                                yield Monomial(alpha.pairs, tuple(zip(J, beta)), K)


def monomials_on(indices: Sequence[int], rho: int, m: int) -> list[Monomial]:
    """All canonical monomials of codegree m supported inside ``indices``, sorted."""
    return sorted(_monomials_on(sorted(indices), rho, m))


def enumerate_monomials(p: RingParams, m: int) -> list[Monomial]:
    if not 0 <= m <= 2 * p.n:
        raise ValueError(f"codegree {m} out of range 0..{2 * p.n}")
    return monomials_on(range(1, p.n + 1), p.rho, m)
