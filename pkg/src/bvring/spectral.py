"""Gram matrices on perfect matchings, the Specht embedding and the kernel verifiers.

On the pure-tau monomials of ``R(S^d)`` the pairing of ``tau_a`` with ``tau_b``
is ``x ** loops(a, b)``, where ``loops`` counts the alternating cycles of the
superposed matchings. The symmetric group acts on this space; each Specht
module ``V_lambda`` (lambda an even partition of d) sits inside it through
``phi`` and is an eigenspace of the Gram matrix. The eigenvalue vanishes
exactly when lambda has more than x rows, and those kernels are spanned by
relabelings of the alternating Kimura relation.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, permutations, product
from math import factorial
from typing import Iterable, Mapping

from . import linalg
from .combinat import (
    PerfectMatching,
    Tabloid,
    YoungTableau,
    double_factorial,
    enumerate_even_partitions,
    enumerate_matchings,
    enumerate_standard_tableaux,
    hook_length_dim,
    perm_map,
    polytabloid,
    sgn,
)
from .tautoring import (
    Monomial,
    RingElement,
    RingParams,
    enumerate_monomials,
    monomials_on,
    multiply_monomials,
    pair_monomials,
)

TauVector = dict  # PerfectMatching -> Fraction, zero coefficients pruned

DEFAULT_MAX_DIM = 5000


class ResourceError(RuntimeError):
    """Requested matrix exceeds the configured dimension bound."""


def max_dim() -> int:
    env = os.environ.get("BVRING_MAX_DIM")
    return int(env) if env else DEFAULT_MAX_DIM


def _check_bound(size: int, what: str, bound: int | None) -> None:
    bound = max_dim() if bound is None else bound
    if size > bound:
        raise ResourceError(f"{what} has dimension {size}, above the bound {bound} (BVRING_MAX_DIM)")


# --- loop counts and the Gram matrix --------------------------------------

def loop_count(a: PerfectMatching, b: PerfectMatching) -> int:
    """Number of cycles in the multigraph a + b."""
    if a.ground != b.ground:
        raise ValueError("matchings live on different ground sets")
    pa, pb = a.partner(), b.partner()
    seen: set[int] = set()
    loops = 0
    for start in pa:
        if start in seen:
            continue
        loops += 1
        v = start
        while v not in seen:
            u = pa[v]
            seen.update((v, u))
            v = pb[u]
    return loops


@lru_cache(maxsize=None)
def _exponents(d: int) -> tuple[tuple[int, ...], ...]:
    basis = enumerate_matchings(d)
    n = len(basis)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = loop_count(basis[i], basis[j])
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class GramMatrix:
    """Pairing matrix on the matchings of {1..d}, stored as loop-count exponents."""

    d: int
    basis: tuple[PerfectMatching, ...]
    exponents: tuple[tuple[int, ...], ...]
    x: Fraction

    @cached_property
    def evaluated(self) -> list[list[Fraction]]:
        powers = [self.x ** k for k in range(self.d // 2 + 1)]
        return [[powers[e] for e in row] for row in self.exponents]

    @cached_property
    def index(self) -> dict[PerfectMatching, int]:
        return {m: i for i, m in enumerate(self.basis)}

    def at(self, x) -> "GramMatrix":
        return GramMatrix(self.d, self.basis, self.exponents, Fraction(x))

    def to_vector(self, v: Mapping[PerfectMatching, Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * len(self.basis)
        for m, c in v.items():
            if m not in self.index:
                raise ValueError(f"matching {m} is not on the ground set 1..{self.d}")
            out[self.index[m]] = Fraction(c)
        return out

    def from_vector(self, v: Iterable) -> TauVector:
        return {m: Fraction(c) for m, c in zip(self.basis, v) if c != 0}

    def apply(self, v: Mapping[PerfectMatching, Fraction]) -> TauVector:
        return self.from_vector(linalg.mat_vec(self.evaluated, self.to_vector(v)))


def build_gram(d: int, x, bound: int | None = None) -> GramMatrix:
    if d < 2 or d % 2:
        raise ValueError(f"d must be even and at least 2, got {d}")
    _check_bound(double_factorial(d - 1), f"Gram matrix for d={d}", bound)
    return GramMatrix(d, tuple(enumerate_matchings(d)), _exponents(d), Fraction(x))


# --- tau vectors and the Specht embedding ----------------------------------

def tau_element(p: RingParams, v: Mapping[PerfectMatching, Fraction]) -> RingElement:
    return RingElement(p, {Monomial(m.pairs): Fraction(c) for m, c in v.items()})


def tau_vector(a: RingElement) -> TauVector:
    """Inverse of ``tau_element``; every monomial must be a pure tau covering 1..n."""
    full = frozenset(range(1, a.params.n + 1))
    out = {}
    for mono, c in a.terms.items():
        if mono.l or mono.o or mono.I != full:
            raise ValueError(f"{mono} is not a pure tau monomial on 1..{a.params.n}")
        out[PerfectMatching(mono.tau)] = c
    return out


def _add_into(acc: dict, v: Mapping, c=1) -> None:
    for k, a in v.items():
        s = acc.get(k, 0) + c * a
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def relabel_vector(g, v: Mapping[PerfectMatching, Fraction]) -> TauVector:
    g = perm_map(g)
    return {m.relabel(g): c for m, c in v.items()}


def phi(t: Tabloid) -> TauVector:
    """Product over rows of the sum of all perfect matchings of the row."""
    if any(len(r) % 2 for r in t.rows):
        raise ValueError(f"phi needs even rows, got shape {t.shape}")
    per_row = [enumerate_matchings(r) for r in t.rows]
    out: dict[PerfectMatching, Fraction] = {}
    for combo in product(*per_row):
        m = PerfectMatching.make(p for part in combo for p in part.pairs)
        out[m] = out.get(m, 0) + Fraction(1)
    return out


def phi_polytabloid(T: YoungTableau) -> TauVector:
    if any(r % 2 for r in T.shape):
        raise ValueError(f"phi needs even rows, got shape {T.shape}")
    out: dict[PerfectMatching, Fraction] = {}
    for t, c in polytabloid(T).items():
        _add_into(out, phi(t), c)
    return out


def eigencheck(G: GramMatrix, v: Mapping[PerfectMatching, Fraction]) -> Fraction | None:
    """The scalar c with G v = c v, or None if v is not an eigenvector."""
    vec = G.to_vector(v)
    if not any(vec):
        raise ValueError("eigencheck needs a nonzero vector")
    image = linalg.mat_vec(G.evaluated, vec)
    lead = next(i for i, a in enumerate(vec) if a != 0)
    c = Fraction(image[lead]) / vec[lead]
    if all(b == c * a for a, b in zip(vec, image)):
        return c
    return None


def kernel_basis(G: GramMatrix) -> list[TauVector]:
    return [G.from_vector(v) for v in linalg.nullspace(G.evaluated, len(G.basis))]


# --- the Kimura relation and its ideal --------------------------------------

def _check_x(x) -> int:
    if Fraction(x).denominator != 1 or x < 1:
        raise ValueError(f"the Kimura relation needs a positive integer x, got {x}")
    return int(x)


def kimura_vector(x, first=None, second=None) -> TauVector:
    """sum_g sgn(g) prod_i tau_{a_i, b_g(i)} for index lists a, b of length x+1.

    Defaults to a = 1..x+1 and b = x+2..2x+2.
    """
    k = _check_x(x) + 1
    a = list(first) if first is not None else list(range(1, k + 1))
    b = list(second) if second is not None else list(range(k + 1, 2 * k + 1))
    out: dict[PerfectMatching, Fraction] = {}
    for g in permutations(range(k)):
        m = PerfectMatching.make((a[i], b[g[i]]) for i in range(k))
        _add_into(out, {m: Fraction(sgn([j + 1 for j in g]))})
    return out


def kimura_relation(x) -> RingElement:
    """The alternating relation as an element of R(S^{2(x+1)}) with rho = 0."""
    k = _check_x(x) + 1
    return tau_element(RingParams(2 * k, (), Fraction(x)), kimura_vector(x))


def two_column_tableau(x) -> YoungTableau:
    """Standard tableau with rows (i, x+1+i): first column 1..x+1."""
    k = _check_x(x) + 1
    return YoungTableau(tuple((i, k + i) for i in range(1, k + 1)))


def kimura_relabelings(x, indices: Iterable[int]) -> list[TauVector]:
    """All relabelings of the Kimura relation into ``indices``, one per sign class.

    Relabeling by an injective map only depends, up to sign, on the unordered
    pair of image blocks {A, B}: reordering inside a block multiplies the
    alternating sum by the sign of the reordering, and swapping the blocks
    leaves it unchanged. So enumerating splits with min(A u B) in A covers
    every injective map.
    """
    k = _check_x(x) + 1
    pool = sorted(indices)
    out = []
    for support in combinations(pool, 2 * k):
        head, rest = support[0], support[1:]
        for tail in combinations(rest, k - 1):
            a = (head,) + tail
            b = tuple(i for i in rest if i not in tail)
            out.append(kimura_vector(x, a, b))
    return out


def _normalize_sign(terms: dict) -> tuple:
    items = sorted(terms.items())
    if items and items[0][1] < 0:
        items = [(k, -c) for k, c in items]
    return tuple(items)


def kimura_ideal_slice(p: RingParams, m: int) -> list[RingElement]:
    """Spanning set of the codegree-m part of the ideal generated by the Kimura relation.

    Each relabeling of the relation onto 2(x+1) of the n indices is multiplied
    by every monomial of codegree m - 2(x+1) supported on the remaining
    indices. Elements equal up to sign are kept once.
    """
    k = _check_x(p.x) + 1
    rest_deg = m - 2 * k
    if p.n < 2 * k or rest_deg < 0:
        return []
    seen: set[tuple] = set()
    out = []
    for rel in kimura_relabelings(p.x, range(1, p.n + 1)):
        support = next(iter(rel)).ground
        complement = [i for i in range(1, p.n + 1) if i not in support]
        for extra in monomials_on(complement, p.rho, rest_deg):
            terms: dict[Monomial, Fraction] = {}
            for match, c in rel.items():
                res = multiply_monomials(Monomial(match.pairs), extra, p.degrees, p.x)
                if res is not None:
                    coef, mono = res
                    terms[mono] = terms.get(mono, 0) + c * coef
            terms = {mono: c for mono, c in terms.items() if c}
            if not terms:
                continue
            key = _normalize_sign(terms)
            if key in seen:
                continue
            seen.add(key)
            out.append(RingElement(p, dict(key)))
    return out


# --- verifiers --------------------------------------------------------------

def predicted_kernel_dim(d: int, x) -> int:
    """Sum of dim V_lambda over even lambda of d with at least x+1 rows."""
    return sum(hook_length_dim(lam) for lam in enumerate_even_partitions(d) if len(lam) >= x + 1)


@dataclass
class KernelGenReport:
    d: int
    x: int
    kernel_dim: int
    slice_size: int
    slice_rank: int
    predicted_dim: int
    equal: bool

    @property
    def passed(self) -> bool:
        return self.equal and self.kernel_dim == self.predicted_dim

    def to_dict(self) -> dict:
        return asdict(self) | {"passed": self.passed}


def verify_kernel_generated(d: int, x, bound: int | None = None) -> KernelGenReport:
    """Compare the Gram kernel with the span of pure-tau Kimura ideal elements."""
    x = _check_x(x)
    G = build_gram(d, x, bound)
    ncols = len(G.basis)
    kernel = linalg.nullspace(G.evaluated, ncols)
    slice_vectors = []
    for elem in kimura_ideal_slice(RingParams(d, (), Fraction(x)), d):
        if any(mono.o or mono.l for mono in elem.terms):
            continue
        slice_vectors.append(G.to_vector(tau_vector(elem)))
    kernel_dim = len(kernel)
    slice_rank = linalg.rank(slice_vectors, ncols)
    equal = kernel_dim == slice_rank and linalg.rank(kernel + slice_vectors, ncols) == kernel_dim
    return KernelGenReport(
        d=d,
        x=x,
        kernel_dim=kernel_dim,
        slice_size=len(slice_vectors),
        slice_rank=slice_rank,
        predicted_dim=predicted_kernel_dim(d, x),
        equal=equal,
    )


def pairing_matrix(p: RingParams, m: int, bound: int | None = None):
    """Rows indexed by Mon^m(n), columns by Mon^{2n-m}(n)."""
    rows = enumerate_monomials(p, m)
    cols = enumerate_monomials(p, 2 * p.n - m)
    _check_bound(max(len(rows), len(cols)), f"pairing matrix at n={p.n}, m={m}", bound)
    matrix = [[pair_monomials(p, a, b) for b in cols] for a in rows]
    return rows, cols, matrix


@dataclass
class PerfectPairingReport:
    n: int
    m: int
    basis_size: int
    pairing_rank: int
    kernel_dim: int
    slice_size: int
    slice_rank: int
    kernel_in_ideal: bool
    ideal_in_kernel: bool

    @property
    def passed(self) -> bool:
        return self.kernel_in_ideal and self.ideal_in_kernel

    def to_dict(self) -> dict:
        return asdict(self) | {"passed": self.passed}


def verify_perfect_pairing(p: RingParams, m: int, bound: int | None = None) -> PerfectPairingReport:
    """Check that the pairing kernel in codegree m is exactly the Kimura ideal slice."""
    if not 0 <= m <= 2 * p.n:
        raise ValueError(f"codegree {m} out of range 0..{2 * p.n}")
    rows, cols, matrix = pairing_matrix(p, m, bound)
    size = len(rows)
    kernel = linalg.left_nullspace(matrix, len(cols)) if size else []
    position = {mono: i for i, mono in enumerate(rows)}
    slice_vectors = []
    if Fraction(p.x).denominator == 1 and p.x >= 1:
        for elem in kimura_ideal_slice(p, m):
            vec = [Fraction(0)] * size
            for mono, c in elem.terms.items():
                vec[position[mono]] = c
            slice_vectors.append(vec)
    slice_rank = linalg.rank(slice_vectors, size)
    kernel_in_ideal = linalg.contains(slice_vectors, kernel, size)
    columns = linalg.transpose(matrix, len(cols))
    ideal_in_kernel = all(not any(linalg.mat_vec(columns, v)) for v in slice_vectors)
    return PerfectPairingReport(
        n=p.n,
        m=m,
        basis_size=size,
        pairing_rank=size - len(kernel),
        kernel_dim=len(kernel),
        slice_size=len(slice_vectors),
        slice_rank=slice_rank,
        kernel_in_ideal=kernel_in_ideal,
        ideal_in_kernel=ideal_in_kernel,
    )


@dataclass
class EigenReport:
    d: int
    x: int
    eigenvalues: dict  # partition -> eigenvalue (None if some phi(E_T) failed)
    all_eigenvectors: bool
    zero_criterion: bool
    kernel_dim: int
    predicted_dim: int

    @property
    def passed(self) -> bool:
        return self.all_eigenvectors and self.zero_criterion and self.kernel_dim == self.predicted_dim

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "x": self.x,
            "eigenvalues": {
                ",".join(map(str, lam)): (None if ev is None else str(ev))
                for lam, ev in self.eigenvalues.items()
            },
            "all_eigenvectors": self.all_eigenvectors,
            "zero_criterion": self.zero_criterion,
            "kernel_dim": self.kernel_dim,
            "predicted_dim": self.predicted_dim,
            "passed": self.passed,
        }


def verify_eigenspaces(d: int, x, bound: int | None = None) -> EigenReport:
    """Every phi(E_T) is an eigenvector, one eigenvalue per shape, zero iff > x rows."""
    G = build_gram(d, x, bound)
    eigenvalues: dict[tuple[int, ...], Fraction | None] = {}
    all_ok = True
    for lam in enumerate_even_partitions(d):
        values = {eigencheck(G, phi_polytabloid(T)) for T in enumerate_standard_tableaux(lam)}
        if None in values or len(values) != 1:
            all_ok = False
            eigenvalues[lam] = None
        else:
            eigenvalues[lam] = values.pop()
    zero_ok = all_ok and all((ev == 0) == (len(lam) >= x + 1) for lam, ev in eigenvalues.items())
    return EigenReport(
        d=d,
        x=int(x) if Fraction(x).denominator == 1 else x,
        eigenvalues=eigenvalues,
        all_eigenvectors=all_ok,
        zero_criterion=zero_ok,
        kernel_dim=len(linalg.nullspace(G.evaluated, len(G.basis))),
        predicted_dim=predicted_kernel_dim(d, x),
    )


def verify_kimura_identity(x) -> bool:
    """phi(E_T) for the two-column tableau equals (x+1)! times the Kimura relation."""
    k = _check_x(x) + 1
    lhs = phi_polytabloid(two_column_tableau(x))
    rhs = {m: factorial(k) * c for m, c in kimura_vector(x).items()}
    return lhs == rhs
