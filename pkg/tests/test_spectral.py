import random
from fractions import Fraction
from itertools import permutations

import pytest

from bvring import linalg
from bvring.combinat import (
    PerfectMatching,
    Tabloid,
    YoungTableau,
    act_on_tabloid,
    enumerate_even_partitions,
    enumerate_matchings,
    enumerate_standard_tableaux,
    hook_length_dim,
    sgn,
)
from bvring.spectral import (
    ResourceError,
    build_gram,
    eigencheck,
    kernel_basis,
    kimura_ideal_slice,
    kimura_relation,
    kimura_vector,
    loop_count,
    phi,
    phi_polytabloid,
    predicted_kernel_dim,
    relabel_vector,
    tau_element,
    tau_vector,
    two_column_tableau,
    verify_eigenspaces,
    verify_kernel_generated,
    verify_kimura_identity,
    verify_perfect_pairing,
)
from bvring.tautoring import (
    Monomial,
    RingElement,
    RingParams,
    apply_permutation,
    enumerate_monomials,
    mul,
    pair,
)


def M(*pairs):
    return PerfectMatching.make(pairs)


def ring_pairing(a, b, x):
    p = RingParams(len(a.ground), (), x)
    return pair(tau_element(p, {a: 1}), tau_element(p, {b: 1}))


# --- loop counts ----------------------------------------------------------------

def test_loop_count_examples():
    a = M((1, 2), (3, 4))
    assert loop_count(a, a) == 2
    assert loop_count(a, M((1, 3), (2, 4))) == 1
    assert loop_count(M((1, 2)), M((1, 2))) == 1
    with pytest.raises(ValueError):
        loop_count(M((1, 2)), M((1, 3)))


def test_loop_count_examples_against_ring():
    a = M((1, 2), (3, 4))
    assert ring_pairing(a, a, 7) == 7 ** 2
    assert ring_pairing(a, M((1, 3), (2, 4)), 7) == 7


@pytest.mark.parametrize("d", [2, 4, 6, 8])
def test_loop_count_matches_ring_engine_on_random_pairs(d):
    rng = random.Random(d)
    ms = enumerate_matchings(d)
    for _ in range(20):
        a, b = rng.choice(ms), rng.choice(ms)
        for x in (1, 2, 7):
            assert ring_pairing(a, b, x) == x ** loop_count(a, b)


# --- the Gram matrix ----------------------------------------------------------------

def test_gram_small():
    G = build_gram(2, 5)
    assert G.evaluated == [[5]]
    G = build_gram(4, 3)
    assert G.evaluated == [[9, 3, 3], [3, 9, 3], [3, 3, 9]]
    assert G.exponents == ((2, 1, 1), (1, 2, 1), (1, 1, 2))


@pytest.mark.parametrize("d", [2, 4, 6, 8])
def test_gram_symmetric_with_constant_diagonal(d):
    E = build_gram(d, 1).exponents
    n = len(E)
    assert all(E[i][i] == d // 2 for i in range(n))
    assert all(E[i][j] == E[j][i] for i in range(n) for j in range(n))
    assert all(1 <= E[i][j] <= d // 2 for i in range(n) for j in range(n))


def test_gram_resource_bound(monkeypatch):
    with pytest.raises(ResourceError):
        build_gram(12, 1)
    with pytest.raises(ResourceError):
        build_gram(6, 1, bound=10)
    monkeypatch.setenv("BVRING_MAX_DIM", "3")
    with pytest.raises(ResourceError):
        build_gram(6, 1)
    assert len(build_gram(4, 1).basis) == 3
    with pytest.raises(ValueError):
        build_gram(3, 1)


# --- phi --------------------------------------------------------------------------

def test_phi_examples():
    assert phi(Tabloid(((1, 2), (3, 4)))) == {M((1, 2), (3, 4)): 1}
    assert phi(Tabloid(((1, 2, 3, 4),))) == {m: 1 for m in enumerate_matchings(4)}
    with pytest.raises(ValueError):
        phi(Tabloid(((1, 2, 3), (4,))))


def test_phi_equivariance_spot_check():
    # g = (1 2) on rows {1,3},{2,4}: g.t has rows {2,3},{1,4}, whose phi is tau_{14} tau_{23};
    # relabeling phi(t) = tau_{13} tau_{24} by g gives tau_{23} tau_{14} as well
    t = Tabloid(((1, 3), (2, 4)))
    g = (2, 1, 3, 4)
    assert phi(act_on_tabloid(g, t)) == {M((1, 4), (2, 3)): 1}
    assert relabel_vector(g, phi(t)) == {M((1, 4), (2, 3)): 1}


@pytest.mark.parametrize("shape", [(2, 2), (4, 2), (2, 2, 2), (4, 4), (6, 2), (4, 2, 2)])
def test_phi_equivariance_random(shape):
    rng = random.Random(sum(shape) * 31 + len(shape))
    d = sum(shape)
    items = list(range(1, d + 1))
    for _ in range(10):
        rng.shuffle(items)
        rows, k = [], 0
        for r in shape:
            rows.append(items[k:k + r])
            k += r
        t = Tabloid(tuple(rows))
        g = items[:]
        rng.shuffle(g)
        assert phi(act_on_tabloid(g, t)) == relabel_vector(g, phi(t))


def test_phi_polytabloid_examples():
    T = YoungTableau(((1, 3), (2, 4)))
    assert phi_polytabloid(T) == {M((1, 3), (2, 4)): 2, M((1, 4), (2, 3)): -2}
    row = YoungTableau(((1, 2, 3, 4, 5, 6),))
    assert phi_polytabloid(row) == {m: 1 for m in enumerate_matchings(6)}


@pytest.mark.parametrize("d", [2, 4, 6, 8])
def test_specht_images_have_full_rank(d):
    basis = enumerate_matchings(d)
    for lam in enumerate_even_partitions(d):
        vecs = [phi_polytabloid(T) for T in enumerate_standard_tableaux(lam)]
        rows = [[v.get(m, 0) for m in basis] for v in vecs]
        assert linalg.rank(rows, len(basis)) == hook_length_dim(lam)


# --- eigenvalues and kernels --------------------------------------------------------

def test_eigencheck_examples():
    for x in (1, 4, Fraction(2, 3)):
        assert eigencheck(build_gram(2, x), {M((1, 2)): 1}) == x
    v = phi_polytabloid(YoungTableau(((1, 3), (2, 4))))
    assert eigencheck(build_gram(4, 1), v) == 0
    # T_2(3) = 6 I + 3 J: the sum-zero vectors have eigenvalue 9 - 3 = 6
    assert eigencheck(build_gram(4, 3), v) == 6
    assert eigencheck(build_gram(4, 3), {M((1, 2), (3, 4)): 1}) is None
    with pytest.raises(ValueError):
        eigencheck(build_gram(4, 3), {})
    with pytest.raises(ValueError):
        eigencheck(build_gram(4, 3), {M((1, 2)): 1})


def test_kernel_basis_examples():
    assert kernel_basis(build_gram(2, 5)) == []
    G = build_gram(4, 1)
    ker = kernel_basis(G)
    assert len(ker) == 2
    for v in ker:
        assert G.apply(v) == {}
    assert len(kernel_basis(build_gram(6, 2))) == 5


@pytest.mark.parametrize("d", [2, 4, 6, 8])
@pytest.mark.parametrize("x", [1, 2, 3])
def test_kernel_dimension_formula(d, x):
    assert len(kernel_basis(build_gram(d, x))) == predicted_kernel_dim(d, x)


def test_predicted_dims():
    assert predicted_kernel_dim(4, 1) == 2
    assert predicted_kernel_dim(6, 2) == 5
    assert predicted_kernel_dim(8, 2) == 56 + 14
    assert predicted_kernel_dim(4, 3) == 0


@pytest.mark.parametrize("d", [4, 6])
@pytest.mark.parametrize("x", [1, 2, 3])
def test_eigenspaces(d, x):
    assert verify_eigenspaces(d, x).passed


def test_eigenvalues_are_discovered_not_assumed():
    rep = verify_eigenspaces(4, 2)
    # T_2(2) = 2 I + 2 J: trivial rep 4 + 2*2 = 8, standard part 4 - 2 = 2
    assert rep.eigenvalues == {(4,): 8, (2, 2): 2}


# --- the Kimura relation ------------------------------------------------------------

def test_kimura_relation_examples():
    r1 = kimura_relation(1)
    assert r1.params.n == 4
    assert tau_vector(r1) == {M((1, 3), (2, 4)): 1, M((1, 4), (2, 3)): -1}
    r2 = kimura_relation(2)
    assert len(r2) == 6
    by_hand = {}
    for g in permutations((1, 2, 3)):
        by_hand[M(*((i, 3 + g[i - 1]) for i in (1, 2, 3)))] = sgn(g)
    assert tau_vector(r2) == by_hand
    with pytest.raises(ValueError):
        kimura_relation(0)
    with pytest.raises(ValueError):
        kimura_relation(Fraction(3, 2))


@pytest.mark.parametrize("x", [1, 2])
def test_kimura_relation_lies_in_the_gram_kernel(x):
    G = build_gram(2 * (x + 1), x)
    assert G.apply(kimura_vector(x)) == {}


@pytest.mark.parametrize("x", [1, 2])
def test_two_column_identity(x):
    k = x + 1
    T = two_column_tableau(x)
    assert T.is_standard() and T.shape == (2,) * k
    assert verify_kimura_identity(x)
    lhs = phi_polytabloid(T)
    rhs = {m: {2: 2, 3: 6}[k] * c for m, c in kimura_vector(x).items()}
    assert lhs == rhs


def brute_force_slice(p, m):
    """Every injective relabeling of the relation times every complementary monomial."""
    x = int(p.x)
    k = 2 * (x + 1)
    base = kimura_relation(x)
    out = []
    for image in permutations(range(1, p.n + 1), k):
        g = dict(zip(range(1, k + 1), image))
        rel = RingElement(p, {mo.relabel(g): c for mo, c in base.terms.items()})
        rest = [i for i in range(1, p.n + 1) if i not in image]
        for mo in enumerate_monomials(p, m - k) if m >= k else []:
            if mo.support <= set(rest):
                out.append(mul(rel, RingElement(p, {mo: 1})))
    return out


def _coords(elems, basis):
    pos = {mo: i for i, mo in enumerate(basis)}
    rows = []
    for e in elems:
        row = [0] * len(basis)
        for mo, c in e.terms.items():
            row[pos[mo]] = c
        rows.append(row)
    return rows


@pytest.mark.parametrize("n,rho,x,m", [(4, 0, 1, 4), (5, 0, 1, 4), (5, 0, 1, 6), (5, 1, 1, 5), (6, 0, 2, 6)])
def test_slice_matches_injective_map_enumeration(n, rho, x, m):
    p = RingParams(n, (2,) * rho, x)
    basis = enumerate_monomials(p, m)
    fast = _coords(kimura_ideal_slice(p, m), basis)
    slow = _coords(brute_force_slice(p, m), basis)
    assert linalg.same_span(fast, slow, len(basis))


def test_slice_examples():
    p = RingParams(4, (), 1)
    sl = kimura_ideal_slice(p, 4)
    assert len(sl) == 3
    basis = enumerate_monomials(p, 4)
    assert linalg.rank(_coords(sl, basis), len(basis)) == 2
    assert kimura_ideal_slice(p, 2) == []
    assert kimura_ideal_slice(RingParams(3, (), 1), 4) == []
    assert kimura_ideal_slice(RingParams(3, (), 1), 6) == []


def test_slice_elements_are_in_the_pairing_kernel():
    p = RingParams(5, (), 1)
    for m in (4, 6):
        sl = kimura_ideal_slice(p, m)
        assert sl
        dual = enumerate_monomials(p, 10 - m)
        for e in sl:
            for mo in dual:
                assert pair(e, RingElement(p, {mo: 1})) == 0
    # codegree 4: the relation relabeled onto 4 of the 5 indices, nothing else
    assert all(len(mo.tau) == 2 and not mo.o for e in kimura_ideal_slice(p, 4) for mo in e.terms)
    # codegree 6: times o on the leftover index
    assert all(len(mo.o) == 1 for e in kimura_ideal_slice(p, 6) for mo in e.terms)


def test_slice_is_permutation_stable():
    p = RingParams(5, (), 1)
    basis = enumerate_monomials(p, 6)
    sl = kimura_ideal_slice(p, 6)
    moved = [apply_permutation((3, 5, 1, 2, 4), e) for e in sl]
    assert linalg.same_span(_coords(sl, basis), _coords(moved, basis), len(basis))


# --- verifiers ---------------------------------------------------------------------

@pytest.mark.parametrize("d,x,dim", [(4, 1, 2), (6, 1, 14), (6, 2, 5)])
def test_verify_kernel_generated(d, x, dim):
    rep = verify_kernel_generated(d, x)
    assert rep.equal and rep.passed
    assert rep.kernel_dim == rep.slice_rank == rep.predicted_dim == dim


def test_verify_kernel_generated_below_threshold():
    rep = verify_kernel_generated(4, 3)
    assert rep.kernel_dim == 0 and rep.slice_size == 0 and rep.equal


def test_verify_perfect_pairing_examples():
    rep = verify_perfect_pairing(RingParams(2, (), 5), 1)
    assert rep.basis_size == 0 and rep.passed
    rep = verify_perfect_pairing(RingParams.k3(2, (2,)), 2)
    assert rep.basis_size == 4 and rep.pairing_rank == 4 and rep.kernel_dim == 0 and rep.passed
    rep = verify_perfect_pairing(RingParams(4, (), 1), 4)
    assert rep.kernel_dim == 2 == rep.slice_rank and rep.passed
    rep = verify_perfect_pairing(RingParams(4, (), 1), 2)
    assert rep.kernel_dim == 0 and rep.passed


def test_verify_perfect_pairing_with_divisors():
    p = RingParams(5, (2,), 1)
    for m in (4, 5, 6):
        rep = verify_perfect_pairing(p, m)
        assert rep.passed, rep


def test_one_relabeling_does_not_cover_the_kernel():
    from bvring.spectral import pairing_matrix
    p = RingParams(4, (), 1)
    rows, cols, matrix = pairing_matrix(p, 4)
    kernel = linalg.left_nullspace(matrix, len(cols))
    sl = _coords(kimura_ideal_slice(p, 4), rows)
    assert len(kernel) == 2
    assert not linalg.contains(sl[:1], kernel, len(rows))
    assert linalg.contains(sl, kernel, len(rows))
