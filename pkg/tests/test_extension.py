import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from nbihom.algebra import abelian, is_morphism, is_nilpotent, is_solvable, verify_algebra
from nbihom.extension import (Cocycle, CyclicConditionFail, NotEquivariant, NotIdeal, NotIsotropic,
                              QuadraticAlgebra, BilinearForm, canonical_qg, check_quadratic,
                              coadjoint_module, cyclic_coboundary_maps, cyclic_space,
                              equivariant_maps, extract_tstar, is_isotropic, lemma49_witness,
                              lemma_cyclic_condition, sigma_isomorphism, t_star_extension,
                              t_theta_extension, theta_from_map, verify_cocycle)
from nbihom.instances import (ex2_4_base, ex3_5_base, ex3_5_rep, nilpotent_instance, random_element,
                              random_instance, random_suite, random_tensor)
from nbihom.linalg import Matrix, Subspace, is_invertible, unit_vector
from nbihom.representation import adjoint_representation, semidirect_product, zero_representation
from nbihom.tensors import Tensor

from oracle import gram_value, jacobi_holds, theta_f_value

e3 = [unit_vector(3, i) for i in range(3)]


def dual_ideal(A):
    m = A.dim
    return Subspace.span([unit_vector(2 * m, m + i) for i in range(m)], 2 * m)


def zero_cocycle(R):
    A = R.algebra
    return Cocycle(A, R, Tensor.zero(A.n, A.dim, R.vdim))


# ---------------------------------------------------------------- cocycles

def test_theta_f_value_on_small_example():
    A = ex3_5_base()
    ad = adjoint_representation(A)
    f = Matrix.diag([0, 0, 1])
    C = theta_from_map(ad, f)
    assert C.theta.value((0, 1, 2)) == (-1, 0, 0)
    assert C.theta.value((2, 1, 0)) == (1, 0, 0)
    assert len(dict(C.theta.items())) == 6


def test_theta_f_matches_pointwise_oracle():
    rng = random.Random(3)
    for A in random_suite(seed=11, count=4):
        ad = adjoint_representation(A)
        f = random_element(rng, equivariant_maps(A, ad))
        C = theta_from_map(ad, f)
        e = [unit_vector(A.dim, i) for i in range(A.dim)]
        for t in product(range(A.dim), repeat=A.n):
            assert C.theta.value(t) == theta_f_value(ad, f, [e[i] for i in t])


def test_theta_f_needs_equivariant_map():
    from nbihom.algebra import yau_twist
    A = yau_twist(ex3_5_base(), Matrix.diag([1, 2, Fraction(1, 2)]), Matrix.identity(3))
    with pytest.raises(NotEquivariant):
        theta_from_map(adjoint_representation(A), Matrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))


def test_zero_theta_is_a_cocycle():
    assert verify_cocycle(zero_cocycle(ex3_5_rep())).passed


def test_random_tensor_is_usually_not_a_cocycle():
    A = ex3_5_base()
    ad = adjoint_representation(A)
    C = Cocycle(A, ad, Tensor(3, 3, 3, {(0, 0, 1): {0: Fraction(1)}}))
    r = verify_cocycle(C)
    assert not r.cond3 and r.cond3.witness is not None


def test_equivariant_maps_count():
    A = ex3_5_base()
    assert len(equivariant_maps(A, adjoint_representation(A))) == 9
    assert len(equivariant_maps(A, coadjoint_module(A))) == 9
    assert len(equivariant_maps(ex2_4_base(), coadjoint_module(ex2_4_base()))) == 25


@given(st.integers(0, 10_000))
def test_theta_f_is_cocycle_and_extension_verifies(seed):
    rng = random.Random(seed)
    A = random_instance(rng)
    ad = adjoint_representation(A)
    f = random_element(rng, equivariant_maps(A, ad))
    C = theta_from_map(ad, f)
    assert verify_cocycle(C).passed
    ext = t_theta_extension(C)
    assert verify_algebra(ext).passed
    s = sigma_isomorphism(zero_cocycle(ad), f)
    assert is_invertible(s)
    assert is_morphism(s, semidirect_product(ad), ext)


# ---------------------------------------------------------------- T_theta

def test_zero_theta_extension_is_semidirect_product():
    for R in (ex3_5_rep(), adjoint_representation(ex2_4_base())):
        ext = t_theta_extension(zero_cocycle(R))
        sd = semidirect_product(R)
        assert ext.bracket == sd.bracket
        assert ext.alpha == sd.alpha and ext.beta == sd.beta


def test_extension_of_abelian_by_zero_module_is_abelian():
    A = abelian(3, 2)
    ext = t_theta_extension(zero_cocycle(zero_representation(A, 2)))
    assert ext.bracket.is_zero() and ext.dim == 4


def test_extension_against_oracle():
    A = ex3_5_base()
    ad = adjoint_representation(A)
    ext = t_theta_extension(theta_from_map(ad, Matrix.diag([0, 0, 1])))
    assert jacobi_holds(ext)
    assert ext.eval(unit_vector(6, 0), unit_vector(6, 1), unit_vector(6, 2)) == (1, 0, 0, -1, 0, 0)


# ---------------------------------------------------------------- quadratic forms

def test_canonical_form_values():
    G = canonical_qg(abelian(3, 2)).gram
    assert G == Matrix.from_rows([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    q = canonical_qg(ex3_5_base())
    assert q.symmetric and q.nondegenerate
    assert q.value(unit_vector(6, 1), unit_vector(6, 4)) == 1
    assert q.value(unit_vector(6, 1), unit_vector(6, 3)) == 0


def test_check_quadratic_rejects_degenerate_form():
    A = abelian(3, 2)
    Q = QuadraticAlgebra(A, BilinearForm(Matrix.from_rows([[1, 0], [0, 0]])))
    r = check_quadratic(Q)
    assert r.symmetric and not r.nondegenerate and r.invariant


def test_tstar_of_example_bases_is_quadratic():
    for A in (ex2_4_base(), ex3_5_base()):
        Q = t_star_extension(A, None)
        assert check_quadratic(Q).passed
        assert verify_algebra(Q.algebra).passed


def test_tstar_rejects_non_cyclic_theta():
    A = ex3_5_base()
    with pytest.raises(CyclicConditionFail):
        t_star_extension(A, Tensor(3, 3, 3, {(0, 1, 2): {0: Fraction(1)}}))


def test_cyclic_space_dimensions():
    assert cyclic_space(ex3_5_base()).dim == 27
    assert cyclic_space(ex2_4_base()).dim == 250


def test_cyclic_coboundary_maps():
    A = ex2_4_base()
    D = coadjoint_module(A)
    fs = cyclic_coboundary_maps(A, D)
    assert len(fs) == 13
    thetas = [theta_from_map(D, f) for f in fs]
    assert all(lemma_cyclic_condition(C) for C in thetas)
    assert any(not C.theta.is_zero() for C in thetas)
    # on the 3-dimensional example every cyclic theta_f vanishes
    B = ex3_5_base()
    DB = coadjoint_module(B)
    gs = cyclic_coboundary_maps(B, DB)
    assert len(gs) == 6
    assert all(theta_from_map(DB, g).theta.is_zero() for g in gs)


@given(st.integers(0, 10_000), st.booleans())
def test_quadratic_iff_cyclic(seed, from_cyclic):
    rng = random.Random(seed)
    A = random_instance(rng, involutive=True)
    cs = cyclic_space(A)
    if from_cyclic and cs.dim:
        flat = random_element(rng, [Tensor.from_flat(A.n, A.dim, A.dim, b) for b in cs.basis]).flat()
        th = Tensor.from_flat(A.n, A.dim, A.dim, flat)
    else:
        th = random_tensor(rng, A.n, A.dim, A.dim)
    Q = t_star_extension(A, th, require_cyclic=False, check=False)
    cyc = lemma_cyclic_condition(Cocycle(A, coadjoint_module(A), th)).passed
    assert check_quadratic(Q).passed == cyc


def test_form_is_invariant_pointwise():
    A = ex2_4_base()
    Q = t_star_extension(A, None)
    T, G = Q.algebra, Q.form.gram
    rng = random.Random(0)
    for _ in range(20):
        x = [[rng.randint(-2, 2) for _ in range(10)] for _ in range(4)]
        lhs = gram_value(G, T.eval(x[0], x[1], x[2]), x[3])
        rhs = gram_value(G, x[2], T.eval(x[0], x[1], x[3]))
        assert lhs == -rhs


# ---------------------------------------------------------------- isotropic ideals and extraction

def test_dual_part_is_isotropic_ideal():
    Q = t_star_extension(ex3_5_base(), None)
    I = dual_ideal(ex3_5_base())
    assert is_isotropic(I, Q)
    assert lemma49_witness(Q, I) is None
    base = Subspace.span([unit_vector(6, i) for i in range(3)], 6)
    assert not is_isotropic(Subspace.span([unit_vector(6, 0), unit_vector(6, 3)], 6), Q)
    assert is_isotropic(base, Q)


def test_extract_rejects_wrong_ideals():
    A = ex3_5_base()
    Q = t_star_extension(A, None)
    with pytest.raises(NotIsotropic):
        extract_tstar(Q, Subspace.span([unit_vector(6, 3)], 6))
    # half-dimensional but [e1,e2,f1] leaves the span
    with pytest.raises(NotIdeal):
        extract_tstar(Q, Subspace.span([unit_vector(6, 0), unit_vector(6, 1), unit_vector(6, 3)], 6))


def _check_extraction(Q, I):
    C, B, phi = extract_tstar(Q, I)
    target = t_theta_extension(C, check=False)
    assert is_invertible(phi)
    assert is_morphism(phi, Q.algebra, target)
    assert phi.T @ canonical_qg(B).gram @ phi == Q.form.gram
    return C, B, phi


def test_extract_from_example_bases():
    for A in (ex2_4_base(), ex3_5_base()):
        C, B, phi = _check_extraction(t_star_extension(A, None), dual_ideal(A))
        assert B.dim == A.dim and C.theta.is_zero()


def test_extract_with_nonzero_cyclic_theta():
    A = ex2_4_base()
    D = coadjoint_module(A)
    f = next(f for f in cyclic_coboundary_maps(A, D) if not theta_from_map(D, f).theta.is_zero())
    Q = t_star_extension(A, theta_from_map(D, f))
    C, B, phi = _check_extraction(Q, dual_ideal(A))
    assert lemma_cyclic_condition(C)


@given(st.integers(0, 10_000))
def test_extract_random_involutive(seed):
    rng = random.Random(seed)
    A = random_instance(rng, involutive=True)
    cs = cyclic_space(A)
    th = Tensor.from_flat(A.n, A.dim, A.dim,
                          random_element(rng, [Tensor.from_flat(A.n, A.dim, A.dim, b)
                                               for b in cs.basis]).flat())
    Q = t_star_extension(A, th, check=False)
    _check_extraction(Q, dual_ideal(A))


# ---------------------------------------------------------------- solvable and nilpotent transfer

def test_tstar_of_example_base_is_solvable():
    assert is_solvable(ex2_4_base())[0]
    assert is_solvable(t_star_extension(ex2_4_base(), None).algebra)[0]


def test_tstar_of_nilpotent_instance_is_nilpotent():
    N = nilpotent_instance()
    assert is_nilpotent(N)[0]
    assert is_nilpotent(t_star_extension(N, None).algebra)[0]
