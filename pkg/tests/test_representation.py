import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nbihom.algebra import NBiHomLieAlgebra, abelian, verify_algebra, yau_twist
from nbihom.instances import (EX3_5_ALPHA, EX3_5_RHO,
                              EX3_5_TWISTED_RHO_VALUES, diagonal_morphisms, ex2_4_base, ex2_4_twisted,
                              ex3_5_base, ex3_5_rep, ex3_5_twisted, ex3_5_twisted_rep,
                              random_base, random_change_of_basis, random_instance)
from nbihom.linalg import Matrix, invert, unit_vector
from nbihom.representation import (BracketNotWedgeCompatible, InvalidRepresentation, Representation,
                                   adjoint_representation, are_equivalent, coadjoint_representation,
                                   dual_representation, eval_rho, find_equivalence,
                                   intertwiner_basis, is_wedge_compatible, semidirect_product,
                                   twist_representation, verify_representation, wedge_witness,
                                   zero_representation)
from nbihom.tensors import Tensor

e3 = [unit_vector(3, i) for i in range(3)]
v = [unit_vector(2, i) for i in range(2)]


# ---------------------------------------------------------------- evaluation

def test_eval_rho_values():
    R = ex3_5_rep()
    assert eval_rho(R, [e3[1], e3[2]], v[0]) == v[0]
    assert eval_rho(R, [e3[1], e3[1]], v[1]) == (0, 0)
    assert eval_rho(R, [e3[2], e3[1]], v[0]) == (-1, 0)


@given(st.lists(st.integers(-2, 2), min_size=3, max_size=3),
       st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_eval_rho_alternating(x, y):
    R = ex3_5_rep()
    assert R.matrix([x, y]) == -R.matrix([y, x])
    assert R.matrix([x, x]).is_zero()


def test_repeated_wedge_key_rejected():
    with pytest.raises(InvalidRepresentation):
        Representation(ex3_5_base(), 2, {(1, 1): [[1, 0], [0, 0]]}, Matrix.identity(2),
                       Matrix.identity(2))


# ---------------------------------------------------------------- verification

def test_untwisted_example_representation_verifies():
    r = verify_representation(ex3_5_rep())
    assert r.passed
    # the literal last term rho(abX) rho(Y) disagrees on the classical n-Lie case
    assert not r.cond4_as_printed


def test_twisted_example_values_match_printed():
    R = ex3_5_twisted_rep()
    for ((i, j), k), image in EX3_5_TWISTED_RHO_VALUES.items():
        assert eval_rho(R, [e3[i], e3[j]], v[k]) == image


def test_twisted_example_representation_fails_beta_equivariance():
    r = verify_representation(ex3_5_twisted_rep())
    assert r.cond1
    assert not r.cond2 and r.cond2.witness == (0, 1)
    assert r.cond2.discrepancy == (0, -2, 0, 0)


def test_zero_representation_verifies():
    A = ex3_5_base()
    R = zero_representation(A, 2, Matrix.diag([2, 3]), Matrix.diag([5, 7]))
    assert verify_representation(R).passed


# ---------------------------------------------------------------- adjoint

def test_adjoint_of_untwisted_bases():
    assert verify_representation(adjoint_representation(ex2_4_base())).passed
    assert verify_representation(adjoint_representation(ex3_5_base())).passed


def test_adjoint_of_abelian_is_zero():
    assert adjoint_representation(abelian(3, 3)).rho == {}


def test_yau_twists_are_wedge_compatible():
    # the repeated entries of [e2,e3,e2] sit in slots 1 and 3, outside the wedge slots
    assert is_wedge_compatible(ex2_4_twisted())
    assert ex2_4_twisted().bracket.at((1, 2, 1))


def test_non_wedge_bracket_flagged():
    T = Tensor(3, 3, 3, {(0, 0, 1): {2: Fraction(1)}})
    A = NBiHomLieAlgebra(3, 3, T, Matrix.identity(3), Matrix.identity(3))
    assert wedge_witness(A) == (0, 0, 1)
    with pytest.raises(BracketNotWedgeCompatible):
        adjoint_representation(A)
    full = adjoint_representation(A, full_tensor=True)
    assert full.full_tensor and full.matrix([e3[0], e3[0]])[2, 1] == 1


@given(st.integers(0, 10_000))
def test_adjoint_of_random_instances(seed):
    A = random_instance(random.Random(seed))
    assert is_wedge_compatible(A)
    assert verify_representation(adjoint_representation(A)).passed


# ---------------------------------------------------------------- twisting

def test_twist_representation_values():
    R = ex3_5_twisted_rep()
    assert eval_rho(R, [e3[0], e3[1]], v[1]) == v[0]
    assert R.matrix([e3[0], e3[2]]).is_zero()


def test_twist_representation_identity():
    R0 = ex3_5_rep()
    I3, I2 = Matrix.identity(3), Matrix.identity(2)
    R = twist_representation(ex3_5_base(), R0, I3, I3, I2, I2)
    assert R.rho == R0.rho


@given(st.integers(0, 10_000))
def test_twist_of_adjoint_by_genuine_morphisms(seed):
    rng = random.Random(seed)
    L = random_base(rng, rng.choice((3, 4)))
    ms = diagonal_morphisms(L)
    a, b = rng.choice(ms), rng.choice(ms)
    R = twist_representation(L, adjoint_representation(L), a, b, a, b)
    assert verify_algebra(R.algebra).passed
    assert verify_representation(R).passed


# ---------------------------------------------------------------- semidirect product

def test_semidirect_of_zero_rep_is_direct_sum():
    A = ex3_5_base()
    S = semidirect_product(zero_representation(A, 2))
    assert S.dim == 5 and verify_algebra(S).passed
    assert S.eval(*[unit_vector(5, i) for i in range(3)]) == (1, 0, 0, 0, 0)
    assert S.eval(unit_vector(5, 0), unit_vector(5, 1), unit_vector(5, 3)) == (0,) * 5


def test_semidirect_requires_valid_representation():
    with pytest.raises(InvalidRepresentation):
        semidirect_product(ex3_5_twisted_rep())
    S = semidirect_product(ex3_5_twisted_rep(), check=False)
    r = verify_algebra(S)
    assert r.n_bihom_jacobi and not r.beta_multiplicative


def test_semidirect_of_adjoint_of_example_twist():
    S = semidirect_product(adjoint_representation(ex3_5_twisted()), check=False)
    r = verify_algebra(S)
    assert r.bihom_skewsymmetry and r.n_bihom_jacobi
    assert not r.beta_multiplicative        # inherited from beta on the base


@given(st.integers(0, 10_000))
def test_semidirect_of_random_adjoints(seed):
    A = random_instance(random.Random(seed), dim=3)
    assert verify_algebra(semidirect_product(adjoint_representation(A))).passed


# ---------------------------------------------------------------- duals

def test_dual_of_zero():
    D, rep = dual_representation(zero_representation(ex3_5_base(), 2))
    assert D.rho == {} and rep.passed


def test_coadjoint_of_example_2_4_base():
    D, rep = dual_representation(adjoint_representation(ex2_4_base()))
    assert rep.passed and verify_representation(D).passed


def test_dual_condition_failure_matches_verification():
    R = Representation(ex3_5_base(), 2, dict(EX3_5_RHO), Matrix.diag([1, 2]), Matrix.identity(2))
    D, rep = dual_representation(R)
    assert not rep.cond1
    assert not verify_representation(D).passed


@given(st.integers(0, 10_000))
def test_dual_conditions_predict_dual_verification(seed):
    rng = random.Random(seed)
    A = random_instance(rng, dim=3, involutive=rng.random() < 0.5)
    D, rep = dual_representation(adjoint_representation(A))
    v = verify_representation(D)
    assert [bool(c) for c in rep.checks] == [bool(c) for c in v.checks]


def test_coadjoint_of_involutive_twist():
    A = yau_twist(ex3_5_base(), EX3_5_ALPHA, Matrix.diag([1, -1, -1]))
    assert verify_representation(coadjoint_representation(A)).passed


# ---------------------------------------------------------------- equivalence

def test_equivalence_identity():
    R = ex3_5_rep()
    assert are_equivalent(R, R, Matrix.identity(2))


@given(st.integers(0, 10_000))
def test_find_equivalence_of_conjugate(seed):
    rng = random.Random(seed)
    R1 = ex3_5_rep()
    P = random_change_of_basis(rng, 2, steps=2)
    Pi = invert(P)
    R2 = Representation(R1.algebra, 2, {t: P @ m @ Pi for t, m in R1.rho.items()},
                        P @ R1.alpha_v @ Pi, P @ R1.beta_v @ Pi)
    T = find_equivalence(R1, R2)
    assert T is not None and are_equivalent(R1, R2, T)


def test_no_equivalence_with_zero():
    R = ex3_5_twisted_rep()
    assert find_equivalence(R, zero_representation(R.algebra, 2)) is None
    # T rho(e1,e2) = 0 forces T v1 = 0 for every intertwiner
    assert all(m(v[0]) == (0, 0) for m in intertwiner_basis(R, zero_representation(R.algebra, 2)))
