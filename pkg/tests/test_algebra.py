import random

import pytest
from hypothesis import given, strategies as st

from nbihom.algebra import (ArityMismatch, NBiHomLieAlgebra, NotMorphism, abelian, center,
                            center_is_stable, central_series, derived_series, eval_bracket,
                            ideal_report, is_ideal, is_morphism, is_nilpotent, is_solvable,
                            is_subalgebra, morphism_witness, verify_algebra, yau_twist)
from nbihom.instances import (EX2_4_ALPHA, EX2_4_BETA, EX3_5_ALPHA, EX3_5_BETA, diagonal_morphisms,
                              ex2_4_base, ex2_4_twisted, ex3_5_base, ex3_5_twisted,
                              nilpotent_instance, random_base, random_instance, rigid_instance)
from nbihom.linalg import Matrix, Subspace, unit_vector

import oracle

e5 = [unit_vector(5, i) for i in range(5)]
e3 = [unit_vector(3, i) for i in range(3)]


def span(vs, d):
    return Subspace.span(vs, d)


# ---------------------------------------------------------------- evaluation

def test_eval_bracket_defining_triple():
    assert eval_bracket(ex2_4_base(), [e5[1], e5[2], e5[3]]) == e5[0]


def test_eval_bracket_repeated_and_zero_arguments():
    g = ex2_4_base()
    assert g.eval(e5[0], e5[0], e5[0]) == (0,) * 5
    assert g.eval((0,) * 5, e5[2], e5[3]) == (0,) * 5


def test_eval_bracket_antisymmetric_completion():
    g = ex2_4_base()
    assert g.eval(e5[3], e5[2], e5[1]) == tuple(-c for c in e5[0])
    assert g.eval(e5[4], e5[1], e5[3]) == tuple(-c for c in e5[1])     # [e5,e2,e4] = [e2,e4,e5]


def test_eval_bracket_arity_error():
    with pytest.raises(ArityMismatch):
        eval_bracket(ex2_4_base(), [e5[0], e5[1]])


# ---------------------------------------------------------------- axioms

def test_untwisted_bases_verify():
    for g in (ex2_4_base(), ex3_5_base(), abelian(3, 4)):
        r = verify_algebra(g)
        assert r.passed, [c for c in r.checks if not c]


def test_example_twist_maps_are_not_morphisms():
    # the printed alpha sends e1 -> -e1 while fixing e2, e3, e4, so alpha[e2,e3,e4] = -e1
    w = morphism_witness(EX2_4_ALPHA, ex2_4_base())
    assert w == ((1, 2, 3), (-2, 0, 0, 0, 0))
    assert morphism_witness(EX2_4_BETA, ex2_4_base()) is not None
    with pytest.raises(NotMorphism):
        yau_twist(ex2_4_base(), EX2_4_ALPHA, EX2_4_BETA)


def test_example_2_4_twist_report():
    r = verify_algebra(ex2_4_twisted())
    assert r.commuting and r.bihom_skewsymmetry
    assert not r.alpha_multiplicative and not r.beta_multiplicative
    assert not r.n_bihom_jacobi
    assert r.n_bihom_jacobi.witness == (0, 1, 1, 3, 4)
    lhs, rhs = oracle.jacobi_lhs_rhs(ex2_4_twisted(), [e5[0], e5[1]], [e5[1], e5[3], e5[4]])
    assert tuple(a - b for a, b in zip(lhs, rhs)) == r.n_bihom_jacobi.discrepancy


def test_untwisted_bracket_with_nontrivial_beta_fails():
    g = ex2_4_base()
    bad = NBiHomLieAlgebra(3, 5, g.bracket, Matrix.identity(5), EX2_4_BETA)
    r = verify_algebra(bad)
    assert not r.passed
    failing = [c for c in r.checks if not c]
    assert all(c.witness is not None for c in failing)


def test_twisted_bracket_not_plainly_antisymmetric():
    T = ex2_4_twisted()
    assert T.eval(e5[1], e5[2], e5[1]) == e5[0]        # [e2,e3,e2]_{ab} = [e2,e3,e4] = e1


def test_yau_twist_identity_is_noop():
    g = ex2_4_base()
    assert yau_twist(g, Matrix.identity(5), Matrix.identity(5)).bracket == g.bracket


def test_example_3_5_twisted_value():
    assert ex3_5_twisted().eval(e3[0], e3[1], e3[2]) == (-1, 0, 0)
    assert is_morphism(EX3_5_ALPHA, ex3_5_base(), ex3_5_base())
    assert morphism_witness(EX3_5_BETA, ex3_5_base()) == ((0, 1, 2), (-2, 0, 0))


def test_example_3_5_twist_report():
    r = verify_algebra(ex3_5_twisted())
    assert r.alpha_multiplicative and not r.beta_multiplicative
    assert r.bihom_skewsymmetry and r.n_bihom_jacobi


@given(st.integers(0, 10_000))
def test_random_yau_twists_verify_against_oracle(seed):
    rng = random.Random(seed)
    A = random_instance(rng, dim=3)
    r = verify_algebra(A)
    assert r.passed
    assert oracle.skew_holds(A) and oracle.jacobi_holds(A)
    assert oracle.multiplicative(A, A.alpha) and oracle.multiplicative(A, A.beta)


@given(st.integers(0, 10_000))
def test_verdicts_agree_with_oracle_on_perturbed_brackets(seed):
    rng = random.Random(seed)
    A = random_instance(rng, dim=3)
    t = tuple(rng.randrange(3) for _ in range(3))
    k = rng.randrange(3)
    data = {key: dict(v) for key, v in A.bracket.items()}
    data.setdefault(t, {})[k] = data.get(t, {}).get(k, 0) + 1
    from nbihom.tensors import Tensor
    B = NBiHomLieAlgebra(3, 3, Tensor(3, 3, 3, data), A.alpha, A.beta)
    r = verify_algebra(B)
    assert bool(r.n_bihom_jacobi) == oracle.jacobi_holds(B)
    assert bool(r.bihom_skewsymmetry) == oracle.skew_holds(B)
    assert bool(r.alpha_multiplicative) == oracle.multiplicative(B, B.alpha)


def test_diagonal_morphisms_are_morphisms():
    g = ex3_5_base()
    ms = diagonal_morphisms(g)
    assert ms and all(is_morphism(m, g, g) for m in ms)


# ---------------------------------------------------------------- morphisms, ideals, center

def test_identity_and_zero_are_morphisms():
    g = ex2_4_base()
    assert is_morphism(Matrix.identity(5), g, g)
    assert is_morphism(Matrix.zeros(5), g, g)


def test_ideal_examples():
    g = ex2_4_base()
    assert is_ideal(Subspace.zero(5), g) and is_ideal(Subspace.full(5), g)
    assert is_ideal(span([e5[0]], 5), g)
    assert not is_ideal(span([e5[4]], 5), g)
    assert is_subalgebra(span([e5[0], e5[1]], 5), g)


def test_ideal_report_flags():
    rep = ideal_report(span([e5[0]], 5), ex2_4_base())
    assert rep.literal and rep.all_slot and rep.alpha_stable and rep.beta_stable


def test_center_examples():
    assert center(abelian(3, 3)) == Subspace.full(3)
    assert center(ex2_4_base()) == span([e5[0]], 5)
    assert center(ex3_5_base()).dim == 0
    assert is_ideal(center(ex2_4_base()), ex2_4_base())
    assert center_is_stable(ex2_4_base())


# ---------------------------------------------------------------- series

def test_abelian_series():
    A = abelian(3, 2)
    assert is_solvable(A) == (True, 1)
    assert is_nilpotent(A) == (True, 1)


def test_example_2_4_series():
    g = ex2_4_base()
    ds = derived_series(g)
    assert ds == [Subspace.full(5), span(e5[:3], 5), span([e5[0]], 5), Subspace.zero(5)]
    assert is_solvable(g) == (True, 3)
    cs = central_series(g)
    assert [s.dim for s in cs] == [5, 3]
    assert cs[-1] == span(e5[:3], 5)
    assert is_nilpotent(g)[0] is False


def test_nilpotent_instance():
    A = nilpotent_instance()
    assert verify_algebra(A).passed
    assert is_nilpotent(A)[0]
    assert not is_nilpotent(ex3_5_base())[0]


@given(st.integers(0, 10_000))
def test_series_terms_are_nested_and_stable(seed):
    A = random_instance(random.Random(seed))
    for series in (derived_series(A), central_series(A)):
        for big, small in zip(series, series[1:]):
            assert small <= big
            assert small.is_stable(A.alpha) and small.is_stable(A.beta)
    assert center_is_stable(A) and is_ideal(center(A), A)


def test_rigid_instance_is_genuine():
    assert verify_algebra(rigid_instance()).passed


def test_random_base_dimensions():
    rng = random.Random(3)
    for d in (3, 4):
        assert verify_algebra(random_base(rng, d)).passed
    with pytest.raises(ValueError):
        random_base(rng, 5)
