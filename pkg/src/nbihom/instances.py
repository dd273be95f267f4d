"""Worked examples and random generators for the test suites.

The named examples reproduce two classical 3-Lie algebras (dimension 5 and
dimension 3) together with the twisting maps attached to them in the
literature.  Those maps are *not* all algebra morphisms, so the twisted
objects are built without the morphism check; the checkers then report what
fails.  ``rigid_instance`` and ``nilpotent_instance`` are genuine twists.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .algebra import NBiHomLieAlgebra, verify_algebra, yau_twist
from .linalg import Matrix, invert
from .representation import Representation, twist_representation
from .tensors import Tensor


def _e(d: int, i: int, c=1) -> list:
    v = [0] * d
    v[i] = c
    return v


# ---------------------------------------------------------------- named examples

def ex2_4_base() -> NBiHomLieAlgebra:
    """[e2,e3,e4] = e1, [e2,e4,e5] = -e2, [e3,e4,e5] = e3."""
    return NBiHomLieAlgebra.from_structure(
        3, 5, {(1, 2, 3): _e(5, 0), (1, 3, 4): _e(5, 1, -1), (2, 3, 4): _e(5, 2)},
        antisymmetrize=True)


EX2_4_ALPHA = Matrix.diag([-1, 1, 1, 1, -1])
EX2_4_BETA = Matrix.from_rows([[0, 0, 0, 0, -1],
                               [0, 0, 0, -1, 0],
                               [0, 0, -1, 0, 0],
                               [0, 1, 0, 0, 0],
                               [1, 0, 0, 0, 0]])


def ex2_4_twisted() -> NBiHomLieAlgebra:
    return yau_twist(ex2_4_base(), EX2_4_ALPHA, EX2_4_BETA, check=False)


def ex3_5_base() -> NBiHomLieAlgebra:
    """[e1,e2,e3] = e1."""
    return NBiHomLieAlgebra.from_structure(3, 3, {(0, 1, 2): _e(3, 0)}, antisymmetrize=True)


EX3_5_ALPHA = Matrix.diag([-1, 1, 1])
EX3_5_BETA = Matrix.diag([-1, -1, 1])
EX3_5_ALPHA_V = Matrix.diag([-1, 1])
EX3_5_BETA_V = Matrix.diag([1, -1])
EX3_5_RHO = {(0, 1): [[0, 1], [0, 0]], (1, 2): [[1, 0], [0, 0]]}


def ex3_5_rep() -> Representation:
    ident = Matrix.identity(2)
    return Representation(ex3_5_base(), 2, dict(EX3_5_RHO), ident, ident)


def ex3_5_twisted() -> NBiHomLieAlgebra:
    return yau_twist(ex3_5_base(), EX3_5_ALPHA, EX3_5_BETA, check=False)


def ex3_5_twisted_rep() -> Representation:
    return twist_representation(ex3_5_base(), ex3_5_rep(), EX3_5_ALPHA, EX3_5_BETA,
                                EX3_5_ALPHA_V, EX3_5_BETA_V, check=False)


# printed values of the twisted action: (wedge pair, module index) -> image
EX3_5_TWISTED_RHO_VALUES = {
    ((0, 1), 0): (0, 0), ((0, 1), 1): (1, 0),
    ((0, 2), 0): (0, 0), ((0, 2), 1): (0, 0),
    ((1, 2), 0): (1, 0), ((1, 2), 1): (0, 0),
}


def rigid_instance() -> NBiHomLieAlgebra:
    """Yau twist of [e1,e2,e3]=e1 by alpha=diag(1,2,1/2), beta=id; its H^2 vanishes."""
    return yau_twist(ex3_5_base(), Matrix.diag([1, 2, Fraction(1, 2)]), Matrix.identity(3))


def nilpotent_instance() -> NBiHomLieAlgebra:
    """Heisenberg [e1,e2]=e3 (n=2) twisted by two involutive morphisms."""
    heis = NBiHomLieAlgebra.from_structure(2, 3, {(0, 1): _e(3, 2)}, antisymmetrize=True)
    return yau_twist(heis, Matrix.diag([-1, 1, -1]), Matrix.diag([1, -1, -1]))


# ---------------------------------------------------------------- random suite

# structure constants of 4-dimensional 3-Lie algebras (kept only if they verify)
_DIM4 = [
    {(1, 2, 3): (1, 0, 0, 0)},
    {(0, 1, 2): (1, 0, 0, 0)},
    {(1, 2, 3): (1, 0, 0, 0), (0, 2, 3): (0, 1, 0, 0)},
    {(1, 2, 3): (1, 0, 0, 0), (0, 2, 3): (0, -1, 0, 0)},
    {(1, 2, 3): (0, 1, 0, 0), (0, 2, 3): (1, 0, 0, 0)},
    {(1, 2, 3): (1, 0, 0, 0), (0, 2, 3): (0, 1, 0, 0), (0, 1, 3): (0, 0, 1, 0)},
    {(1, 2, 3): (1, 0, 0, 0), (0, 2, 3): (0, -1, 0, 0), (0, 1, 3): (0, 0, 1, 0),
     (0, 1, 2): (0, 0, 0, -1)},
    {(0, 2, 3): (1, 0, 0, 0), (1, 2, 3): (0, 1, 0, 0)},
    {(0, 2, 3): (1, 0, 0, 0), (1, 2, 3): (1, 1, 0, 0)},
]

TWIST_VALUES = (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2))
INVOLUTIVE_VALUES = (1, -1)


def random_base(rng: random.Random, dim: int) -> NBiHomLieAlgebra:
    """A random 3-Lie algebra (untwisted) of dimension 3 or 4 in a canonical basis."""
    if dim == 3:
        v = [0, 0, 0]
        while not any(v):
            v = [rng.randint(-2, 2) for _ in range(3)]
        return NBiHomLieAlgebra.from_structure(3, 3, {(0, 1, 2): v}, antisymmetrize=True)
    if dim == 4:
        while True:
            A = NBiHomLieAlgebra.from_structure(3, 4, rng.choice(_DIM4), antisymmetrize=True)
            if verify_algebra(A).passed:
                return A
    raise ValueError("random bases are available in dimension 3 and 4")


def diagonal_morphisms(A: NBiHomLieAlgebra, values=TWIST_VALUES) -> list[Matrix]:
    """Every diagonal bracket morphism with entries from ``values``."""
    supp = [(t, list(v)) for t, v in A.bracket.items()]
    out = []
    for d in product(values, repeat=A.dim):
        ok = True
        for t, ls in supp:
            p = Fraction(1)
            for i in t:
                p *= d[i]
            if any(d[l] != p for l in ls):
                ok = False
                break
        if ok:
            out.append(Matrix.diag(d))
    return out


def random_change_of_basis(rng: random.Random, dim: int, steps: int = 3) -> Matrix:
    """Product of a few elementary shears with small integer multipliers."""
    P = Matrix.identity(dim)
    for _ in range(steps):
        i, j = rng.sample(range(dim), 2)
        rows = [list(r) for r in Matrix.identity(dim).entries]
        rows[i][j] = rng.choice((-1, 1, 2))
        P = Matrix.from_rows(rows) @ P
    return P


def transport(A: NBiHomLieAlgebra, P: Matrix) -> NBiHomLieAlgebra:
    """The isomorphic copy with bracket P[P^-1 x, ..] and twists P a P^-1."""
    Pi = invert(P)
    bracket = A.bracket.twisted([Pi] * A.n).compose_out(P)
    return NBiHomLieAlgebra(A.n, A.dim, bracket, P @ A.alpha @ Pi, P @ A.beta @ Pi)


def random_instance(rng: random.Random, dim: int | None = None, involutive: bool = False,
                    untwisted: bool = False, mix: bool = True) -> NBiHomLieAlgebra:
    """A verified n=3 BiHom instance: random base, random diagonal twists, random basis."""
    dim = dim or rng.choice((3, 4))
    base = random_base(rng, dim)
    if untwisted:
        A = base
    else:
        ms = diagonal_morphisms(base, INVOLUTIVE_VALUES if involutive else TWIST_VALUES)
        A = yau_twist(base, rng.choice(ms), rng.choice(ms))
    return transport(A, random_change_of_basis(rng, dim)) if mix else A


def random_suite(seed: int = 0, count: int = 25, **kw) -> list[NBiHomLieAlgebra]:
    rng = random.Random(seed)
    return [random_instance(rng, **kw) for _ in range(count)]


def random_tensor(rng: random.Random, arity: int, in_dim: int, out_dim: int,
                  density: float = 0.3, lo: int = -2, hi: int = 2) -> Tensor:
    data = {}
    for t in product(range(in_dim), repeat=arity):
        if rng.random() < density:
            data[t] = {k: Fraction(rng.randint(lo, hi)) for k in range(out_dim)}
    return Tensor(arity, in_dim, out_dim, data)


def random_vector(rng: random.Random, dim: int, lo: int = -3, hi: int = 3) -> list[Fraction]:
    return [Fraction(rng.randint(lo, hi)) for _ in range(dim)]


def random_element(rng: random.Random, basis: list, lo: int = -3, hi: int = 3):
    """Random integer combination of a list of Matrix or Tensor basis elements."""
    acc = None
    for b in basis:
        c = rng.randint(lo, hi)
        term = b.scale(c)
        acc = term if acc is None else acc + term
    return acc


# ---------------------------------------------------------------- bundled files

def bundled() -> dict:
    """``file name -> (object, metadata[, twist maps])`` for the files shipped in ``data/``."""
    note = "literature worked example"
    return {
        "ex2_4.alg": (ex2_4_base(), {
            "name": "ex2_4", "description": "5-dimensional 3-Lie algebra, identity twists; "
                                            "twist_maps holds the accompanying alpha and beta",
            "provenance": note}, {"alpha": EX2_4_ALPHA, "beta": EX2_4_BETA}),
        "ex2_4_twisted.alg": (ex2_4_twisted(), {
            "name": "ex2_4_twisted",
            "description": "Yau twist of ex2_4 by alpha=diag(-1,1,1,1,-1) and the signed "
                           "reversal beta (built without the morphism check)",
            "provenance": note}),
        "ex3_5.alg": (ex3_5_base(), {
            "name": "ex3_5", "description": "3-dimensional 3-Lie algebra [e1,e2,e3]=e1; "
                                            "twist_maps holds the accompanying alpha and beta",
            "provenance": note}, {"alpha": EX3_5_ALPHA, "beta": EX3_5_BETA}),
        "ex3_5_rep.rep": (ex3_5_rep(), {
            "name": "ex3_5_rep", "description": "2-dimensional representation of ex3_5",
            "provenance": note}, {"alpha": EX3_5_ALPHA, "beta": EX3_5_BETA,
                                  "alpha_v": EX3_5_ALPHA_V, "beta_v": EX3_5_BETA_V}),
        "ex3_5_twisted.alg": (ex3_5_twisted(), {
            "name": "ex3_5_twisted",
            "description": "Yau twist of ex3_5 by alpha=diag(-1,1,1), beta=diag(-1,-1,1) "
                           "(built without the morphism check)",
            "provenance": note}),
        "ex3_5_twisted_rep.rep": (ex3_5_twisted_rep(), {
            "name": "ex3_5_twisted_rep",
            "description": "beta_V o rho with alpha_V=diag(-1,1), beta_V=diag(1,-1)",
            "provenance": note}),
        "rigid.alg": (rigid_instance(), {
            "name": "rigid", "description": "Yau twist of ex3_5 by diag(1,2,1/2) and id; H^2 = 0",
            "provenance": "constructed"}),
        "abelian_3_2.alg": (NBiHomLieAlgebra.from_structure(3, 2, {}), {
            "name": "abelian_3_2", "description": "abelian, n=3, dim 2, identity twists",
            "provenance": "constructed"}),
    }
