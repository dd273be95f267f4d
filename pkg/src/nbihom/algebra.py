"""n-BiHom-Lie algebras: axioms, Yau twists, morphisms, ideals and series."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Sequence

from .linalg import (DimMismatch, Matrix, Subspace, Vector, commutes, kernel_of_rows,
                     unit_vector)
from .tensors import Tensor, axpy, clean, dense, permutation_sign


class AlgebraError(Exception):
    pass


class ArityMismatch(AlgebraError):
    pass


class NotMorphism(AlgebraError):
    pass


class NotCommuting(AlgebraError):
    pass


@dataclass(eq=False)
class NBiHomLieAlgebra:
    n: int
    dim: int
    bracket: Tensor
    alpha: Matrix
    beta: Matrix
    basis_names: tuple = ()

    def __post_init__(self):
        if self.n < 2:
            raise ArityMismatch("arity must be at least 2")
        if (self.bracket.arity, self.bracket.in_dim, self.bracket.out_dim) != (self.n, self.dim, self.dim):
            raise DimMismatch("bracket tensor does not match (n, dim)")
        for m in (self.alpha, self.beta):
            if (m.rows, m.cols) != (self.dim, self.dim):
                raise DimMismatch("twist maps must be dim x dim")
        if not self.basis_names:
            self.basis_names = tuple(f"e{i + 1}" for i in range(self.dim))
        self.basis_names = tuple(self.basis_names)

    @classmethod
    def from_structure(cls, n: int, dim: int, brackets: dict, alpha: Matrix | None = None,
                       beta: Matrix | None = None, antisymmetrize: bool = False,
                       basis_names: Sequence[str] = ()) -> "NBiHomLieAlgebra":
        """Build from ``{index tuple: vector}``.

        With ``antisymmetrize`` every listed tuple is spread over all slot
        permutations with the permutation sign (plain n-Lie input).
        """
        data: dict = {}
        for t, v in brackets.items():
            t = tuple(t)
            if len(t) != n:
                raise ArityMismatch(f"bracket key {t} does not have {n} entries")
            val = {i: Fraction(a) for i, a in enumerate(v) if a} if not isinstance(v, dict) else dict(v)
            if antisymmetrize:
                if len(set(t)) != n:
                    continue
                for perm in permutations(range(n)):
                    s = tuple(t[p] for p in perm)
                    sign = permutation_sign(perm)
                    axpy(data.setdefault(s, {}), sign, val)
            else:
                axpy(data.setdefault(t, {}), 1, val)
        ident = Matrix.identity(dim)
        return cls(n, dim, Tensor(n, dim, dim, data), alpha or ident, beta or ident, tuple(basis_names))

    def eval(self, *args: Sequence) -> Vector:
        return eval_bracket(self, list(args))

    def is_untwisted(self) -> bool:
        return self.alpha.is_identity() and self.beta.is_identity()

    def __eq__(self, other) -> bool:
        if not isinstance(other, NBiHomLieAlgebra):
            return NotImplemented
        return (self.n, self.dim, self.bracket, self.alpha, self.beta) == (
            other.n, other.dim, other.bracket, other.alpha, other.beta)

    def __repr__(self) -> str:
        return f"NBiHomLieAlgebra(n={self.n}, dim={self.dim}, nnz={len(self.bracket.data)})"


def abelian(n: int, dim: int, alpha: Matrix | None = None, beta: Matrix | None = None) -> NBiHomLieAlgebra:
    return NBiHomLieAlgebra.from_structure(n, dim, {}, alpha, beta)


def eval_bracket(A: NBiHomLieAlgebra, args: Sequence[Sequence]) -> Vector:
    if len(args) != A.n:
        raise ArityMismatch(f"bracket takes {A.n} arguments, got {len(args)}")
    return A.bracket(*args)


# ---------------------------------------------------------------- axioms

@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None
    discrepancy: tuple | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "witness": list(self.witness) if self.witness is not None else None,
                "discrepancy": self.discrepancy, "detail": self.detail}


def _ok(name: str) -> CheckResult:
    return CheckResult(name, True)


@dataclass
class AxiomReport:
    commuting: CheckResult
    alpha_multiplicative: CheckResult
    beta_multiplicative: CheckResult
    bihom_skewsymmetry: CheckResult
    n_bihom_jacobi: CheckResult

    @property
    def checks(self) -> list[CheckResult]:
        return [self.commuting, self.alpha_multiplicative, self.beta_multiplicative,
                self.bihom_skewsymmetry, self.n_bihom_jacobi]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _matrix_commutation(a: Matrix, b: Matrix, name: str) -> CheckResult:
    d = a @ b - b @ a
    for i, j in product(range(d.rows), range(d.cols)):
        if d[i, j]:
            return CheckResult(name, False, (j,), d.column(j), "column of ab - ba")
    return _ok(name)


def _multiplicative(A: NBiHomLieAlgebra, m: Matrix, name: str) -> CheckResult:
    lhs = A.bracket.compose_out(m)
    rhs = A.bracket.twisted([m] * A.n)
    for t in product(range(A.dim), repeat=A.n):
        a, b = lhs.at(t), rhs.at(t)
        if a != b:
            diff = dict(a)
            axpy(diff, -1, b)
            return CheckResult(name, False, t, dense(clean(diff), A.dim))
    return _ok(name)


def skew_tables(A: NBiHomLieAlgebra) -> Tensor:
    """Table of [beta x_1, ..., beta x_{n-1}, alpha x_n] on basis tuples."""
    return A.bracket.twisted([A.beta] * (A.n - 1) + [A.alpha])


def check_twisted_skew(table: Tensor, n: int, dim: int, name: str = "bihom_skewsymmetry") -> CheckResult:
    """Skewsymmetry rules on a pre-twisted table ``T(x) = f(beta x.., alpha x_n)``.

    Witness is ``(x_1, ..., x_n, k)``: k < n-1 swaps slots k, k+1 (1-based),
    k = n-1 is the last-two-slot rule.
    """
    for t in product(range(dim), repeat=n):
        base = table.at(t)
        for k in range(1, n):
            s = list(t)
            if k < n - 1:
                s[k - 1], s[k] = s[k], s[k - 1]
            else:
                s[n - 2], s[n - 1] = s[n - 1], s[n - 2]
            other = table.at(tuple(s))
            if not base and not other:
                continue
            total = dict(base)
            axpy(total, 1, other)
            total = clean(total)
            if total:
                return CheckResult(name, False, t + (k,), dense(total, table.out_dim))
    return _ok(name)


def jacobi_discrepancy(t_in: Tensor, t_out: Tensor, n: int, x: tuple, y: tuple) -> dict:
    """LHS - RHS of the twisted Jacobi identity at basis tuples (x, y)."""
    acc = dict(t_out.contract_last(x, t_in.at(y)))
    for k in range(n):
        v = t_in.at(x + (y[k],))
        if v:
            sign = -1 if (n - 1 - k) % 2 else 1   # (-1)^(n-k) with 1-based k
            axpy(acc, -sign, t_out.contract_last(y[:k] + y[k + 1:], v))
    return clean(acc)


def jacobi_tables(A: NBiHomLieAlgebra) -> tuple[Tensor, Tensor]:
    b2 = A.beta @ A.beta
    t_in = skew_tables(A)
    t_out = A.bracket.twisted([b2] * (A.n - 1) + [Matrix.identity(A.dim)])
    return t_in, t_out


def check_jacobi(A: NBiHomLieAlgebra) -> CheckResult:
    n, d = A.n, A.dim
    t_in, t_out = jacobi_tables(A)
    for x in product(range(d), repeat=n - 1):
        for y in product(range(d), repeat=n):
            disc = jacobi_discrepancy(t_in, t_out, n, x, y)
            if disc:
                return CheckResult("n_bihom_jacobi", False, x + y, dense(disc, d))
    return _ok("n_bihom_jacobi")


def verify_algebra(A: NBiHomLieAlgebra) -> AxiomReport:
    return AxiomReport(
        commuting=_matrix_commutation(A.alpha, A.beta, "commuting"),
        alpha_multiplicative=_multiplicative(A, A.alpha, "alpha_multiplicative"),
        beta_multiplicative=_multiplicative(A, A.beta, "beta_multiplicative"),
        bihom_skewsymmetry=check_twisted_skew(skew_tables(A), A.n, A.dim),
        n_bihom_jacobi=check_jacobi(A),
    )


# ---------------------------------------------------------------- morphisms, twists

def preserves_bracket(f: Matrix, A: NBiHomLieAlgebra, B: NBiHomLieAlgebra) -> bool:
    if A.n != B.n:
        raise ArityMismatch("algebras of different arity")
    if (f.rows, f.cols) != (B.dim, A.dim):
        raise DimMismatch(f"map must be {B.dim}x{A.dim}")
    return A.bracket.compose_out(f) == B.bracket.twisted([f] * A.n)


def is_morphism(f: Matrix, A: NBiHomLieAlgebra, B: NBiHomLieAlgebra) -> bool:
    if not preserves_bracket(f, A, B):
        return False
    return f @ A.alpha == B.alpha @ f and f @ A.beta == B.beta @ f


def yau_twist(L: NBiHomLieAlgebra, a: Matrix, b: Matrix, check: bool = True) -> NBiHomLieAlgebra:
    """[x_1..x_n]_ab = [a x_1, ..., a x_{n-1}, b x_n]_L with twists (a, b)."""
    if check:
        if not L.is_untwisted():
            raise AlgebraError("the Yau twist starts from an algebra with identity twists")
        for name, m in (("a", a), ("b", b)):
            if not preserves_bracket(m, L, L):
                raise NotMorphism(f"{name} is not a bracket morphism")
        if not commutes(a, b):
            raise NotCommuting("a and b do not commute")
    table = L.bracket.twisted([a] * (L.n - 1) + [b])
    return NBiHomLieAlgebra(L.n, L.dim, table, a, b, L.basis_names)


def morphism_witness(m: Matrix, L: NBiHomLieAlgebra):
    """First basis tuple where ``m`` fails to preserve the bracket, with the discrepancy."""
    lhs = L.bracket.compose_out(m)
    rhs = L.bracket.twisted([m] * L.n)
    for t in product(range(L.dim), repeat=L.n):
        if lhs.at(t) != rhs.at(t):
            diff = dict(lhs.at(t))
            axpy(diff, -1, rhs.at(t))
            return t, dense(clean(diff), L.dim)
    return None


# ---------------------------------------------------------------- subspaces

def _check_ambient(S: Subspace, A: NBiHomLieAlgebra) -> None:
    if S.ambient_dim != A.dim:
        raise DimMismatch(f"subspace of Q^{S.ambient_dim} in a {A.dim}-dimensional algebra")


def _bracket_span(A: NBiHomLieAlgebra, slots: Sequence[Sequence]) -> Subspace:
    """Span of brackets with slot i drawn from the vector list ``slots[i]``."""
    sp = [[{j: a for j, a in enumerate(v) if a} for v in s] for s in slots]
    out = []
    for combo in product(*sp):
        v = A.bracket.eval_sparse(list(combo))
        if v:
            out.append(dense(v, A.dim))
    return Subspace.span(out, A.dim)


def _units(d: int) -> list[Vector]:
    return [unit_vector(d, i) for i in range(d)]


@dataclass
class IdealReport:
    literal: bool
    all_slot: bool
    alpha_stable: bool
    beta_stable: bool

    @property
    def is_ideal(self) -> bool:
        return self.literal


def ideal_report(I: Subspace, A: NBiHomLieAlgebra) -> IdealReport:
    _check_ambient(I, A)
    stable_a = I.is_stable(A.alpha)
    stable_b = I.is_stable(A.beta)
    e = _units(A.dim)
    first = _bracket_span(A, [I.basis] + [e] * (A.n - 1)) <= I
    every = first and all(
        _bracket_span(A, [e] * k + [I.basis] + [e] * (A.n - 1 - k)) <= I for k in range(1, A.n))
    return IdealReport(stable_a and stable_b and first, stable_a and stable_b and every,
                       stable_a, stable_b)


def is_ideal(I: Subspace, A: NBiHomLieAlgebra) -> bool:
    """alpha(I), beta(I) inside I and [I, g, ..., g] inside I (first slot only)."""
    return ideal_report(I, A).literal


def is_subalgebra(H: Subspace, A: NBiHomLieAlgebra) -> bool:
    _check_ambient(H, A)
    return (H.is_stable(A.alpha) and H.is_stable(A.beta)
            and _bracket_span(A, [H.basis] * A.n) <= H)


def center(A: NBiHomLieAlgebra) -> Subspace:
    """Kernel of x -> [x, e_J] over all basis (n-1)-tuples J."""
    d = A.dim
    rows = []
    for J in product(range(d), repeat=A.n - 1):
        for k in range(d):
            r = {}
            for i in range(d):
                c = A.bracket.at((i,) + J).get(k)
                if c:
                    r[i] = c
            if r:
                rows.append(r)
    return kernel_of_rows(rows, d)


def center_is_stable(A: NBiHomLieAlgebra) -> bool:
    z = center(A)
    return z.is_stable(A.alpha) and z.is_stable(A.beta)


def _series(A: NBiHomLieAlgebra, step) -> list[Subspace]:
    terms = [Subspace.full(A.dim)]
    while True:
        nxt = step(terms[-1])
        if nxt == terms[-1]:
            return terms
        terms.append(nxt)
        if nxt.dim == 0:
            return terms


def derived_series(A: NBiHomLieAlgebra) -> list[Subspace]:
    """g^(0) = g, g^(p+1) = [g^(p), ..., g^(p), g]; stops at 0 or stabilization."""
    e = _units(A.dim)
    return _series(A, lambda s: _bracket_span(A, [s.basis] * (A.n - 1) + [e]))


def central_series(A: NBiHomLieAlgebra) -> list[Subspace]:
    """g^0 = g, g^(p+1) = [g^p, g, ..., g]."""
    e = _units(A.dim)
    return _series(A, lambda s: _bracket_span(A, [s.basis] + [e] * (A.n - 1)))


def _hits_zero(terms: list[Subspace]) -> tuple[bool, int]:
    if terms[-1].dim == 0:
        return True, len(terms) - 1
    return False, len(terms) - 1


def is_solvable(A: NBiHomLieAlgebra) -> tuple[bool, int]:
    """(solvable?, k) with k the index of the first zero term (or of stabilization)."""
    return _hits_zero(derived_series(A))


def is_nilpotent(A: NBiHomLieAlgebra) -> tuple[bool, int]:
    return _hits_zero(central_series(A))
