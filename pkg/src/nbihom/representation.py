"""Representations rho: wedge^{n-1} g -> End(V) of n-BiHom-Lie algebras.

Matrices inside the condition checks are kept sparse (``{(i, j): c}``); the
public API speaks :class:`~nbihom.linalg.Matrix`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .algebra import AlgebraError, CheckResult, NBiHomLieAlgebra, preserves_bracket
from .linalg import DimMismatch, Matrix, Vector, commutes, is_invertible, kernel_of_rows
from .tensors import Tensor, axpy, clean, column_supports, permutation_sign, sparse


class RepresentationError(AlgebraError):
    pass


class BracketNotWedgeCompatible(RepresentationError):
    def __init__(self, witness: tuple):
        super().__init__(f"bracket is not antisymmetric in its first n-1 slots at {witness}")
        self.witness = witness


class CompatibilityFailure(RepresentationError):
    pass


class InvalidRepresentation(RepresentationError):
    pass


# ---------------------------------------------------------------- sparse matrices

def smat(m: Matrix) -> dict:
    return {(i, j): a for i, r in enumerate(m.entries) for j, a in enumerate(r) if a}


def to_matrix(d: dict, rows: int, cols: int) -> Matrix:
    grid = [[Fraction(0)] * cols for _ in range(rows)]
    for (i, j), a in d.items():
        grid[i][j] = a
    return Matrix(rows, cols, tuple(tuple(r) for r in grid))


def smul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    by_row: dict = {}
    for (k, j), c in b.items():
        by_row.setdefault(k, []).append((j, c))
    out: dict = {}
    for (i, k), c in a.items():
        for j, d in by_row.get(k, ()):
            out[(i, j)] = out.get((i, j), 0) + c * d
    return clean(out)


# ---------------------------------------------------------------- the type

@dataclass(eq=False)
class Representation:
    algebra: NBiHomLieAlgebra
    vdim: int
    rho: dict
    alpha_v: Matrix
    beta_v: Matrix
    full_tensor: bool = False

    def __post_init__(self):
        k = self.algebra.n - 1
        norm: dict = {}
        for t, m in self.rho.items():
            t = tuple(t)
            if len(t) != k:
                raise DimMismatch(f"rho key {t} must have {k} entries")
            if not isinstance(m, Matrix):
                m = Matrix.from_rows(m, self.vdim)
            if (m.rows, m.cols) != (self.vdim, self.vdim):
                raise DimMismatch("rho values must be vdim x vdim")
            s = smat(m)
            if not s:
                continue
            if self.full_tensor:
                norm[t] = s
                continue
            sign = permutation_sign(t)
            if sign == 0:
                raise InvalidRepresentation(f"rho{t} is nonzero on a repeated argument")
            key = tuple(sorted(t))
            if key in norm:
                raise InvalidRepresentation(f"rho given twice on the wedge {key}")
            norm[key] = s if sign == 1 else {ij: -a for ij, a in s.items()}
        self._sp = norm
        self.rho = {t: to_matrix(s, self.vdim, self.vdim) for t, s in norm.items()}
        for m in (self.alpha_v, self.beta_v):
            if (m.rows, m.cols) != (self.vdim, self.vdim):
                raise DimMismatch("alpha_v and beta_v must be vdim x vdim")

    @property
    def n(self) -> int:
        return self.algebra.n

    def basis_value(self, t: tuple) -> dict:
        """Sparse rho(e_{t1}, ..., e_{t(n-1)}) including the permutation sign."""
        if self.full_tensor:
            return self._sp.get(t, {})
        sign = permutation_sign(t)
        if not sign:
            return {}
        m = self._sp.get(tuple(sorted(t)), {})
        return m if sign == 1 else {ij: -a for ij, a in m.items()}

    def eval_sparse(self, args: Sequence[dict]) -> dict:
        acc: dict = {}
        for combo in product(*(list(a.items()) for a in args)):
            m = self.basis_value(tuple(i for i, _ in combo))
            if m:
                c = Fraction(1)
                for _, a in combo:
                    c *= a
                axpy(acc, c, m)
        return clean(acc)

    def matrix(self, X: Sequence[Sequence]) -> Matrix:
        if len(X) != self.n - 1:
            raise DimMismatch(f"rho takes {self.n - 1} algebra elements")
        for x in X:
            if len(x) != self.algebra.dim:
                raise DimMismatch("algebra element of the wrong length")
        return to_matrix(self.eval_sparse([sparse(x) for x in X]), self.vdim, self.vdim)

    def twisted_table(self, m: Matrix) -> dict:
        """``{t: rho(m e_{t1}, ..., m e_{t(n-1)})}`` over all basis tuples (sparse)."""
        cols = column_supports(m)
        out = {}
        for t in product(range(self.algebra.dim), repeat=self.n - 1):
            v = self.eval_sparse([dict(cols[i]) for i in t])
            if v:
                out[t] = v
        return out


def eval_rho(R: Representation, X: Sequence[Sequence], v: Sequence) -> Vector:
    if len(v) != R.vdim:
        raise DimMismatch(f"module vector of length {len(v)}, expected {R.vdim}")
    return R.matrix(X)(v)


def zero_representation(A: NBiHomLieAlgebra, vdim: int, alpha_v: Matrix | None = None,
                        beta_v: Matrix | None = None) -> Representation:
    ident = Matrix.identity(vdim)
    return Representation(A, vdim, {}, alpha_v or ident, beta_v or ident)


# ---------------------------------------------------------------- Def-style checks

@dataclass
class RepReport:
    cond1: CheckResult
    cond2: CheckResult
    cond3: CheckResult
    cond4: CheckResult
    cond4_as_printed: CheckResult | None = None

    @property
    def checks(self) -> list[CheckResult]:
        return [self.cond1, self.cond2, self.cond3, self.cond4]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _fail(name: str, witness: tuple, d: dict, vdim: int) -> CheckResult:
    m = to_matrix(d, vdim, vdim)
    return CheckResult(name, False, witness, tuple(a for r in m.entries for a in r),
                       "row-major flattened matrix discrepancy")


def _ok(name: str) -> CheckResult:
    return CheckResult(name, True)


class _Ctx:
    """Shared twisted tables for the four condition checks."""

    def __init__(self, R: Representation):
        A = R.algebra
        self.R, self.A, self.n, self.d = R, A, A.n, A.dim
        self.ab = A.alpha @ A.beta
        self.cols_b = [dict(c) for c in column_supports(A.beta)]
        self.cols_a = [dict(c) for c in column_supports(A.alpha)]
        self.cols_ab = [dict(c) for c in column_supports(self.ab)]
        self.e = [{i: Fraction(1)} for i in range(self.d)]
        self.rho = R.twisted_table(Matrix.identity(self.d))
        self.rho_a = R.twisted_table(A.alpha)
        self.rho_b = R.twisted_table(A.beta)
        self.rho_ab = R.twisted_table(self.ab)
        # [beta x_1, ..., beta x_{n-1}, y]
        self.bx = A.bracket.twisted([A.beta] * (self.n - 1) + [Matrix.identity(self.d)])
        self.beta_v = smat(R.beta_v)
        self.alpha_v = smat(R.alpha_v)

    def tuples(self):
        return product(range(self.d), repeat=self.n - 1)


def _cond_equivariance(ctx: _Ctx, table: dict, mv: dict, name: str) -> CheckResult:
    for X in ctx.tuples():
        d = dict(smul(table.get(X, {}), mv))
        axpy(d, -1, smul(mv, ctx.rho.get(X, {})))
        d = clean(d)
        if d:
            return _fail(name, X, d, ctx.R.vdim)
    return _ok(name)


def _cond3(ctx: _Ctx) -> CheckResult:
    R, n = ctx.R, ctx.n
    for X in ctx.tuples():
        for Y in ctx.tuples():
            d = dict(smul(ctx.rho_ab.get(X, {}), ctx.rho.get(Y, {})))
            axpy(d, -1, smul(ctx.rho_b.get(Y, {}), ctx.rho_a.get(X, {})))
            for i in range(n - 1):
                inner = ctx.bx.at(X + (Y[i],))
                if not inner:
                    continue
                args = [ctx.cols_b[y] for y in Y]
                args[i] = inner
                axpy(d, -1, smul(R.eval_sparse(args), ctx.beta_v))
            d = clean(d)
            if d:
                return _fail("cond3", X + Y, d, R.vdim)
    return _ok("cond3")


def _cond4(ctx: _Ctx, printed: bool) -> CheckResult:
    R, n = ctx.R, ctx.n
    name = "cond4_as_printed" if printed else "cond4"
    for X in ctx.tuples():
        for Y in ctx.tuples():
            d: dict = {}
            inner = ctx.bx.at(X + (Y[0],))
            if inner:
                args = [ctx.cols_b[y] for y in Y[1:]] + [inner]
                axpy(d, 1, smul(R.eval_sparse(args), ctx.beta_v))
            for i in range(n - 1):
                sign = -1 if (n - 1 - i) % 2 else 1   # (-1)^(n-i), 1-based i
                left = R.eval_sparse([ctx.cols_ab[x] for k, x in enumerate(X) if k != i]
                                     + [ctx.cols_b[Y[0]]])
                if not left:
                    continue
                right = R.eval_sparse([ctx.e[y] for y in Y[1:]] + [ctx.cols_a[X[i]]])
                axpy(d, -sign, smul(left, right))
            last = Y if printed else Y[1:] + Y[:1]
            axpy(d, -1, smul(ctx.rho_ab.get(X, {}), R.basis_value(last)))
            d = clean(d)
            if d:
                return _fail(name, X + Y, d, R.vdim)
    return _ok(name)


def verify_representation(R: Representation) -> RepReport:
    ctx = _Ctx(R)
    return RepReport(
        cond1=_cond_equivariance(ctx, ctx.rho_a, ctx.alpha_v, "cond1"),
        cond2=_cond_equivariance(ctx, ctx.rho_b, ctx.beta_v, "cond2"),
        cond3=_cond3(ctx),
        cond4=_cond4(ctx, printed=False),
        cond4_as_printed=_cond4(ctx, printed=True),
    )


# ---------------------------------------------------------------- constructions

def wedge_witness(A: NBiHomLieAlgebra):
    """First tuple where the bracket fails plain antisymmetry in slots 1..n-1."""
    k = A.n - 1
    for t in product(range(A.dim), repeat=A.n):
        head, last = t[:k], t[k:]
        sign = permutation_sign(head)
        if sign == 0:
            if A.bracket.at(t):
                return t
            continue
        ref = A.bracket.at(tuple(sorted(head)) + last)
        expect = ref if sign == 1 else {i: -a for i, a in ref.items()}
        if A.bracket.at(t) != expect:
            return t
    return None


def is_wedge_compatible(A: NBiHomLieAlgebra) -> bool:
    return wedge_witness(A) is None


def adjoint_representation(A: NBiHomLieAlgebra, full_tensor: bool = False) -> Representation:
    """ad_X(y) = [x_1, ..., x_{n-1}, y] with twists (alpha, beta).

    Raises :class:`BracketNotWedgeCompatible` when ad does not factor through
    the exterior power, unless ``full_tensor`` asks for the tensor variant.
    """
    w = wedge_witness(A)
    if w is not None and not full_tensor:
        raise BracketNotWedgeCompatible(w)
    full = w is not None
    d = A.dim
    rho = {}
    for X in product(range(d), repeat=A.n - 1):
        if not full and list(X) != sorted(set(X)):
            continue
        m = {}
        for y in range(d):
            for i, a in A.bracket.at(X + (y,)).items():
                m[(i, y)] = a
        if m:
            rho[X] = to_matrix(m, d, d)
    return Representation(A, d, rho, A.alpha, A.beta, full_tensor=full)


def twist_representation(L: NBiHomLieAlgebra, R0: Representation, a: Matrix, b: Matrix,
                         a_v: Matrix, b_v: Matrix, check: bool = True) -> Representation:
    """rho~ = b_V o rho over the Yau twist of L by (a, b)."""
    from .algebra import yau_twist
    if check:
        if not preserves_bracket(a, L, L) or not preserves_bracket(b, L, L):
            raise CompatibilityFailure("a and b must be bracket morphisms of L")
        if not commutes(a, b):
            raise CompatibilityFailure("a and b must commute")
        if not commutes(a_v, b_v):
            raise CompatibilityFailure("a_V and b_V must commute")
        for name, m, mv in (("a", a, a_v), ("b", b, b_v)):
            tw = R0.twisted_table(m)
            mvs = smat(mv)
            for X in product(range(L.dim), repeat=L.n - 1):
                if smul(mvs, R0.basis_value(X)) != smul(tw.get(X, {}), mvs):
                    raise CompatibilityFailure(f"{name}_V rho(X) != rho({name}~X) {name}_V at {X}")
    A = yau_twist(L, a, b, check=check)
    rho = {X: b_v @ m for X, m in R0.rho.items()}
    return Representation(A, R0.vdim, rho, a_v, b_v, full_tensor=R0.full_tensor)


def semidirect_product(R: Representation, check: bool = True) -> NBiHomLieAlgebra:
    from .extension import Cocycle, t_theta_extension
    zero = Tensor.zero(R.n, R.algebra.dim, R.vdim)
    return t_theta_extension(Cocycle(R.algebra, R, zero), check=check)


# ---------------------------------------------------------------- duals

def dual_conditions(R: Representation) -> RepReport:
    """The four conditions on rho itself that make rho* a representation.

    They are the transposes of the conditions checked by
    :func:`verify_representation`, written in terms of rho, alpha_V, beta_V:

    1. alpha_V rho(alpha X) = rho(X) alpha_V
    2. beta_V rho(beta X) = rho(X) beta_V
    3. rho(Y) rho(ab X) - rho(alpha X) rho(beta Y)
       + sum_i beta_V rho(beta y_1, .., [beta X, y_i], .., beta y_{n-1}) = 0
    4. beta_V rho(beta y_2, .., beta y_{n-1}, [beta X, y_1])
       + sum_i (-1)^(n-i) rho(y_2, .., y_{n-1}, alpha x_i) rho(ab x_1, ..^i.., ab x_{n-1}, beta y_1)
       + rho(y_2, .., y_{n-1}, y_1) rho(ab X) = 0
    """
    ctx = _Ctx(R)
    n, vd = ctx.n, R.vdim

    def equiv(table, mv, name):
        for X in ctx.tuples():
            d = dict(smul(mv, table.get(X, {})))
            axpy(d, -1, smul(ctx.rho.get(X, {}), mv))
            if (d := clean(d)):
                return _fail(name, X, d, vd)
        return _ok(name)

    def cond3():
        for X in ctx.tuples():
            for Y in ctx.tuples():
                d = dict(smul(ctx.rho.get(Y, {}), ctx.rho_ab.get(X, {})))
                axpy(d, -1, smul(ctx.rho_a.get(X, {}), ctx.rho_b.get(Y, {})))
                for i in range(n - 1):
                    inner = ctx.bx.at(X + (Y[i],))
                    if inner:
                        args = [ctx.cols_b[y] for y in Y]
                        args[i] = inner
                        axpy(d, 1, smul(ctx.beta_v, R.eval_sparse(args)))
                if (d := clean(d)):
                    return _fail("cond3", X + Y, d, vd)
        return _ok("cond3")

    def cond4():
        for X in ctx.tuples():
            for Y in ctx.tuples():
                d: dict = {}
                inner = ctx.bx.at(X + (Y[0],))
                if inner:
                    args = [ctx.cols_b[y] for y in Y[1:]] + [inner]
                    axpy(d, 1, smul(ctx.beta_v, R.eval_sparse(args)))
                for i in range(n - 1):
                    sign = -1 if (n - 1 - i) % 2 else 1
                    right = R.eval_sparse([ctx.cols_ab[x] for k, x in enumerate(X) if k != i]
                                          + [ctx.cols_b[Y[0]]])
                    if right:
                        left = R.eval_sparse([ctx.e[y] for y in Y[1:]] + [ctx.cols_a[X[i]]])
                        axpy(d, sign, smul(left, right))
                axpy(d, 1, smul(R.basis_value(Y[1:] + Y[:1]), ctx.rho_ab.get(X, {})))
                if (d := clean(d)):
                    return _fail("cond4", X + Y, d, vd)
        return _ok("cond4")

    return RepReport(equiv(ctx.rho_a, ctx.alpha_v, "cond1"), equiv(ctx.rho_b, ctx.beta_v, "cond2"),
                     cond3(), cond4())


def dual_representation(R: Representation) -> tuple[Representation, RepReport]:
    """rho*(X) = -rho(X)^T on V* with transposed twists, plus the conditions on rho."""
    rho = {X: (-m).T for X, m in R.rho.items()}
    D = Representation(R.algebra, R.vdim, rho, R.alpha_v.T, R.beta_v.T, full_tensor=R.full_tensor)
    return D, dual_conditions(R)


def coadjoint_representation(A: NBiHomLieAlgebra) -> Representation:
    return dual_representation(adjoint_representation(A))[0]


# ---------------------------------------------------------------- equivalence

def are_equivalent(R1: Representation, R2: Representation, T: Matrix) -> bool:
    if R1.vdim != R2.vdim or R1.algebra.dim != R2.algebra.dim:
        raise DimMismatch("representations of different shapes")
    if (T.rows, T.cols) != (R2.vdim, R1.vdim):
        raise DimMismatch("T has the wrong shape")
    if T @ R1.alpha_v != R2.alpha_v @ T or T @ R1.beta_v != R2.beta_v @ T:
        return False
    t = smat(T)
    for X in product(range(R1.algebra.dim), repeat=R1.n - 1):
        if smul(t, R1.basis_value(X)) != smul(R2.basis_value(X), t):
            return False
    return True


def intertwiner_basis(R1: Representation, R2: Representation) -> list[Matrix]:
    if R1.vdim != R2.vdim or R1.algebra.dim != R2.algebra.dim or R1.n != R2.n:
        raise DimMismatch("representations of different shapes")
    m = R1.vdim
    pairs = [(smat(R1.alpha_v), smat(R2.alpha_v)), (smat(R1.beta_v), smat(R2.beta_v))]
    pairs += [(R1.basis_value(X), R2.basis_value(X))
              for X in product(range(R1.algebra.dim), repeat=R1.n - 1)]
    rows = []
    for a1, a2 in pairs:
        # (T a1 - a2 T)[i][j] with unknown T[i][k] at index i*m + k
        eqs: dict = {}
        for (k, j), c in a1.items():
            for i in range(m):
                r = eqs.setdefault((i, j), {})
                r[i * m + k] = r.get(i * m + k, 0) + c
        for (i, k), c in a2.items():
            for j in range(m):
                r = eqs.setdefault((i, j), {})
                r[k * m + j] = r.get(k * m + j, 0) - c
        rows.extend(r for r in eqs.values() if any(r.values()))
    ker = kernel_of_rows(rows, m * m)
    return [Matrix(m, m, tuple(tuple(v[i * m:(i + 1) * m]) for i in range(m))) for v in ker.basis]


def find_equivalence(R1: Representation, R2: Representation) -> Matrix | None:
    """First invertible element among the intertwiner basis, then their sum."""
    basis = intertwiner_basis(R1, R2)
    if not basis:
        return None
    candidates = list(basis)
    total = basis[0]
    for b in basis[1:]:
        total = total + b
    candidates.append(total)
    for T in candidates:
        if is_invertible(T):
            return T
    return None
