"""Cocycles, T_theta and T*_theta extensions, quadratic forms, and T* extraction."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .algebra import (AlgebraError, CheckResult, NBiHomLieAlgebra, check_twisted_skew,
                      ideal_report, is_morphism, jacobi_tables)
from .linalg import (DimMismatch, Matrix, Singular, Subspace, invert, is_invertible,
                     kernel_of_rows, vlincomb)
from .representation import (InvalidRepresentation, Representation, adjoint_representation,
                             dual_representation, smat,
                             verify_representation)
from .tensors import Tensor, axpy, clean, column_supports, dense, sparse


class ExtensionError(AlgebraError):
    pass


class InvalidCocycle(ExtensionError):
    pass


class NotEquivariant(ExtensionError):
    pass


class CoadjointConditionsFail(ExtensionError):
    def __init__(self, failed: list[str]):
        super().__init__("coadjoint conditions fail: " + ", ".join(failed))
        self.failed = failed


class CyclicConditionFail(ExtensionError):
    pass


class NotIdeal(ExtensionError):
    pass


class NotIsotropic(ExtensionError):
    pass


class NoIsotropicComplement(ExtensionError):
    pass


class QuotientIllDefined(ExtensionError):
    pass


class LemmaViolation(ExtensionError):
    pass


class ExtractionFailed(ExtensionError):
    pass


def smatvec(m: dict, v: dict) -> dict:
    out: dict = {}
    for (i, j), a in m.items():
        c = v.get(j)
        if c:
            out[i] = out.get(i, 0) + a * c
    return clean(out)


# ---------------------------------------------------------------- cocycles

@dataclass(eq=False)
class Cocycle:
    source: NBiHomLieAlgebra
    target_rep: Representation
    theta: Tensor

    def __post_init__(self):
        A, R = self.source, self.target_rep
        if isinstance(self.theta, dict):
            self.theta = Tensor(A.n, A.dim, R.vdim, {k: sparse(v) if not isinstance(v, dict) else v
                                                    for k, v in self.theta.items()})
        if (self.theta.arity, self.theta.in_dim, self.theta.out_dim) != (A.n, A.dim, R.vdim):
            raise DimMismatch("theta must be an n-linear map g^n -> V")
        if R.algebra is not A and R.algebra != A:
            raise DimMismatch("the representation is over a different algebra")

    def __add__(self, other: "Cocycle") -> "Cocycle":
        return Cocycle(self.source, self.target_rep, self.theta + other.theta)

    def scale(self, c) -> "Cocycle":
        return Cocycle(self.source, self.target_rep, self.theta.scale(c))


@dataclass
class CocycleReport:
    cond1: CheckResult
    cond2: CheckResult
    cond3: CheckResult
    cond4: CheckResult
    cond3_as_printed: CheckResult | None = None

    @property
    def checks(self) -> list[CheckResult]:
        return [self.cond1, self.cond2, self.cond3, self.cond4]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _equivariance(theta: Tensor, m: Matrix, mv: Matrix, name: str) -> CheckResult:
    lhs = theta.compose_out(mv)
    rhs = theta.twisted([m] * theta.arity)
    for t in product(range(theta.in_dim), repeat=theta.arity):
        if lhs.at(t) != rhs.at(t):
            d = dict(lhs.at(t))
            axpy(d, -1, rhs.at(t))
            return CheckResult(name, False, t, dense(clean(d), theta.out_dim))
    return CheckResult(name, True)


def cocycle_discrepancy(tabs: tuple, n: int, x: tuple, y: tuple) -> dict:
    t_in, t_out, th_in, th_out, rho2 = tabs
    acc = dict(th_out.contract_last(x, t_in.at(y)))
    v = th_in.at(y)
    if v and x in rho2:
        axpy(acc, 1, smatvec(rho2[x], v))
    for k in range(n):
        sign = -1 if (n - 1 - k) % 2 else 1
        rest = y[:k] + y[k + 1:]
        xy = x + (y[k],)
        w = t_in.at(xy)
        if w:
            axpy(acc, -sign, th_out.contract_last(rest, w))
        u = th_in.at(xy)
        if u and rest in rho2:
            axpy(acc, -sign, smatvec(rho2[rest], u))
    return clean(acc)


def cocycle_tables(C: Cocycle) -> tuple:
    A, R = C.source, C.target_rep
    b2 = A.beta @ A.beta
    t_in, t_out = jacobi_tables(A)
    th_in = C.theta.twisted([A.beta] * (A.n - 1) + [A.alpha])
    th_out = C.theta.twisted([b2] * (A.n - 1) + [Matrix.identity(A.dim)])
    rho2 = R.twisted_table(b2)
    return t_in, t_out, th_in, th_out, rho2


def verify_cocycle(C: Cocycle) -> CocycleReport:
    A, R, th = C.source, C.target_rep, C.theta
    n, d = A.n, A.dim
    tabs = cocycle_tables(C)
    cond4 = CheckResult("cond4", True)
    for x in product(range(d), repeat=n - 1):
        for y in product(range(d), repeat=n):
            disc = cocycle_discrepancy(tabs, n, x, y)
            if disc:
                cond4 = CheckResult("cond4", False, x + y, dense(disc, R.vdim))
                break
        if not cond4.passed:
            break
    return CocycleReport(
        cond1=_equivariance(th, A.alpha, R.alpha_v, "cond1"),
        cond2=_equivariance(th, A.beta, R.beta_v, "cond2"),
        cond3=check_twisted_skew(tabs[2], n, d, "cond3"),
        cond4=cond4,
        cond3_as_printed=check_twisted_skew(th.twisted([A.beta] * n), n, d, "cond3_as_printed"),
    )


def equivariant_maps(A: NBiHomLieAlgebra, R: Representation) -> list[Matrix]:
    """Basis of {f: g -> V : f alpha = alpha_V f, f beta = beta_V f}."""
    d, m = A.dim, R.vdim
    rows = []
    for a, av in ((A.alpha, R.alpha_v), (A.beta, R.beta_v)):
        for i, j in product(range(m), range(d)):
            # (f a - av f)[i][j], unknown f[i][k] at i*d + k
            r: dict = {}
            for k in range(d):
                if a[k, j]:
                    r[i * d + k] = r.get(i * d + k, 0) + a[k, j]
            for k in range(m):
                if av[i, k]:
                    r[k * d + j] = r.get(k * d + j, 0) - av[i, k]
            if any(r.values()):
                rows.append(r)
    ker = kernel_of_rows(rows, m * d)
    return [Matrix(m, d, tuple(tuple(v[i * d:(i + 1) * d]) for i in range(m))) for v in ker.basis]


def _check_equivariant(f: Matrix, A: NBiHomLieAlgebra, R: Representation) -> None:
    if (f.rows, f.cols) != (R.vdim, A.dim):
        raise DimMismatch(f"f must be {R.vdim}x{A.dim}")
    if f @ A.alpha != R.alpha_v @ f or f @ A.beta != R.beta_v @ f:
        raise NotEquivariant("f does not intertwine the twists")


def theta_from_map(R: Representation, f: Matrix, check: bool = True) -> Cocycle:
    """theta_f(x) = f[x] - sum_i (-1)^(n-i) rho(x^i.., a^-1 b x_n) f(a b^-1 x_i) - rho(x_1..x_{n-1}) f(x_n)."""
    A = R.algebra
    n, d = A.n, A.dim
    if check:
        _check_equivariant(f, A, R)
    a_inv, b_inv = invert(A.alpha), invert(A.beta)
    a_ib = [dict(c) for c in column_supports(a_inv @ A.beta)]
    fab = [dict(c) for c in column_supports(f @ A.alpha @ b_inv)]
    fcols = [dict(c) for c in column_supports(f)]
    e = [{i: Fraction(1)} for i in range(d)]
    fs = smat(f)
    data = {}
    for t in product(range(d), repeat=n):
        acc = dict(smatvec(fs, A.bracket.at(t)))
        for i in range(n - 1):
            sign = -1 if (n - 1 - i) % 2 else 1
            if not fab[t[i]]:
                continue
            m = R.eval_sparse([e[x] for k, x in enumerate(t[:-1]) if k != i] + [a_ib[t[-1]]])
            if m:
                axpy(acc, -sign, smatvec(m, fab[t[i]]))
        m = R.basis_value(t[:-1])
        if m and fcols[t[-1]]:
            axpy(acc, -1, smatvec(m, fcols[t[-1]]))
        if (acc := clean(acc)):
            data[t] = acc
    return Cocycle(A, R, Tensor(n, d, R.vdim, data))


def t_theta_extension(C: Cocycle, check: bool = True) -> NBiHomLieAlgebra:
    """The algebra on g + V (g coordinates first) with bracket [.]_g + theta + rho terms."""
    A, R = C.source, C.target_rep
    n, d, m = A.n, A.dim, R.vdim
    if not is_invertible(A.alpha):
        raise Singular("alpha is not invertible")
    if not is_invertible(R.beta_v):
        raise Singular("beta_V is not invertible")
    if check:
        if not verify_representation(R).passed:
            raise InvalidRepresentation("the module does not pass the representation checks")
        if not verify_cocycle(C).passed:
            raise InvalidCocycle("theta does not pass the cocycle checks")
    D = d + m
    a_ib = [dict(c) for c in column_supports(invert(A.alpha) @ A.beta)]
    avbv = [dict(c) for c in column_supports(R.alpha_v @ invert(R.beta_v))]
    e = [{i: Fraction(1)} for i in range(d)]
    shift = lambda v: {d + k: a for k, a in v.items()}
    data: dict = {}
    for t in product(range(d), repeat=n):
        v = dict(A.bracket.at(t))
        v.update(shift(C.theta.at(t)))
        if v:
            data[t] = v
    for pos in range(n):
        for t in product(range(d), repeat=n - 1):
            for u in range(m):
                full = t[:pos] + (d + u,) + t[pos:]
                if pos == n - 1:
                    val = smatvec(R.basis_value(t), {u: Fraction(1)})
                else:
                    sign = -1 if (n - 1 - pos) % 2 else 1
                    mat = R.eval_sparse([e[x] for x in t[:-1]] + [a_ib[t[-1]]])
                    val = {k: sign * a for k, a in smatvec(mat, avbv[u]).items()}
                if val:
                    data[full] = shift(val)
    alpha = _block(A.alpha, R.alpha_v)
    beta = _block(A.beta, R.beta_v)
    names = tuple(A.basis_names) + tuple(f"v{k + 1}" for k in range(m))
    return NBiHomLieAlgebra(n, D, Tensor(n, D, D, data), alpha, beta, names)


def _block(a: Matrix, b: Matrix) -> Matrix:
    from .linalg import block_diag
    return block_diag(a, b)


def sigma_isomorphism(C: Cocycle, f: Matrix, check: bool = True) -> Matrix:
    """sigma(x + u) = x + f(x) + u on g + V."""
    A, R = C.source, C.target_rep
    if check:
        _check_equivariant(f, A, R)
    d, m = A.dim, R.vdim
    rows = []
    for i in range(d + m):
        r = [Fraction(0)] * (d + m)
        r[i] = Fraction(1)
        if i >= d:
            for j in range(d):
                r[j] = f[i - d, j]
        rows.append(r)
    return Matrix.from_rows(rows)


# ---------------------------------------------------------------- forms

@dataclass(frozen=True)
class BilinearForm:
    gram: Matrix

    @property
    def space_dim(self) -> int:
        return self.gram.rows

    @property
    def symmetric(self) -> bool:
        return self.gram == self.gram.T

    @property
    def nondegenerate(self) -> bool:
        return is_invertible(self.gram)

    def value(self, x, y) -> Fraction:
        return sum((a * b for a, b in zip(x, self.gram(y))), Fraction(0))


@dataclass(eq=False)
class QuadraticAlgebra:
    algebra: NBiHomLieAlgebra
    form: BilinearForm


def canonical_qg(A: NBiHomLieAlgebra) -> BilinearForm:
    """q(x + f, y + g) = f(y) + g(x) on g + g*."""
    d = A.dim
    rows = [[Fraction(1) if (j == i + d or i == j + d) else Fraction(0) for j in range(2 * d)]
            for i in range(2 * d)]
    return BilinearForm(Matrix.from_rows(rows))


@dataclass
class QuadraticReport:
    symmetric: CheckResult
    nondegenerate: CheckResult
    invariant: CheckResult
    alpha_symmetric: CheckResult
    beta_symmetric: CheckResult

    @property
    def checks(self) -> list[CheckResult]:
        return [self.symmetric, self.nondegenerate, self.invariant,
                self.alpha_symmetric, self.beta_symmetric]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def invariance_witness(A: NBiHomLieAlgebra, G: Matrix):
    """First (n+1)-tuple breaking f([b x.., a x_n], a x_{n+1}) = -f(a x_n, [b x.., a x_{n+1}])."""
    n, d = A.n, A.dim
    t_in = A.bracket.twisted([A.beta] * (n - 1) + [A.alpha])
    right = G @ A.alpha            # f(u, alpha e_j) = sum_i u_i right[i][j]
    left = A.alpha.T @ G           # f(alpha e_j, w) = sum_k left[j][k] w_k
    for t in product(range(d), repeat=n + 1):
        u = t_in.at(t[:n])
        w = t_in.at(t[:n - 1] + (t[n],))
        s = sum((c * right[i, t[n]] for i, c in u.items()), Fraction(0))
        s += sum((left[t[n - 1], k] * c for k, c in w.items()), Fraction(0))
        if s:
            return t, (s,)
    return None


def check_quadratic(Q: QuadraticAlgebra) -> QuadraticReport:
    A, F = Q.algebra, Q.form
    if F.space_dim != A.dim:
        raise DimMismatch("form and algebra dimensions differ")
    G = F.gram

    def flag(name, ok, detail=""):
        return CheckResult(name, bool(ok), None, None, detail)

    w = invariance_witness(A, G)
    inv = CheckResult("invariant", True) if w is None else CheckResult("invariant", False, w[0], w[1])
    return QuadraticReport(
        symmetric=flag("symmetric", F.symmetric),
        nondegenerate=flag("nondegenerate", F.nondegenerate),
        invariant=inv,
        alpha_symmetric=flag("alpha_symmetric", A.alpha.T @ G == G @ A.alpha),
        beta_symmetric=flag("beta_symmetric", A.beta.T @ G == G @ A.beta),
    )


def lemma_cyclic_condition(C: Cocycle) -> CheckResult:
    """theta(b x.., a x_n)(a x_{n+1}) + theta(b x.., a x_{n+1})(a x_n) = 0 on basis tuples."""
    A = C.source
    n, d = A.n, A.dim
    if C.target_rep.vdim != d:
        raise DimMismatch("the cyclic condition needs theta with values in g*")
    th_in = C.theta.twisted([A.beta] * (n - 1) + [A.alpha])
    acols = [dict(c) for c in column_supports(A.alpha)]
    for t in product(range(d), repeat=n + 1):
        u = th_in.at(t[:n])
        w = th_in.at(t[:n - 1] + (t[n],))
        s = sum((c * acols[t[n]].get(i, 0) for i, c in u.items()), Fraction(0))
        s += sum((c * acols[t[n - 1]].get(i, 0) for i, c in w.items()), Fraction(0))
        if s:
            return CheckResult("cyclic", False, t, (s,))
    return CheckResult("cyclic", True)


def cyclic_rows(A: NBiHomLieAlgebra) -> list[dict]:
    """The cyclic condition as sparse equations in the flat coordinates of theta: g^n -> g*."""
    n, d = A.n, A.dim
    cols = [column_supports(m) for m in [A.beta] * (n - 1) + [A.alpha]]
    acols = column_supports(A.alpha)

    def add(row, t, weights):
        # row += sum_i w_i theta(b t_1, .., a t_n)_i
        for combo in product(*(cols[s][t[s]] for s in range(n))):
            c = Fraction(1)
            for _, a in combo:
                c *= a
            idx = 0
            for i, _ in combo:
                idx = idx * d + i
            for i, w in weights:
                row[idx * d + i] = row.get(idx * d + i, 0) + c * w

    rows = []
    for t in product(range(d), repeat=n + 1):
        row: dict = {}
        add(row, t[:n], acols[t[n]])
        add(row, t[:n - 1] + (t[n],), acols[t[n - 1]])
        row = clean(row)
        if row:
            rows.append(row)
    return rows


def cyclic_space(A: NBiHomLieAlgebra) -> Subspace:
    """All theta: g^n -> g* (flat Tensor coordinates) meeting the cyclic condition."""
    return kernel_of_rows(cyclic_rows(A), A.dim ** (A.n + 1))


def cyclic_coboundary_maps(A: NBiHomLieAlgebra, D: Representation | None = None) -> list[Matrix]:
    """Basis of the equivariant f: g -> g* whose theta_f meets the cyclic condition."""
    D = D or coadjoint_module(A)
    fs = equivariant_maps(A, D)
    flats = [theta_from_map(D, f, check=False).theta.flat() for f in fs]
    rows = []
    for r in cyclic_rows(A):
        row = clean({i: sum((a * v[j] for j, a in r.items()), Fraction(0)) for i, v in enumerate(flats)})
        if row:
            rows.append(row)
    out = []
    for c in kernel_of_rows(rows, len(fs)).basis:
        f = Matrix.zeros(D.vdim, A.dim)
        for ci, fi in zip(c, fs):
            if ci:
                f = f + fi.scale(ci)
        out.append(f)
    return out


def coadjoint_module(A: NBiHomLieAlgebra, check: bool = True) -> Representation:
    ad = adjoint_representation(A)
    D, report = dual_representation(ad)
    if check and not report.passed:
        raise CoadjointConditionsFail([c.name for c in report.checks if not c.passed])
    return D


def t_star_extension(A: NBiHomLieAlgebra, theta, require_cyclic: bool = True,
                     check: bool = True) -> QuadraticAlgebra:
    """T_theta over the coadjoint module, paired with the hyperbolic form q_g."""
    if not is_invertible(A.alpha) or not is_invertible(A.beta):
        raise Singular("T* extensions need invertible alpha and beta")
    D = coadjoint_module(A, check=True)
    if isinstance(theta, Cocycle):
        C = Cocycle(A, D, theta.theta)
    elif theta is None:
        C = Cocycle(A, D, Tensor.zero(A.n, A.dim, A.dim))
    else:
        C = Cocycle(A, D, theta)
    if require_cyclic:
        cyc = lemma_cyclic_condition(C)
        if not cyc.passed:
            raise CyclicConditionFail(f"cyclic condition fails at {cyc.witness}")
    T = t_theta_extension(C, check=check)
    return QuadraticAlgebra(T, canonical_qg(A))


def is_isotropic(I: Subspace, Q: QuadraticAlgebra) -> bool:
    if I.ambient_dim != Q.form.space_dim:
        raise DimMismatch("subspace and form live in different spaces")
    return all(Q.form.value(u, w) == 0 for u in I.basis for w in I.basis)


def lemma49_witness(Q: QuadraticAlgebra, I: Subspace):
    """First basis choice where [beta(I), beta(g), .., beta(g), alpha(I)] is nonzero."""
    A = Q.algebra
    bI = [sparse(A.beta(v)) for v in I.basis]
    aI = [sparse(A.alpha(v)) for v in I.basis]
    bg = [dict(c) for c in column_supports(A.beta)]
    for a, mids, b in product(range(len(bI)), product(range(A.dim), repeat=A.n - 2), range(len(aI))):
        v = A.bracket.eval_sparse([bI[a]] + [bg[j] for j in mids] + [aI[b]])
        if v:
            return (a,) + mids + (b,), dense(v, A.dim)
    return None


def extract_tstar(Q: QuadraticAlgebra, I: Subspace):
    """Recover (theta, B, phi) with phi: Q.algebra -> T*_theta(B) an isometric isomorphism."""
    A, G = Q.algebra, Q.form.gram
    D = A.dim
    if I.ambient_dim != D:
        raise DimMismatch("ideal lives in a different space")
    if D % 2 or I.dim != D // 2:
        raise NotIsotropic("the ideal must have half the dimension of the algebra")
    m = D // 2
    rep = ideal_report(I, A)
    if not rep.literal:
        raise NotIdeal("subspace is not an ideal")
    if not rep.all_slot:
        raise QuotientIllDefined("bracket does not descend to g/I")
    if not is_isotropic(I, Q):
        raise NotIsotropic("ideal is not isotropic")
    if (w := lemma49_witness(Q, I)) is not None:
        raise LemmaViolation(f"[beta I, beta g.., alpha I] is nonzero at {w[0]}")
    q = Q.form.value
    ib = list(I.basis)
    comp = I.complement_basis()
    M = Matrix.from_rows([[q(c, i) for i in ib] for c in comp])
    try:
        Minv = invert(M)
    except Singular as exc:
        raise NoIsotropicComplement("complement does not pair with the ideal") from exc
    w = [vlincomb(zip(Minv.entries[a], comp), D) for a in range(m)]
    half = Fraction(1, 2)
    w = [vlincomb([(Fraction(1), w[a])] + [(-half * q(w[a], w[b]), ib[b]) for b in range(m)], D)
         for a in range(m)]
    if any(q(u, v) for u in w for v in w):
        raise NoIsotropicComplement("complement correction failed")
    P = Matrix.from_columns(w + ib, D)
    Pinv = invert(P)
    coords = lambda v: Pinv(v)
    wsp = [sparse(x) for x in w]
    data = {}
    theta = {}
    qs = Matrix.from_rows([[q(w[a], ib[b]) for b in range(m)] for a in range(m)])   # q*(i_b)(w_a)
    for t in product(range(m), repeat=A.n):
        c = coords(dense(A.bracket.eval_sparse([wsp[k] for k in t]), D))
        if any(c[:m]):
            data[t] = sparse(c[:m])
        th = qs(c[m:])
        if any(th):
            theta[t] = sparse(th)
    alpha_b = Matrix.from_columns([coords(A.alpha(x))[:m] for x in w], m)
    beta_b = Matrix.from_columns([coords(A.beta(x))[:m] for x in w], m)
    B = NBiHomLieAlgebra(A.n, m, Tensor(A.n, m, m, data), alpha_b, beta_b)
    Dmod = coadjoint_module(B, check=False)
    C = Cocycle(B, Dmod, Tensor(A.n, m, m, theta))
    rows = [list(r[:]) for r in Pinv.entries[:m]]
    for a in range(m):
        rows.append([sum((qs[a, b] * Pinv[m + b, j] for b in range(m)), Fraction(0)) for j in range(D)])
    phi = Matrix.from_rows(rows)
    target = t_theta_extension(C, check=False)
    if not is_morphism(phi, A, target):
        raise ExtractionFailed("phi is not a morphism (complement not twist-stable?)")
    if phi.T @ canonical_qg(B).gram @ phi != G:
        raise ExtractionFailed("phi is not an isometry")
    return C, B, phi
