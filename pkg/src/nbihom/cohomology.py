"""Low-degree cohomology H^2(g, g), truncated deformations and straightening.

Conventions: C^1 is equivariant unary maps, C^2 equivariant n-linear maps,
C^3 equivariant (2n-1)-linear maps.  n-linear maps are :class:`Tensor`
objects; their coordinates are ``Tensor.flat()``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import (AlgebraError, CheckResult, NBiHomLieAlgebra, check_twisted_skew,
                      jacobi_discrepancy, jacobi_tables)
from .linalg import DimMismatch, Matrix, Subspace, commutant_basis, kernel_of_rows, solve_rows
from .tensors import Tensor, clean, column_supports


class CohomologyError(AlgebraError):
    pass


class NotEquivariant(CohomologyError):
    pass


class NotRigid(CohomologyError):
    pass


class DeformationInvalid(CohomologyError):
    pass


def _expansions(maps: list[Matrix], dim: int) -> dict:
    """``t -> [(s, c)]`` with (m_1 e_{t1}, ..., m_k e_{tk}) = sum c e_s."""
    cols = [column_supports(m) for m in maps]
    out = {}
    for t in product(range(dim), repeat=len(maps)):
        terms = []
        for combo in product(*(cols[i][t[i]] for i in range(len(maps)))):
            c = Fraction(1)
            for _, a in combo:
                c *= a
            terms.append((tuple(i for i, _ in combo), c))
        out[t] = terms
    return out


def _flat(t: tuple, k: int, dim: int) -> int:
    idx = 0
    for i in t:
        idx = idx * dim + i
    return idx * dim + k


# ---------------------------------------------------------------- cochain spaces

def cochain1_basis(A: NBiHomLieAlgebra) -> list[Matrix]:
    return commutant_basis([A.alpha, A.beta], A.dim)


def cochain1_space(A: NBiHomLieAlgebra) -> Subspace:
    """C^1 inside Q^(dim^2), coordinates f[i][k] at i*dim + k."""
    d = A.dim
    return Subspace.span([tuple(a for r in m.entries for a in r) for m in cochain1_basis(A)], d * d)


def _equivariance_rows(A: NBiHomLieAlgebra, arity: int) -> list[dict]:
    d = A.dim
    rows = []
    for m in (A.alpha, A.beta):
        exp = _expansions([m] * arity, d)
        for t in product(range(d), repeat=arity):
            for k in range(d):
                # m f(e_t) - f(m e_t..), coordinate k
                r: dict = {}
                for j in range(d):
                    if m[k, j]:
                        v = _flat(t, j, d)
                        r[v] = r.get(v, 0) + m[k, j]
                for s, c in exp[t]:
                    v = _flat(s, k, d)
                    r[v] = r.get(v, 0) - c
                r = clean(r)
                if r:
                    rows.append(r)
    return rows


def cochain2_space(A: NBiHomLieAlgebra) -> Subspace:
    d = A.dim
    return kernel_of_rows(_equivariance_rows(A, A.n), d ** (A.n + 1))


def is_equivariant(f: Tensor, A: NBiHomLieAlgebra) -> bool:
    for m in (A.alpha, A.beta):
        if f.compose_out(m) != f.twisted([m] * f.arity):
            return False
    return True


def _check_c1(f: Matrix, A: NBiHomLieAlgebra) -> None:
    if (f.rows, f.cols) != (A.dim, A.dim):
        raise DimMismatch("a 1-cochain is a dim x dim matrix")
    if f @ A.alpha != A.alpha @ f or f @ A.beta != A.beta @ f:
        raise NotEquivariant("1-cochain must commute with alpha and beta")


# ---------------------------------------------------------------- coboundaries

def delta1(A: NBiHomLieAlgebra, f: Matrix, check: bool = True) -> Tensor:
    """delta^1 f(x_1..x_n) = -f[x_1..x_n] + sum_i [x_1, .., f x_i, .., x_n]."""
    if check:
        _check_c1(f, A)
    n, ident = A.n, Matrix.identity(A.dim)
    out = -A.bracket.compose_out(f)
    for i in range(n):
        out = out + A.bracket.twisted([ident] * i + [f] + [ident] * (n - 1 - i))
    return out


def bihom_composite(A: NBiHomLieAlgebra, f: Tensor, g: Tensor) -> Tensor:
    """J(f, g)(X, Y) = f(b^2 X, g(b Y, a y_n)) - sum_k (-1)^(n-k) f(b^2 Y^k, g(b X, a y_k))."""
    n, d = A.n, A.dim
    b2 = A.beta @ A.beta
    g_in = g.twisted([A.beta] * (n - 1) + [A.alpha])
    f_out = f.twisted([b2] * (n - 1) + [Matrix.identity(d)])
    data = {}
    for x in product(range(d), repeat=n - 1):
        for y in product(range(d), repeat=n):
            v = jacobi_discrepancy(g_in, f_out, n, x, y)
            if v:
                data[x + y] = v
    return Tensor(2 * n - 1, d, d, data)


def delta2(A: NBiHomLieAlgebra, f: Tensor, check: bool = True) -> Tensor:
    """The four-group coboundary: J(bracket, f) + J(f, bracket)."""
    if (f.arity, f.in_dim, f.out_dim) != (A.n, A.dim, A.dim):
        raise DimMismatch("a 2-cochain is an n-linear map g^n -> g")
    if check and not is_equivariant(f, A):
        raise NotEquivariant("2-cochain must be alpha- and beta-equivariant")
    return bihom_composite(A, A.bracket, f) + bihom_composite(A, f, A.bracket)


def delta2_rows(A: NBiHomLieAlgebra) -> list[dict]:
    """delta^2 as sparse equations in the flat coordinates of an n-linear map."""
    n, d = A.n, A.dim
    b2 = A.beta @ A.beta
    t_in, t_out = jacobi_tables(A)
    e_in = _expansions([A.beta] * (n - 1) + [A.alpha], d)
    e_out = _expansions([b2] * (n - 1) + [Matrix.identity(d)], d)
    out_pref: dict = {}
    for t, w in t_out.items():
        out_pref.setdefault(t[:-1], []).append((t[-1], w))

    def term_a(rows, xx, yy, sign):
        # [b^2 xx, f(twisted yy)]
        pref = out_pref.get(xx)
        if not pref:
            return
        for s, c in e_in[yy]:
            for j, w in pref:
                v = _flat(s, j, d)
                for k, a in w.items():
                    r = rows[k]
                    r[v] = r.get(v, 0) + sign * c * a

    def term_b(rows, xx, yy, sign):
        # f(b^2 xx, [twisted yy])
        for j, a in t_in.at(yy).items():
            for s, c in e_out[xx + (j,)]:
                for k in range(d):
                    v = _flat(s, k, d)
                    r = rows[k]
                    r[v] = r.get(v, 0) + sign * a * c

    result = []
    for x in product(range(d), repeat=n - 1):
        for y in product(range(d), repeat=n):
            rows = [dict() for _ in range(d)]
            term_a(rows, x, y, 1)
            term_b(rows, x, y, 1)
            for k in range(n):
                sign = -1 if (n - 1 - k) % 2 else 1
                rest, xy = y[:k] + y[k + 1:], x + (y[k],)
                term_a(rows, rest, xy, -sign)
                term_b(rows, rest, xy, -sign)
            for r in rows:
                r = clean(r)
                if r:
                    result.append(r)
    return result


@dataclass
class H2Result:
    dim_z2: int
    dim_b2: int
    dim_h2: int | None
    representatives: list
    b2_in_z2: bool = True
    dim_c1: int = 0
    dim_c2: int = 0
    z2: Subspace | None = field(default=None, repr=False)
    b2: Subspace | None = field(default=None, repr=False)

    def __iter__(self):
        return iter((self.dim_z2, self.dim_b2, self.dim_h2, self.representatives))


def coboundary_space(A: NBiHomLieAlgebra) -> Subspace:
    d = A.dim
    return Subspace.span([delta1(A, h, check=False).flat() for h in cochain1_basis(A)],
                         d ** (A.n + 1))


def cohomology_h2(A: NBiHomLieAlgebra) -> H2Result:
    n, d = A.n, A.dim
    N = d ** (n + 1)
    c1 = cochain1_basis(A)
    eq_rows = _equivariance_rows(A, n)
    c2 = kernel_of_rows(eq_rows, N)
    z2 = kernel_of_rows(eq_rows + delta2_rows(A), N)
    b2 = coboundary_space(A)
    if not b2 <= z2:
        # only possible when alpha or beta is not multiplicative: H^2 is then undefined
        return H2Result(z2.dim, b2.dim, None, [], False, len(c1), c2.dim, z2, b2)
    reps = [Tensor.from_flat(n, d, d, v) for v in b2.extend_to(z2)]
    return H2Result(z2.dim, b2.dim, z2.dim - b2.dim, reps, True, len(c1), c2.dim, z2, b2)


# ---------------------------------------------------------------- deformations

@dataclass(eq=False)
class Deformation:
    algebra: NBiHomLieAlgebra
    terms: list

    def __post_init__(self):
        A = self.algebra
        self.terms = [t if isinstance(t, Tensor) else Tensor(A.n, A.dim, A.dim, t) for t in self.terms]
        for t in self.terms:
            if (t.arity, t.in_dim, t.out_dim) != (A.n, A.dim, A.dim):
                raise DimMismatch("deformation terms must be n-linear maps g^n -> g")
        if not self.terms:
            raise DimMismatch("truncation order must be at least 1")

    @property
    def order(self) -> int:
        return len(self.terms)

    def coefficient(self, p: int) -> Tensor:
        return self.algebra.bracket if p == 0 else self.terms[p - 1]

    def is_null(self) -> bool:
        return all(t.is_zero() for t in self.terms)

    @classmethod
    def null(cls, A: NBiHomLieAlgebra, order: int) -> "Deformation":
        return cls(A, [Tensor.zero(A.n, A.dim, A.dim) for _ in range(order)])


@dataclass
class DeformationReport:
    equivariance: list
    orders: list
    infinitesimal_cocycle: CheckResult
    skewsymmetry: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.equivariance + self.orders)


def _first(t: Tensor, name: str) -> CheckResult:
    if t.is_zero():
        return CheckResult(name, True)
    key = min(t.data)
    return CheckResult(name, False, key, t.value(key))


def verify_deformation(D: Deformation) -> DeformationReport:
    A = D.algebra
    equiv = []
    for p, f in enumerate(D.terms, start=1):
        ok = is_equivariant(f, A)
        equiv.append(CheckResult(f"equivariance[{p}]", ok))
    orders = []
    for l in range(1, D.order + 1):
        total = Tensor.zero(2 * A.n - 1, A.dim, A.dim)
        for p in range(l + 1):
            total = total + bihom_composite(A, D.coefficient(p), D.coefficient(l - p))
        orders.append(_first(total, f"order[{l}]"))
    infinitesimal = _first(delta2(A, D.terms[0], check=False), "f1_in_Z2")
    skew = [check_twisted_skew(f.twisted([A.beta] * (A.n - 1) + [A.alpha]), A.n, A.dim,
                               f"skewsymmetry[{p}]")
            for p, f in enumerate(D.terms, start=1)]
    return DeformationReport(equiv, orders, infinitesimal, skew)


def _series_inverse(psi: list[Matrix], N: int) -> list[Matrix]:
    d = psi[0].rows
    phi = [Matrix.identity(d)]
    for k in range(1, N + 1):
        acc = Matrix.zeros(d)
        for i in range(1, k + 1):
            if i < len(psi):
                acc = acc - psi[i] @ phi[k - i]
        phi.append(acc)
    return phi


def _series_product(a: list[Matrix], b: list[Matrix], N: int) -> list[Matrix]:
    d = a[0].rows
    out = []
    for k in range(N + 1):
        acc = Matrix.zeros(d)
        for i in range(k + 1):
            if i < len(a) and k - i < len(b):
                acc = acc + a[i] @ b[k - i]
        out.append(acc)
    return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def pullback_deformation(D: Deformation, Psi: list[Matrix]) -> Deformation:
    """The f'_t with Psi_t o f_t = f'_t o (Psi_t x ... x Psi_t), mod t^(N+1)."""
    A, N = D.algebra, D.order
    if not Psi or not Psi[0].is_identity():
        raise NotEquivariant("psi_0 must be the identity")
    for m in Psi:
        _check_c1(m, A)
    Psi = list(Psi[:N + 1]) + [Matrix.zeros(A.dim)] * max(0, N + 1 - len(Psi))
    phi = _series_inverse(Psi, N)
    zero = Tensor.zero(A.n, A.dim, A.dim)
    inner = []          # G_l = sum_{p + b_1..b_n = l} f_p(phi_b1 ., .., phi_bn .)
    for l in range(N + 1):
        acc = zero
        for p in range(l + 1):
            f = D.coefficient(p)
            if f.is_zero():
                continue
            for bs in _compositions(l - p, A.n):
                if any(phi[b].is_zero() for b in bs):
                    continue
                acc = acc + f.twisted([phi[b] for b in bs])
        inner.append(acc)
    terms = []
    for l in range(1, N + 1):
        acc = zero
        for a in range(l + 1):
            if not Psi[a].is_zero() and not inner[l - a].is_zero():
                acc = acc + inner[l - a].compose_out(Psi[a])
        terms.append(acc)
    return Deformation(A, terms)


def solve_coboundary(A: NBiHomLieAlgebra, f: Tensor) -> Matrix | None:
    """Canonical h in C^1 (free coordinates zero) with delta^1 h = f, or None."""
    basis = cochain1_basis(A)
    images = [delta1(A, h, check=False) for h in basis]
    eqs: dict = {}
    for i, img in enumerate(images):
        for t, v in img.items():
            for k, a in v.items():
                eqs.setdefault(img.flat_index(t, k), {})[i] = a
    rhs = {}
    for t, v in f.items():
        for k, a in v.items():
            rhs[f.flat_index(t, k)] = a
    keys = set(eqs) | set(rhs)
    x = solve_rows(((eqs.get(key, {}), rhs.get(key, 0)) for key in sorted(keys)), len(basis))
    if x is None:
        return None
    h = Matrix.zeros(A.dim)
    for c, b in zip(x, basis):
        if c:
            h = h + b.scale(c)
    return h


def straighten(D: Deformation) -> tuple[list[Matrix], Deformation]:
    """Kill terms order by order on a rigid algebra; returns (Psi, null deformation)."""
    A, N = D.algebra, D.order
    if not verify_deformation(D).passed:
        raise DeformationInvalid("the deformation equations fail")
    h2 = cohomology_h2(A)
    if h2.dim_h2 is None:
        raise DeformationInvalid("B^2 is not inside Z^2 for this algebra")
    if h2.dim_h2 > 0:
        raise NotRigid(f"dim H^2 = {h2.dim_h2}")
    total = [Matrix.identity(A.dim)] + [Matrix.zeros(A.dim)] * N
    cur = D
    while True:
        r = next((p for p in range(1, N + 1) if not cur.coefficient(p).is_zero()), None)
        if r is None:
            return total, cur
        h = solve_coboundary(A, cur.coefficient(r))
        if h is None:
            raise DeformationInvalid(f"term of order {r} is not a coboundary")
        # Psi = (id - h t^r)^(-1) = id + h t^r + h^2 t^2r + ...
        step = [Matrix.identity(A.dim)] + [Matrix.zeros(A.dim)] * N
        power = Matrix.identity(A.dim)
        for k in range(1, N // r + 1):
            power = power @ h
            step[k * r] = power
        cur = pullback_deformation(cur, step)
        total = _series_product(step, total, N)
