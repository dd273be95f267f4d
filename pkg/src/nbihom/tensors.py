"""Sparse multilinear maps on coordinate spaces.

A :class:`Tensor` of arity ``k`` stores ``T(e_{t1}, ..., e_{tk})`` for every
basis tuple ``t`` whose value is nonzero; values are sparse dicts
``coordinate -> Fraction``.  Multilinear extension does the rest.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .linalg import DimMismatch, Matrix, Vector, q


def sparse(v: Sequence) -> dict:
    return {i: q(a) for i, a in enumerate(v) if a}


def dense(d: dict, n: int) -> Vector:
    out = [Fraction(0)] * n
    for i, a in d.items():
        out[i] = a
    return tuple(out)


def axpy(acc: dict, c, d: dict) -> None:
    """acc += c * d, in place (zeros are cleaned by :func:`clean`)."""
    if not c:
        return
    for i, a in d.items():
        acc[i] = acc.get(i, 0) + c * a


def clean(d: dict) -> dict:
    return {i: a for i, a in d.items() if a}


def apply_sparse(m: Matrix, d: dict) -> dict:
    out: dict = {}
    for j, c in d.items():
        for i in range(m.rows):
            a = m.entries[i][j]
            if a:
                out[i] = out.get(i, 0) + a * c
    return clean(out)


def column_supports(m: Matrix) -> list[list[tuple[int, Fraction]]]:
    return [[(i, m.entries[i][j]) for i in range(m.rows) if m.entries[i][j]] for j in range(m.cols)]


@dataclass(eq=False)
class Tensor:
    arity: int
    in_dim: int
    out_dim: int
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        self.data = {tuple(k): c for k, v in self.data.items() if (c := clean(v))}

    @classmethod
    def zero(cls, arity: int, in_dim: int, out_dim: int) -> "Tensor":
        return cls(arity, in_dim, out_dim, {})

    @classmethod
    def from_function(cls, arity: int, in_dim: int, out_dim: int,
                      fn: Callable[[tuple], dict]) -> "Tensor":
        """Build from ``fn(basis_tuple) -> sparse value``."""
        return cls(arity, in_dim, out_dim, {t: fn(t) for t in product(range(in_dim), repeat=arity)})

    @classmethod
    def from_flat(cls, arity: int, in_dim: int, out_dim: int, flat: Sequence) -> "Tensor":
        data = {}
        for idx, t in enumerate(product(range(in_dim), repeat=arity)):
            chunk = flat[idx * out_dim:(idx + 1) * out_dim]
            if any(chunk):
                data[t] = sparse(chunk)
        return cls(arity, in_dim, out_dim, data)

    def flat_index(self, t: tuple, k: int) -> int:
        idx = 0
        for i in t:
            idx = idx * self.in_dim + i
        return idx * self.out_dim + k

    @property
    def flat_dim(self) -> int:
        return self.in_dim ** self.arity * self.out_dim

    def flat(self) -> Vector:
        out = [Fraction(0)] * self.flat_dim
        for t, v in self.data.items():
            for k, a in v.items():
                out[self.flat_index(t, k)] = a
        return tuple(out)

    def at(self, t: tuple) -> dict:
        return self.data.get(t, {})

    def value(self, t: tuple) -> Vector:
        return dense(self.at(t), self.out_dim)

    def eval_sparse(self, args: Sequence[dict]) -> dict:
        if len(args) != self.arity:
            raise DimMismatch(f"expected {self.arity} arguments, got {len(args)}")
        acc: dict = {}
        for combo in product(*(list(a.items()) for a in args)):
            v = self.data.get(tuple(i for i, _ in combo))
            if v:
                c = Fraction(1)
                for _, a in combo:
                    c *= a
                axpy(acc, c, v)
        return clean(acc)

    def __call__(self, *args: Sequence) -> Vector:
        for a in args:
            if len(a) != self.in_dim:
                raise DimMismatch(f"argument of length {len(a)}, expected {self.in_dim}")
        return dense(self.eval_sparse([sparse(a) for a in args]), self.out_dim)

    def twisted(self, maps: Sequence[Matrix]) -> "Tensor":
        """The table of ``T(m_1 e_{t1}, ..., m_k e_{tk})`` over basis tuples."""
        if len(maps) != self.arity:
            raise DimMismatch("one map per argument slot is required")
        cols = [column_supports(m) for m in maps]
        data = {}
        for t in product(range(self.in_dim), repeat=self.arity):
            acc: dict = {}
            for combo in product(*(cols[s][t[s]] for s in range(self.arity))):
                v = self.data.get(tuple(i for i, _ in combo))
                if v:
                    c = Fraction(1)
                    for _, a in combo:
                        c *= a
                    axpy(acc, c, v)
            if acc:
                data[t] = acc
        return Tensor(self.arity, self.in_dim, self.out_dim, data)

    def compose_out(self, m: Matrix) -> "Tensor":
        """``m o T``."""
        if m.cols != self.out_dim:
            raise DimMismatch("output map has the wrong source dimension")
        return Tensor(self.arity, self.in_dim, m.rows,
                      {t: apply_sparse(m, v) for t, v in self.data.items()})

    def contract_last(self, prefix: tuple, v: dict) -> dict:
        """``sum_j v_j T(prefix..., e_j)`` for a basis prefix of length arity-1."""
        acc: dict = {}
        for j, c in v.items():
            w = self.data.get(prefix + (j,))
            if w:
                axpy(acc, c, w)
        return acc

    def _combine(self, other: "Tensor", sign: int) -> "Tensor":
        if (self.arity, self.in_dim, self.out_dim) != (other.arity, other.in_dim, other.out_dim):
            raise DimMismatch("tensor shapes differ")
        data = {t: dict(v) for t, v in self.data.items()}
        for t, v in other.data.items():
            axpy(data.setdefault(t, {}), sign, v)
        return Tensor(self.arity, self.in_dim, self.out_dim, data)

    def __add__(self, other: "Tensor") -> "Tensor":
        return self._combine(other, 1)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self._combine(other, -1)

    def scale(self, c) -> "Tensor":
        c = q(c)
        return Tensor(self.arity, self.in_dim, self.out_dim,
                      {t: {i: c * a for i, a in v.items()} for t, v in self.data.items()})

    def __neg__(self) -> "Tensor":
        return self.scale(-1)

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return ((self.arity, self.in_dim, self.out_dim, self.data)
                == (other.arity, other.in_dim, other.out_dim, other.data))

    def items(self) -> Iterable:
        return self.data.items()

    def __repr__(self) -> str:
        return f"Tensor(arity={self.arity}, {self.in_dim}->{self.out_dim}, nnz={len(self.data)})"


def basis_tuples(dim: int, k: int):
    return product(range(dim), repeat=k)


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 when there is a repeat)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign
