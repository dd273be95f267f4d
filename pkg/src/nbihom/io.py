"""JSON instance files.

Every file is an object with ``kind`` (algebra, representation, cocycle,
quadratic, deformation), optional ``name``/``description``/``provenance``
metadata and the payload of that kind.  Rationals are strings ``"p/q"`` (or
``"p"``); integers are accepted on input.  Multilinear tables are keyed by
comma-joined basis names and hold sparse ``{name: rational}`` values.

Algebra payload::

    {"n": 3, "dim": 3, "basis": ["e1", "e2", "e3"], "antisymmetric": true,
     "brackets": {"e1,e2,e3": {"e1": "1"}},
     "alpha": [["1", "0", "0"], ...], "beta": [...]}

With ``antisymmetric`` only strictly increasing keys are listed and the
bracket is spread over permutations with signs.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any

from .algebra import NBiHomLieAlgebra
from .cohomology import Deformation
from .extension import BilinearForm, Cocycle, QuadraticAlgebra
from .linalg import Matrix
from .representation import Representation
from .tensors import Tensor, permutation_sign

KINDS = ("algebra", "representation", "cocycle", "quadratic", "deformation")
META = ("name", "description", "provenance")
_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column, self.message = line, column, message


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path, self.message = path, message


@dataclass
class InstanceFile:
    kind: str
    obj: Any
    metadata: dict = field(default_factory=dict)
    twist_maps: dict = field(default_factory=dict)


# ---------------------------------------------------------------- parsing

class _Reader:
    def __init__(self, text: str):
        self.text = text

    def locate(self, needle: str) -> tuple[int, int]:
        i = self.text.find(needle)
        if i < 0:
            return 1, 1
        line = self.text.count("\n", 0, i) + 1
        return line, i - (self.text.rfind("\n", 0, i) + 1) + 1

    def schema(self, path: str, message: str, needle: str | None = None):
        err = SchemaError(path, message)
        if needle is not None:
            err.line, err.column = self.locate(needle)
        return err

    def rational(self, x, path: str) -> Fraction:
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise self.schema(path, f"expected a rational string, got {json.dumps(x)}")
        if isinstance(x, int):
            return Fraction(x)
        m = _RATIONAL.match(x)
        if not m:
            line, col = self.locate(json.dumps(x))
            raise ParseError(line, col, f"{path}: malformed rational {x!r}")
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            line, col = self.locate(json.dumps(x))
            raise ParseError(line, col, f"{path}: zero denominator in {x!r}")
        return Fraction(int(m.group(1)), den)

    def obj(self, d, path: str, required: tuple, optional: tuple = ()) -> dict:
        if not isinstance(d, dict):
            raise self.schema(path, "expected an object")
        for k in d:
            if k not in required and k not in optional:
                raise self.schema(f"{path}.{k}", "unknown field", json.dumps(k))
        for k in required:
            if k not in d:
                raise self.schema(f"{path}.{k}", "missing field")
        return d

    def integer(self, x, path: str, lo: int = 0) -> int:
        if isinstance(x, bool) or not isinstance(x, int) or x < lo:
            raise self.schema(path, f"expected an integer >= {lo}")
        return x

    def names(self, x, dim: int, path: str) -> tuple:
        if not isinstance(x, list) or len(x) != dim or not all(isinstance(s, str) for s in x):
            raise self.schema(path, f"expected {dim} basis names")
        if len(set(x)) != dim or any("," in s or not s.strip() for s in x):
            raise self.schema(path, "basis names must be distinct, nonempty and comma-free")
        return tuple(x)

    def matrix(self, x, rows: int, cols: int, path: str) -> Matrix:
        if not isinstance(x, list) or len(x) != rows:
            raise self.schema(path, f"expected {rows} rows")
        out = []
        for i, r in enumerate(x):
            if not isinstance(r, list) or len(r) != cols:
                raise self.schema(f"{path}[{i}]", f"expected {cols} entries")
            out.append([self.rational(a, f"{path}[{i}][{j}]") for j, a in enumerate(r)])
        return Matrix.from_rows(out, cols)

    def sparse_vec(self, x, names: tuple, path: str) -> dict:
        if not isinstance(x, dict):
            raise self.schema(path, "expected {basis name: rational}")
        idx = {s: i for i, s in enumerate(names)}
        out = {}
        for k, a in x.items():
            if k not in idx:
                raise self.schema(f"{path}.{k}", "unknown basis name", json.dumps(k))
            out[idx[k]] = self.rational(a, f"{path}.{k}")
        return out

    def key(self, k: str, names: tuple, arity: int, path: str) -> tuple:
        idx = {s: i for i, s in enumerate(names)}
        parts = [p.strip() for p in k.split(",")]
        if len(parts) != arity or any(p not in idx for p in parts):
            raise self.schema(f"{path}.{k}", f"expected {arity} comma-separated basis names",
                              json.dumps(k))
        return tuple(idx[p] for p in parts)

    def table(self, x, arity: int, names: tuple, out_names: tuple, path: str) -> dict:
        if not isinstance(x, dict):
            raise self.schema(path, "expected a table object")
        return {self.key(k, names, arity, path): self.sparse_vec(v, out_names, f"{path}.{k}")
                for k, v in x.items()}

    # -- kinds

    def algebra(self, d, path: str) -> NBiHomLieAlgebra:
        d = self.obj(d, path, ("n", "dim", "brackets", "alpha", "beta"),
                     ("basis", "antisymmetric"))
        n = self.integer(d["n"], f"{path}.n", 2)
        dim = self.integer(d["dim"], f"{path}.dim", 1)
        names = self.names(d.get("basis", [f"e{i + 1}" for i in range(dim)]), dim, f"{path}.basis")
        anti = d.get("antisymmetric", False)
        if not isinstance(anti, bool):
            raise self.schema(f"{path}.antisymmetric", "expected true or false")
        table = self.table(d["brackets"], n, names, names, f"{path}.brackets")
        if anti:
            for t in table:
                if list(t) != sorted(set(t)):
                    raise self.schema(f"{path}.brackets", f"key {t} must be strictly increasing")
        alpha = self.matrix(d["alpha"], dim, dim, f"{path}.alpha")
        beta = self.matrix(d["beta"], dim, dim, f"{path}.beta")
        return NBiHomLieAlgebra.from_structure(n, dim, table, alpha, beta, antisymmetrize=anti,
                                               basis_names=names)

    def representation(self, d, path: str) -> Representation:
        d = self.obj(d, path, ("algebra", "vdim", "rho", "alpha_v", "beta_v"),
                     ("module_basis", "full_tensor"))
        A = self.algebra(d["algebra"], f"{path}.algebra")
        vdim = self.integer(d["vdim"], f"{path}.vdim", 1)
        self.names(d.get("module_basis", [f"v{i + 1}" for i in range(vdim)]), vdim,
                   f"{path}.module_basis")
        full = d.get("full_tensor", False)
        if not isinstance(full, bool):
            raise self.schema(f"{path}.full_tensor", "expected true or false")
        if not isinstance(d["rho"], dict):
            raise self.schema(f"{path}.rho", "expected a table object")
        rho = {}
        for k, m in d["rho"].items():
            t = self.key(k, A.basis_names, A.n - 1, f"{path}.rho")
            if not full and list(t) != sorted(set(t)):
                raise self.schema(f"{path}.rho", f"key {k!r} must be strictly increasing")
            rho[t] = self.matrix(m, vdim, vdim, f"{path}.rho.{k}")
        return Representation(A, vdim, rho, self.matrix(d["alpha_v"], vdim, vdim, f"{path}.alpha_v"),
                              self.matrix(d["beta_v"], vdim, vdim, f"{path}.beta_v"), full)

    def cocycle(self, d, path: str) -> Cocycle:
        d = self.obj(d, path, ("representation", "theta"))
        R = self.representation(d["representation"], f"{path}.representation")
        A = R.algebra
        vnames = tuple(f"v{i + 1}" for i in range(R.vdim))
        rd = d["representation"]
        if isinstance(rd, dict) and "module_basis" in rd:
            vnames = tuple(rd["module_basis"])
        table = self.table(d["theta"], A.n, A.basis_names, vnames, f"{path}.theta")
        return Cocycle(A, R, Tensor(A.n, A.dim, R.vdim, table))

    def quadratic(self, d, path: str) -> QuadraticAlgebra:
        d = self.obj(d, path, ("algebra", "gram"))
        A = self.algebra(d["algebra"], f"{path}.algebra")
        return QuadraticAlgebra(A, BilinearForm(self.matrix(d["gram"], A.dim, A.dim, f"{path}.gram")))

    def deformation(self, d, path: str) -> Deformation:
        d = self.obj(d, path, ("algebra", "terms"))
        A = self.algebra(d["algebra"], f"{path}.algebra")
        if not isinstance(d["terms"], list) or not d["terms"]:
            raise self.schema(f"{path}.terms", "expected a nonempty list of tables")
        terms = [Tensor(A.n, A.dim, A.dim,
                        self.table(t, A.n, A.basis_names, A.basis_names, f"{path}.terms[{i}]"))
                 for i, t in enumerate(d["terms"])]
        return Deformation(A, terms)


def parse_instance(text: str) -> InstanceFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.lineno, e.colno, e.msg) from None
    r = _Reader(text)
    if not isinstance(raw, dict):
        raise r.schema("$", "expected an object")
    kind = raw.get("kind")
    if kind not in KINDS:
        raise r.schema("$.kind", f"expected one of {', '.join(KINDS)}")
    payload = {k: v for k, v in raw.items() if k not in ("kind", "twist_maps") and k not in META}
    for k in META:
        if k in raw and not isinstance(raw[k], str):
            raise r.schema(f"$.{k}", "expected a string")
    obj = getattr(r, kind)(payload, "$")
    twist = {}
    if "twist_maps" in raw:
        if kind not in ("algebra", "representation"):
            raise r.schema("$.twist_maps", "only algebra and representation files carry twist maps",
                           '"twist_maps"')
        A = obj if kind == "algebra" else obj.algebra
        dims = {"alpha": A.dim, "beta": A.dim}
        if kind == "representation":
            dims.update(alpha_v=obj.vdim, beta_v=obj.vdim)
        tm = r.obj(raw["twist_maps"], "$.twist_maps", tuple(dims))
        twist = {k: r.matrix(tm[k], d, d, f"$.twist_maps.{k}") for k, d in dims.items()}
    return InstanceFile(kind, obj, {k: raw[k] for k in META if k in raw}, twist)


def load_instance(path) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# ---------------------------------------------------------------- serializing

def fstr(x) -> str:
    return str(Fraction(x))


def jsonable(x):
    """Fractions to strings, tuples to lists, recursively (for reports)."""
    if isinstance(x, Fraction):
        return fstr(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def _matrix(m: Matrix) -> list:
    return [[fstr(a) for a in row] for row in m.entries]


def _vec(v: dict, names: tuple) -> dict:
    return {names[i]: fstr(v[i]) for i in sorted(v)}


def _table(T: Tensor, names: tuple, out_names: tuple, keys=None) -> dict:
    keys = sorted(T.data) if keys is None else keys
    return {",".join(names[i] for i in t): _vec(T.data[t], out_names) for t in keys if t in T.data}


def is_antisymmetric(T: Tensor) -> bool:
    for t in product(range(T.in_dim), repeat=T.arity):
        s = permutation_sign(t)
        base = T.at(tuple(sorted(t)))
        if s == 0:
            if T.at(t):
                return False
        elif T.at(t) != ({i: s * a for i, a in base.items()}):
            return False
    return True


def _algebra(A: NBiHomLieAlgebra) -> dict:
    anti = is_antisymmetric(A.bracket)
    keys = sorted(t for t in A.bracket.data if not anti or list(t) == sorted(set(t)))
    return {"n": A.n, "dim": A.dim, "basis": list(A.basis_names), "antisymmetric": anti,
            "brackets": _table(A.bracket, A.basis_names, A.basis_names, keys),
            "alpha": _matrix(A.alpha), "beta": _matrix(A.beta)}


def _representation(R: Representation) -> dict:
    A = R.algebra
    return {"algebra": _algebra(A), "vdim": R.vdim,
            "module_basis": [f"v{i + 1}" for i in range(R.vdim)],
            "full_tensor": R.full_tensor,
            "rho": {",".join(A.basis_names[i] for i in t): _matrix(R.rho[t]) for t in sorted(R.rho)},
            "alpha_v": _matrix(R.alpha_v), "beta_v": _matrix(R.beta_v)}


def payload(obj) -> tuple[str, dict]:
    if isinstance(obj, NBiHomLieAlgebra):
        return "algebra", _algebra(obj)
    if isinstance(obj, Representation):
        return "representation", _representation(obj)
    if isinstance(obj, Cocycle):
        A = obj.source
        vn = tuple(f"v{i + 1}" for i in range(obj.target_rep.vdim))
        return "cocycle", {"representation": _representation(obj.target_rep),
                           "theta": _table(obj.theta, A.basis_names, vn)}
    if isinstance(obj, QuadraticAlgebra):
        return "quadratic", {"algebra": _algebra(obj.algebra), "gram": _matrix(obj.form.gram)}
    if isinstance(obj, Deformation):
        A = obj.algebra
        return "deformation", {"algebra": _algebra(A),
                               "terms": [_table(t, A.basis_names, A.basis_names) for t in obj.terms]}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def serialize_instance(obj, metadata: dict | None = None, twist_maps: dict | None = None) -> str:
    """Canonical text of ``obj``; ``twist_maps`` records suggested Yau-twist maps."""
    if isinstance(obj, InstanceFile):
        obj, metadata, twist_maps = obj.obj, obj.metadata, obj.twist_maps
    kind, body = payload(obj)
    out = {"kind": kind}
    for k in META:
        if metadata and k in metadata:
            out[k] = metadata[k]
    out.update(body)
    if twist_maps:
        out["twist_maps"] = {k: _matrix(m) for k, m in twist_maps.items()}
    return dumps(out) + "\n"


def dumps(x, level: int = 0) -> str:
    """JSON with two-space indentation, keeping flat lists and small objects on one line."""
    flat = json.dumps(x, ensure_ascii=False)
    if not isinstance(x, (dict, list)) or (len(flat) <= 72 and level > 0):
        return flat
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {dumps(v, level + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    items = [inner + dumps(v, level + 1) for v in x]
    return "[\n" + ",\n".join(items) + "\n" + pad + "]"
