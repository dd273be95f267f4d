"""Command-line front end: ``nbihom <subcommand> FILE [options]``.

Exit status: 0 when every requested check passes, 1 when a check fails or a
library precondition is violated, 2 for usage, file and parse errors.
Instance paths that do not exist are looked up among the bundled files by
basename, so ``nbihom check examples/ex2_4.alg`` works from anywhere.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import algebra as alg
from . import cohomology as coh
from . import extension as ext
from . import representation as rep
from .io import InstanceFile, ParseError, SchemaError, dumps, jsonable, load_instance, serialize_instance
from .linalg import LinalgError, Matrix, Subspace, is_invertible, q
from .tensors import Tensor

USAGE, FAIL, OK = 2, 1, 0


class UsageError(Exception):
    pass


def _echo(argv: list[str]) -> list[str]:
    """argv without the output-only flags, so reports do not depend on where they go."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
        elif tok == "--emit":
            skip = True
        elif not (tok == "--quiet" or tok.startswith("--emit=")):
            out.append(tok)
    return out


class Report:
    def __init__(self, argv: list[str]):
        self.command = _echo(argv)
        self.checks: list[dict] = []
        self.info: list[dict] = []
        self.results: dict = {}
        self.error: dict | None = None

    def check(self, c: alg.CheckResult) -> None:
        self.checks.append(c.as_dict())

    def checks_from(self, cs) -> None:
        for c in cs:
            self.check(c)

    def note(self, c: alg.CheckResult | None) -> None:
        """Informational verdict that does not affect the exit status."""
        if c is not None:
            self.info.append(c.as_dict())

    @property
    def status(self) -> int:
        if self.error is not None:
            return self.error.get("status", FAIL)
        return OK if all(c["passed"] for c in self.checks) else FAIL

    def as_dict(self) -> dict:
        out = {"command": self.command, "checks": self.checks, "info": self.info,
               "results": self.results}
        if self.error is not None:
            out["error"] = {k: v for k, v in self.error.items() if k != "status"}
        out["status"] = self.status
        return jsonable(out)

    def human(self) -> str:
        lines = ["nbihom " + " ".join(self.command)]
        tagged = [("PASS" if c["passed"] else "FAIL", c) for c in self.checks]
        tagged += [("info " + ("pass" if c["passed"] else "fail"), c) for c in self.info]
        for tag, c in tagged:
            line = f"  {tag:9} {c['name']}"
            if not c["passed"] and c["witness"] is not None:
                line += f"  witness={tuple(c['witness'])}"
                if c["discrepancy"] is not None:
                    line += "  discrepancy=(" + ", ".join(str(a) for a in c["discrepancy"]) + ")"
            if c["detail"]:
                line += f"  [{c['detail']}]"
            lines.append(line)
        for k, v in self.results.items():
            lines.append(f"  {k}: {json.dumps(jsonable(v), ensure_ascii=False)}")
        if self.error is not None:
            lines.append(f"  error: {self.error['type']}: {self.error['message']}")
        lines.append(f"status: {self.status}")
        return "\n".join(lines)


# ---------------------------------------------------------------- helpers

def resolve(path: str) -> str:
    if os.path.exists(path):
        return path
    bundled = resources.files("nbihom") / "data" / os.path.basename(path)
    if bundled.is_file():
        return str(bundled)
    raise FileNotFoundError(path)


def load(path: str, *kinds: str) -> InstanceFile:
    inst = load_instance(resolve(path))
    if kinds and inst.kind not in kinds:
        raise UsageError(f"{path}: expected a {' or '.join(kinds)} file, got {inst.kind}")
    return inst


def parse_matrix(spec: str, dim: int) -> Matrix:
    """``id``, ``diag:a,b,..`` or JSON rows such as ``[[1,0],["1/2",1]]``."""
    s = spec.strip()
    if s == "id":
        return Matrix.identity(dim)
    if s.startswith("diag:"):
        vals = [q(x.strip()) for x in s[5:].split(",")]
        if len(vals) != dim:
            raise UsageError(f"diag needs {dim} entries")
        return Matrix.diag(vals)
    try:
        rows = json.loads(s)
        m = Matrix.from_rows([[q(a) for a in r] for r in rows], dim)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise UsageError(f"bad matrix {spec!r}: {e}") from None
    if m.rows != dim:
        raise UsageError(f"matrix must be {dim} x {dim}")
    return m


def parse_ideal(spec: str, A: alg.NBiHomLieAlgebra) -> Subspace:
    """Comma-separated basis names, or JSON list of coordinate vectors."""
    s = spec.strip()
    if s.startswith("["):
        try:
            vecs = [[q(a) for a in v] for v in json.loads(s)]
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise UsageError(f"bad ideal {spec!r}: {e}") from None
        if any(len(v) != A.dim for v in vecs):
            raise UsageError(f"ideal vectors must have length {A.dim}")
        return Subspace.span(vecs, A.dim)
    idx = {name: i for i, name in enumerate(A.basis_names)}
    vecs = []
    for name in (p.strip() for p in s.split(",")):
        if name not in idx:
            raise UsageError(f"unknown basis name {name!r} in --ideal")
        v = [0] * A.dim
        v[idx[name]] = 1
        vecs.append(v)
    return Subspace.span(vecs, A.dim)


def write_instance(path: str | None, obj, meta: dict) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(serialize_instance(obj, meta))


def matrix_json(m: Matrix) -> list:
    return [[str(a) for a in r] for r in m.entries]


def series_json(subs: list[Subspace]) -> list:
    return [{"dim": s.dim, "basis": [[str(a) for a in v] for v in s.basis]} for s in subs]


# ---------------------------------------------------------------- subcommands

def cmd_check(a, R: Report):
    A = load(a.file, "algebra").obj
    R.results.update(n=A.n, dim=A.dim)
    R.checks_from(alg.verify_algebra(A).checks)


def cmd_twist(a, R: Report):
    inst = load(a.file, "algebra")
    L, maps = inst.obj, inst.twist_maps
    al = parse_matrix(a.alpha, L.dim) if a.alpha else maps.get("alpha", Matrix.identity(L.dim))
    be = parse_matrix(a.beta, L.dim) if a.beta else maps.get("beta", Matrix.identity(L.dim))
    for name, m in (("alpha", al), ("beta", be)):
        w = alg.morphism_witness(m, L)
        R.check(alg.CheckResult(f"{name}_is_morphism", w is None, *(w or (None, None))))
    R.check(alg.CheckResult("alpha_beta_commute", al @ be == be @ al))
    if not all(c["passed"] for c in R.checks):
        return
    T = alg.yau_twist(L, al, be)
    R.checks_from(alg.verify_algebra(T).checks)
    write_instance(a.out, T, {"name": "twist", "description": f"Yau twist of {os.path.basename(a.file)}"})


def _rep_values(Rp: rep.Representation) -> dict:
    A = Rp.algebra
    return {",".join(A.basis_names[i] for i in t): matrix_json(m) for t, m in sorted(Rp.rho.items())}


def cmd_rep_check(a, R: Report):
    Rp = load(a.file, "representation").obj
    r = rep.verify_representation(Rp)
    R.checks_from(r.checks)
    R.note(r.cond4_as_printed)
    R.results["rho"] = _rep_values(Rp)


def cmd_semidirect(a, R: Report):
    Rp = load(a.file, "representation").obj
    S = rep.semidirect_product(Rp)
    R.results["dim"] = S.dim
    R.checks_from(alg.verify_algebra(S).checks)
    write_instance(a.out, S, {"name": "semidirect"})


def cmd_cocycle_check(a, R: Report):
    C = load(a.file, "cocycle").obj
    r = ext.verify_cocycle(C)
    R.checks_from(r.checks)
    R.note(r.cond3_as_printed)


def cmd_extend(a, R: Report):
    C = load(a.file, "cocycle").obj
    T = ext.t_theta_extension(C)
    R.results["dim"] = T.dim
    R.checks_from(alg.verify_algebra(T).checks)
    write_instance(a.out, T, {"name": "t_theta_extension"})


def cmd_tstar(a, R: Report):
    A = load(a.file, "algebra").obj
    theta = load(a.theta, "cocycle").obj.theta if a.theta else None
    Q = ext.t_star_extension(A, theta)
    R.results["dim"] = Q.algebra.dim
    R.checks_from(alg.verify_algebra(Q.algebra).checks)
    R.checks_from(ext.check_quadratic(Q).checks)
    write_instance(a.out, Q, {"name": "t_star_extension"})


def cmd_quadratic_check(a, R: Report):
    Q = load(a.file, "quadratic").obj
    R.checks_from(ext.check_quadratic(Q).checks)


def cmd_extract_tstar(a, R: Report):
    Q = load(a.file, "quadratic").obj
    if not a.ideal:
        raise UsageError("extract-tstar needs --ideal")
    I = parse_ideal(a.ideal, Q.algebra)
    C, B, phi = ext.extract_tstar(Q, I)
    target = ext.t_theta_extension(C, check=False)
    R.check(alg.CheckResult("phi_invertible", is_invertible(phi)))
    R.check(alg.CheckResult("phi_morphism", alg.is_morphism(phi, Q.algebra, target)))
    R.check(alg.CheckResult("phi_isometry", phi.T @ ext.canonical_qg(B).gram @ phi == Q.form.gram))
    R.results.update(quotient_dim=B.dim, phi=matrix_json(phi))
    write_instance(a.out, C, {"name": "extracted_theta"})


def cmd_series(a, R: Report):
    A = load(a.file, "algebra").obj
    R.results["derived_series"] = series_json(alg.derived_series(A))
    R.results["central_series"] = series_json(alg.central_series(A))
    R.results["solvable"] = list(alg.is_solvable(A))
    R.results["nilpotent"] = list(alg.is_nilpotent(A))


def cmd_cohomology(a, R: Report):
    if a.degree != 2:
        raise UsageError("only degree 2 is available")
    A = load(a.file, "algebra").obj
    h = coh.cohomology_h2(A)
    R.results.update(dim_C1=h.dim_c1, dim_C2=h.dim_c2, dim_Z2=h.dim_z2, dim_B2=h.dim_b2,
                     dim_H2=h.dim_h2)
    R.check(alg.CheckResult("B2_in_Z2", h.b2_in_z2))


def _deformation(path: str, order: int | None) -> coh.Deformation:
    inst = load(path, "deformation", "algebra")
    if inst.kind == "algebra":
        return coh.Deformation.null(inst.obj, order or 4)
    D = inst.obj
    if order is None or order == D.order:
        return D
    A = D.algebra
    terms = (D.terms + [Tensor.zero(A.n, A.dim, A.dim)] * order)[:order]
    return coh.Deformation(A, terms)


def _deformation_checks(D: coh.Deformation, R: Report):
    r = coh.verify_deformation(D)
    R.checks_from(r.equivariance + r.orders)
    R.note(r.infinitesimal_cocycle)
    for c in r.skewsymmetry:
        R.note(c)


def cmd_deform(a, R: Report):
    D = _deformation(a.file, a.max_order)
    R.results["order"] = D.order
    if a.action == "verify":
        _deformation_checks(D, R)
    elif a.action == "pullback":
        if not a.psi:
            raise UsageError("deform pullback needs --psi")
        try:
            with open(resolve(a.psi), encoding="utf-8") as fh:
                raw = json.load(fh)
            Psi = [Matrix.identity(D.algebra.dim)] + [
                Matrix.from_rows([[q(x) for x in r] for r in m], D.algebra.dim) for m in raw]
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise UsageError(f"bad --psi file: {e}") from None
        P = coh.pullback_deformation(D, Psi)
        _deformation_checks(P, R)
        R.results["null"] = P.is_null()
        write_instance(a.out, P, {"name": "pullback"})
    else:
        Psi, S = coh.straighten(D)
        R.check(alg.CheckResult("straightened_to_null", S.is_null()))
        R.results["psi"] = [matrix_json(m) for m in Psi[1:]]


def cmd_equiv_find(a, R: Report):
    R1 = load(a.file, "representation").obj
    R2 = load(a.other, "representation").obj
    T = rep.find_equivalence(R1, R2)
    R.check(alg.CheckResult("equivalent", T is not None))
    if T is not None:
        R.results["T"] = matrix_json(T)


COMMANDS = {
    "check": (cmd_check, "verify the axioms of an algebra file"),
    "twist": (cmd_twist, "Yau twist of an algebra by --alpha/--beta or its twist_maps"),
    "rep-check": (cmd_rep_check, "verify a representation file"),
    "semidirect": (cmd_semidirect, "semidirect product of a representation"),
    "cocycle-check": (cmd_cocycle_check, "verify a cocycle file"),
    "extend": (cmd_extend, "T_theta extension of a cocycle"),
    "tstar": (cmd_tstar, "T*_theta extension of an algebra (theta from --theta)"),
    "quadratic-check": (cmd_quadratic_check, "check a quadratic algebra file"),
    "extract-tstar": (cmd_extract_tstar, "recover T*_theta data from a quadratic algebra"),
    "series": (cmd_series, "derived and central series"),
    "cohomology": (cmd_cohomology, "dimensions of Z^2, B^2 and H^2"),
    "deform": (cmd_deform, "verify, pull back or straighten a truncated deformation"),
    "equiv-find": (cmd_equiv_find, "search for an equivalence of two representations"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", metavar="PATH", help="write the JSON report to PATH")
    common.add_argument("--jobs", type=int, default=1, metavar="K",
                        help="worker count (accepted for compatibility; checks run serially)")
    common.add_argument("--quiet", action="store_true", help="no human-readable output")
    common.add_argument("--out", metavar="PATH", help="write the constructed instance to PATH")

    p = argparse.ArgumentParser(prog="nbihom", description="exact n-BiHom-Lie algebra workbench")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (fn, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_, parents=[common])
        s.set_defaults(fn=fn)
        if name == "deform":
            s.add_argument("action", choices=("verify", "pullback", "straighten"))
        s.add_argument("file")
        if name == "equiv-find":
            s.add_argument("other")
        if name == "twist":
            s.add_argument("--alpha", metavar="MATRIX",
                           help="id, diag:a,b,.. or JSON rows (default: the file's twist_maps)")
            s.add_argument("--beta", metavar="MATRIX")
        if name == "tstar":
            s.add_argument("--theta", metavar="COCYCLE_FILE")
        if name == "extract-tstar":
            s.add_argument("--ideal", metavar="SPEC")
        if name == "cohomology":
            s.add_argument("--degree", type=int, default=2)
        if name == "deform":
            s.add_argument("--max-order", type=int, metavar="N")
            s.add_argument("--psi", metavar="JSON_FILE",
                           help="list of matrices psi_1, psi_2, .. (psi_0 = id)")
    return p


def run_command(argv: list[str]) -> tuple[int, Report]:
    p = build_parser()
    a = p.parse_args(argv)
    if a.jobs < 1:
        p.error("--jobs must be at least 1")
    if getattr(a, "max_order", None) is not None and a.max_order < 1:
        p.error("--max-order must be at least 1")
    R = Report(argv)
    try:
        a.fn(a, R)
    except (UsageError, FileNotFoundError, ParseError, SchemaError) as e:
        R.error = {"type": type(e).__name__, "message": str(e), "status": USAGE}
    except (alg.AlgebraError, LinalgError) as e:
        R.error = {"type": type(e).__name__, "message": str(e), "status": FAIL}
    if a.emit:
        with open(a.emit, "w", encoding="utf-8") as fh:
            fh.write(dumps(R.as_dict()) + "\n")
    if not a.quiet:
        print(R.human())
    return R.status, R


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        status, _ = run_command(argv)
    except SystemExit as e:       # argparse usage errors
        return int(e.code) if e.code is not None else USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
