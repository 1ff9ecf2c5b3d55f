"""Command line interface.

Every command prints one JSON document. Exit status: 0 on success, 1 when
the answer is mathematically negative (not silting, a failed check), 2 on
bad usage or a broken project file.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import enumerate_modules
from .complexes import is_presilting, silting_certificate
from .errors import CapExceededError, ProjectError
from .functors import H_P, K_T_linear, T_P, beta_star, endo_algebra, epsilon, tor1
from .heart import DEFAULT_CHECKS, OPTIONAL_CHECKS, inventories, run_suite
from .io import load, module_json
from .torsion import TorsionPair, defect, in_F, in_T, verify_silting_equality

COMMANDS = ["check-presilting", "check-silting", "torsion", "endo", "defect",
            "functor-table", "kt", "verify", "enumerate"]


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="silting", description="Silting complexes and modules over path algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--project", required=True, help="project JSON file")
    p.add_argument("--complex", dest="complex_name", help="complex name (default: config.complex or the first one)")
    p.add_argument("--module", help="module name for 'defect' (default: the whole inventory)")
    p.add_argument("--check", help="comma-separated check names for 'verify'")
    p.add_argument("--max-dim", type=int, help="dimension cap for module inventories")
    p.add_argument("--seed", type=int, help="seed for the randomized isomorphism fallback")
    p.add_argument("--out", help="also write the JSON result to this file")
    return p


def _dims(project, args) -> tuple:
    m = args.max_dim if args.max_dim is not None else project.config.get("max_dim", 3)
    e = args.max_dim if args.max_dim is not None else project.config.get("e_max_dim", m)
    return m, e


def _cfg(project, args):
    m, e = _dims(project, args)
    return project.make_config(seed=args.seed, max_dim=max(m, e, 1))


def cmd_check_presilting(project, args) -> tuple:
    X = project.complex(args.complex_name)
    ok = is_presilting(X)
    return {"complex": X.name, "presilting": ok}, 0 if ok else 1


def cmd_check_silting(project, args) -> tuple:
    X = project.complex(args.complex_name)
    pre = is_presilting(X)
    cert = silting_certificate(X) if pre else None
    out = {"complex": X.name, "presilting": pre, "silting": cert is not None}
    if cert is not None:
        out["d"] = cert.d
        out["endo_dim"] = endo_algebra(X).dim
        out["certificate"] = cert.verify()
    return out, 0 if cert is not None else 1


def cmd_torsion(project, args) -> tuple:
    X = project.complex(args.complex_name)
    cfg = _cfg(project, args)
    tp = TorsionPair.of(X)
    inv = enumerate_modules(X.algebra, _dims(project, args)[0], cfg)
    rows = [{"module": M.name, "dim": M.dim, "torsion": in_T(tp, M) if tp.is_silting else tp.in_gen(M),
             "torsion_free": in_F(tp, M), "defect_dim": defect(X, M).dim} for M in inv]
    eq = verify_silting_equality(tp, inv)
    out = {"complex": X.name, "T": module_json(tp.T), "modules": rows,
           "gen_equals_defect_kernel": eq.ok, "counterexamples": [n for n, _ in eq.counterexamples]}
    return out, 0 if eq.ok else 1


def cmd_endo(project, args) -> tuple:
    X = project.complex(args.complex_name)
    E = endo_algebra(X)
    e = epsilon(X)
    A = E.algebra
    out = {
        "complex": X.name,
        "endo_dim": E.dim,
        "labels": list(A.labels),
        "idempotents": list(A.idempotent_labels or []),
        "structure_constants": [[[str(x) for x in A.mult[i, j]] for j in range(E.dim)] for i in range(E.dim)],
        "end_T_dim": e.E.dim,
        "epsilon_kernel_dim": e.kernel_dim,
    }
    return out, 0


def cmd_defect(project, args) -> tuple:
    X = project.complex(args.complex_name)
    if args.module:
        mods = [project.module(args.module)]
    else:
        mods = enumerate_modules(X.algebra, _dims(project, args)[0], _cfg(project, args))
    rows = [{"module": M.name, "dim": M.dim, "defect_dim": defect(X, M).dim} for M in mods]
    return {"complex": X.name, "defects": rows}, 0


def cmd_functor_table(project, args) -> tuple:
    X = project.complex(args.complex_name)
    tp = TorsionPair.of(X)
    if not tp.is_silting:
        return {"complex": X.name, "error": "not silting"}, 1
    b = beta_star(tp.certificate)
    rows = []
    for M in enumerate_modules(X.algebra, _dims(project, args)[0], _cfg(project, args)):
        Y0, Y1 = H_P(X, M, 0), H_P(X, M, 1)
        rows.append({
            "module": M.name, "dim": M.dim, "torsion": in_T(tp, M), "torsion_free": in_F(tp, M),
            "H0_dim": Y0.dim, "H1_dim": Y1.dim,
            "T_P_H0_dim": T_P(X, Y0).dim, "K_T_H1_dim": K_T_linear(Y1, b).dim,
        })
    return {"complex": X.name, "rows": rows}, 0


def cmd_kt(project, args) -> tuple:
    from .dg import K_T, h0_check
    X = project.complex(args.complex_name)
    tp = TorsionPair.of(X)
    if not tp.is_silting:
        return {"complex": X.name, "error": "not silting"}, 1
    b = beta_star(tp.certificate)
    E = endo_algebra(X)
    rows = []
    for Y in enumerate_modules(E.algebra, _dims(project, args)[1], _cfg(project, args)):
        t = tor1(Y, b)
        rows.append({"module": Y.name, "dim": Y.dim, "T_P_dim": T_P(X, Y).dim, "K_T_dim": t.kt_dim,
                     "tor1_dim": t.dim, "dg_H0_dim": h0_check(Y, X).dim, "dg_H-1_dim": K_T(Y, X, b).dim})
    return {"complex": X.name, "rows": rows}, 0


def cmd_verify(project, args) -> tuple:
    X = project.complex(args.complex_name)
    checks = None
    if args.check:
        checks = [c.strip() for c in args.check.split(",") if c.strip()]
    elif project.config.get("checks"):
        checks = list(project.config["checks"])
    if checks:
        bad = [c for c in checks if c not in DEFAULT_CHECKS + OPTIONAL_CHECKS]
        if bad:
            raise UsageError(f"unknown checks {bad}; available: {DEFAULT_CHECKS + OPTIONAL_CHECKS}")
    cfg = _cfg(project, args)
    tp = TorsionPair.of(X)
    m, e = _dims(project, args)
    R_inv, E_inv = inventories(tp, m, e, cfg)
    rep = run_suite(tp, R_inv, E_inv, cfg, checks, algebra=project.name, complex_name=X.name,
                    heart_limit=project.config.get("heart_limit", 50))
    return rep.to_json(), 0 if rep.ok else 1


def cmd_enumerate(project, args) -> tuple:
    A = project.algebra
    mods = enumerate_modules(A, _dims(project, args)[0], _cfg(project, args))
    rows = [{"module": M.name, "dim": M.dim, "dim_vector": list(M.dim_vector())} for M in mods]
    return {"algebra": project.name, "algebra_dim": A.dim, "count": len(rows), "modules": rows}, 0


HANDLERS = {
    "check-presilting": cmd_check_presilting,
    "check-silting": cmd_check_silting,
    "torsion": cmd_torsion,
    "endo": cmd_endo,
    "defect": cmd_defect,
    "functor-table": cmd_functor_table,
    "kt": cmd_kt,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        project = load(args.project)
        out, code = HANDLERS[args.command](project, args)
    except (ProjectError, UsageError, CapExceededError) as exc:
        print(json.dumps({"error": str(exc), "kind": type(exc).__name__}), file=sys.stderr)
        return 2
    text = json.dumps(out, indent=2, sort_keys=True)
    print(text, file=stdout)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return code


def main() -> None:
    sys.exit(run())
