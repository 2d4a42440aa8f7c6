"""``cvgates`` command line: verify suites, evaluate circuits, produce demo datasets."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .demos import cat_demo, entangler_demo, nullifier_demo, state_from_spec
from .fock.kernels import guarded_block
from .fock.space import BudgetError, FockSpace, TruncationError, guard_mask
from .fock.measure import apply
from .fock.states import product_state
from .lang.equivalence import AUTO_TRUNCATION
from .lang.macros import MacroError, expand_macros
from .lang.parser import ParseError, parse
from .phase_space import GroupElement, HybridElement, element_of_circuit
from .suites import SUITES, SuiteConfig, run_suite

REPORT_VERSION = "1.0"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _dump(obj, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, default=_json_default) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_csv(header: list[str], rows: list[list], path: Optional[str]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    if path in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


# verify ---------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        cfg = SuiteConfig(
            suite=args.suite,
            cutoff=args.cutoff,
            guard=args.guard,
            strict_phase=args.strict_phase,
            output=args.json,
            tol_override=args.tol,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    checks = run_suite(cfg)
    failed = [c for c in checks if not c.passed]
    report = {
        "version": REPORT_VERSION,
        "config": cfg.echo(),
        "checks": [c.to_json() for c in checks],
        "summary": {"total": len(checks), "passed": len(checks) - len(failed), "failed": len(failed)},
    }
    if args.json:
        _dump(report, args.json)
    if args.json != "-":
        width = max((len(c.name) for c in checks), default=10)
        for c in checks:
            mark = "ok  " if c.passed else "FAIL"
            print(f"{mark} {c.name:<{width}}  {c.status:<17} (expected {c.expected:<17}) err={c.max_error:.3g} tol={c.tol:.3g}")
        print(f"{len(checks) - len(failed)}/{len(checks)} checks met their expected level")
    return EXIT_FAIL if failed else EXIT_OK


# eval -----------------------------------------------------------------------


def _element_json(e) -> dict:
    def g(x: GroupElement) -> dict:
        return {"S": x.S.tolist(), "d": x.d.tolist(), "symplectic_defect": x.symplectic_defect()}

    if isinstance(e, HybridElement):
        return {"backend": "symplectic", "n_modes": e.n_modes, "control": e.control, "branch0": g(e.branch0), "branch1": g(e.branch1)}
    return {"backend": "symplectic", "n_modes": e.n_modes, **g(e)}


def _element_rows(e) -> list[list]:
    branches = [("0", e.branch0), ("1", e.branch1)] if isinstance(e, HybridElement) else [("", e)]
    rows = []
    for label, x in branches:
        for i, row in enumerate(x.S):
            rows.append([label, "S", i, *row.tolist()])
        rows.append([label, "d", "", *x.d.tolist()])
    return rows


def _prepared_state(space: FockSpace, specs: str, qubit: Optional[str]):
    parts = [p.strip() for p in specs.split(",")]
    if len(parts) != space.n_modes:
        raise UsageError(f"--state needs {space.n_modes} comma-separated mode specs, got {len(parts)}")
    amps = [state_from_spec(p, space.cutoff) for p in parts]
    qvec = None
    if space.n_qubits:
        qvec = {"0": [1, 0], "1": [0, 1], "+": [1, 1], "-": [1, -1]}[qubit or "0"]
    return product_state(space, amps, qvec)


def cmd_eval(args) -> int:
    c = expand_macros(parse(args.expr))
    n_modes = args.n_modes or c.max_mode()
    if n_modes < 1:
        raise UsageError("expression acts on no modes; pass --n-modes")
    if args.backend == "symplectic":
        e = element_of_circuit(c, n_modes)
        if args.format == "json":
            _dump(_element_json(e), args.out)
        else:
            width = 2 * n_modes
            _write_csv(["branch", "kind", "row"] + [f"c{k}" for k in range(width)], _element_rows(e), args.out)
        return EXIT_OK

    auto = AUTO_TRUNCATION.get(n_modes, (6, 3))
    cutoff = args.cutoff or auto[0]
    space = FockSpace(n_modes, cutoff, 1 if c.qubits() else 0)
    if args.state:
        psi = apply(c, _prepared_state(space, args.state, args.qubit))
        shape_idx = np.array(np.unravel_index(np.arange(space.dim), space.shape)).T
        keep = np.flatnonzero(np.abs(psi.amplitudes) > args.threshold)
        rows = [[*shape_idx[k].tolist(), psi.amplitudes[k].real, psi.amplitudes[k].imag] for k in keep]
        labels = (["q"] if space.n_qubits else []) + [f"n{m}" for m in range(1, n_modes + 1)]
        if args.format == "json":
            _dump({"backend": "fock", "cutoff": cutoff, "labels": labels, "amplitudes": rows, "norm": psi.norm}, args.out)
        else:
            _write_csv(labels + ["re", "im"], rows, args.out)
        return EXIT_OK

    guard = args.guard if args.guard is not None else (auto[1] if args.cutoff is None else min(auto[1], cutoff - 1))
    if not 0 <= guard < cutoff:
        raise UsageError(f"guard {guard} must be below cutoff {cutoff}")
    block = guarded_block(c, space, guard)
    idx = np.flatnonzero(guard_mask(space, guard))
    basis = np.array(np.unravel_index(idx, space.shape)).T.tolist()
    if args.format == "json":
        _dump({"backend": "fock", "cutoff": cutoff, "guard": guard, "basis": basis,
               "real": block.real.tolist(), "imag": block.imag.tolist()}, args.out)
    else:
        rows = [[i, j, block[i, j].real, block[i, j].imag]
                for i, j in zip(*np.nonzero(np.abs(block) > args.threshold))]
        _write_csv(["row", "col", "re", "im"], rows, args.out)
    return EXIT_OK


# demos ----------------------------------------------------------------------


def cmd_demo_cat(args) -> int:
    res = cat_demo(complex(args.alpha), args.cutoff)
    _write_csv(["n", "re_even", "im_even", "re_odd", "im_odd"], res.csv_rows(), args.out)
    if args.out not in (None, "-"):
        _dump(res.summary(), None)
    return EXIT_OK


def cmd_demo_entangler(args) -> int:
    res = entangler_demo(args.psi, args.phi, args.variant, args.cutoff)
    _dump(res.to_json(), args.out)
    return EXIT_OK


def cmd_demo_nullifier(args) -> int:
    try:
        rs = [float(v) for v in args.r.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--r must be a comma-separated list of numbers, got {args.r!r}") from None
    if not rs:
        raise UsageError("--r needs at least one value")
    try:
        rows = nullifier_demo(rs, cutoff=args.cutoff)
    except ValueError as e:
        if isinstance(e, TruncationError):
            raise
        raise UsageError(str(e)) from None
    _write_csv(["r", "variance_name", "value", "gaussian_prediction"],
               [[row.r, row.variance_name, row.value, row.gaussian_prediction] for row in rows], args.out)
    return EXIT_OK


# parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cvgates", description="Continuous-variable and hybrid gate verifier.")
    p.add_argument("--version", action="version", version=f"cvgates {__version__}")
    p.add_argument("--budget", type=int, help="dense dimension budget (default 5000, or CVGATE_BUDGET)")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an identity suite")
    v.add_argument("--suite", default="all", choices=("all",) + SUITES)
    v.add_argument("--cutoff", type=int, help="override every Fock check's cutoff")
    v.add_argument("--guard", type=int, help="override every Fock check's guard")
    v.add_argument("--tol", type=float, help="override every tolerance")
    v.add_argument("--strict-phase", action="store_true", help="require phase-exact Fock equality")
    v.add_argument("--json", metavar="PATH", help="write the JSON report ('-' for stdout)")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="print the element or truncated unitary of a circuit")
    e.add_argument("expr")
    e.add_argument("--backend", choices=("symplectic", "fock"), default="symplectic")
    e.add_argument("--cutoff", type=int)
    e.add_argument("--guard", type=int)
    e.add_argument("--n-modes", type=int)
    e.add_argument("--state", help="apply to a product state, e.g. 'fock:1,coh:0.5'")
    e.add_argument("--qubit", choices=("0", "1", "+", "-"), help="control-qubit input for --state")
    e.add_argument("--threshold", type=float, default=1e-12, help="drop entries below this magnitude (fock)")
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.add_argument("--out", help="output path (default stdout)")
    e.set_defaults(func=cmd_eval)

    d = sub.add_parser("demo", help="produce a demo dataset")
    dsub = d.add_subparsers(dest="demo", required=True)
    cat = dsub.add_parser("cat", help="cat states from the hybrid parity gate")
    cat.add_argument("--alpha", default="1.5")
    cat.add_argument("--cutoff", type=int, default=32)
    cat.add_argument("--out", help="CSV path (default stdout)")
    cat.set_defaults(func=cmd_demo_cat)
    ent = dsub.add_parser("entangler", help="CSWAP universal entangler")
    ent.add_argument("--psi", required=True, help="coh:ALPHA | fock:N | sqz:R")
    ent.add_argument("--phi", required=True, help="coh:ALPHA | fock:N | sqz:R")
    ent.add_argument("--variant", choices=("direct", "five", "eight"), default="direct")
    ent.add_argument("--cutoff", type=int)
    ent.add_argument("--out", help="JSON path (default stdout)")
    ent.set_defaults(func=cmd_demo_entangler)
    nul = dsub.add_parser("nullifier", help="nullifier variances against the Gaussian prediction")
    nul.add_argument("--r", default="0,0.5,1.0,1.5", help="comma-separated squeezing values")
    nul.add_argument("--cutoff", type=int, help="fixed cutoff (default: chosen per r)")
    nul.add_argument("--out", help="CSV path (default stdout)")
    nul.set_defaults(func=cmd_demo_nullifier)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    previous = os.environ.get("CVGATE_BUDGET")
    if args.budget is not None:
        if args.budget < 1:
            print("error: --budget must be positive", file=sys.stderr)
            return EXIT_USAGE
        os.environ["CVGATE_BUDGET"] = str(args.budget)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        if getattr(args, "expr", None):
            print(f"  {args.expr.splitlines()[e.line - 1] if args.expr.splitlines() else ''}", file=sys.stderr)
            print("  " + " " * (e.col - 1) + "^", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, MacroError, BudgetError, TruncationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        # main() may run in-process (tests, notebooks); leave the environment as found
        if args.budget is not None:
            if previous is None:
                os.environ.pop("CVGATE_BUDGET", None)
            else:
                os.environ["CVGATE_BUDGET"] = previous


if __name__ == "__main__":
    sys.exit(main())
