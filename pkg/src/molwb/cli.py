"""Command line front end.

Subcommands: check, refute, sat, gen, encode, solve, models.  Exit codes are
0 for holds / valid-up-to-budget, 1 for refuted / witness-found / failed
validation, 2 for usage or input errors.  All randomness flows from --seed;
JSON reports (--json) are versioned, embed the seed, and are byte-identical
across runs with the same arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import checker, feas, generators, models
from .fields import FieldError, field_by_name
from .subspaces import SubspaceError, SubspaceLattice
from .terms import (
    Identity,
    TermSyntaxError,
    parse_identity,
    print_term,
)

REPORT_VERSION = 1

_CATALOG_RE = re.compile(r"^(boolean|mo)[:(](\d+)\)?$")


class CliError(Exception):
    pass


def _load_model(spec: str) -> models.FiniteModel:
    m = _CATALOG_RE.match(spec)
    if m:
        return models.catalog(m.group(1), int(m.group(2)))
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            model = models.FiniteModel.from_json(fh.read(), name=os.path.basename(spec))
    except OSError as e:
        raise CliError(f"cannot read model {spec!r}: {e}") from None
    report = model.validate()
    if not report.ok:
        raise CliError(f"model {spec!r} is not a valid MOL:\n{report.summary()}")
    return model


def _parse_identity_arg(text: str) -> Identity:
    try:
        return parse_identity(text)
    except TermSyntaxError as e:
        raise CliError(f"bad identity: {e}") from None


def _emit_report(args, payload: dict, text_lines: list) -> None:
    if args.json:
        payload = {"v": REPORT_VERSION, **payload}
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:
        for line in text_lines:
            print(line)


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("MOLWB_THREADS")
    return max(1, int(env)) if env and env.isdigit() else 1


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_check(args) -> int:
    ident = _parse_identity_arg(args.identity)
    if args.assignment:
        try:
            with open(args.assignment, "r", encoding="utf-8") as fh:
                payload = json.loads(fh.read())
            field, d, assignment = checker.assignment_from_payload(payload)
        except (OSError, json.JSONDecodeError) as e:
            raise CliError(f"cannot read assignment: {e}") from None
        lattice = SubspaceLattice(field, d)
        lhs = checker.eval_term(ident.lhs, assignment, lattice)
        rhs = checker.eval_term(ident.rhs, assignment, lattice)
        equal = lhs == rhs
        _emit_report(
            args,
            {
                "command": "check",
                "identity": str(ident),
                "model": lattice.name,
                "holds": equal,
                "lhs": lhs.to_strings(),
                "rhs": rhs.to_strings(),
            },
            [
                f"{ident}",
                f"  in {lattice.name} under {args.assignment}:",
                f"  lhs = {lhs}",
                f"  rhs = {rhs}",
                f"  {'holds' if equal else 'FAILS'} under this assignment",
            ],
        )
        return 0 if equal else 1
    if not args.model:
        raise CliError("check needs --model or --assignment")
    m = _load_model(args.model)
    result = checker.holds(ident, m, cap=args.cap)
    lines = [f"{ident}", f"  on {m.name}: {'holds' if result.holds else 'FAILS'}"]
    if result.witness is not None:
        lines.append(f"  witness: {result.witness}")
    lines.append(f"  assignments checked: {result.assignments_checked}")
    _emit_report(
        args,
        {
            "command": "check",
            "identity": str(ident),
            "model": m.name,
            "holds": result.holds,
            "witness": result.witness,
            "assignments_checked": result.assignments_checked,
        },
        lines,
    )
    return 0 if result.holds else 1


def _cmd_refute(args) -> int:
    ident = _parse_identity_arg(args.identity)
    field = field_by_name(args.field)
    report = checker.refute_bounded(
        ident,
        field,
        cap=args.dmax,
        base_trials=args.trials,
        seed=args.seed,
        threads=_threads(args),
    )
    payload = {"command": "refute", **report.to_dict()}
    lines = [f"{ident}", f"  over {field.name}: {report.status}"]
    lines.append(f"  dimensions searched: {report.dims_searched} (bound {report.bound})")
    lines.append(f"  trials: {report.trials_run}, seed: {report.seed}")
    if report.witness:
        w = report.witness
        lines.append(f"  witness in L({w.field_name}^{w.d}):")
        lines.append("  " + json.dumps(
            checker.assignment_to_payload(field, w.d, w.assignment), sort_keys=True
        ))
    if args.witness_out and report.witness:
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            json.dump(
                checker.assignment_to_payload(field, report.witness.d, report.witness.assignment),
                fh,
                sort_keys=True,
                indent=2,
            )
        lines.append(f"  witness written to {args.witness_out}")
    _emit_report(args, payload, lines)
    return 1 if report.refuted else 0


def _cmd_sat(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            rows = [ln.strip() for ln in fh]
    except OSError as e:
        raise CliError(f"cannot read {args.file!r}: {e}") from None
    equations = [
        _parse_identity_arg(ln) for ln in rows if ln and not ln.startswith("#")
    ]
    if not equations:
        raise CliError("no equations in input file")
    field = field_by_name(args.field)
    report = checker.satisfiable_bounded(
        equations, field, dcap=args.dcap, trials=args.trials, seed=args.seed
    )
    lines = [f"{len(equations)} equation(s): {report.status}"]
    if report.found:
        lines.append(f"  model: {report.model_name}")
        lines.append(f"  assignment: {json.dumps(report.to_dict().get('assignment'), sort_keys=True)}")
    _emit_report(args, {"command": "sat", **report.to_dict()}, lines)
    return 1 if report.found else 0


def _cmd_gen(args) -> int:
    fam = args.family
    if fam == "delta-dist":
        ident = generators.delta_distributive(args.d)
        payload = {"command": "gen", "family": fam, "d": args.d, "identity": str(ident)}
        lines = [str(ident)]
    elif fam == "delta-diamond":
        ident = generators.delta_diamond(args.d)
        payload = {"command": "gen", "family": fam, "d": args.d, "identity": str(ident)}
        lines = [str(ident)]
    elif fam == "sigma":
        if args.m is None:
            raise CliError("sigma needs both d and m")
        ident = generators.sigma(args.d, args.m)
        payload = {
            "command": "gen",
            "family": fam,
            "d": args.d,
            "m": args.m,
            "identity": str(ident),
        }
        lines = [str(ident)]
    elif fam == "diamond":
        dt = generators.diamond_terms(args.d)
        terms = [print_term(t) for t in dt.terms]
        payload = {"command": "gen", "family": fam, "d": args.d, "terms": terms}
        lines = [f"t{i} = {s}" for i, s in enumerate(terms)]
    else:
        raise CliError(f"unknown family {fam!r}")
    _emit_report(args, payload, lines)
    return 0


def _cmd_encode(args) -> int:
    ident = _parse_identity_arg(args.identity)
    system = feas.encode(ident, args.d)
    sys.stdout.write(feas.emit(system, args.format))
    if args.format == "json":
        sys.stdout.write("\n")
    return 0


def _cmd_solve(args) -> int:
    ident = _parse_identity_arg(args.identity)
    params = feas.PenaltyParams(
        restarts=args.restarts,
        iterations=args.iterations,
        tol=args.tol,
        seed=args.seed,
    )
    outcome, assignment = feas.solve_identity(ident, args.d, params)
    witness_payload = None
    if assignment is not None:
        witness_payload = checker.assignment_to_payload(
            field_by_name("Q"), args.d, assignment
        )
    payload = {
        "command": "solve",
        "identity": str(ident),
        "d": args.d,
        "status": outcome.status,
        "residual": outcome.residual,
        "restarts": outcome.restarts_used,
        "seed": args.seed,
        "witness": witness_payload,
        "verified": assignment is not None,
    }
    lines = [
        f"{ident}",
        f"  solver: {outcome.status} (residual {outcome.residual:.3g}, "
        f"restarts {outcome.restarts_used})",
    ]
    if assignment is not None:
        lines.append("  exact verified refutation:")
        for var, sub in sorted(assignment.items()):
            lines.append(f"    {var} = {sub}")
    elif outcome.solved:
        lines.append("  numeric solution found but no exact decode verified")
    if args.witness_out and witness_payload:
        with open(args.witness_out, "w", encoding="utf-8") as fh:
            json.dump(witness_payload, fh, sort_keys=True, indent=2)
        lines.append(f"  witness written to {args.witness_out}")
    _emit_report(args, payload, lines)
    return 1 if assignment is not None else 0


def _cmd_models(args) -> int:
    if args.action != "validate":
        raise CliError(f"unknown models action {args.action!r}")
    m = _CATALOG_RE.match(args.model)
    if m:
        model = models.catalog(m.group(1), int(m.group(2)))
    else:
        try:
            with open(args.model, "r", encoding="utf-8") as fh:
                model = models.FiniteModel.from_json(
                    fh.read(), name=os.path.basename(args.model)
                )
        except OSError as e:
            raise CliError(f"cannot read model {args.model!r}: {e}") from None
    report = model.validate()
    payload = {
        "command": "models-validate",
        "model": model.name,
        "ok": report.ok,
        "checks": [
            {"name": c.name, "ok": c.ok, "witness": c.witness} for c in report.checks
        ],
    }
    _emit_report(args, payload, report.summary().splitlines())
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# Argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molwb",
        description="Workbench for identities over modular ortholattices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default MOLWB_THREADS or 1)")

    p = sub.add_parser("check", help="brute-force or assignment check")
    p.add_argument("identity")
    p.add_argument("--model", help="catalog spec like mo:3 / boolean:2, or a JSON file")
    p.add_argument("--assignment", help="assignment file to evaluate exactly")
    p.add_argument("--cap", type=int, default=checker.DEFAULT_ASSIGNMENT_CAP)
    common(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("refute", help="dimension-bounded random exact refutation")
    p.add_argument("identity")
    p.add_argument("--field", default="Q", help="Q, Qi, or GF(p)")
    p.add_argument("--dmax", type=int, default=None, help="cap on the dimension bound")
    p.add_argument("--trials", type=int, default=64, help="base trials per dimension")
    p.add_argument("--witness-out", help="write the witness assignment file here")
    common(p)
    p.set_defaults(func=_cmd_refute)

    p = sub.add_parser("sat", help="bounded satisfiability search")
    p.add_argument("file", help="file with one identity per line")
    p.add_argument("--field", default="Q")
    p.add_argument("--dcap", type=int, default=3)
    p.add_argument("--trials", type=int, default=512)
    common(p)
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("gen", help="generate identity families")
    p.add_argument("family", choices=["delta-dist", "delta-diamond", "sigma", "diamond"])
    p.add_argument("d", type=int)
    p.add_argument("m", type=int, nargs="?", default=None)
    common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("encode", help="emit the polynomial feasibility system")
    p.add_argument("identity")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--format", choices=["json", "smt"], default="json")
    common(p)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("solve", help="penalty-solve the feasibility system")
    p.add_argument("identity")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--iterations", type=int, default=5000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--witness-out", help="write the verified witness here")
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("models", help="finite model utilities")
    p.add_argument("action", choices=["validate"])
    p.add_argument("model", help="catalog spec or JSON file")
    common(p)
    p.set_defaults(func=_cmd_models)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (
        CliError,
        FieldError,
        SubspaceError,
        TermSyntaxError,
        checker.CheckError,
        feas.FeasError,
        generators.GeneratorError,
        models.ModelError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
