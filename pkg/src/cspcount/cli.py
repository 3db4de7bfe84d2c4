"""Command-line surface.

Subcommands: classify, eval, gadget, reduce, factor, check.
Exit codes: 0 success, 1 input error, 2 verification failure,
3 brute-force cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import formats
from .classifier import check_certificate, classify_set, low_degree_verdict
from .constraints import Constraint
from .errors import CapExceededError, CspcountError, InputError, VerificationError
from .evaluators import (
    DEFAULT_CAP,
    eval_csp_bruteforce,
    eval_degree1,
    eval_ed_polytime,
    eval_holant_bruteforce,
)
from .frames import csp_to_holant, degree
from .gadgets import build_eq_gadget, verify_realization
from .membership import (
    degenerate_factorization,
    disj_membership,
    distinctive_list,
    ed_factorization,
    nand_membership,
)
from .pipeline import reduce_to_degree3, verify_reduction
from .scalars import format_scalar

__all__ = ["main", "run_command"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cspcount",
        description="Exact evaluation and dichotomy classification of "
        "complex-weighted Boolean counting CSPs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a constraint set")
    p.add_argument("constraints")
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--output", help="write the certificate JSON here")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("eval", help="evaluate a frame exactly")
    p.add_argument("frame")
    p.add_argument("--constraints", help="constraint definitions referenced by the frame")
    p.add_argument(
        "--method", choices=("brute", "ed", "degree1", "holant"), default="brute"
    )
    p.add_argument("--max-vars", type=int, default=DEFAULT_CAP)
    p.add_argument("--max-edges", type=int, default=DEFAULT_CAP)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("gadget", help="build an equality gadget from a constraint")
    p.add_argument("constraints")
    p.add_argument("--constraint", required=True)
    p.add_argument("--eq-arity", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("reduce", help="rewrite a frame to degree <= 3")
    p.add_argument("frame")
    p.add_argument("--constraints")
    p.add_argument("--to-degree", type=int, default=3)
    p.add_argument("--hard", help="name of the non-tractable constraint to build gadgets from")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--output")
    p.add_argument("--max-vars", type=int, default=DEFAULT_CAP)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("factor", help="class membership and factorization")
    p.add_argument("constraints")
    p.add_argument("--constraint", required=True)
    p.add_argument("--class", dest="klass", choices=("dg", "ed", "disj", "nand"), required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="re-verify a classification certificate")
    p.add_argument("certificate")
    p.add_argument("--max-vars", type=int, default=DEFAULT_CAP)
    return parser


def _named(constraints: list[tuple[str, Constraint]]) -> dict[str, Constraint]:
    return dict(constraints)


def _load_frame(args):
    side = dict(formats.parse_constraint_file(args.constraints)) if args.constraints else None
    return formats.parse_frame_file(args.frame, side)


def _emit(payload: dict, args, text: str) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _cmd_classify(args) -> int:
    constraints = formats.parse_constraint_file(args.constraints)
    if args.degree in (1, 2):
        report = low_degree_verdict(constraints, args.degree)
        _emit(
            {
                "degree": report.degree,
                "verdict": report.verdict,
                "detail": report.detail,
                "roundtrip_checked": report.roundtrip_checked,
            },
            args,
            f"degree {report.degree}: {report.verdict}\n{report.detail}",
        )
        return 0
    result = classify_set(constraints, degree_bound=args.degree)
    cert = formats.classification_to_json(result)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(cert, fh, indent=2, sort_keys=True)
    if result.verdict == "tractable":
        text = "TRACTABLE: every constraint factors over unaries, equality and disequality"
    else:
        text = (
            f"HARD: witness constraint {result.hardness.name!r}; equality gadgets "
            f"verified for arities {sorted(result.hardness.derivations)}"
        )
    _emit(cert, args, text)
    return 0


def _cmd_eval(args) -> int:
    frame = _load_frame(args)
    if args.method == "brute":
        value = eval_csp_bruteforce(frame, max_vars=args.max_vars)
    elif args.method == "degree1":
        value = eval_degree1(frame)
    elif args.method == "holant":
        grid = csp_to_holant(frame)
        value = eval_holant_bruteforce(grid, max_edges=args.max_edges)
    else:
        witnesses = {}
        for atom in frame.atoms:
            if atom.label in witnesses:
                continue
            w = ed_factorization(atom.constraint)
            if w is None:
                raise InputError(
                    f"constraint {atom.label!r} is outside the tractable class; "
                    "the linear-time evaluator does not apply"
                )
            witnesses[atom.label] = w
        value = eval_ed_polytime(frame, witnesses)
    _emit({"value": format_scalar(value)}, args, format_scalar(value))
    return 0


def _cmd_gadget(args) -> int:
    constraints = _named(formats.parse_constraint_file(args.constraints))
    if args.constraint not in constraints:
        raise InputError(f"unknown constraint {args.constraint!r}")
    der = build_eq_gadget(constraints[args.constraint], args.eq_arity)
    if args.verify:
        report = verify_realization(der.gadget, der.target, budget=1)
        if not report.verdict or report.scalar_found != der.scalar:
            raise VerificationError(f"gadget verification failed: {report.reason}")
    payload = formats.derivation_to_json(der)
    rules = " -> ".join(s.rule for s in der.steps)
    text = (
        f"equality gadget for arity {args.eq_arity}: scalar {format_scalar(der.scalar)}, "
        f"{der.gadget.internals} internal variables, {len(der.gadget.atoms)} atoms\n"
        f"derivation: {rules}"
    )
    _emit(payload, args, text)
    return 0


def _cmd_reduce(args) -> int:
    if args.to_degree != 3:
        raise InputError("only --to-degree 3 is supported")
    frame = _load_frame(args)
    byname = {a.label: a.constraint for a in frame.atoms}
    if args.hard:
        if args.hard not in byname:
            raise InputError(f"frame does not use a constraint named {args.hard!r}")
        hard = byname[args.hard]
        if ed_factorization(hard) is not None:
            raise InputError(f"constraint {args.hard!r} is tractable")
    else:
        hard = None
        for label, c in byname.items():
            if ed_factorization(c) is None:
                hard = c
                break
        if hard is None:
            raise InputError(
                "frame uses only tractable constraints; name a hard constraint with --hard"
            )
    result = reduce_to_degree3(frame, hard)
    if args.verify and not verify_reduction(result, frame, max_vars=args.max_vars):
        raise VerificationError("reduced frame does not preserve the csp value")
    payload = formats.reduction_to_json(result)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    text = (
        f"degree {degree(frame)} -> {degree(result.frame)}; "
        f"{len(result.frame.variables)} variables, kappa {format_scalar(result.kappa)}"
    )
    _emit(payload, args, text)
    return 0


def _cmd_factor(args) -> int:
    constraints = _named(formats.parse_constraint_file(args.constraints))
    if args.constraint not in constraints:
        raise InputError(f"unknown constraint {args.constraint!r}")
    f = constraints[args.constraint]
    payload: dict = {"constraint": args.constraint, "class": args.klass}
    if args.klass == "dg":
        w = degenerate_factorization(f)
        payload["member"] = w is not None
        if w is not None:
            payload["witness"] = formats.factor_list_to_json(w)
    elif args.klass == "ed":
        w = ed_factorization(f)
        payload["member"] = w is not None
        if w is not None:
            payload["witness"] = formats.factor_list_to_json(w)
    else:
        member = disj_membership(f) if args.klass == "disj" else nand_membership(f)
        payload["member"] = member
        if member and any(not v.is_zero() for v in f.table):
            mode = "or" if args.klass == "disj" else "nand"
            payload["distinctive_list"] = formats.distinctive_list_to_json(
                distinctive_list(f, mode)
            )
    text = f"{args.constraint}: {'member' if payload['member'] else 'not a member'} of {args.klass.upper()}"
    _emit(payload, args, text)
    return 0


def _cmd_check(args) -> int:
    try:
        with open(args.certificate) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {args.certificate}: {e}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{args.certificate}: invalid JSON: {e}") from e
    cert = formats.classification_from_json(obj)
    if not check_certificate(cert, max_vars=args.max_vars):
        raise VerificationError("certificate failed re-verification")
    print("certificate OK")
    return 0


_HANDLERS = {
    "classify": _cmd_classify,
    "eval": _cmd_eval,
    "gadget": _cmd_gadget,
    "reduce": _cmd_reduce,
    "factor": _cmd_factor,
    "check": _cmd_check,
}


def run_command(argv: Sequence[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return _HANDLERS[args.command](args)
    except CapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except VerificationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (InputError, CspcountError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else list(argv))


if __name__ == "__main__":
    sys.exit(main())
