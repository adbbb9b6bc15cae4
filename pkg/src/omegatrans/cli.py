"""Command-line front end.

Exit codes: 0 success (or machines equivalent), 1 violation or disagreement
found, 2 inconclusive within budget, 3 usage or parse error.  Machine
arguments accept "-" for stdin, outputs "-" for stdout, so commands chain:

    omegatrans gen --seed 7 --n 3 --kind 2dpt | omegatrans det2rev - - | omegatrans validate -
"""

from __future__ import annotations

import argparse
import sys

from .buchi import buchi_to_noacc, dbt_to_rbt, drop_acceptance, marking_from_colors
from .compose import compose
from .dot import machine_to_dot
from .evaluate import (
    ACCEPTED,
    BUDGET_EXCEEDED,
    EvalBudget,
    default_budget,
    equiv_on_lassos,
    eval_machine,
)
from .forests import StateExplosion, two_way_to_sst
from .generate import generate_machine
from .io import (
    DocumentError,
    dumps_machine,
    format_lasso,
    loads_machine,
    parse_lasso,
)
from .lasso import enumerate_lassos, random_lassos
from .machines import (
    CopylessParitySST,
    validate_codeterministic,
    validate_deterministic,
    validate_machine,
    validate_sst_machine,
)
from .oneway import one_way_to_reversible
from .sst2rev import sst_to_reversible
from random import Random

USAGE_ERROR = 3
INCONCLUSIVE = 2
VIOLATION = 1
OK = 0


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(path: str):
    return loads_machine(_read(path))


def _budget(args) -> EvalBudget:
    base = default_budget()
    return EvalBudget(
        max_steps=args.max_steps or base.max_steps,
        max_output=args.max_output or base.max_output,
    )


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-steps", type=int, default=None, help="simulation step budget")
    p.add_argument("--max-output", type=int, default=None, help="output letter budget")


def cmd_validate(args) -> int:
    machine = _load(args.machine)
    if isinstance(machine, CopylessParitySST):
        problems = validate_sst_machine(machine)
    else:
        problems = validate_machine(machine)
    for p in problems:
        print(f"violation: {p}")
    det = validate_deterministic(machine)
    codet = validate_codeterministic(machine)
    print(f"deterministic: {det}")
    print(f"co-deterministic: {codet}")
    print(f"reversible: {det and codet}")
    print(f"summary: {'ok' if not problems else 'invalid'}")
    return OK if not problems else VIOLATION


def cmd_eval(args) -> int:
    machine = _load(args.machine)
    w = parse_lasso(args.lasso, alphabet=set(machine.input_alphabet))
    outcome = eval_machine(machine, w, _budget(args))
    if outcome.verdict == ACCEPTED and not outcome.prefix_only:
        print(f"Accepted output={format_lasso(outcome.output)}")
    elif outcome.verdict == ACCEPTED:
        print(f"Accepted output-prefix={''.join(outcome.output_prefix[:80])}... (prefix only)")
    else:
        extra = ""
        if outcome.min_colors is not None:
            extra = f" min-colors={list(outcome.min_colors)}"
        print(f"{outcome.verdict}{extra}")
    print(f"summary: verdict={outcome.verdict} steps={outcome.steps}")
    return INCONCLUSIVE if outcome.verdict == BUDGET_EXCEEDED else OK


def _emit_machine(machine, out_path: str) -> int:
    _write(out_path, dumps_machine(machine))
    return OK


def cmd_compose(args) -> int:
    return _emit_machine(compose(_load(args.first), _load(args.second)), args.out)


def cmd_1w2rev(args) -> int:
    return _emit_machine(one_way_to_reversible(_load(args.machine)), args.out)


def cmd_2w2sst(args) -> int:
    return _emit_machine(two_way_to_sst(_load(args.machine), state_cap=args.cap), args.out)


def cmd_sst2rev(args) -> int:
    return _emit_machine(sst_to_reversible(_load(args.machine)), args.out)


def cmd_det2rev(args) -> int:
    return _emit_machine(dbt_to_rbt(_load(args.machine), state_cap=args.cap), args.out)


def cmd_buchi2rt(args) -> int:
    machine = _load(args.machine)
    if args.marking == "color0":
        marking = marking_from_colors(machine)
    elif args.marking == "all":
        marking = frozenset(machine.transitions)
    else:
        marking = frozenset()
    return _emit_machine(buchi_to_noacc(machine, marking), args.out)


def cmd_dropacc(args) -> int:
    return _emit_machine(drop_acceptance(_load(args.machine)), args.out)


def cmd_dot(args) -> int:
    _write(args.out, machine_to_dot(_load(args.machine)))
    return OK


def cmd_gen(args) -> int:
    machine = generate_machine(
        args.kind, args.seed, args.n, args.k, args.ell,
        alphabet_size=args.alphabet_size, density=args.density,
    )
    _write(args.out, dumps_machine(machine))
    return OK


def cmd_equiv(args) -> int:
    m1, m2 = _load(args.first), _load(args.second)
    if args.exhaustive:
        u_max, v_max = args.exhaustive
        lassos = enumerate_lassos(m1.input_alphabet, u_max, v_max)
    else:
        count, seed = args.random
        lassos = random_lassos(m1.input_alphabet, count, Random(seed))
    report = equiv_on_lassos(m1, m2, lassos, _budget(args))
    for w, reason in report.disagreements:
        print(f"disagreement on {format_lasso(w)}: {reason}")
    for w, reason in report.inconclusive:
        print(f"inconclusive on {format_lasso(w)}: {reason}")
    print(f"summary: {report.summary()}")
    if report.disagreements:
        return VIOLATION
    if report.inconclusive:
        return INCONCLUSIVE
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omegatrans", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a machine document")
    p.add_argument("machine")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("eval", help="evaluate a machine on a lasso u(v)")
    p.add_argument("machine")
    p.add_argument("lasso")
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("compose", help="compose two reversible transducers (first then second)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("out", nargs="?", default="-")
    p.set_defaults(fn=cmd_compose)

    p = sub.add_parser("1w2rev", help="one-way deterministic to reversible two-way")
    p.add_argument("machine")
    p.add_argument("out", nargs="?", default="-")
    p.set_defaults(fn=cmd_1w2rev)

    p = sub.add_parser("2w2sst", help="deterministic two-way to copyless register machine")
    p.add_argument("machine")
    p.add_argument("out", nargs="?", default="-")
    p.add_argument("--cap", type=int, default=10**6, help="explored state cap")
    p.set_defaults(fn=cmd_2w2sst)

    p = sub.add_parser("sst2rev", help="copyless register machine to reversible two-way")
    p.add_argument("machine")
    p.add_argument("out", nargs="?", default="-")
    p.set_defaults(fn=cmd_sst2rev)

    p = sub.add_parser("det2rev", help="deterministic two-way to reversible two-way")
    p.add_argument("machine")
    p.add_argument("out", nargs="?", default="-")
    p.add_argument("--cap", type=int, default=10**6, help="explored state cap")
    p.set_defaults(fn=cmd_det2rev)

    p = sub.add_parser("buchi2rt", help="fold a marked reversible machine into one with no condition")
    p.add_argument("machine")
    p.add_argument("out", nargs="?", default="-")
    p.add_argument(
        "--marking", choices=["color0", "all", "none"], default="color0",
        help="marked transitions: those of color 0, all, or none",
    )
    p.set_defaults(fn=cmd_buchi2rt)

    p = sub.add_parser("dropacc", help="drop all colorings from a machine")
    p.add_argument("machine")
    p.add_argument("out", nargs="?", default="-")
    p.set_defaults(fn=cmd_dropacc)

    p = sub.add_parser("dot", help="render a machine as Graphviz DOT text")
    p.add_argument("machine")
    p.add_argument("out", nargs="?", default="-")
    p.set_defaults(fn=cmd_dot)

    p = sub.add_parser("gen", help="generate a seeded random machine")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--ell", type=int, default=2)
    p.add_argument("--kind", choices=["2dpt", "1dpt", "cpsst"], default="2dpt")
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--density", type=float, default=0.9)
    p.add_argument("out", nargs="?", default="-")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("equiv", help="compare two machines on a lasso batch")
    p.add_argument("first")
    p.add_argument("second")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--exhaustive", nargs=2, type=int, metavar=("U_MAX", "V_MAX"))
    group.add_argument("--random", nargs=2, type=int, metavar=("COUNT", "SEED"))
    _add_budget_flags(p)
    p.set_defaults(fn=cmd_equiv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (DocumentError, ValueError, StateExplosion, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, StateExplosion):
            return VIOLATION
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
