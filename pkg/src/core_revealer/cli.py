"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict
(not rationalizable, not in the core, not an equilibrium, invalid instance),
2 input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from core_revealer import equilibrium, graph, oracle, rationalize
from core_revealer.errors import CoreRevealerError
from core_revealer.instances import (
    coalition_to_dict,
    generate_instance,
    parse_instance,
    parse_prices,
    parse_profile,
    prices_to_dict,
    profile_to_dict,
    serialize_instance,
    verdict_to_dict,
)
from core_revealer.model import validate

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CoreRevealerError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, doc: dict, text: str) -> None:
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _order(problem, args):
    order = graph.scc_partition(graph.build_big_graph(problem))
    return order.reversed() if getattr(args, "order", "canonical") == "reverse" else order


def _names(problem, agents) -> str:
    return ", ".join(problem.agent_label(a) for a in agents)


def cmd_validate(args) -> int:
    problem = parse_instance(_read(args.instance), validate=False)
    violations = validate(problem)
    doc = {"valid": not violations, "violations": [{"kind": v.kind, "message": v.message} for v in violations]}
    _emit(args, doc, "valid" if not violations else "\n".join(str(v) for v in violations))
    return EXIT_OK if not violations else EXIT_NEGATIVE


def _verdict_text(problem, verdict) -> str:
    if verdict.rationalizable:
        lines = ["rationalizable"]
        for m, comp in enumerate(verdict.scc_order.components):
            lines.append(f"  S{m + 1}: {_names(problem, comp)}")
        for t in problem.agent_types:
            lines.append(
                f"  type {t.label}: "
                + " > ".join(problem.house_label(h) for h in verdict.profile.orders[t.id])
            )
        return "\n".join(lines)
    a, b = verdict.pair
    return (
        f"not rationalizable: {problem.agent_label(a)} and {problem.agent_label(b)} share type "
        f"{problem.agent_types[a.type_id].label} and component {verdict.component_index} but receive "
        f"{problem.house_label(problem.allocation[a])} and {problem.house_label(problem.allocation[b])}\n"
        f"  covering cycle: {' -> '.join(problem.agent_label(v) for v in verdict.cover_cycle)}"
    )


def cmd_check(args) -> int:
    problem = parse_instance(_read(args.instance))
    verdict = rationalize.check(problem, _order(problem, args))
    prices = None
    if verdict.rationalizable:
        prices = equilibrium.construct_prices(problem, verdict.scc_order)
    _emit(args, verdict_to_dict(problem, verdict, prices), _verdict_text(problem, verdict))
    return EXIT_OK if verdict.rationalizable else EXIT_NEGATIVE


def cmd_rationalize(args) -> int:
    problem = parse_instance(_read(args.instance))
    verdict = rationalize.check(problem, _order(problem, args))
    if not verdict.rationalizable:
        _emit(args, verdict_to_dict(problem, verdict), _verdict_text(problem, verdict))
        return EXIT_NEGATIVE
    prices = equilibrium.construct_prices(problem, verdict.scc_order)
    doc = verdict_to_dict(problem, verdict, prices)
    if args.profile_out:
        Path(args.profile_out).write_text(json.dumps(doc["profile"], indent=2) + "\n", encoding="utf-8")
    text = _verdict_text(problem, verdict) + "\n  prices: " + ", ".join(
        f"{k}={v}" for k, v in doc["prices"].items()
    )
    _emit(args, doc, text)
    return EXIT_OK


def _coalition_text(problem, coalition) -> str:
    moves = ", ".join(
        f"{problem.agent_label(a)} gets {problem.house_label(coalition.sub_allocation[a])}"
        for a in coalition.members
    )
    return f"blocking coalition {{{_names(problem, coalition.members)}}}: {moves}"


def cmd_witness(args) -> int:
    problem = parse_instance(_read(args.instance))
    profile = parse_profile(_read(args.profile), problem)
    verdict = rationalize.check(problem)
    if verdict.rationalizable:
        _emit(args, {"rationalizable": True, "witness": None}, "rationalizable; no violation to witness")
        return EXIT_OK
    coalition = rationalize.blocking_witness(problem, profile, verdict)
    doc = verdict_to_dict(problem, verdict)
    doc["witness"] = coalition_to_dict(problem, coalition)
    _emit(args, doc, _verdict_text(problem, verdict) + "\n" + _coalition_text(problem, coalition))
    return EXIT_NEGATIVE


def cmd_oracle_core(args) -> int:
    problem = parse_instance(_read(args.instance))
    profile = parse_profile(_read(args.profile), problem)
    result = oracle.is_core(problem, profile)
    doc = {
        "in_core": result.in_core,
        "witness": None if result.witness is None else coalition_to_dict(problem, result.witness),
    }
    text = "in core" if result.in_core else "not in core; " + _coalition_text(problem, result.witness)
    _emit(args, doc, text)
    return EXIT_OK if result.in_core else EXIT_NEGATIVE


def cmd_oracle_exhaustive(args) -> int:
    problem = parse_instance(_read(args.instance))
    result = oracle.rationalizable_exhaustive(problem)
    doc = {
        "rationalizable": result.rationalizable,
        "profiles_checked": result.profiles_checked,
        "profile": None if result.witness_profile is None else profile_to_dict(problem, result.witness_profile),
    }
    text = (
        f"rationalizable (found after {result.profiles_checked} profiles)"
        if result.rationalizable
        else f"not rationalizable ({result.profiles_checked} profiles checked)"
    )
    _emit(args, doc, text)
    return EXIT_OK if result.rationalizable else EXIT_NEGATIVE


def cmd_ce(args) -> int:
    problem = parse_instance(_read(args.instance))
    order = _order(problem, args)
    if args.profile is None or args.prices is None:
        verdict = rationalize.check(problem, order)
        if not verdict.rationalizable:
            _emit(args, verdict_to_dict(problem, verdict), _verdict_text(problem, verdict))
            return EXIT_NEGATIVE
    profile = parse_profile(_read(args.profile), problem) if args.profile else verdict.profile
    prices = parse_prices(_read(args.prices), problem) if args.prices else equilibrium.construct_prices(problem, order)
    ok = equilibrium.verify_ce(problem, profile, prices)
    doc = {"competitive_equilibrium": ok, "prices": prices_to_dict(problem, prices)}
    text = ("competitive equilibrium" if ok else "not a competitive equilibrium") + " at prices " + ", ".join(
        f"{k}={v}" for k, v in doc["prices"].items()
    )
    _emit(args, doc, text)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_gen(args) -> int:
    try:
        problem = generate_instance(
            args.seed, args.agent_types, args.house_types, args.max_multiplicity, args.bias
        )
    except ValueError as exc:
        raise CoreRevealerError(str(exc)) from None
    meta = {
        "seed": args.seed,
        "agent_types": args.agent_types,
        "house_types": args.house_types,
        "max_multiplicity": args.max_multiplicity,
        "rationalizable_bias": args.bias,
    }
    text = serialize_instance(problem, generator=meta)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    problem = parse_instance(_read(args.instance))
    big = graph.build_big_graph(problem)
    part = graph.scc_partition(big)
    g = big if args.graph == "big" else graph.build_small_graph(problem)
    sys.stdout.write(graph.to_dot(problem, g, name=args.graph, part=part))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="core-revealer", description="Strong-core rationalizability of observed housing allocations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, profile=False, order=False):
        p = sub.add_parser(name, help=help)
        p.add_argument("instance", help="instance JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if profile:
            p.add_argument("--profile", required=True, help="profile JSON file")
        if order:
            p.add_argument("--order", choices=["canonical", "reverse"], default="canonical",
                           help="component order used to build the profile")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the structural invariants of an instance")
    add("check", cmd_check, "decide rationalizability", order=True)
    p = add("rationalize", cmd_rationalize, "construct a rationalizing profile and prices", order=True)
    p.add_argument("--profile-out", help="also write the profile JSON to this file")
    add("witness", cmd_witness, "blocking coalition for a non-rationalizable instance", profile=True)
    add("oracle-core", cmd_oracle_core, "brute-force strong-core check under a profile", profile=True)
    add("oracle-exhaustive", cmd_oracle_exhaustive, "brute-force rationalizability over all profiles")
    p = add("ce", cmd_ce, "verify competitive-equilibrium prices", order=True)
    p.add_argument("--profile", help="profile JSON file (default: constructed profile)")
    p.add_argument("--prices", help='prices JSON file {"prices": {...}} (default: constructed prices)')

    p = sub.add_parser("gen", help="generate a random valid instance")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--agent-types", type=int, default=3)
    p.add_argument("--house-types", type=int, default=3)
    p.add_argument("--max-multiplicity", type=int, default=2)
    p.add_argument("--bias", action="store_true", help="favour rationalizable allocations")
    p.add_argument("-o", "--output", help="write to file instead of stdout")
    p.set_defaults(func=cmd_gen)

    p = add("export-dot", cmd_export_dot, "Graphviz export with components as clusters")
    p.add_argument("--graph", choices=["big", "small"], default="big")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        return args.func(args)
    except CoreRevealerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
