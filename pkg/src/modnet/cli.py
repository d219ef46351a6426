"""``modnet`` command line.

Exit codes: 0 success, 1 a property or validation failure, 2 bad input
(syntax, unknown agent, malformed partition), 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import dot
from .dynamics import attractors, equilibria
from .errors import (
    BudgetExceeded,
    ModnetError,
    NetworkSyntaxError,
    PartitionNotValidated,
    TooManyAgents,
)
from .harness import corrupted_equilibria, run_property_suite
from .modularity import (
    MAX_SEPARABLE,
    all_splits,
    elementary_decomposition,
    is_modular_organisation,
    modular_equilibria,
)
from .network import MAX_AGENTS
from .parser import load_network
from .partition import parse_partition
from .regulation import (
    all_topological_orderings,
    regulation_graph,
    scc_condensation,
    topological_ordering,
)

COMMANDS = ["attractors", "state-graph", "regulation", "scc-order", "check-mo",
            "compose", "elementary", "verify"]
MAX_LISTED_ORDERS = 10_000


class CliFailure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def max_agents_from_env() -> int:
    raw = os.environ.get("MODNET_MAX_AGENTS")
    if not raw:
        return MAX_AGENTS
    try:
        value = int(raw)
    except ValueError:
        raise CliFailure(2, f"MODNET_MAX_AGENTS must be an integer, got {raw!r}") from None
    return max(0, min(value, MAX_AGENTS))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modnet", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help=".bnet network file (not used by verify)")
    p.add_argument("--format", choices=["text", "json", "dot"], default=None)
    p.add_argument("--partition", help='ordered partition, e.g. "a1|a2,a3|a4"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("-n", "--agents", type=int, default=None,
                   help="verify: network size (default: random in 3..7)")
    p.add_argument("--all-splits", action="store_true",
                   help="elementary: list every valid split of every starting part")
    p.add_argument("--all-orders", action="store_true",
                   help=f"scc-order: list every ordering when there are at most {MAX_LISTED_ORDERS}")
    p.add_argument("--unchecked", action="store_true",
                   help="compose: skip the modular-organisation check")
    p.add_argument("--mutate", action="store_true",
                   help="verify: run against a deliberately broken equilibria operator")
    return p


def _emit(out, data, fmt):
    if fmt == "json":
        out.write(json.dumps(data, indent=2, sort_keys=False) + "\n")
    else:
        out.write(data if data.endswith("\n") or not data else data + "\n")


def _load(args):
    if not args.file:
        raise CliFailure(2, f"{args.command} needs a network file")
    try:
        return load_network(args.file, max_agents=max_agents_from_env())
    except OSError as exc:
        raise CliFailure(2, str(exc)) from None


def _partition(net, args, default=None):
    if args.partition is None:
        if default is None:
            raise CliFailure(2, f"{args.command} needs --partition")
        return default
    return parse_partition(net, args.partition)


def _attractor_dicts(net, atts):
    return [{"kind": a.kind.value, "states": a.states.to_strings()} for a in atts]


def cmd_attractors(args, out):
    net = _load(args)
    atts = attractors(net)
    if args.format == "json":
        _emit(out, {"agents": net.names, "attractors": _attractor_dicts(net, atts)}, "json")
        return 0
    lines = []
    for a in atts:
        states = " ".join(a.states.to_strings())
        lines.append(f"stable: {states}" if a.is_stable else f"limit({len(a)}): {states}")
    _emit(out, "\n".join(lines), "text")
    return 0


def cmd_state_graph(args, out):
    net = _load(args)
    _emit(out, dot.state_graph_dot(net), "dot")
    return 0


def cmd_regulation(args, out):
    net = _load(args)
    g = regulation_graph(net)
    if args.format == "json":
        _emit(out, {"agents": net.names, "edges": [list(e) for e in g.named_edges()]}, "json")
    elif args.format == "text":
        _emit(out, "\n".join(f"{s} -> {t}" for s, t in g.named_edges()), "text")
    else:
        _emit(out, dot.regulation_dot(g), "dot")
    return 0


def cmd_scc_order(args, out):
    net = _load(args)
    d = scc_condensation(regulation_graph(net))
    if args.format == "dot":
        _emit(out, dot.condensation_dot(d), "dot")
        return 0
    if args.all_orders:
        orders = list(all_topological_orderings(d, limit=MAX_LISTED_ORDERS + 1))
        if len(orders) > MAX_LISTED_ORDERS:
            raise CliFailure(3, f"more than {MAX_LISTED_ORDERS} orderings; not listing them")
    else:
        orders = [topological_ordering(d)]
    if args.format == "json":
        _emit(out, {"agents": net.names, "orderings": [o.names(net) for o in orders],
                    "partition": orders[0].names(net)}, "json")
    else:
        _emit(out, "\n".join(o.format(net) for o in orders), "text")
    return 0


def cmd_check_mo(args, out):
    net = _load(args)
    pi = _partition(net, args)
    report = is_modular_organisation(net, pi)
    if args.format == "json":
        _emit(out, report.to_dict(net), "json")
    else:
        lines = [f"partition: {pi.format(net)}"]
        for v in report.verdicts:
            prefix = ",".join(net.member_names(pi.prefix(v.index - 1))) or "{}"
            part = ",".join(net.member_names(pi[v.index - 1]))
            line = f"  [{v.index}] {prefix} ~> {part}: {'holds' if v.holds else 'fails'}"
            if v.witness is not None:
                w = v.witness.to_dict(net)
                line += f" (escape {w['state']} -{w['agent']}-> {w['to']})"
            lines.append(line)
        lines.append(f"modular organisation: {'yes' if report.holds else 'no'}")
        _emit(out, "\n".join(lines), "text")
    return 0 if report.holds else 1


def cmd_compose(args, out):
    net = _load(args)
    pi = _partition(net, args)
    try:
        got = modular_equilibria(net, pi, strict=not args.unchecked)
    except PartitionNotValidated as exc:
        raise CliFailure(1, str(exc)) from None
    oracle = equilibria(net, pi.carrier)
    match = got == oracle
    if args.format == "json":
        _emit(out, {"agents": net.names, "partition": pi.names(net),
                    "equilibria": got.to_strings(), "oracle_match": match}, "json")
    else:
        _emit(out, "\n".join([f"partition: {pi.format(net)}",
                              f"equilibria({len(got)}): {' '.join(got.to_strings())}",
                              f"oracle: {'match' if match else 'MISMATCH'}"]), "text")
    return 0 if match else 1


def cmd_elementary(args, out):
    net = _load(args)
    default = topological_ordering(scc_condensation(regulation_graph(net)))
    start = _partition(net, args, default)
    try:
        dec = elementary_decomposition(net, start)
    except PartitionNotValidated as exc:
        raise CliFailure(1, str(exc)) from None
    pi = dec.partition
    notes = []
    for i, part in enumerate(pi.parts):
        size = bin(part).count("1")
        label = ",".join(net.member_names(part))
        if part in dec.skipped:
            notes.append(f"{label}: skipped, {size} agents exceeds the limit of {MAX_SEPARABLE}")
        elif size >= 2:
            notes.append(f"{label}: not separable")
    splits = []
    if args.all_splits:
        for i, part in enumerate(start.parts):
            if bin(part).count("1") < 2:
                continue
            try:
                found = all_splits(net, start.prefix(i), part)
            except BudgetExceeded:
                continue
            for a, b in found:
                splits.append([net.member_names(a), net.member_names(b)])
    if args.format == "json":
        data = {"agents": net.names, "start": start.names(net),
                "partition": pi.names(net), "notes": notes}
        if args.all_splits:
            data["splits"] = splits
        _emit(out, data, "json")
    else:
        lines = [" | ".join(",".join(p) for p in pi.names(net))]
        lines += [f"  note: {n}" for n in notes]
        lines += [f"  split: {','.join(a)} | {','.join(b)}" for a, b in splits]
        _emit(out, "\n".join(lines), "text")
    return 0


def cmd_verify(args, out):
    n = args.agents
    if n is not None and not 1 <= n <= 10:
        raise CliFailure(2, "verify supports 1 <= n <= 10")
    if args.samples < 0:
        raise CliFailure(2, "--samples must be non-negative")
    psi = corrupted_equilibria if args.mutate else None
    kwargs = {"equilibria": psi} if psi else {}
    res = run_property_suite(args.seed, args.samples, n=n, **kwargs)
    if args.format == "json":
        data = {"seed": args.seed, "samples": args.samples, "ok": res.ok,
                "passed": res.passed, "failed": res.failed}
        if not res.ok:
            name, detail, text = res.counterexamples[0]
            data["counterexample"] = {"property": name, "detail": detail, "network": text}
        _emit(out, data, "json")
    else:
        lines = [f"seed {args.seed}, {args.samples} networks"]
        if res.summary():
            lines.append(res.summary())
        if not res.ok:
            name, detail, text = res.counterexamples[0]
            lines += [f"counterexample ({name}, {detail}):", text.rstrip()]
        lines.append("all properties hold" if res.ok else "PROPERTY VIOLATION")
        _emit(out, "\n".join(lines), "text")
    return 0 if res.ok else 1


HANDLERS = {
    "attractors": cmd_attractors,
    "state-graph": cmd_state_graph,
    "regulation": cmd_regulation,
    "scc-order": cmd_scc_order,
    "check-mo": cmd_check_mo,
    "compose": cmd_compose,
    "elementary": cmd_elementary,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return HANDLERS[args.command](args, out)
    except CliFailure as exc:
        print(f"modnet: {exc}", file=sys.stderr)
        return exc.code
    except TooManyAgents as exc:
        print(f"modnet: {exc}", file=sys.stderr)
        return 3
    except NetworkSyntaxError as exc:
        print(f"modnet: {args.file}: {exc}", file=sys.stderr)
        return 2
    except ModnetError as exc:
        print(f"modnet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
