"""Command-line entry point: ``qlocal simulate | check-philocal | reproduce | list-protocols``.

Exit codes: 0 success (or pass), 1 locality violation, 2 input error,
3 protocol error.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import reproduce
from .checker import check_philocal
from .errors import CapacityError, ConsistencyError, InputError, ProtocolError
from .graph import LabeledGraph, parse_graph
from .outcomes import Distribution, Outcome, format_distribution, read_outcome, write_outcome
from .protocols.registry import REGISTRY, Bundle, build
from .runtime import ModelConfig, run_exact, sample_outcome

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_PROTOCOL = 0, 1, 2, 3


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _parse_key(text: str) -> tuple[int, ...]:
    parts = text.split(",") if "," in text else list(text)
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise InputError(f"cannot read input {text!r}: give digits like 011, numbers like 0,3, or a graph file") from None


def _resolve_input(bundle: Bundle, text: str | None) -> LabeledGraph | None:
    if text is None:
        return bundle.inputs[0] if len(bundle.inputs) == 1 else None
    path = Path(text)
    if path.is_file():
        try:
            return parse_graph(path.read_text())
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
    return bundle.select(_parse_key(text))


def _sample_fixed(d: Distribution, shots: int, seed: int) -> Distribution:
    ys = list(d.support)
    weights = [float(p) for _, p in d.items()]
    draws = random.Random(seed).choices(range(len(ys)), weights=weights, k=shots)
    counts: dict[int, int] = {}
    for i in draws:
        counts[i] = counts.get(i, 0) + 1
    return Distribution({ys[i]: Fraction(c, shots) for i, c in counts.items()}, d.nodes)


def _distribution(bundle: Bundle, g: LabeledGraph, args) -> Distribution:
    if bundle.protocol is None:
        if args.rounds is not None or args.model is not None:
            raise InputError(f"{bundle.name} is a fixed outcome; --rounds and --model do not apply")
        d = bundle.fixed[g]
        return d if args.shots is None else _sample_fixed(d, args.shots, args.seed)
    proto = bundle.protocol
    model = ModelConfig.parse(args.model) if args.model else proto.model
    rounds = proto.rounds if args.rounds is None else args.rounds
    if args.shots is None:
        return run_exact(g, proto.program, model, rounds, proto.helper)
    return sample_outcome(g, proto.program, model, rounds, args.shots, args.seed, proto.helper)


def cmd_simulate(args) -> int:
    params = {"n": args.n, "k": args.k, "p": args.p, "q": args.q}
    bundle = build(args.protocol, **params)
    g = _resolve_input(bundle, args.input)
    if g is not None:
        text = format_distribution(_distribution(bundle, g, args))
        if args.output:
            Path(args.output).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    outcome = Outcome((h, _distribution(bundle, h, args)) for h in bundle.inputs)
    if args.output:
        for path in write_outcome(outcome, args.output):
            print(f"wrote {path}", file=sys.stderr)
    else:
        for h, d in outcome.items():
            sys.stdout.write(f"# input {','.join(map(str, bundle.key(h)))}\n" + format_distribution(d))
    return EXIT_OK


def cmd_check(args) -> int:
    outcome = read_outcome(args.outcome)
    if outcome.n > args.max_n:
        raise InputError(f"{outcome.n} nodes exceeds --max-n {args.max_n}; raise it to force the check")
    verdict = check_philocal(outcome, args.rounds, args.tolerance)
    if verdict:
        print(f"PASS: outcome is in phi-LOCAL[{args.rounds}]")
        return EXIT_OK
    w = verdict.witness
    print(f"FAIL: outcome is not in phi-LOCAL[{args.rounds}]")
    print(f"subset S = {list(w.subset)}")
    print(f"input a (#{w.index_a}) labels = {list(w.input_a.labels)}")
    print(f"input b (#{w.index_b}) labels = {list(w.input_b.labels)}")
    print("marginal a:\n" + format_distribution(w.marginal_a), end="")
    print("marginal b:\n" + format_distribution(w.marginal_b), end="")
    return EXIT_VIOLATION


def cmd_reproduce(args) -> int:
    checks = reproduce.ITEMS[args.item]()
    for c in checks:
        print(c.line())
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VIOLATION


def cmd_list(args) -> int:
    for name, entry in REGISTRY.items():
        params = " ".join(f"--{p}" for p in entry.params)
        print(f"{name:16} {entry.summary}" + (f"  [{params}]" if params else ""))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qlocal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="run a registered protocol exactly or by sampling")
    sim.add_argument("--protocol", required=True, help="registered name, see list-protocols")
    sim.add_argument("--input", help="input key (e.g. 011 or 0,3) or a graph file; default: whole family")
    sim.add_argument("--n", type=int, help="node count parameter")
    sim.add_argument("--k", type=int, help="star subdivision parameter")
    sim.add_argument("--p", type=_fraction, help="consensus parameter p")
    sim.add_argument("--q", type=_fraction, help="consensus parameter q")
    sim.add_argument("--rounds", type=int, help="override the protocol's round budget")
    sim.add_argument("--model", help="override the model, e.g. LOCAL+Q+E")
    mode = sim.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact distribution (default)")
    mode.add_argument("--shots", type=int, help="sample this many runs instead")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--output", help="write here instead of stdout")
    sim.set_defaults(func=cmd_simulate)

    chk = sub.add_parser("check-philocal", help="decide phi-LOCAL[t] membership of an outcome file")
    chk.add_argument("--outcome", required=True)
    chk.add_argument("--rounds", type=int, required=True)
    chk.add_argument("--max-n", type=int, default=12)
    chk.add_argument("--tolerance", type=float, default=1e-9)
    chk.set_defaults(func=cmd_check)

    rep = sub.add_parser("reproduce", help="expected-vs-computed report for one result")
    rep.add_argument("item", help=", ".join(reproduce.ITEMS))
    rep.set_defaults(func=cmd_reproduce)

    lst = sub.add_parser("list-protocols", help="registered protocol and outcome names")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "reproduce" and args.item not in reproduce.ITEMS:
        print(f"unknown item {args.item!r}; choose from {', '.join(reproduce.ITEMS)}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (InputError, ConsistencyError, CapacityError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
