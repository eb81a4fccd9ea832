"""Interface en ligne de commande: gen, cover, simulate, exact-depth, verify, bench"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from earsim.bench import DEFAULT_CELLS, BenchCell, BenchConfig, BenchRunner
from earsim.config import AppConfig, SearchBudget, load_flag_presets
from earsim.errors import EarsimError, RuleParseError
from earsim.rules import RuleSystem
from earsim.rules.transform import hypergraph, s_max
from earsim.services import CoverMethod, CoverService, DepthOracle, Strategy, solve_tuple, verify_bounds, verify_exhaustive
from earsim.services.exact_service import BRANCH_DOMAINS
from earsim.utils import GenParams, random_system
from earsim.utils.codec import RULE_GRAMMAR, parse_rules, parse_tuple, result_to_dict, result_to_json, serialize_rules
from earsim.utils.enumeration import EnumerationParams

logger = logging.getLogger(__name__)

BOOL_FLAGS = {"json", "verbose", "smax", "dump_hypergraph", "cover_full", "exhaustive", "exact"}
# flags à valeurs multiples: le préréglage est une liste séparée par des virgules
LIST_FLAGS = {"cell"}
# flags globaux répétés sur chaque sous-commande
COMMON_FLAGS = {"seed", "json"}
TRUE_WORDS = {"1", "true", "yes", "on"}


class _Parser(argparse.ArgumentParser):
    """Les erreurs d'usage rappellent la grammaire des fichiers de règles"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n\n{RULE_GRAMMAR}\n")


def build_parser(config: AppConfig) -> _Parser:
    parser = _Parser(
        prog="earsim",
        description="Decision rule systems: greedy EAR simulation, node covers and exact depth oracles",
        epilog=RULE_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--seed", type=int, default=config.seed, help="Base seed (64-bit unsigned)")
    parser.add_argument("--json", action="store_true", help="JSON output where available")
    parser.add_argument("--config", help="key=value file presetting any flag")
    parser.add_argument("--verbose", "-v", action="store_true", help="Shortcut for --log-level DEBUG")
    parser.add_argument("--log-level", default=config.log_level, help="Logging level (stderr)")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common_flags()

    gen = commands.add_parser("gen", help="Generate a random rule system", parents=[common])
    gen.add_argument("--n-attrs", type=int, default=8)
    gen.add_argument("--n-rules", type=int, default=8)
    gen.add_argument("--min-len", type=int, default=1)
    gen.add_argument("--max-len", type=int, default=2)
    gen.add_argument("--n-values", type=int, default=2)
    gen.add_argument("--output", help="Rule file to write (stdout by default)")
    gen.set_defaults(handler=cmd_gen)

    cover = commands.add_parser("cover", help="Build a node cover of G(S)", parents=[common])
    cover.add_argument("--input", help="Rule file")
    cover.add_argument("--method", choices=[m.value for m in CoverMethod], default=CoverMethod.GREEDY.value)
    cover.add_argument("--smax", action="store_true", help="Cover S^max instead of S")
    cover.add_argument("--dump-hypergraph", action="store_true", help="Print G(S) before the cover")
    cover.set_defaults(handler=cmd_cover)

    simulate = commands.add_parser("simulate", help="Run the round simulation on one tuple", parents=[common])
    simulate.add_argument("--input", help="Rule file")
    simulate.add_argument("--tuple", help="Tuple such as 'a1=0,a2=*'")
    simulate.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.GREEDY.value)
    simulate.add_argument("--cover-full", action="store_true", help="Cover the current system, not its ^max reduct")
    simulate.set_defaults(handler=cmd_simulate)

    exact = commands.add_parser("exact-depth", help="Exact minimum depth h_EAR(S)", parents=[common])
    exact.add_argument("--input", help="Rule file")
    _add_budget_flags(exact, config.budget, "--max-rules")
    exact.add_argument("--branch-domain", choices=BRANCH_DOMAINS, default="current")
    exact.set_defaults(handler=cmd_exact_depth)

    verify = commands.add_parser("verify", help="Check lower bounds and the greedy depth bound", parents=[common])
    verify.add_argument("--input", help="Rule file (single system report)")
    verify.add_argument("--exhaustive", action="store_true", help="Check every small system instead")
    verify.add_argument("--max-n", type=int, default=2)
    verify.add_argument("--max-rules", type=int, default=2)
    verify.add_argument("--max-len", type=int, default=2)
    verify.add_argument("--values", type=int, default=2)
    _add_budget_flags(verify, config.budget)
    verify.set_defaults(handler=cmd_verify)

    bench = commands.add_parser("bench", help="Greedy vs rule-based cover on a grid of random systems", parents=[common])
    bench.add_argument("--cell", action="append", help="N:RULES:MINLEN:MAXLEN:VALUES (repeatable)")
    bench.add_argument("--seeds", type=int, default=10)
    bench.add_argument("--tuples", type=int, default=20)
    bench.add_argument("--strategies", default="greedy,rule")
    bench.add_argument("--exact", action="store_true", help="Add h_EAR and the greedy bound to each row")
    bench.add_argument("--cover-full", action="store_true", help="Also run the full-system cover variant")
    bench.add_argument("--workers", type=int, default=config.workers)
    bench.add_argument("--output", help="CSV file (summary then goes to stdout)")
    _add_budget_flags(bench, config.budget)
    bench.set_defaults(handler=cmd_bench)
    return parser


def _common_flags() -> argparse.ArgumentParser:
    """--seed et --json acceptés aussi après la sous-commande

    SUPPRESS: absents de la sous-commande, ils n'écrasent pas la valeur globale.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Base seed (64-bit unsigned)")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="JSON output where available")
    return common


def _add_budget_flags(parser: argparse.ArgumentParser, budget: SearchBudget, rules_flag: str = "--max-rule-count") -> None:
    parser.add_argument("--max-attributes", type=int, default=budget.max_attributes)
    parser.add_argument(rules_flag, dest="max_rule_count", type=int, default=budget.max_rules)
    parser.add_argument("--max-values", type=int, default=budget.max_values)


def _subparsers(parser: argparse.ArgumentParser) -> List[argparse.ArgumentParser]:
    found = [parser]
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            found.extend(action.choices.values())
    return found


def apply_presets(parser: argparse.ArgumentParser, presets: Dict[str, str]) -> None:
    """Préréglages → defaults argparse: la ligne de commande garde la priorité"""
    used = set()
    for sub in _subparsers(parser):
        dests = {action.dest for action in sub._actions}
        if sub is not parser:
            # un défaut de sous-commande écraserait le flag global
            dests -= COMMON_FLAGS
        values = {}
        for key, raw in presets.items():
            if key in dests and key not in LIST_FLAGS:
                values[key] = raw.strip().lower() in TRUE_WORDS if key in BOOL_FLAGS else raw
                used.add(key)
        sub.set_defaults(**values)
    for key in sorted(set(presets) - used - LIST_FLAGS - {"config"}):
        logger.warning("[CONFIG] unknown preset key %r ignored", key)


def parse_args(argv: Optional[List[str]], config: AppConfig) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    presets = load_flag_presets(known.config) if known.config else {}

    parser = build_parser(config)
    apply_presets(parser, presets)
    args = parser.parse_args(argv)
    for key in LIST_FLAGS:
        if getattr(args, key, "absent") is None and key in presets:
            setattr(args, key, [item.strip() for item in presets[key].split(",") if item.strip()])
    args.usage_error = parser.error
    return args


def _setup_logging(args: argparse.Namespace) -> None:
    level = "DEBUG" if args.verbose else str(args.log_level).upper()
    if not isinstance(logging.getLevelName(level), int):
        args.usage_error(f"unknown log level {args.log_level!r}")
    logging.basicConfig(level=level, format="%(levelname)s %(name)s %(message)s", stream=sys.stderr, force=True)


def _budget(args: argparse.Namespace) -> SearchBudget:
    return SearchBudget(args.max_attributes, args.max_rule_count, args.max_values)


def _read_system(args: argparse.Namespace) -> RuleSystem:
    if not args.input:
        args.usage_error(f"{args.command} requires --input")
    data = Path(args.input).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        head = data[:e.start]
        line = head.count(b"\n") + 1
        column = e.start - (head.rfind(b"\n") + 1) + 1
        raise RuleParseError(f"invalid UTF-8 byte 0x{data[e.start]:02x}", line, column) from e
    return parse_rules(text)


def _emit(text: str, output: Optional[str] = None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen(args: argparse.Namespace, config: AppConfig) -> int:
    params = GenParams(args.n_attrs, args.n_rules, args.min_len, args.max_len, args.n_values, args.seed)
    system = random_system(params)
    logger.info("[CLI] generated %d rule(s) with seed %d", len(system), args.seed)
    _emit(serialize_rules(system), args.output)
    return 0


def cmd_cover(args: argparse.Namespace, config: AppConfig) -> int:
    system = _read_system(args)
    target = s_max(system) if args.smax else system
    if args.dump_hypergraph and not args.json:
        print(hypergraph(target).to_text())
    cover = CoverService.build(target, args.method, config.cover_max_attributes)
    if args.json:
        print(json.dumps({"method": args.method, "smax": args.smax, "cover": list(cover.attributes), "size": len(cover)}))
    else:
        print(f"{args.method} cover: {cover}")
        print(f"size: {len(cover)}")
    return 0


def cmd_simulate(args: argparse.Namespace, config: AppConfig) -> int:
    system = _read_system(args)
    if args.tuple is None and system.measures.n > 0:
        args.usage_error("simulate requires --tuple")
    tuple_ = parse_tuple(args.tuple or "", system)
    result = solve_tuple(system, tuple_, Strategy(args.strategy), args.cover_full)
    if args.json:
        print(result_to_json(result))
        return 0
    data = result_to_dict(result)
    print("answer: " + " ".join(f"r{i}" for i in data["answer"]))
    print(f"depth: {result.depth}")
    print("rounds: " + " ".join(str(q) for q in result.rounds))
    print("trace: " + " ".join(f"a{step['attribute']}={step['value']}" for step in data["trace"]))
    return 0


def cmd_exact_depth(args: argparse.Namespace, config: AppConfig) -> int:
    system = _read_system(args)
    oracle = DepthOracle(system, _budget(args), branch_domain=args.branch_domain)
    depth = oracle.min_depth()
    logger.info("[CLI] %d node(s) expanded", oracle.nodes_expanded)
    if args.json:
        print(json.dumps({"h_exact": depth, "nodes_expanded": oracle.nodes_expanded}))
    else:
        print(f"h_EAR: {depth}")
    return 0


def cmd_verify(args: argparse.Namespace, config: AppConfig) -> int:
    if args.exhaustive:
        params = EnumerationParams(args.max_n, args.max_rules, args.max_len, args.values, cap=config.enumeration_cap)
        summary = verify_exhaustive(params, _budget(args))
        frame = summary.to_frame()
        if args.json:
            print(json.dumps({"systems": summary.systems, "passed": summary.passed,
                              "checks": frame.to_dict(orient="records"), "failing_systems": summary.failing_systems}))
        else:
            print(f"systems: {summary.systems}")
            print(frame.to_string(index=False))
            for example in summary.failing_systems:
                print("failing system:\n" + example)
        return 0 if summary.passed else 1

    system = _read_system(args)
    report = verify_bounds(system, _budget(args))
    if args.json:
        payload = {k: v for k, v in vars(report).items() if k != "verdicts"}
        payload.update(verdicts=report.verdicts, passed=report.all_passed)
        print(json.dumps(payload))
    else:
        print(f"h_EAR={report.h_exact} beta={report.beta} d={report.d} k={report.k} |S^max|={report.s_max_size}")
        print(f"lower bounds: cover={report.lb_cover} length={report.lb_length} count={report.lb_count:.6f}")
        print(f"greedy bound: {report.ub_theorem1:.6f} (max greedy depth {report.max_depth_greedy})")
        for name, ok in report.verdicts.items():
            status = "info" if name in report.INFORMATIONAL else ("PASS" if ok else "FAIL")
            print(f"{name:<20} {status}")
    return 0 if report.all_passed else 1


def cmd_bench(args: argparse.Namespace, config: AppConfig) -> int:
    cells = [BenchCell.parse(text) for text in args.cell] if args.cell else list(DEFAULT_CELLS)
    names = [name.strip() for name in args.strategies.split(",") if name.strip()]
    try:
        strategies = [Strategy(name) for name in names]
    except ValueError:
        args.usage_error(f"--strategies must list values among {[s.value for s in Strategy]}, got {args.strategies!r}")
    bench = BenchConfig(
        cells=cells, seeds=args.seeds, base_seed=args.seed, tuples=args.tuples,
        strategies=strategies, exact=args.exact, cover_full=args.cover_full,
        workers=args.workers, budget=_budget(args),
    )
    result = BenchRunner(bench).run()
    if args.output:
        _emit(result.to_csv(), args.output)
        sys.stdout.write(result.summary_text())
    else:
        sys.stdout.write(result.to_csv())
        sys.stderr.write(result.summary_text())
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = AppConfig.from_env()
        args = parse_args(argv, config)
        _setup_logging(args)
        return args.handler(args, config)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except EarsimError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
