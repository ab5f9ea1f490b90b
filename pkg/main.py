import argparse
import logging
import sys
import time
from typing import Dict, Optional, Sequence

from utils.analyzer import ElectionAnalyzer
from utils.attacks import AttackSolver
from utils.config import ENGINES, ConfigError, load_config, load_env_variables
from utils.data_loader import ElectionFormatError, load_and_validate_election
from utils.election import Election, Profile, RuleSpecError, parse_rule
from utils.instances import AttackInstance, AttackKind, AttackResult, Mode, TieModel, verify_witness
from utils.oracle import OracleBudget, OracleRefused, oracle_solve
from utils.report import format_result, format_winner, save_report
from utils import rules

logger = logging.getLogger(__name__)

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_REFUSED, EXIT_MISMATCH = 0, 1, 2, 3, 4

VARIANTS = {
    'add-votes': (AttackKind.ADD_VOTES, None),
    'delete-votes': (AttackKind.DELETE_VOTES, None),
    'partition-votes-te': (AttackKind.PARTITION_VOTES, TieModel.TE),
    'partition-votes-tp': (AttackKind.PARTITION_VOTES, TieModel.TP),
    'add-cands': (AttackKind.ADD_CANDIDATES, None),
    'add-cands-unlimited': (AttackKind.ADD_CANDIDATES_UNLIMITED, None),
    'delete-cands': (AttackKind.DELETE_CANDIDATES, None),
    'partition-cands-te': (AttackKind.PARTITION_CANDIDATES, TieModel.TE),
    'partition-cands-tp': (AttackKind.PARTITION_CANDIDATES, TieModel.TP),
    'runoff-partition-cands-te': (AttackKind.RUNOFF_PARTITION_CANDIDATES, TieModel.TE),
    'runoff-partition-cands-tp': (AttackKind.RUNOFF_PARTITION_CANDIDATES, TieModel.TP),
}


class UsageError(ValueError):
    """Raised when flags are inconsistent with the command."""
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='main.py', description='Exact solvers for manipulation, bribery and control of elections.')
    commands = parser.add_subparsers(dest='command', required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('election', help='election file')
    shared.add_argument('--rule', required=True, help='borda | plurality | veto | approval:R | scoring:L1,L2,.. | copeland:NUM/DEN | maximin | bucklin | stv | nanson | baldwin | rankedpairs | schulze')
    shared.add_argument('--format', choices=('text', 'json'), default='text')
    shared.add_argument('--no-timing', action='store_true', help='omit elapsed_ms (byte-identical output)')
    shared.add_argument('--save', action='store_true', help='also write the document to the output directory')
    shared.add_argument('--verbose', action='store_true')

    attack = argparse.ArgumentParser(add_help=False)
    attack.add_argument('--target', required=True, help='distinguished candidate p')
    attack.add_argument('--destructive', action='store_true')
    attack.add_argument('--engine', choices=ENGINES, default=None)

    winner = commands.add_parser('winner', parents=[shared], help='winner and co-winners of an election')
    winner.add_argument('--details', action='store_true', help='print ballot, pairwise and score tables')

    manipulate = commands.add_parser('manipulate', parents=[shared, attack])
    manipulate.add_argument('--manipulators', type=int, required=True)

    bribe = commands.add_parser('bribe', parents=[shared, attack])
    bribe.add_argument('--budget', type=int, required=True)

    control = commands.add_parser('control', parents=[shared, attack])
    control.add_argument('--variant', choices=sorted(VARIANTS), required=True)
    control.add_argument('--budget', type=int, default=0)
    control.add_argument('--unregistered', help='election file holding the unregistered votes (add-votes)')
    control.add_argument('--spoilers', default='', help='comma-separated candidates not yet registered (add-cands)')
    return parser


def _load(path: str) -> Election:
    election, validation = load_and_validate_election(path)
    if election is None:
        raise UsageError(validation.get('error', 'invalid election file'))
    return election


def _unregistered_profile(path: str, election: Election) -> Profile:
    pool = _load(path)
    if sorted(pool.names) != sorted(election.names):
        raise UsageError("The unregistered votes must rank the same candidates as the election.")
    counts = {}
    for vote, count in pool.profile:
        counts[election.vote(pool.render(vote))] = count
    return Profile(counts)


def build_instance(args: argparse.Namespace, election: Election) -> AttackInstance:
    rule = parse_rule(args.rule)
    mode = Mode.DESTRUCTIVE if args.destructive else Mode.CONSTRUCTIVE
    if args.command == 'manipulate':
        kind, ties, budget = AttackKind.MANIPULATION, None, args.manipulators
    elif args.command == 'bribe':
        kind, ties, budget = AttackKind.BRIBERY, None, args.budget
    else:
        (kind, ties), budget = VARIANTS[args.variant], args.budget
    if budget < 0:
        raise UsageError("Budgets must be nonnegative.")

    unregistered = None
    if kind == AttackKind.ADD_VOTES:
        if not args.unregistered:
            raise UsageError("add-votes needs --unregistered FILE.")
        unregistered = _unregistered_profile(args.unregistered, election)
    spoilers = tuple(n.strip() for n in getattr(args, 'spoilers', '').split(',') if n.strip())
    if spoilers and kind not in (AttackKind.ADD_CANDIDATES, AttackKind.ADD_CANDIDATES_UNLIMITED):
        raise UsageError("--spoilers only applies to add-cands variants.")
    if args.target not in election.names:
        raise UsageError(f"Unknown target candidate: {args.target}")
    return AttackInstance(kind, rule, election, args.target, mode, budget, unregistered, ties, spoilers)


def _run_engines(inst: AttackInstance, engine: str, config: Dict) -> Dict[str, AttackResult]:
    results = {}
    if engine in ('main', 'both'):
        results['main'] = AttackSolver(config).solve(inst)
    if engine in ('oracle', 'both'):
        results['oracle'] = oracle_solve(inst, OracleBudget(config['oracle_max_states']))
    for name, result in results.items():
        if not verify_witness(inst, result):
            raise RuntimeError(f"The {name} witness failed re-verification.")
    return results


def _emit(document: str, args: argparse.Namespace, config: Dict) -> None:
    sys.stdout.write(document)
    if args.save:
        save_report(document, config['output_dir'], args.command, args.format)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse flags, run the command and print its document; returns the exit status."""

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_YES

    try:
        load_env_variables()
        config = load_config()
    except ConfigError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR

    level = 'INFO' if args.verbose else config['log_level']
    logging.basicConfig(level=level, stream=sys.stderr, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s', force=True)

    try:
        election = _load(args.election)
        started = time.perf_counter()

        if args.command == 'winner':
            rule = parse_rule(args.rule)
            winner = rules.evaluate(rule, election).name
            cowinners = [c.name for c in sorted(rules.cowinners(rule, election))]
            elapsed = None if args.no_timing else round((time.perf_counter() - started) * 1000)
            document = format_winner(rule, election, winner, cowinners, elapsed, args.format)
            if args.details and args.format == 'text':
                document += '\n' + ElectionAnalyzer(election).get_text_summary(rule)
            _emit(document, args, config)
            return EXIT_YES

        inst = build_instance(args, election)
        engine = args.engine or config['engine']
        results = _run_engines(inst, engine, config)
        elapsed = None if args.no_timing else round((time.perf_counter() - started) * 1000)
        primary = results.get('main') or results['oracle']
        document = format_result(args.command, inst, primary, elapsed, results if engine == 'both' else None, args.format)
        _emit(document, args, config)

        if len({r.decision for r in results.values()}) > 1:
            logger.error("Engines disagree.")
            return EXIT_MISMATCH
        return EXIT_YES if primary.is_yes else EXIT_NO

    except OracleRefused as e:
        sys.stderr.write(f"refused: {e}\n")
        return EXIT_REFUSED
    except (ElectionFormatError, RuleSpecError, UsageError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
