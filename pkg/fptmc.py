#!/usr/bin/env python3
"""
fptmc - Parameterized first-order model checking

Batch command-line front end: evaluation, homomorphism and embedding
solvers, Fagin-defined problems, reductions, tree decompositions, instance
generation and the oracle-equivalence suites.
"""

import argparse
import signal
import sys

from src.cli.commands import REDUCTIONS, CommandHandler
from src.cli.display import Display
from src.utils.config import load_config, resolve_seed, save_config
from src.utils.errors import EXIT_USAGE
from src.utils.logging import log_run_settings, setup_logging

EXIT_INTERRUPTED = 130


def signal_handler(sig, frame):
    """Turn SIGINT into KeyboardInterrupt so main() can log and exit 130"""
    raise KeyboardInterrupt


def parse_arguments(argv=None):
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(description='fptmc - Parameterized first-order model checking')
    parser.add_argument('--config', type=str, default='config.json',
                        help='Path to configuration file')
    parser.add_argument('--seed', type=int,
                        help='Random seed (defaults to $FPTMC_SEED, then 0)')
    parser.add_argument('--epsilon', type=float,
                        help='Miss probability of randomized hash families')
    parser.add_argument('--max-candidates', type=int,
                        help='Largest tolerated search space or table size')
    parser.add_argument('--max-disjuncts', type=int,
                        help='Largest tolerated number of DNF disjuncts')
    parser.add_argument('--force', action='store_true',
                        help='Lift all resource guards')
    parser.add_argument('--timings', action='store_true',
                        help='Include phase timings in the report')
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Show debug messages on stderr')
    parser.add_argument('--no-color', action='store_true',
                        help='Disable colored output')
    parser.add_argument('--save-config', type=str,
                        help='Save current configuration to specified file')

    sub = parser.add_subparsers(dest='command', metavar='command')

    p = sub.add_parser('eval', help='Evaluate a sentence on a structure')
    p.add_argument('structure')
    p.add_argument('formula')
    p.add_argument('--pruned', action='store_true',
                   help='Memoizing evaluator that skips irrelevant elements')

    p = sub.add_parser('hom', help='Homomorphism from B into A')
    p.add_argument('target', help='Structure A')
    p.add_argument('pattern', help='Structure B')
    method = p.add_mutually_exclusive_group()
    method.add_argument('--td', type=str, help='Tree decomposition of B')
    method.add_argument('--heuristic', action='store_true', help='Min-fill decomposition (default)')
    method.add_argument('--exact', action='store_true', help='Optimal decomposition')
    method.add_argument('--brute', action='store_true', help='Exhaustive search')

    p = sub.add_parser('emb', help='Embedding of B into A')
    p.add_argument('target', help='Structure A')
    p.add_argument('pattern', help='Structure B')
    p.add_argument('--brute', action='store_true', help='Exhaustive search')
    p.add_argument('--hash-mode', choices=['deterministic', 'randomized'])

    p = sub.add_parser('mc-sigma1', help='Decide an existential sentence')
    p.add_argument('structure')
    p.add_argument('formula')
    p.add_argument('--mode', choices=['naive', 'hom', 'colorcoding'], default='colorcoding')
    p.add_argument('--hash-mode', choices=['deterministic', 'randomized'])

    p = sub.add_parser('fagin', help='Is there a k-element X with A |= phi(X)?')
    p.add_argument('formula', help='Formula file with a "# setvar X r" header')
    p.add_argument('structure')
    p.add_argument('k', type=int)
    p.add_argument('--mode', choices=['alg1', 'brute', 'bounded', 'slicewise'], default='alg1')

    p = sub.add_parser('reduce', help='Apply a reduction and check it')
    p.add_argument('kind', choices=REDUCTIONS)
    p.add_argument('inputs', nargs='+')
    p.add_argument('-k', type=int, help='Parameter')
    p.add_argument('-t', type=int, help='Alternation bound of machine encodings')
    p.add_argument('--arity', type=int, help='Arity-preserving structure encoding with bound s')
    p.add_argument('--width', type=int, help='Clause width of the WSAT normal form')
    p.add_argument('--out', type=str, help='Output path prefix; inline in the report if omitted')
    p.add_argument('--format', choices=['text', 'dot', 'json'], default='text')
    p.add_argument('--no-check', dest='check', action='store_false',
                   help='Skip the oracle comparison')

    p = sub.add_parser('gen', help='Generate a structure or formula')
    p.add_argument('kind', help='K4, C5, P3, grid3x3, K3,3, petersen, random-graph, '
                                'random-tree, random-structure or random-formula')
    p.add_argument('--n', type=int, default=6)
    p.add_argument('--p', type=float, default=0.5, help='Edge or tuple probability')
    p.add_argument('--vocab', type=str, default='E:2', help='Symbols as "R:2,S:1"')
    p.add_argument('--fragment', choices=['sigma', 'pi', 'qf'], default='sigma')
    p.add_argument('--t', type=int, default=1)
    p.add_argument('--vars', type=int, default=3)
    p.add_argument('--depth', type=int, default=2)
    p.add_argument('--out', type=str)
    p.add_argument('--format', choices=['text', 'dot', 'json'], default='text')

    p = sub.add_parser('verify', help='Run oracle-equivalence suites')
    p.add_argument('suite', help='Suite name or "all"')
    p.add_argument('--quick', action='store_true', help='Small case counts')

    p = sub.add_parser('classify', help='Fragment, rank and formula graphs of a formula')
    p.add_argument('formula')

    p = sub.add_parser('td', help='Tree decomposition of a structure')
    p.add_argument('structure')
    method = p.add_mutually_exclusive_group()
    method.add_argument('--exact', action='store_true')
    method.add_argument('--heuristic', action='store_true')
    method.add_argument('--validate', type=str, metavar='FILE')
    p.add_argument('--nice', action='store_true')
    p.add_argument('--out', type=str)

    p = sub.add_parser('clique', help='Brute-force k-clique')
    p.add_argument('graph')
    p.add_argument('k', type=int)

    p = sub.add_parser('wsat', help='Brute-force weighted satisfiability')
    p.add_argument('formula')
    p.add_argument('k', type=int)

    return parser, parser.parse_args(argv)


def main(argv=None):
    """Main application entry point"""
    signal.signal(signal.SIGINT, signal_handler)

    argv = sys.argv[1:] if argv is None else argv
    try:
        parser, args = parse_arguments(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0

    config = load_config(args.config)

    # Override config with command line arguments
    if args.epsilon is not None:
        config['hashing']['epsilon'] = args.epsilon
    if args.max_candidates is not None:
        config['guards']['max_candidates'] = args.max_candidates
    if args.max_disjuncts is not None:
        config['guards']['max_disjuncts'] = args.max_disjuncts
    if args.no_color:
        config['ui']['color_output'] = False

    if args.save_config:
        save_config(config, args.save_config)
        print(f"Configuration saved to {args.save_config}", file=sys.stderr)
        return 0

    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    logger = setup_logging(config['logging'], verbose=args.verbose)
    seed = resolve_seed(args.seed)
    log_run_settings(logger, args.command, seed, config, force=args.force)

    display = Display(color_output=config['ui']['color_output'])
    handler = CommandHandler(config, display, seed=seed, argv=argv,
                             include_timings=args.timings, force=args.force)
    try:
        return handler.run(args)
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        display.error("Interrupted")
        return EXIT_INTERRUPTED
    finally:
        logger.info(f"Finished fptmc {args.command}")


if __name__ == "__main__":
    sys.exit(main())
