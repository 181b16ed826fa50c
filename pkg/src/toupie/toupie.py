#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Toupie - classifier and representation toolkit for toupie algebras

Command line front end:
1. validate    - check a presentation against the input grammar and admissibility
2. invariants  - print t, m, simple connectedness, linkage, branches in I and canonical parameters
3. classify    - place the algebra in the hereditary < tilted < quasitilted < weakly shod < laura hierarchy
4. witness     - build a witness module family member and evaluate its contract
5. tau         - apply the Auslander-Reiten translate to a module
6. truncate    - compute the corner algebra eAe for a set of vertices

Exit codes: 0 ok, 1 usage, 2 invalid input, 3 verification failure, 4 capacity.
"""

import sys
import json
import argparse
import logging
from typing import Any, Dict, List, Optional

from .classification_pipeline import (
    SCHEMA_VERSION, ClassifierConfig, ToupieClassifier, add_file_logging, create_config_from_args, invariants,
)
from .tools.algebra_core import algebra_for, truncate
from .tools.config_loader import config_loader, get_pipeline_param
from .tools.errors import CapacityError, PresentationError, ToupieError, VerificationError
from .tools.quiver_model import (
    load_presentation, recognize_toupie, require_valid, serialize, serialize_general, to_general, validate,
)
from .tools.rep_engine import parse_module, serialize_module, tau_power
from .witness_lab import build_witness, evaluate_contract, rad_p0, segment

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_VERIFICATION = 3
EXIT_CAPACITY = 4

logger = logging.getLogger(__name__)


def setup_logging(level: str = "INFO"):
    """Configure the root logger on stderr; stdout carries machine output only."""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _emit(args, payload: Dict[str, Any], text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps({'schema': SCHEMA_VERSION, **payload}, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_validate(args) -> int:
    p = load_presentation(args.input)
    report = validate(p)
    if not report.valid:
        for issue in report.issues:
            print(f"{issue.location}: {issue.message}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, {'valid': True, 't': p.t, 'lengths': list(p.lengths)},
          f"valid: t = {p.t}, lengths {' '.join(str(x) for x in p.lengths)}")
    return EXIT_OK


def cmd_invariants(args) -> int:
    p = load_presentation(args.input)
    require_valid(p)
    e = invariants(p)
    payload = {
        't': e.t,
        'm': e.m,
        'lengths': list(e.lengths),
        'simply_connected': e.simply_connected,
        'linkage_edges': [list(edge) for edge in e.linkage_edges],
        'branches_in_I': list(e.branches_in_I),
        'relations_per_branch': list(e.relations_per_branch),
        'canonical': e.canonical,
        'long_branch_count': e.long_branch_count,
    }
    text = "\n".join(f"{key}: {json.dumps(value)}" for key, value in payload.items())
    _emit(args, payload, text)
    return EXIT_OK


def cmd_classify(args) -> int:
    config = create_config_from_args(args)
    if config.output_dir:
        add_file_logging(config.output_dir)
    classifier = ToupieClassifier(config)

    if len(args.inputs) > 1 or config.jobs > 1 or config.output_dir:
        rows = classifier.classify_batch(args.inputs)
        if args.json:
            payload = rows if len(args.inputs) > 1 else rows[0]
            sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        else:
            for row in rows:
                outcome = row.get('error') or f"{row['label']} [{row['fired_case']}]"
                status = row.get('verification', {}).get('status')
                sys.stdout.write(f"{row['input']}: {outcome}" + (f" verification {status}" if status else "") + "\n")
        errors = [row['error_type'] for row in rows if 'error' in row]
        if CapacityError.__name__ in errors:
            return EXIT_CAPACITY
        if errors:
            return EXIT_INVALID
        if any(row.get('verification', {}).get('status') == 'failed' for row in rows):
            raise VerificationError("verification failed for at least one input")
        return EXIT_OK

    result = classifier.classify_file(args.inputs[0])
    sys.stdout.write(result.to_json() + "\n" if args.json else result.to_text())
    if result.verification is not None and result.verification['status'] == 'failed':
        raise VerificationError("verification failed", result.verification)
    return EXIT_OK


_WITNESS_PARAMS = ('r', 's', 'm', 'length', 'length1', 'length2')


def cmd_witness(args) -> int:
    if args.family in ('segment', 'rad_p0'):
        if not args.input:
            print(f"error: --input is required for family {args.family}", file=sys.stderr)
            return EXIT_USAGE
        p = load_presentation(args.input)
        require_valid(p)
        if args.family == 'segment':
            if not (args.x and args.y):
                print("error: --x and --y are required for family segment", file=sys.stderr)
                return EXIT_USAGE
            witness = segment(p, args.x, args.y)
        else:
            witness = rad_p0(to_general(p))
    else:
        params: Dict[str, Any] = {k: getattr(args, k) for k in _WITNESS_PARAMS if getattr(args, k) is not None}
        if args.relations:
            params['relations'] = [row.split(",") for row in args.relations.split(";")]
        if args.family != 'one_surviving_branch':
            params['lam'] = args.lambda_value if args.lambda_value is not None else 1
        witness = build_witness(args.family, **params)
    outcome = evaluate_contract(witness)
    module_text = serialize_module(witness.module)
    payload = {'witness': witness.spec.to_dict(), 'contract': outcome, 'module': module_text}
    summary = (f"# {witness.spec.family.value}: pd {outcome['pd']}, id {outcome['id']}, "
               f"contract {'met' if outcome['satisfied'] else 'not met'}\n")
    _emit(args, payload, summary + module_text)
    return EXIT_OK


def cmd_tau(args) -> int:
    p = load_presentation(args.input)
    require_valid(p)
    quiver = to_general(p)
    with open(args.module, 'r', encoding='utf-8') as f:
        module = parse_module(f.read(), quiver)
    result = tau_power(module, args.power)
    _emit(args, {'power': args.power, 'dimension_vector': result.dimension_vector(),
                 'module': serialize_module(result)},
          serialize_module(result))
    return EXIT_OK


def cmd_truncate(args) -> int:
    p = load_presentation(args.input)
    require_valid(p)
    vertices = [v.strip() for v in args.vertices.split(",") if v.strip()]
    quiver = truncate(algebra_for(to_general(p)), vertices)
    recognized = recognize_toupie(quiver)
    text = serialize_general(quiver)
    if recognized is not None:
        text += "# toupie form\n" + "".join(f"# {line}\n" for line in serialize(recognized).splitlines())
    _emit(args, {'vertices': vertices, 'quiver': serialize_general(quiver),
                 'toupie': serialize(recognized) if recognized is not None else None}, text)
    return EXIT_OK


COMMANDS = {
    'validate': cmd_validate,
    'invariants': cmd_invariants,
    'classify': cmd_classify,
    'witness': cmd_witness,
    'tau': cmd_tau,
    'truncate': cmd_truncate,
}


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Machine-readable JSON output')
    common.add_argument('--log-level', type=str, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        default=None, help='Logging level (default: from configuration)')
    common.add_argument('--config', type=str, help='Path to an alternative config_unified.yaml')
    common.add_argument('--seed', type=int, default=None,
                        help='Seed for the pseudo-random property suites (default: 0)')

    parser = argparse.ArgumentParser(
        prog='toupie',
        description='Classifier and representation toolkit for toupie algebras',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Classify a presentation and verify the decision
  toupie classify fixtures/canonical_3322.txt --verify

  # Batch mode with a CSV summary
  toupie classify fixtures/*.txt --jobs 4 --output-dir results

  # Invariants as JSON
  toupie invariants fixtures/not_laura_222.txt --json

  # Third AR translate of a module
  toupie tau fixtures/two_long_3322.txt --module fixtures/modules/rad_p0_3322.txt --power 3

  # Corner algebra at a set of vertices
  toupie truncate fixtures/tilted_2225.txt --vertices 0,1.1,2.1,3.1,4.1,4.2,inf
        """
    )
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    p_validate = subparsers.add_parser('validate', parents=[common], help='Validate a presentation')
    p_validate.add_argument('input', help="Presentation file, or '-' for standard input")

    p_inv = subparsers.add_parser('invariants', parents=[common], help='Print the invariants')
    p_inv.add_argument('input', help="Presentation file, or '-' for standard input")

    p_classify = subparsers.add_parser('classify', parents=[common], help='Classify one or more presentations')
    p_classify.add_argument('inputs', nargs='+', help="Presentation files, or '-' for standard input")
    p_classify.add_argument('--verify', action='store_true', help='Verify the fired case with witnesses')
    p_classify.add_argument('--lambda', dest='lambda_value', type=str,
                            help='Single family parameter instead of the configured sweep')
    p_classify.add_argument('--jobs', type=int, default=1, help='Parallel worker processes (default: 1)')
    p_classify.add_argument('--output-dir', type=str, help='Write summary.csv and toupie.log here')

    p_witness = subparsers.add_parser('witness', parents=[common], help='Build a witness module')
    p_witness.add_argument('--family', required=True,
                           choices=['no_branch_in_ideal', 'branch_in_ideal', 'one_surviving_branch',
                                    'two_branches_in_ideal', 'simply_connected_family', 'segment', 'rad_p0'])
    p_witness.add_argument('--lambda', dest='lambda_value', type=str, help='Family parameter (default: 1)')
    for name in _WITNESS_PARAMS:
        p_witness.add_argument(f'--{name}', type=int, help=f'Family parameter {name}')
    p_witness.add_argument('--relations', '--vector', dest='relations', type=str,
                           help='Relation vectors, entries separated by commas and vectors by semicolons')
    p_witness.add_argument('--input', type=str, help='Presentation for segment and rad_p0')
    p_witness.add_argument('--x', type=str, help='First segment vertex')
    p_witness.add_argument('--y', type=str, help='Second segment vertex')

    p_tau = subparsers.add_parser('tau', parents=[common], help='Apply tau^n to a module')
    p_tau.add_argument('input', help="Presentation file, or '-' for standard input")
    p_tau.add_argument('--module', required=True, help='Module in the representation literal format')
    p_tau.add_argument('--power', type=int, default=1, help='n in tau^n; negative values use tau^-1')

    p_trunc = subparsers.add_parser('truncate', parents=[common], help='Compute eAe')
    p_trunc.add_argument('input', help="Presentation file, or '-' for standard input")
    p_trunc.add_argument('--vertices', required=True, help='Comma-separated vertices kept in e')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE

    if args.config:
        config_loader.reload(args.config)
    if args.log_level is None:
        args.log_level = get_pipeline_param('basic', 'default_log_level', 'INFO')
    setup_logging(args.log_level)

    try:
        return COMMANDS[args.command](args)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except PresentationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ToupieError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
