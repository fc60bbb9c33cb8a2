### Command-line driver: one subcommand per verification, JSON reports plus a PASS/FAIL summary

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from sp4_building_zeta.localgroup import fraction_text
from sp4_building_zeta.latticegeo import SUPPORTED_PRIMES, MAX_RADIUS, ball, check_ball
from sp4_building_zeta.cosetver import verify_all, a2_scalar_check
from sp4_building_zeta.reptheory import rep_type, verify_table3, table2_rows
from sp4_building_zeta.zetaeng import (MAX_ORDER, DEFAULT_TOL, ComplexData, theorem41, corollary43,
                                       verify_identity_symbolic, ramanujan_classify, load_spectra)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
REPORT_DIR_ENV = 'SP4_ZETA_REPORT_DIR'
COMMANDS = ('verify-cosets', 'building-ball', 'verify-table3', 'verify-identity', 'zeta', 'ramanujan')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    p: int = 2
    radius: Optional[int] = None         # verify-cosets: optional ball for the membership check
    order: int = 12                      # truncation order of every series
    input: Optional[str] = None          # complex data or spectra JSON
    out: Optional[str] = None            # report path, default <report dir>/<command>.json
    tol: float = DEFAULT_TOL
    types: Optional[Tuple[str, ...]] = None
    verbose: int = 0
    report_dir: Optional[str] = None

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError('Unknown command %s. Use one of %s' % (str(self.command), ', '.join(COMMANDS)))
        if self.p not in SUPPORTED_PRIMES:
            raise ValueError('Unsupported prime %s. Use one of %s' % (str(self.p), str(SUPPORTED_PRIMES)))
        if self.radius is not None and not 0 <= self.radius <= MAX_RADIUS:
            raise ValueError('Radius must be between 0 and %d. You input %s' % (MAX_RADIUS, str(self.radius)))
        if not 0 <= self.order <= MAX_ORDER:
            raise ValueError('Order must be between 0 and %d. You input %s' % (MAX_ORDER, str(self.order)))
        if not self.tol > 0:
            raise ValueError('Tolerance must be positive, got %s' % str(self.tol))
        if self.command in ('zeta', 'ramanujan') and not self.input:
            raise ValueError('%s needs --input FILE' % self.command)
        for t in self.types or ():
            rep_type(t)
        return self

    @property
    def report_path(self):
        if self.out:
            return self.out
        directory = self.report_dir or os.environ.get(REPORT_DIR_ENV) or '.'
        return os.path.join(directory, '%s.json' % self.command)

    def to_json(self):
        return {'p': self.p, 'radius': self.radius, 'order': self.order, 'input': self.input, 'tol': self.tol,
                'types': list(self.types) if self.types else None}


def _json_default(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, Fraction):
        return fraction_text(x)
    return str(x)


def _dump_json(obj, file_path):
    ''' Saves a json file, byte-identical for equal objects '''
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(file_path, 'w') as dfile:
        json.dump(obj, dfile, indent=4, sort_keys=True, default=_json_default)
        dfile.write('\n')


def _line(ok, label):
    return '%s %s' % ('PASS' if ok else 'FAIL', label)


### Subcommands; each returns (payload, passed, summary lines)

def _verify_cosets(config):
    b = ball(config.radius, config.p) if config.radius is not None else None
    reports = verify_all(config.p, b)
    a2_scalar = a2_scalar_check(config.p)
    lines = [_line(r.passed, '%s p=%d: %d cosets (expected %d)' % (r.operator, r.p, r.count, r.expected_count))
             for r in reports]
    lines.append(_line(a2_scalar, 'A2 scalar part q^2+1'))
    payload = {'families': [r.to_json() for r in reports], 'a2_scalar': a2_scalar}
    return payload, all(r.passed for r in reports) and a2_scalar, lines


def _building_ball(config):
    radius = 1 if config.radius is None else config.radius
    b = ball(radius, config.p)
    checks = check_ball(b)
    lines = [b.summary()] + [_line(ok, name) for name, ok in sorted(checks.items())]
    payload = {'counts': b.counts(), 'checks': checks, 'ball': b.to_json()}
    return payload, all(checks.values()), lines


def _verify_table3(config):
    report = verify_table3(config.types)
    lines = [_line(r.passed, '%s%s' % (r.type_id.tag, '' if r.sign is None else ' (sign %+d)' % r.sign))
             for r in report.rows]
    lines.append(_line(report.ledger.passed, 'multiplicity ledger'))
    lines += [_line(ok, name) for name, ok in sorted(report.checks.items())]
    payload = report.to_json()
    payload['table2'] = table2_rows()
    return payload, report.passed, lines


def _verify_identity(config):
    report = verify_identity_symbolic()
    lines = [_line(ok, name) for name, ok in sorted(report.checks.items())]
    lines.append('R(u) = (1-u^2)^(%s) (1-q^2u^2)^(%s)' % (report.chi_exponent, report.q2_exponent))
    return report.to_json(), report.passed, lines


def _zeta(config):
    data = ComplexData.from_json(config.input)
    t41 = theorem41(data, config.order)
    payload = {'theorem41': t41.to_json(), 'corollary43': None}
    lines = [_line(t41.passed, 'cycle closed form to order %d (agree to %d)' % (config.order, t41.match_order))]
    passed = t41.passed
    if data.has_counts():
        c43 = corollary43(data, config.order)
        payload['corollary43'] = c43.to_json()
        lines.append(_line(c43.passed, 'vertex/chamber closed form to order %d (agree to %d)'
                           % (config.order, c43.match_order)))
        passed = passed and c43.passed
    else:
        lines.append('SKIP vertex/chamber closed form: no counts in input')
    return payload, passed, lines


def _ramanujan(config):
    with open(config.input, 'r') as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as err:
            raise ValueError('%s is not valid JSON: %s' % (config.input, str(err)))
    spectra, q = load_spectra(d)
    report = ramanujan_classify(spectra, q, config.tol)
    lines = [_line(v.passed, '%s: %d zeros, %d trivial' % (op, len(v.roots), len(v.roots) - len(v.nontrivial)))
             for op, v in report.operators.items()]
    lines.append(_line(report.consistent, 'criteria agree'))
    lines.append('%s Ramanujan' % ('is' if report.ramanujan else 'is not'))
    return report.to_json(), report.passed, lines


HANDLERS = {
    'verify-cosets': _verify_cosets,
    'building-ball': _building_ball,
    'verify-table3': _verify_table3,
    'verify-identity': _verify_identity,
    'zeta': _zeta,
    'ramanujan': _ramanujan,
}


def run(config):
    '''
    Runs one subcommand, writes its report and prints the summary.
    Returns 0 when every check passes and 1 otherwise.
    '''
    payload, passed, lines = HANDLERS[config.command](config)
    report = {'schema_version': SCHEMA_VERSION, 'command': config.command, 'config': config.to_json(),
              'passed': passed, 'result': payload}
    path = config.report_path
    _dump_json(report, path)
    for line in lines:
        print(line)
    print('%s: %s (report %s)' % (config.command, 'PASS' if passed else 'FAIL', path))
    logger.info('%s finished, report written to %s', config.command, path)
    return EXIT_OK if passed else EXIT_FAILED


### Argument parsing

def _types(text):
    return tuple(t.strip() for t in text.split(',') if t.strip())


def build_parser():
    parser = argparse.ArgumentParser(prog='sp4-zeta',
                                     description='Exact checks for zeta functions of Sp4 building quotients')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for INFO, -vv for DEBUG logging')
    parser.add_argument('--report-dir', default=None,
                        help='directory for JSON reports (default $%s or the current directory)' % REPORT_DIR_ENV)
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('verify-cosets', help='coset decompositions of the five Hecke operators')
    p.add_argument('--p', type=int, default=2)
    p.add_argument('--radius', type=int, default=None, help='also require image vertices in this ball')
    p.add_argument('--out', default=None)

    p = sub.add_parser('building-ball', help='ball around the fundamental chamber')
    p.add_argument('--p', type=int, default=2)
    p.add_argument('--radius', type=int, default=1)
    p.add_argument('--out', default=None)

    p = sub.add_parser('verify-table3', help='parahoric dimensions, spectra and contributions of every type')
    p.add_argument('--types', type=_types, default=None, help='comma separated, e.g. I,IIb,VId')
    p.add_argument('--out', default=None)

    p = sub.add_parser('verify-identity', help='symbolic assembly of R(u) from the type contributions')
    p.add_argument('--out', default=None)

    p = sub.add_parser('zeta', help='both closed forms on finite complex data')
    p.add_argument('--input', required=True)
    p.add_argument('--order', type=int, default=12)
    p.add_argument('--out', default=None)

    p = sub.add_parser('ramanujan', help='classify spectra against the Ramanujan bands')
    p.add_argument('--input', required=True)
    p.add_argument('--tol', type=float, default=DEFAULT_TOL)
    p.add_argument('--out', default=None)
    return parser


def config_from_args(args):
    return RunConfig(command=args.command,
                     p=getattr(args, 'p', 2),
                     radius=getattr(args, 'radius', None),
                     order=getattr(args, 'order', 12),
                     input=getattr(args, 'input', None),
                     out=getattr(args, 'out', None),
                     tol=getattr(args, 'tol', DEFAULT_TOL),
                     types=getattr(args, 'types', None),
                     verbose=args.verbose,
                     report_dir=args.report_dir)


def _configure_logging(verbose):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger('sp4_building_zeta').setLevel(level)


def main(argv=None):
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        config = config_from_args(args).validate()
        return run(config)
    except (ValueError, OSError) as err:
        print('error: %s' % str(err), file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == '__main__':
    sys.exit(main())
