"""Command line front end

``python -m pycartan <command>`` with the commands ``quartic``, ``verify``,
``ode`` and ``bracket``.  Reports go to stdout as JSON with sorted keys
(``--text`` for ``key: value`` lines).  Exit status is 0 when a command ran,
1 when a verification failed and 2 on usage or parse errors.
"""
import argparse
import functools
import json
import logging
import sys
import time
import typing
from fractions import Fraction

import numpy as np

from . import dist235, odesolve, twistor
from .curvature import CartanQuartic
from .errors import (ChangeOfChartFailure, DegenerateDistribution, NotAdapted, NotATransform,
                     PropositionMismatch, SingularThirdDerivative, SpecSyntaxError)
from .exterior import coordinate_coframe
from .grammar import format_spec, parse_spec, to_heavenly, to_monge


logger = logging.getLogger(__name__)

SCHEMA = 1

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class Report:
    """Result of one command"""
    def __init__(self, command: str):
        self.command = command
        self.inputs: typing.Dict[str, typing.Any] = {}
        self.verdicts: typing.Dict[str, typing.Optional[bool]] = {}
        self.exact: typing.Dict[str, typing.Any] = {}
        self.numeric: typing.Dict[str, typing.Optional[float]] = {}
        self.timings: typing.Dict[str, float] = {}
        self.messages: typing.List[str] = []

    def as_dict(self, timings: bool = False) -> typing.Dict[str, typing.Any]:
        """Serializable content; timings only on request"""
        out = {
            'schema': SCHEMA,
            'command': self.command,
            'inputs': self.inputs,
            'verdicts': self.verdicts,
            'exact': self.exact,
            'numeric': self.numeric,
        }
        if self.messages:
            out['messages'] = self.messages
        if timings:
            out['timings'] = self.timings
        return out

    def to_json(self, timings: bool = False) -> str:
        """Deterministic JSON text"""
        return json.dumps(self.as_dict(timings), sort_keys=True, indent=2, ensure_ascii=False)

    def to_text(self, timings: bool = False) -> str:
        """``section.key: value`` lines in sorted order"""
        lines = []
        for section, content in sorted(self.as_dict(timings).items()):
            if isinstance(content, dict):
                for key, value in sorted(content.items()):
                    lines.append('{}.{}: {}'.format(section, key, value))
            elif isinstance(content, list):
                lines.extend('{}: {}'.format(section, item) for item in content)
            else:
                lines.append('{}: {}'.format(section, content))
        return '\n'.join(lines)


class _Timer:
    def __init__(self, report: Report, name: str):
        self.report = report
        self.name = name
        self.start = 0.0

    def __enter__(self) -> None:
        self.start = time.perf_counter()

    def __exit__(self, *exc: typing.Any) -> None:
        self.report.timings[self.name] = time.perf_counter() - self.start


def _quartic_exact(report: Report, quartic: CartanQuartic) -> None:
    for i, value in enumerate(quartic, start=1):
        report.exact['A{}'.format(i)] = str(value)


def cmd_quartic(args: argparse.Namespace) -> typing.Tuple[Report, int]:
    """Cartan quartic of ``f(q)`` or ``Θ(x5)``"""
    report = Report('quartic')
    parsed = parse_spec(args.spec)
    report.inputs.update(spec=format_spec(parsed), pipeline=args.pipeline)
    try:
        with _Timer(report, 'pipeline'):
            if args.pipeline == 'fq':
                spec = to_monge(parsed, args.spec)
                quartic = dist235.quartic_fq(spec)
                expected = dist235.a5_residual(spec) / (spec.jet(2) ** 4 * 100)
            else:
                hspec = to_heavenly(parsed, args.spec)
                table = hspec.table(twistor.GOURSAT_CHART)
                quartic = twistor.quartic_theta(hspec)
                expected = -twistor.alpha5_of(hspec) / (hspec.jet(table, 4) * 100)
    except DegenerateDistribution as exc:
        report.verdicts.update(generic=False, flat=None)
        report.messages.append(str(exc))
        return report, EXIT_OK
    _quartic_exact(report, quartic)
    report.verdicts.update(generic=True, flat=quartic.is_zero(),
                           quadruple_root=not any(quartic[:4]),
                           matches_formula=quartic.a5 == expected and not any(quartic[:4]))
    return report, EXIT_OK


def _verify_structure(report: Report, args: argparse.Namespace) -> bool:
    parsed = parse_spec(args.spec)
    report.inputs.update(spec=format_spec(parsed), pipeline=args.pipeline, coframe=args.coframe)
    if args.pipeline == 'fq':
        monge = to_monge(parsed, args.spec)
        table = monge.table
        build = functools.partial(dist235.adapted_coframe_fq, monge)
    else:
        heavenly = to_heavenly(parsed, args.spec)
        table = heavenly.table(twistor.GOURSAT_CHART)
        build = functools.partial(twistor.adapted_coframe_theta, heavenly)
    coframe = coordinate_coframe(table) if args.coframe == 'coordinate' else build()
    try:
        forms = dist235.solve_structure_forms(coframe)
    except NotAdapted as exc:
        report.messages.append(str(exc))
        return False
    report.exact['solution_space_dim'] = forms.solution_space_dim
    return forms.residual_zero


def _verify_proposition(report: Report, args: argparse.Namespace) -> bool:
    try:
        diff = twistor.verify_proposition(twistor.jet_transform(6))
    except PropositionMismatch as exc:
        report.messages.append(str(exc))
        return False
    report.exact['difference'] = str(diff)
    return True


def _verify_pairing(report: Report, args: argparse.Namespace) -> bool:
    parsed = parse_spec(args.spec if args.spec != 'jet' else 'jet4')
    report.inputs['spec'] = format_spec(parsed)
    return twistor.pairing_holds(to_heavenly(parsed, args.spec))


def _verify_goursat(report: Report, args: argparse.Namespace) -> bool:
    parsed = parse_spec(args.spec)
    report.inputs['spec'] = format_spec(parsed)
    try:
        change = twistor.goursat_change(to_heavenly(parsed, args.spec))
    except ChangeOfChartFailure as exc:
        report.messages.append(str(exc))
        return False
    report.exact['transition'] = [[str(v) for v in row] for row in change.transition]
    report.exact['determinant'] = str(change.determinant)
    return True


def _verify_dictionary(report: Report, args: argparse.Namespace) -> bool:
    parsed = parse_spec(args.spec)
    report.inputs['spec'] = format_spec(parsed)
    hspec = to_heavenly(parsed, args.spec)
    entry = twistor.dictionary(hspec)
    slope = twistor.dictionary_slope(hspec)
    report.exact.update(q=str(entry.q), f=str(entry.f), slope=str(slope))
    return slope == entry.q.table.coordinate('x5')


_VERIFIERS: typing.Dict[str, typing.Callable[[Report, argparse.Namespace], bool]] = {
    'structure': _verify_structure,
    'proposition': _verify_proposition,
    'pairing': _verify_pairing,
    'goursat': _verify_goursat,
    'dictionary': _verify_dictionary,
}


def cmd_verify(args: argparse.Namespace) -> typing.Tuple[Report, int]:
    """Exact regression gates"""
    report = Report('verify')
    report.inputs['which'] = args.which
    with _Timer(report, args.which):
        passed = _VERIFIERS[args.which](report, args)
    report.verdicts['passed'] = passed
    logger.info("verify %s: %s", args.which, passed)
    return report, EXIT_OK if passed else EXIT_FAILED


def _initial_state(args: argparse.Namespace, count: int) -> odesolve.ODEState:
    if args.monomial is not None:
        return odesolve.monomial_state(Fraction(args.monomial), args.x_from, count)
    try:
        values = [float(v) for v in args.init.split(',')]
    except ValueError:
        raise SpecSyntaxError("Initial data must be comma separated numbers", args.init, 0)
    if len(values) != count:
        raise SpecSyntaxError("Expected {} initial values, got {}".format(count, len(values)),
                              args.init, 0)
    return odesolve.ODEState(args.x_from, np.array(values))


def cmd_ode(args: argparse.Namespace) -> typing.Tuple[Report, int]:
    """Integrate the 7th- or 8th-order equation"""
    report = Report('ode')
    count = args.order
    rhs = odesolve.rhs7 if args.order == 7 else odesolve.rhs8
    init = _initial_state(args, count)
    report.inputs.update(order=args.order, monomial=args.monomial, init=args.init,
                         x_from=args.x_from, x_to=args.x_to, h=args.h)
    try:
        with _Timer(report, 'integrate'):
            traj = odesolve.integrate(rhs, init, args.x_to, args.h)
    except SingularThirdDerivative as exc:
        report.verdicts['singular'] = True
        report.messages.append(str(exc))
        return report, EXIT_OK
    report.verdicts['singular'] = traj.singular
    if traj.message:
        report.messages.append(traj.message)
    final = traj.final
    report.numeric.update(x_end=final.x, y_end=float(final.derivs[0]),
                          error_estimate=traj.error_estimate)
    if args.monomial is not None:
        exact = final.x ** float(Fraction(args.monomial))
        report.numeric['endpoint_error'] = abs(float(final.derivs[0]) - exact)
        if args.convergence:
            with _Timer(report, 'convergence'):
                try:
                    ratio: typing.Optional[float] = odesolve.convergence_ratio(
                        args.monomial, args.x_from, args.x_to, args.h)
                except ZeroDivisionError:
                    ratio = None
            report.numeric['convergence_ratio'] = ratio
    if args.order == 8 and not traj.singular:
        try:
            with _Timer(report, 'legendre'):
                check = odesolve.parametric_legendre_check(traj)
        except NotATransform as exc:
            report.verdicts['transform'] = False
            report.messages.append(str(exc))
        else:
            report.verdicts['transform'] = True
            report.numeric.update(slope_residual=check.slope_residual,
                                  a5_residual=check.a5_residual)
        consistency = odesolve.ode_level_consistency(traj)
        report.numeric['level_residual'] = consistency.residual
        report.verdicts['levels_consistent'] = consistency.consistent
    if args.emit_csv:
        with open(args.emit_csv, 'w', newline='') as stream:
            odesolve.write_csv(traj, stream)
        report.inputs['emit_csv'] = args.emit_csv
    return report, EXIT_OK


def cmd_bracket(args: argparse.Namespace) -> typing.Tuple[Report, int]:
    """Bracket frame of ``f(q)`` and its determinant"""
    report = Report('bracket')
    parsed = parse_spec(args.spec)
    report.inputs['spec'] = format_spec(parsed)
    frame = dist235.bracket_frame(to_monge(parsed, args.spec))
    report.exact['fields'] = ['X{}: {!r}'.format(i, f) for i, f in enumerate(frame.fields, start=1)]
    report.exact['determinant'] = str(frame.determinant)
    report.verdicts['generic'] = frame.generic
    return report, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Argument parser of the ``pycartan`` command"""
    parser = argparse.ArgumentParser(prog='pycartan', description=__doc__.splitlines()[0])
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="log to stderr (-v info, -vv debug)")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument('--json', dest='text', action='store_false', help="JSON report (default)")
    fmt.add_argument('--text', dest='text', action='store_true', help="key: value report")
    parser.set_defaults(text=False)
    parser.add_argument('--timings', action='store_true', help="include wall-clock timings")
    sub = parser.add_subparsers(dest='command', required=True)

    quartic = sub.add_parser('quartic', help="Cartan quartic of f(q) or Theta(x5)")
    quartic.add_argument('spec', help="'jet' or a sum of c*q^e / c*x^e terms")
    quartic.add_argument('--pipeline', choices=('fq', 'theta'), default='fq')
    quartic.set_defaults(handler=cmd_quartic)

    verify = sub.add_parser('verify', help="exact identity checks")
    verify.add_argument('which', choices=sorted(_VERIFIERS))
    verify.add_argument('--pipeline', choices=('fq', 'theta'), default='fq')
    verify.add_argument('--spec', '--f', '--theta', dest='spec', default='jet')
    verify.add_argument('--coframe', choices=('adapted', 'coordinate'), default='adapted',
                        help="coframe handed to the structure solver")
    verify.set_defaults(handler=cmd_verify)

    ode = sub.add_parser('ode', help="integrate the 7th- or 8th-order equation")
    ode.add_argument('--order', type=int, choices=(7, 8), required=True)
    start = ode.add_mutually_exclusive_group(required=True)
    start.add_argument('--monomial', help="exponent a of the exact solution x^a")
    start.add_argument('--init', help="comma separated initial derivatives")
    ode.add_argument('--from', dest='x_from', type=float, required=True)
    ode.add_argument('--to', dest='x_to', type=float, required=True)
    ode.add_argument('--h', type=float, default=1e-3)
    ode.add_argument('--convergence', action='store_true', help="report the step-halving ratio")
    ode.add_argument('--emit-csv', dest='emit_csv', help="write the trajectory to this CSV file")
    ode.set_defaults(handler=cmd_ode)

    bracket = sub.add_parser('bracket', help="bracket frame genericity of f(q)")
    bracket.add_argument('spec')
    bracket.set_defaults(handler=cmd_bracket)
    return parser


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    """Entry point; returns the exit status"""
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    if args.command == 'ode' and args.monomial is not None:
        try:
            Fraction(args.monomial)
        except ValueError:
            parser.error("invalid monomial exponent {!r}".format(args.monomial))
    try:
        report, status = args.handler(args)
    except SpecSyntaxError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (NotImplementedError, DegenerateDistribution) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(report.to_text(args.timings) if args.text else report.to_json(args.timings))
    return status
