"""Numeric layer: the 7th- and 8th-order ODEs of flat distributions

States hold ``(y, y', …, y^(6))`` for the 7th-order equation

    10 y3³ y7 - 70 y3² y4 y6 - 49 y3² y5² + 280 y3 y4² y5 - 175 y4⁴ = 0

and ``(Θ, Θ', …, Θ^(7))`` for the same equation shifted by one order.  The
equations are integrated by the classical 4th-order Runge-Kutta scheme with a
fixed step; a second pass at half the step gives a Richardson error estimate.
"""
import csv
import functools
import logging
import typing
from fractions import Fraction

import numpy as np

from . import config
from .dist235 import a5_terms, falling_factorial
from .errors import NotATransform, SingularThirdDerivative
from .symcore import evaluate_numeric, jet
from .twistor import THETA, alpha5, jet_transform


logger = logging.getLogger(__name__)

RICHARDSON_DIVISOR = 15.0
"""``2^4 - 1`` for a 4th-order method"""


class ODEState(typing.NamedTuple):
    """Point ``x`` and the derivatives ``(y, y', …)`` there"""
    x: float
    derivs: np.ndarray


RHS = typing.Callable[[ODEState], float]


def _top(lead: float, a: float, b: float, c: float) -> float:
    eps = config.current().guard_epsilon
    if abs(lead) < eps:
        raise SingularThirdDerivative(
            "Leading derivative {:.3e} is below the guard {:.1e}".format(lead, eps))
    return ((70 * lead ** 2 * a * c + 49 * lead ** 2 * b ** 2
             - 280 * lead * a ** 2 * b + 175 * a ** 4) / (10 * lead ** 3))


def rhs7(s: ODEState) -> float:
    """``y^(7)`` solved from the 7th-order equation

    :raises SingularThirdDerivative: if ``|y'''|`` is below the guard
    """
    d = s.derivs
    return _top(d[3], d[4], d[5], d[6])


def rhs8(s: ODEState) -> float:
    """``Θ^(8)`` solved from the 8th-order equation

    :raises SingularThirdDerivative: if ``|Θ''''|`` is below the guard
    """
    d = s.derivs
    return _top(d[4], d[5], d[6], d[7])


class Trajectory(typing.NamedTuple):
    """Solution samples on a uniform grid"""
    xs: np.ndarray
    values: np.ndarray
    """``values[i, k]`` is the ``k``-th derivative at ``xs[i]``"""
    h: float
    error_estimate: float
    """Richardson estimate ``max |Y_h - Y_h/2| / 15`` at the last common point"""
    singular: bool = False
    """True when the guard stopped the integration early"""
    message: str = ''
    method_order: int = 4

    @property
    def states(self) -> typing.List[ODEState]:
        """Samples as states"""
        return [ODEState(float(x), row) for x, row in zip(self.xs, self.values)]

    @property
    def final(self) -> ODEState:
        """Last sample"""
        return ODEState(float(self.xs[-1]), self.values[-1])

    def column(self, k: int) -> np.ndarray:
        """Samples of the ``k``-th derivative"""
        return typing.cast(np.ndarray, self.values[:, k])


def _field(rhs: RHS, x: float, y: np.ndarray) -> np.ndarray:
    out = np.empty_like(y)
    out[:-1] = y[1:]
    out[-1] = rhs(ODEState(x, y))
    return out


def _rk4_pass(rhs: RHS, init: ODEState, steps: int, h: float
              ) -> typing.Tuple[np.ndarray, np.ndarray, str]:
    xs = [init.x]
    ys = [np.asarray(init.derivs, dtype=float)]
    x, y = init.x, ys[0]
    message = ''
    for j in range(1, steps + 1):
        try:
            k1 = _field(rhs, x, y)
            k2 = _field(rhs, x + h / 2, y + h / 2 * k1)
            k3 = _field(rhs, x + h / 2, y + h / 2 * k2)
            k4 = _field(rhs, x + h, y + h * k3)
        except SingularThirdDerivative as exc:
            message = 'step {} at x = {}: {}'.format(j, x, exc)
            break
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        x = init.x + j * h
        xs.append(x)
        ys.append(y)
    return np.array(xs), np.array(ys), message


def _step_count(length: float, h: float) -> int:
    # rounding first keeps 1/0.001 at 1000 steps
    return max(1, int(np.ceil(round(length / h, 9))))


def integrate(rhs: RHS, init: ODEState, x_end: float, h: float) -> Trajectory:
    """Integrate from ``init`` to ``x_end`` with step ``h``

    The step is shrunk when ``x_end - init.x`` is not a multiple of
    ``h``.  A guard violation after the first step ends the trajectory early
    with :attr:`Trajectory.singular` set.

    :raises SingularThirdDerivative: if the guard fails at ``init``
    """
    if h <= 0:
        raise ValueError("Step must be positive")
    if x_end <= init.x:
        raise ValueError("x_end must lie beyond the initial point")
    rhs(init)
    steps = _step_count(x_end - init.x, h)
    step = (x_end - init.x) / steps
    xs, ys, message = _rk4_pass(rhs, init, steps, step)
    _, fine, _ = _rk4_pass(rhs, init, 2 * steps, step / 2)
    common = min(len(ys) - 1, (len(fine) - 1) // 2)
    estimate = float(np.max(np.abs(ys[common] - fine[2 * common]))) / RICHARDSON_DIVISOR
    if message:
        logger.warning("Integration stopped at %s", message)
    logger.debug("Integrated %d steps, error estimate %.3e", len(xs) - 1, estimate)
    return Trajectory(xs, ys, step, estimate, bool(message), message)


def monomial_state(a: typing.Any, x: float, count: int) -> ODEState:
    """Derivatives ``0 … count-1`` of ``x^a``"""
    a = Fraction(a)
    return ODEState(x, np.array([float(falling_factorial(a, k)) * x ** float(a - k)
                                 for k in range(count)]))


def sample_monomial(a: typing.Any, x0: float, x1: float, h: float, count: int = 8) -> Trajectory:
    """Exact samples of ``x^a`` on the grid a trajectory would use"""
    steps = _step_count(x1 - x0, h)
    xs = np.linspace(x0, x1, steps + 1)
    values = np.array([monomial_state(a, float(x), count).derivs for x in xs])
    return Trajectory(xs, values, (x1 - x0) / steps, 0.0)


def monomial_residual7(a: typing.Any) -> Fraction:
    """Exact ``Q(a)``: the 7th-order equation on ``x^a`` with ``x^(4a-12)`` removed"""
    a = Fraction(a)
    return typing.cast(Fraction, alpha5(*(falling_factorial(a, k) for k in range(3, 8))))


def monomial_residual8(a: typing.Any) -> Fraction:
    """Exact 8th-order analogue of :func:`monomial_residual7`"""
    a = Fraction(a)
    return typing.cast(Fraction, alpha5(*(falling_factorial(a, k) for k in range(4, 9))))


def convergence_ratio(a: typing.Any, x0: float, x1: float, h: float) -> float:
    """Endpoint error at ``h`` over the one at ``h/2`` for ``Θ = x^a``"""
    exact = float(x1) ** float(Fraction(a))
    init = monomial_state(a, x0, 8)
    errors = [abs(integrate(rhs8, init, x1, step).final.derivs[0] - exact)
              for step in (h, h / 2)]
    return float(errors[0]) / float(errors[1])


def _derivative(samples: np.ndarray, h: float) -> np.ndarray:
    """4th-order finite differences; one-sided 5-point stencils at the ends"""
    f = np.asarray(samples, dtype=float)
    n = len(f)
    if n < 5:
        raise ValueError("Need at least 5 samples")
    out = np.empty(n)
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    out[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    out[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return out


@functools.lru_cache(maxsize=None)
def _f_jets() -> typing.Tuple[typing.Any, ...]:
    table = jet_transform(6)
    return tuple(table.derivative(p) for p in range(2, 7))


class LegendreCheck(typing.NamedTuple):
    """Residuals of the parametric ``f`` built from a ``Θ`` trajectory"""
    q: np.ndarray
    f: np.ndarray
    slope_residual: float
    """``max |df/dq - x|``"""
    a5_residual: float
    """``max |a5| / Σ|terms of a5|`` over the grid, 0 where every term vanishes"""

    @property
    def max_residual(self) -> float:
        """Larger of the two residuals"""
        return max(self.slope_residual, self.a5_residual)


def parametric_legendre_check(traj: Trajectory) -> LegendreCheck:
    """Rebuild ``f(q)`` from ``q = -Θ'''`` and ``f = Θ'' - x Θ'''``

    ``Θ^(8)`` is taken from finite differences of the ``Θ^(7)`` samples.

    :raises NotATransform: if ``|Θ''''|`` drops below the guard or ``q`` is
        not strictly monotone
    """
    if traj.values.shape[1] < 8:
        raise ValueError("Need Θ up to its 7th derivative")
    eps = config.current().guard_epsilon
    xs = traj.xs
    theta = traj.values
    if np.any(np.abs(theta[:, 4]) < eps):
        raise NotATransform("Θ'''' drops below the guard")
    q = -theta[:, 3]
    f = theta[:, 2] - xs * theta[:, 3]
    dq = np.diff(q)
    if not (np.all(dq > 0) or np.all(dq < 0)):
        raise NotATransform("q = -Θ''' is not strictly monotone")

    slope = _derivative(f, traj.h) / _derivative(q, traj.h)
    slope_residual = float(np.max(np.abs(slope - xs)))

    theta8 = _derivative(theta[:, 7], traj.h)
    jets = _f_jets()
    worst = 0.0
    for i, x in enumerate(xs):
        point = {jet(THETA, k): float(theta[i, k]) for k in range(4, 8)}
        point[jet(THETA, 8)] = float(theta8[i])
        point['x5'] = float(x)
        terms = a5_terms(*(evaluate_numeric(e, point) for e in jets))
        scale = sum(abs(t) for t in terms)
        if scale:
            worst = max(worst, abs(sum(terms)) / scale)
    logger.info("Legendre check: slope %.3e, a5 %.3e", slope_residual, worst)
    return LegendreCheck(q, f, slope_residual, worst)


class LevelConsistency(typing.NamedTuple):
    """``y = Θ'`` integrated on its own against the ``Θ`` trajectory"""
    residual: float
    error_estimate: float
    consistent: bool


def ode_level_consistency(traj: Trajectory) -> LevelConsistency:
    """Integrate the 7th-order equation from ``y = Θ'`` and compare"""
    init = ODEState(float(traj.xs[0]), traj.values[0, 1:8])
    reduced = integrate(rhs7, init, float(traj.xs[-1]), traj.h)
    n = min(len(reduced.xs), len(traj.xs))
    residual = float(np.max(np.abs(reduced.values[:n, 0] - traj.values[:n, 1])))
    estimate = max(traj.error_estimate, reduced.error_estimate)
    bound = 10 * max(estimate, float(np.finfo(float).eps))
    return LevelConsistency(residual, estimate, residual <= bound)


def write_csv(traj: Trajectory, stream: typing.TextIO) -> None:
    """Write ``x`` and every derivative column as CSV"""
    writer = csv.writer(stream)
    writer.writerow(['x'] + ['d{}'.format(k) for k in range(traj.values.shape[1])])
    for x, row in zip(traj.xs, traj.values):
        writer.writerow([repr(float(x))] + [repr(float(v)) for v in row])
