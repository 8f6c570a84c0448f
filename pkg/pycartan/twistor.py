"""Heavenly metrics, their twistor distributions and the Θ-form of the quartic

Three charts are involved:

* :data:`PLEBANSKI_CHART` ``(x, y, z, w)`` carries the metric
  ``dw dx + dz dy - Θxx dz² - Θyy dw² + 2Θxy dw dz``
* :data:`TWISTOR_CHART` ``(x, y, z, w, xi)`` carries the forms ``ω̃1, ω̃2, ω̃3``
* :data:`GOURSAT_CHART` ``(x1, …, x5)`` carries the Goursat normal form,
  where ``Θ`` depends on ``x5`` only

The Goursat coordinates are ``(x1, x2, x3, x4, x5) = (z, w, -ξ, y - ξx, x)``.
Reading the Goursat forms as a Monge system gives ``q = -Θ'''`` and
``f = Θ'' - x5 Θ'''``.
"""
import enum
import functools
import logging
import math
import typing
from fractions import Fraction

from . import linalg
from .curvature import CartanQuartic, quartic_of_coframe
from .dist235 import a5_expression, falling_factorial
from .errors import (ChangeOfChartFailure, DegenerateDistribution, MissingBinding,
                     PropositionMismatch)
from .exterior import (Coframe, DifferentialForm, SymmetricTensor2, differential,
                       express_in_coframe, metric_from_null_pairing, zero_form)
from .symcore import (Chart, JetFamily, RationalFunction, SymbolTable, coordinate,
                      partial_derivative, substitute, symbol_table)


logger = logging.getLogger(__name__)

PLEBANSKI_CHART = Chart('plebanski', ('x', 'y', 'z', 'w'))
TWISTOR_CHART = Chart('twistor', ('x', 'y', 'z', 'w', 'xi'))
GOURSAT_CHART = Chart('goursat', ('x1', 'x2', 'x3', 'x4', 'x5'))

THETA = 'Theta'
FOUR_VARIABLE_ORDER = 4
"""Jet order registered for a Θ of four variables"""


class HeavenlyMode(str, enum.Enum):
    """How ``Θ`` is given"""
    Jet = 'jet'
    Explicit = 'explicit'
    Jet4 = 'jet4'


class HeavenlySpec(typing.NamedTuple):
    """The potential ``Θ``

    In the one-variable modes ``Θ`` depends on ``x`` (``x5`` on the Goursat
    chart); ``terms`` lists the monomials ``c*x^e`` of an explicit ``Θ``.
    """
    mode: HeavenlyMode = HeavenlyMode.Jet
    terms: typing.Tuple[typing.Tuple[Fraction, Fraction], ...] = ()
    order: int = 8

    @classmethod
    def symbolic(cls, order: int = 8) -> 'HeavenlySpec':
        """Formal ``Θ(x)`` with jets up to ``order``"""
        return cls(HeavenlyMode.Jet, (), order)

    @classmethod
    def four_variable(cls) -> 'HeavenlySpec':
        """Formal ``Θ(x, y, z, w)``"""
        return cls(HeavenlyMode.Jet4, (), FOUR_VARIABLE_ORDER)

    @classmethod
    def explicit(cls, terms: typing.Iterable[typing.Tuple[typing.Any, typing.Any]]) -> 'HeavenlySpec':
        """Sum of ``c*x^e``; like exponents are merged and zero terms dropped"""
        merged: typing.Dict[Fraction, Fraction] = {}
        for c, e in terms:
            e = Fraction(e)
            merged[e] = merged.get(e, Fraction(0)) + Fraction(c)
        return cls(HeavenlyMode.Explicit,
                   tuple(sorted(((c, e) for e, c in merged.items() if c),
                                key=lambda t: t[1], reverse=True)))

    @property
    def root_degree(self) -> int:
        """Common denominator of the exponents"""
        return functools.reduce(lambda a, b: a * b // math.gcd(a, b),
                                (e.denominator for _, e in self.terms), 1)

    def variable(self, chart: Chart) -> str:
        """Coordinate a one-variable ``Θ`` depends on"""
        return 'x5' if chart == GOURSAT_CHART else 'x'

    def table(self, chart: Chart) -> SymbolTable:
        """Scalar table for ``chart``"""
        if self.mode is HeavenlyMode.Jet4:
            if chart == GOURSAT_CHART:
                raise NotImplementedError(
                    "A four-variable Θ has no Goursat chart representation")
            return symbol_table(chart, (JetFamily(THETA, ('x', 'y', 'z', 'w'), self.order),))
        var = self.variable(chart)
        if self.mode is HeavenlyMode.Jet:
            return symbol_table(chart, (JetFamily(THETA, (var,), self.order),))
        d = self.root_degree
        return symbol_table(chart, (), ((var, d),) if d > 1 else ())

    def derivative(self, table: SymbolTable, index: typing.Sequence[int]) -> RationalFunction:
        """``∂^index Θ``; ``index`` runs over ``(x, y, z, w)`` or over the one variable"""
        index = tuple(index)
        if self.mode is HeavenlyMode.Jet4:
            if len(index) != 4:
                raise ValueError("A four-variable Θ needs a 4-index")
            return table.jet(THETA, *index)
        if any(index[1:]):
            return table.zero
        k = index[0]
        if self.mode is HeavenlyMode.Jet:
            return table.jet(THETA, k)
        d = self.root_degree
        u = table.generator(coordinate(self.variable(table.chart)))
        acc = table.zero
        for c, e in self.terms:
            coeff = c * falling_factorial(e, k)
            if coeff:
                acc = acc + (u ** int((e - k) * d)) * coeff
        return acc

    def jet(self, table: SymbolTable, k: int) -> RationalFunction:
        """``Θ^(k)`` of a one-variable ``Θ``"""
        if self.mode is HeavenlyMode.Jet4:
            raise NotImplementedError("Θ^(k) needs a one-variable Θ")
        return self.derivative(table, (k,))


def _xy(spec: HeavenlySpec, table: SymbolTable, nx: int, ny: int) -> RationalFunction:
    return spec.derivative(table, (nx, ny, 0, 0) if spec.mode is HeavenlyMode.Jet4 else (nx, ny))


class Plebanski(typing.NamedTuple):
    """Heavenly metric and a null coframe for it"""
    metric: SymmetricTensor2
    null_coframe: typing.Tuple[DifferentialForm, ...]
    """``τ¹ … τ⁴``"""


def _quadratic_form(table: SymbolTable,
                    terms: typing.Sequence[typing.Tuple[str, str, RationalFunction]]) -> SymmetricTensor2:
    """``Σ c da db`` with ``da db = da⊗db + db⊗da``"""
    coords = table.chart.coordinates
    comps = [[table.zero] * len(coords) for _ in coords]
    for a, b, c in terms:
        i, j = coords.index(a), coords.index(b)
        comps[i][j] = comps[i][j] + c
        comps[j][i] = comps[j][i] + c
    return SymmetricTensor2(table, comps)


def plebanski_metric(spec: HeavenlySpec) -> Plebanski:
    """Metric on :data:`PLEBANSKI_CHART` and its null coframe"""
    table = spec.table(PLEBANSKI_CHART)
    txx, txy, tyy = _xy(spec, table, 2, 0), _xy(spec, table, 1, 1), _xy(spec, table, 0, 2)
    d = functools.partial(differential, table)
    metric = _quadratic_form(table, [('w', 'x', table.one), ('z', 'y', table.one),
                                     ('z', 'z', -txx), ('w', 'w', -tyy), ('w', 'z', txy * 2)])
    taus = (d('x') - d('w') * tyy + d('z') * txy,
            d('w'),
            d('y') - d('z') * txx + d('w') * txy,
            d('z'))
    return Plebanski(metric, taus)


def pairing_holds(spec: HeavenlySpec) -> bool:
    """True when the null coframe reproduces the heavenly metric"""
    pleb = plebanski_metric(spec)
    return metric_from_null_pairing(*pleb.null_coframe) == pleb.metric


def directional_derivative(spec: HeavenlySpec, table: SymbolTable, n: int) -> RationalFunction:
    """``(∂x + ξ∂y)^n Θ`` expanded binomially"""
    xi = table.coordinate('xi')
    acc = table.zero
    for k in range(n + 1):
        term = _xy(spec, table, n - k, k)
        if term:
            acc = acc + term * xi ** k * math.comb(n, k)
    return acc


def twistor_forms(spec: HeavenlySpec) -> typing.Tuple[DifferentialForm, ...]:
    """``(ω̃1, ω̃2, ω̃3)`` on :data:`TWISTOR_CHART`"""
    table = spec.table(TWISTOR_CHART)
    d = functools.partial(differential, table)
    xi = table.coordinate('xi')
    return (d('xi') - d('z') * directional_derivative(spec, table, 3),
            d('w') + d('z') * xi,
            d('y') - d('x') * xi - d('z') * directional_derivative(spec, table, 2))


def goursat_forms(spec: HeavenlySpec) -> typing.Tuple[DifferentialForm, ...]:
    """``(ω1, …, ω5)`` of the Goursat normal form"""
    table = spec.table(GOURSAT_CHART)
    d = functools.partial(differential, table)
    x3, x5 = table.coordinate('x3'), table.coordinate('x5')
    t2, t3 = spec.jet(table, 2), spec.jet(table, 3)
    return (d('x2') - d('x1') * x3,
            d('x3') + d('x1') * t3,
            d('x4') - d('x1') * (t2 - x5 * t3),
            d('x1'),
            d('x5'))


def pullback_to_goursat(form: DifferentialForm, target: SymbolTable) -> DifferentialForm:
    """Rewrite a twistor 1-form in the Goursat coordinates"""
    x1, x2, x3, x4, x5 = (target.coordinate(n) for n in GOURSAT_CHART.coordinates)
    bindings = {'x': x5, 'y': x4 - x3 * x5, 'z': x1, 'w': x2, 'xi': -x3}
    d = functools.partial(differential, target)
    images = {'x': d('x5'), 'y': d('x4') - d('x3') * x5 - d('x5') * x3,
              'z': d('x1'), 'w': d('x2'), 'xi': -d('x3')}
    coords = form.table.chart.coordinates
    acc = zero_form(target, 1)
    for (mu,), coeff in form.components.items():
        acc = acc + images[coords[mu]] * substitute(coeff, bindings, target)
    return acc


class GoursatChange(typing.NamedTuple):
    """Certificate that the twistor and Goursat forms share an annihilator"""
    forms: typing.Tuple[DifferentialForm, ...]
    """``(ω1, …, ω5)``"""
    pulled: typing.Tuple[DifferentialForm, ...]
    """``ω̃1, ω̃2, ω̃3`` in Goursat coordinates"""
    transition: typing.List[typing.List[RationalFunction]]
    """``ω̃_i = Σ_j transition[i][j] ω_j``"""
    determinant: RationalFunction


def goursat_change(spec: HeavenlySpec) -> GoursatChange:
    """Match the twistor forms with the Goursat forms

    :raises ChangeOfChartFailure: if some ``ω̃_i`` leaves ``Span(ω1, ω2, ω3)``
        or the transition matrix is singular
    """
    if spec.mode is HeavenlyMode.Jet4:
        raise NotImplementedError("The Goursat change needs a Θ of one variable")
    table = spec.table(GOURSAT_CHART)
    forms = goursat_forms(spec)
    frame = Coframe(forms)
    pulled = tuple(pullback_to_goursat(f, table) for f in twistor_forms(spec))
    transition = []
    for i, form in enumerate(pulled):
        comps = express_in_coframe(form, frame)
        if any(key[0] >= 3 for key in comps):
            raise ChangeOfChartFailure("ω̃{} is not a combination of ω1, ω2, ω3".format(i + 1))
        transition.append([comps.get((j,), table.zero) for j in range(3)])
    det = linalg.determinant(transition)
    if not det:
        raise ChangeOfChartFailure("Transition matrix is singular")
    logger.debug("Goursat transition determinant: %s", det)
    return GoursatChange(forms, pulled, transition, det)


class Dictionary(typing.NamedTuple):
    """``q`` and ``f`` read off the Goursat forms"""
    q: RationalFunction
    f: RationalFunction


def dictionary(spec: HeavenlySpec) -> Dictionary:
    """``q = -Θ'''`` and ``f = Θ'' - x5 Θ'''`` from the ``dx1`` coefficients of ``ω2, ω3``"""
    _, w2, w3, _, _ = goursat_forms(spec)
    return Dictionary(-w2.coefficient('x1'), -w3.coefficient('x1'))


def dictionary_slope(spec: HeavenlySpec) -> RationalFunction:
    """``df/dq`` along ``x5``; equals ``x5``"""
    entry = dictionary(spec)
    return partial_derivative(entry.f, 'x5') / partial_derivative(entry.q, 'x5')


def adapted_coframe_theta(spec: HeavenlySpec) -> Coframe:
    """Adapted coframe of the Goursat form

    :raises DegenerateDistribution: if ``Θ''''`` vanishes identically
    """
    table = spec.table(GOURSAT_CHART)
    t4, t5, t6 = (spec.jet(table, k) for k in (4, 5, 6))
    if not t4:
        raise DegenerateDistribution("Θ'''' vanishes identically")
    x5 = table.coordinate('x5')
    w1, w2, w3, w4, w5 = goursat_forms(spec)
    core = w2 * x5 - w3
    return Coframe([
        w1 - core * t4,
        core * t4,
        w2 * (-(t4 * 4 + x5 * t5) / (t4 * 4)) + w3 * (t5 / (t4 * 4)),
        core * (-(t5 ** 2 * 5 - t4 * t6 * 4) / (t4 ** 3 * 40)) + w4 - w5 * t4,
        w5 * t4,
    ])


def alpha5(t4: typing.Any, t5: typing.Any, t6: typing.Any, t7: typing.Any, t8: typing.Any) -> typing.Any:
    """``10 Θ4³Θ8 - 70 Θ4²Θ5Θ7 - 49 Θ4²Θ6² + 280 Θ4Θ5²Θ6 - 175 Θ5⁴``"""
    return (t4 ** 3 * t8 * 10 - t4 ** 2 * t5 * t7 * 70 - t4 ** 2 * t6 ** 2 * 49
            + t4 * t5 ** 2 * t6 * 280 - t5 ** 4 * 175)


def alpha5_of(spec: HeavenlySpec) -> RationalFunction:
    """``α5`` on the Goursat jets of ``spec``"""
    table = spec.table(GOURSAT_CHART)
    return typing.cast(RationalFunction, alpha5(*(spec.jet(table, k) for k in range(4, 9))))


def quartic_theta(spec: HeavenlySpec) -> CartanQuartic:
    """Cartan quartic of the Goursat form

    :raises DegenerateDistribution: if ``Θ''''`` vanishes identically
    """
    logger.debug("Quartic pipeline for %s", spec)
    return quartic_of_coframe(adapted_coframe_theta(spec))


class JetTransformTable(typing.NamedTuple):
    """``f', f'', …`` in terms of the jets of ``Θ(x5)``"""
    table: SymbolTable
    entries: typing.Tuple[RationalFunction, ...]
    """``entries[p - 1]`` is ``f^(p)``"""

    @property
    def order(self) -> int:
        """Highest derivative in the table"""
        return len(self.entries)

    def derivative(self, p: int) -> RationalFunction:
        """``f^(p)``"""
        if not 1 <= p <= self.order:
            raise MissingBinding("f{} is not in a table of order {}".format(p, self.order))
        return self.entries[p - 1]


def jet_transform(order: int) -> JetTransformTable:
    """``f' = x5`` and ``f^(p) = -(1/Θ'''') d/dx5 f^(p-1)``

    :raises JetOrderOverflow: when the recurrence outgrows the Θ jets
    """
    if order < 1:
        raise ValueError("Order must be at least 1")
    spec = HeavenlySpec.symbolic()
    table = spec.table(GOURSAT_CHART)
    t4 = spec.jet(table, 4)
    entries = [table.coordinate('x5')]
    for _ in range(order - 1):
        entries.append(-partial_derivative(entries[-1], 'x5') / t4)
    return JetTransformTable(table, tuple(entries))


def verify_proposition(table: JetTransformTable) -> RationalFunction:
    """``a5(f'' … f^(6)) + α5 / Θ''''^12``, which must vanish

    :raises MissingBinding: for a table of order below 6
    :raises PropositionMismatch: if the difference is nonzero
    """
    f2, f3, f4, f5, f6 = (table.derivative(p) for p in range(2, 7))
    spec = HeavenlySpec.symbolic()
    t4 = spec.jet(table.table, 4)
    expected = -alpha5(*(spec.jet(table.table, k) for k in range(4, 9))) / t4 ** 12
    diff = typing.cast(RationalFunction, a5_expression(f2, f3, f4, f5, f6)) - expected
    if diff:
        raise PropositionMismatch("a5 and -α5/Θ''''^12 differ by {}".format(diff))
    logger.info("Jet transform identity holds")
    return diff
