"""
pycartan twistor tests
"""
from fractions import Fraction

import pytest
from pytest import approx, raises


def _theta(*terms):
    from pycartan.twistor import HeavenlySpec

    return HeavenlySpec.explicit(terms)


def test_heavenly_spec():
    "Θ tables follow the chart"
    from pycartan.twistor import GOURSAT_CHART, PLEBANSKI_CHART, HeavenlySpec, HeavenlyMode

    spec = HeavenlySpec.symbolic()
    assert spec.mode is HeavenlyMode.Jet
    assert spec.variable(GOURSAT_CHART) == 'x5'
    assert spec.variable(PLEBANSKI_CHART) == 'x'
    assert str(spec.jet(spec.table(GOURSAT_CHART), 4)) == 'Theta4'

    explicit = _theta((1, 5), (2, 5), (1, Fraction(5, 2)))
    assert explicit.terms == ((3, 5), (1, Fraction(5, 2)))
    assert explicit.root_degree == 2
    quintic = _theta((1, 5))
    table = quintic.table(GOURSAT_CHART)
    assert quintic.jet(table, 4) == 120 * table.coordinate('x5')
    assert not quintic.jet(table, 6)

    with raises(NotImplementedError):
        HeavenlySpec.four_variable().table(GOURSAT_CHART)
    with raises(NotImplementedError):
        HeavenlySpec.four_variable().jet(HeavenlySpec.four_variable().table(PLEBANSKI_CHART), 2)
    with raises(ValueError):
        spec4 = HeavenlySpec.four_variable()
        spec4.derivative(spec4.table(PLEBANSKI_CHART), (1, 1))


def test_plebanski_flat():
    "Θ = 0 leaves the flat split metric"
    from pycartan.twistor import plebanski_metric

    metric = plebanski_metric(_theta()).metric
    assert metric.component('x', 'w') == 1
    assert metric.component('y', 'z') == 1
    assert not metric.component('z', 'z')
    assert not metric.component('w', 'w')
    assert not metric.component('w', 'z')


def test_plebanski_quadratic():
    "Θ = x^2/2 bends the zz component"
    from pycartan.twistor import pairing_holds, plebanski_metric

    spec = _theta((Fraction(1, 2), 2))
    metric = plebanski_metric(spec).metric
    assert metric.component('z', 'z') == -2
    assert not metric.component('w', 'w')
    assert pairing_holds(spec)


def test_pairing():
    "The null coframe reproduces the heavenly metric"
    from pycartan.twistor import HeavenlySpec, pairing_holds

    assert pairing_holds(HeavenlySpec.four_variable())
    assert pairing_holds(HeavenlySpec.symbolic())
    assert pairing_holds(_theta((1, 5), (-3, 2)))


def test_directional_derivative():
    "(∂x + ξ∂y)^2 Θ"
    from pycartan.twistor import TWISTOR_CHART, HeavenlySpec, directional_derivative

    spec = HeavenlySpec.four_variable()
    table = spec.table(TWISTOR_CHART)
    xi = table.coordinate('xi')
    expected = (table.jet('Theta', 2, 0, 0, 0) + 2 * xi * table.jet('Theta', 1, 1, 0, 0)
                + xi ** 2 * table.jet('Theta', 0, 2, 0, 0))
    assert directional_derivative(spec, table, 2) == expected
    assert directional_derivative(spec, table, 0) == table.jet('Theta', 0, 0, 0, 0)


def test_twistor_forms():
    "Twistor forms of Θ = 0 and of Θ(x)"
    from pycartan.exterior import differential
    from pycartan.twistor import HeavenlySpec, twistor_forms

    w1, w2, w3 = twistor_forms(_theta())
    table = w1.table
    xi = table.coordinate('xi')
    assert w1 == differential(table, 'xi')
    assert w2 == differential(table, 'w') + differential(table, 'z') * xi
    assert w3 == differential(table, 'y') - differential(table, 'x') * xi

    w1, _, w3 = twistor_forms(HeavenlySpec.symbolic())
    table = w1.table
    assert w1.coefficient('z') == -table.jet('Theta', 3)
    assert w3.coefficient('z') == -table.jet('Theta', 2)


def test_goursat_change():
    "Twistor and Goursat forms differ by a unimodular transition"
    from pycartan.twistor import GOURSAT_CHART, HeavenlySpec, goursat_change

    for spec in (HeavenlySpec.symbolic(), _theta(), _theta((1, 5))):
        change = goursat_change(spec)
        table = spec.table(GOURSAT_CHART)
        x5 = table.coordinate('x5')
        assert change.transition == [[0, -1, 0], [1, 0, 0], [0, -x5, 1]]
        assert change.determinant == 1

    with raises(NotImplementedError):
        goursat_change(HeavenlySpec.four_variable())


def test_dictionary():
    "q = -Θ''' and f = Θ'' - x5 Θ'''"
    from pycartan.twistor import (GOURSAT_CHART, HeavenlySpec, dictionary, dictionary_slope,
                                  jet_transform)

    spec = HeavenlySpec.symbolic()
    table = spec.table(GOURSAT_CHART)
    x5 = table.coordinate('x5')
    t2, t3 = table.jet('Theta', 2), table.jet('Theta', 3)
    entry = dictionary(spec)
    assert entry.q == -t3
    assert entry.f == t2 - x5 * t3
    assert dictionary_slope(spec) == x5
    assert dictionary_slope(spec) == jet_transform(1).derivative(1)

    explicit = _theta((1, 5))
    assert dictionary_slope(explicit) == explicit.table(GOURSAT_CHART).coordinate('x5')


def test_adapted_coframe():
    "Adapted coframe of Θ = x5^4"
    from pycartan.exterior import differential
    from pycartan.twistor import HeavenlySpec, goursat_forms, adapted_coframe_theta

    spec = _theta((1, 4))
    c = adapted_coframe_theta(spec)
    table = c.table
    x5 = table.coordinate('x5')
    w1, w2, w3, w4, w5 = goursat_forms(spec)
    assert c.forms[4] == differential(table, 'x5') * 24
    assert c.forms[1] == (w2 * x5 - w3) * 24
    assert c.forms[0] + c.forms[1] == w1

    c = adapted_coframe_theta(HeavenlySpec.symbolic())
    assert c.forms[0] + c.forms[1] == goursat_forms(HeavenlySpec.symbolic())[0]


def test_degenerate():
    "Θ'''' must not vanish"
    from pycartan.errors import DegenerateDistribution
    from pycartan.twistor import adapted_coframe_theta, quartic_theta

    with raises(DegenerateDistribution):
        adapted_coframe_theta(_theta((1, 3)))
    with raises(DegenerateDistribution):
        quartic_theta(_theta((1, 2), (1, 1)))


def test_alpha5():
    "α5 on monomials"
    from pycartan.twistor import alpha5, alpha5_of

    assert not alpha5_of(_theta((1, 4)))
    assert not alpha5_of(_theta((1, Fraction(5, 2))))
    assert alpha5_of(_theta((1, 5))) == -175 * 120 ** 4
    assert alpha5(1, 1, 0, 0, 0) == -175
    assert alpha5(Fraction(1), 0, 0, 0, Fraction(1, 10)) == 1


def test_quartic_theta():
    "Quartic of the Goursat form on monomials"
    from pycartan.twistor import quartic_theta

    assert quartic_theta(_theta((1, 4))).is_zero()
    quartic = quartic_theta(_theta((1, 5)))
    assert not any((quartic.a1, quartic.a2, quartic.a3, quartic.a4))
    assert str(quartic.a5) == '3024000/x5'


@pytest.mark.slow
def test_quartic_theta_fractional():
    "Θ = x5^(5/2) is flat"
    from pycartan.twistor import quartic_theta

    assert quartic_theta(_theta((1, Fraction(5, 2)))).is_zero()


@pytest.mark.slow
def test_quartic_theta_symbolic():
    "A5 of a formal Θ is proportional to α5"
    from pycartan.twistor import GOURSAT_CHART, HeavenlySpec, alpha5_of, quartic_theta

    spec = HeavenlySpec.symbolic()
    quartic = quartic_theta(spec)
    assert not any((quartic.a1, quartic.a2, quartic.a3, quartic.a4))
    t4 = spec.jet(spec.table(GOURSAT_CHART), 4)
    assert quartic.a5 * 100 * t4 == -alpha5_of(spec)


def test_jet_transform():
    "Low orders of the jet transform"
    from pycartan.errors import JetOrderOverflow, MissingBinding
    from pycartan.twistor import jet_transform

    table = jet_transform(4)
    s = table.table
    x5 = s.coordinate('x5')
    t4, t5, t6 = (s.jet('Theta', k) for k in (4, 5, 6))
    assert table.order == 4
    assert table.derivative(1) == x5
    assert table.derivative(2) == -1 / t4
    assert table.derivative(3) == -t5 / t4 ** 3
    assert table.derivative(4) == t6 / t4 ** 4 - 3 * t5 ** 2 / t4 ** 5
    with raises(MissingBinding):
        table.derivative(5)
    with raises(MissingBinding):
        table.derivative(0)
    with raises(JetOrderOverflow):
        jet_transform(7)
    with raises(ValueError):
        jet_transform(0)


def test_verify_proposition():
    "a5 of the transformed jets is -α5/Θ''''^12"
    from pycartan.errors import MissingBinding
    from pycartan.twistor import jet_transform, verify_proposition

    assert not verify_proposition(jet_transform(6))
    with raises(MissingBinding):
        verify_proposition(jet_transform(5))


def test_proposition_numeric():
    "Both sides agree in floating point on Θ = x^(7/2)"
    from pycartan.dist235 import a5_expression, falling_factorial
    from pycartan.symcore import evaluate_numeric, jet
    from pycartan.twistor import alpha5, jet_transform

    x = 1.3
    a = Fraction(7, 2)
    thetas = {k: float(falling_factorial(a, k)) * x ** float(a - k) for k in range(4, 9)}
    point = {jet('Theta', k): v for k, v in thetas.items()}
    point['x5'] = x
    table = jet_transform(6)
    lhs = a5_expression(*(evaluate_numeric(table.derivative(p), point) for p in range(2, 7)))
    rhs = -alpha5(*(thetas[k] for k in range(4, 9))) / thetas[4] ** 12
    assert lhs == approx(rhs, rel=1e-10)
