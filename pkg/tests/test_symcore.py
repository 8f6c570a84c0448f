"""
pycartan symcore tests
"""
from fractions import Fraction

from hypothesis import given, settings, strategies as st
from pytest import approx, raises


def _monge_table(order=6):
    from pycartan.symcore import Chart, JetFamily, symbol_table

    chart = Chart('monge', ('x', 'y', 'p', 'q', 'z'))
    return symbol_table(chart, (JetFamily('f', ('q',), order),))


def test_symbols():
    "Symbols compare by kind, name and index"
    from pycartan.symcore import SymbolKind, coordinate, jet

    assert jet('f', 2) == jet('f', 2)
    assert jet('f', 2) != jet('f', 3)
    assert jet('f', 2).order == 2
    assert jet('Theta', 1, 0, 2, 0).order == 3
    assert coordinate('q').kind is SymbolKind.Coordinate
    assert coordinate('q') != jet('q')
    with raises(ValueError):
        jet('f', -1)


def test_jet_family():
    "Jet families enumerate multi-indices by total order"
    from pycartan.symcore import JetFamily

    single = JetFamily('f', ('q',), 3)
    assert single.multi_indices() == [(0,), (1,), (2,), (3,)]
    assert single.display((2,)) == 'f2'
    assert single.display((0,)) == 'f'

    double = JetFamily('Theta', ('x', 'y'), 2)
    assert double.multi_indices() == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert double.display((1, 1)) == 'Theta_xy'


def test_normalize():
    "Normalization cancels gcd and fixes the sign"
    from pycartan.symcore import RationalFunction, normalize

    table = _monge_table()
    q = table.coordinate('q').numerator
    x = table.coordinate('x').numerator
    f2 = table.jet('f', 2).numerator
    one = table.one.numerator

    r = normalize(RationalFunction.from_polynomials(table, 2 * q ** 2 + 2 * q, 2 * q))
    assert str(r) == 'q + 1'
    assert r.denominator == one

    r = normalize(RationalFunction.from_polynomials(table, -x, -one))
    assert str(r) == 'x'

    r = normalize(RationalFunction.from_polynomials(table, f2 * q - f2 * q, f2))
    assert not r
    assert r.denominator == one

    assert normalize(r) == r


def test_zero_denominator():
    "Zero denominators are rejected"
    from pycartan.errors import DivisionByZero
    from pycartan.symcore import RationalFunction

    table = _monge_table()
    with raises(DivisionByZero):
        RationalFunction.from_polynomials(table, table.one.numerator, table.zero.numerator)
    with raises(DivisionByZero):
        table.coordinate('q') / table.zero
    with raises(ZeroDivisionError):
        table.zero ** -1


def test_arithmetic():
    "Scalars mix with ints and fractions"
    table = _monge_table()
    q = table.coordinate('q')
    assert q + 1 == 1 + q
    assert (q * Fraction(1, 2)) * 2 == q
    assert 1 - q == -(q - 1)
    assert (q ** 2) / q == q
    assert q ** -2 * q ** 2 == 1
    assert (1 / q) * q == table.one
    assert table.constant(Fraction(3, 4)).as_fraction() == Fraction(3, 4)
    assert table.constant(Fraction(3, 4)).is_constant()
    assert not q.is_constant()
    with raises(ValueError):
        q.as_fraction()


def test_printer():
    "Canonical printing"
    table = _monge_table()
    q = table.coordinate('q')
    assert str(table.constant(-56) / (q ** 4 * 25)) == '-56/(25*q^4)'
    assert str(q / 2) == 'q/2'
    assert str(table.zero) == '0'
    assert str(table.jet('f', 2)) == 'f2'


def test_chart_mismatch():
    "Scalars of different tables never combine"
    from pycartan.errors import ChartMismatch
    from pycartan.symcore import Chart, symbol_table

    other = symbol_table(Chart('goursat', ('x1', 'x2', 'x3', 'x4', 'x5')))
    with raises(ChartMismatch):
        _monge_table().coordinate('q') + other.coordinate('x1')
    assert _monge_table().one != other.one


def test_partial_derivative():
    "Product rule with the jet chain rule"
    from pycartan.symcore import coordinate, partial_derivative

    table = _monge_table()
    q, x = table.coordinate('q'), table.coordinate('x')
    f1, f2 = table.jet('f', 1), table.jet('f', 2)
    assert partial_derivative(q * f1, 'q') == f1 + q * f2
    assert str(partial_derivative(q * f1, 'q')) == 'q*f2 + f1'
    assert partial_derivative(q * f1, coordinate('q')) == f1 + q * f2
    assert not partial_derivative(f1, 'x')
    assert partial_derivative(x / q, 'q') == -x / q ** 2


def test_derivative_errors():
    "Unknown coordinates and exhausted jets"
    from pycartan.errors import ChartMismatch, JetOrderOverflow, MissingBinding
    from pycartan.symcore import jet, partial_derivative

    table = _monge_table(order=2)
    with raises(JetOrderOverflow):
        partial_derivative(table.jet('f', 2), 'q')
    with raises(JetOrderOverflow):
        table.jet('f', 3)
    with raises(MissingBinding):
        table.jet('g', 1)
    with raises(ChartMismatch):
        partial_derivative(table.coordinate('q'), 'x5')
    with raises(ValueError):
        partial_derivative(table.coordinate('q'), jet('f', 1))


def test_jet_order_cap(monkeypatch):
    "Jet families beyond the cap are rejected"
    from pycartan.errors import JetOrderOverflow
    from pycartan.symcore import Chart, JetFamily, SymbolTable

    chart = Chart('line', ('x5',))
    with raises(JetOrderOverflow):
        SymbolTable(chart, (JetFamily('Theta', ('x5',), 13),))
    monkeypatch.setenv('PYCARTAN_JET_ORDER_CAP', '20')
    table = SymbolTable(chart, (JetFamily('Theta', ('x5',), 13),))
    assert str(table.jet('Theta', 13)) == 'Theta13'


def test_four_variable_jets():
    "Multi-index jets raise the matching slot"
    from pycartan.symcore import Chart, JetFamily, partial_derivative, symbol_table

    chart = Chart('plebanski', ('x', 'y', 'z', 'w'))
    table = symbol_table(chart, (JetFamily('Theta', ('x', 'y', 'z', 'w'), 3),))
    txy = table.jet('Theta', 1, 1, 0, 0)
    assert partial_derivative(txy, 'y') == table.jet('Theta', 1, 2, 0, 0)
    assert partial_derivative(txy, 'w') == table.jet('Theta', 1, 1, 0, 1)
    assert str(txy) == 'Theta_xy'


def test_rooted_coordinate():
    "Rational powers through a root generator"
    from pycartan.symcore import Chart, coordinate, partial_derivative, symbol_table

    chart = Chart('monge', ('x', 'y', 'p', 'q', 'z'))
    table = symbol_table(chart, (), (('q', 2),))
    u = table.generator(coordinate('q'))
    assert str(u) == 'q^(1/2)'
    assert str(table.coordinate('q')) == 'q'
    assert partial_derivative(u, 'q') == 1 / (u * 2)
    assert str(partial_derivative(u, 'q')) == '1/(2*q^(1/2))'
    assert partial_derivative(table.coordinate('q'), 'q') == 1


def test_substitute():
    "Simultaneous substitution"
    from pycartan.errors import DivisionByZero, MissingBinding
    from pycartan.symcore import Chart, jet, substitute, symbol_table

    table = _monge_table()
    q, x = table.coordinate('q'), table.coordinate('x')
    f1 = table.jet('f', 1)
    assert substitute(q * f1, {'q': x}) == x * f1
    assert substitute(q * x, {'q': q, 'x': x}) == q * x
    assert substitute(f1, {}) == f1
    assert substitute(f1 + q, {jet('f', 1): q}) == q * 2
    with raises(DivisionByZero):
        substitute(1 / q, {'q': table.zero})

    plain = symbol_table(Chart('goursat', ('x1', 'x2', 'x3', 'x4', 'x5')))
    assert substitute(q ** 2, {'q': plain.coordinate('x5')}, plain) == plain.coordinate('x5') ** 2
    with raises(MissingBinding):
        substitute(q * x, {'q': plain.coordinate('x5')}, plain)


def test_substitute_recursive():
    "Values may not mention bound symbols"
    from pycartan.symcore import jet, substitute

    table = _monge_table()
    q, x = table.coordinate('q'), table.coordinate('x')
    f1 = table.jet('f', 1)
    with raises(ValueError):
        substitute(q * x, {'q': x, 'x': q})
    with raises(ValueError):
        substitute(q, {'q': q ** 2})
    with raises(ValueError):
        substitute(f1, {jet('f', 1): f1 + 1})
    assert substitute(q * f1, {'q': q, jet('f', 1): x}) == q * x


def test_evaluate_numeric():
    "Floating point evaluation"
    from pycartan.errors import MissingBinding, NearSingularEvaluation
    from pycartan.symcore import Chart, coordinate, evaluate_numeric, jet, symbol_table

    table = _monge_table()
    q, f2 = table.coordinate('q'), table.jet('f', 2)
    assert evaluate_numeric(q ** 2 + 1, {'q': 2.0}) == approx(5.0)
    assert evaluate_numeric(q / f2, {'q': 3.0, jet('f', 2): 2.0}) == approx(1.5)
    with raises(MissingBinding):
        evaluate_numeric(q * f2, {'q': 1.0})
    with raises(NearSingularEvaluation):
        evaluate_numeric(1 / q, {'q': 0.0})

    rooted = symbol_table(Chart('monge', ('x', 'y', 'p', 'q', 'z')), (), (('q', 2),))
    u = rooted.generator(coordinate('q'))
    assert evaluate_numeric(u, {'q': 9.0}) == approx(3.0)


_polys = st.lists(st.tuples(st.integers(-4, 4), st.integers(0, 2), st.integers(0, 2)), max_size=4)


def _build(table, terms):
    q, x = table.coordinate('q'), table.coordinate('x')
    acc = table.zero
    for c, a, b in terms:
        acc = acc + q ** a * x ** b * c
    return acc


@settings(max_examples=500, deadline=None)
@given(_polys, _polys, _polys)
def test_field_axioms(a, b, c):
    "Ring and field axioms on random scalars"
    table = _monge_table()
    a, b, c = _build(table, a), _build(table, b), _build(table, c)
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == table.zero
    if c:
        assert (a / c) * c == a
        assert (a + b) / c == a / c + b / c


@settings(max_examples=500, deadline=None)
@given(_polys, _polys, _polys, st.sampled_from(['q', 'x']))
def test_leibniz_rule(a, b, c, name):
    "∂(rs) = ∂r s + r ∂s on random quotients"
    from pycartan.symcore import partial_derivative

    table = _monge_table()
    a, b, c = _build(table, a), _build(table, b), _build(table, c)
    r = a / c if c else a
    lhs = partial_derivative(r * b, name)
    assert lhs == partial_derivative(r, name) * b + r * partial_derivative(b, name)


_theta_vars = ('x', 'y', 'z', 'w')
_theta_terms = st.lists(st.tuples(st.integers(-3, 3),
                                  st.sampled_from(_theta_vars + ('jet',)),
                                  st.tuples(*[st.integers(0, 1)] * 4),
                                  st.integers(1, 2)), min_size=1, max_size=4)


def _theta_table():
    from pycartan.symcore import Chart, JetFamily, symbol_table

    return symbol_table(Chart('plebanski', _theta_vars), (JetFamily('Theta', _theta_vars, 6),))


@settings(max_examples=500, deadline=None)
@given(_theta_terms, st.sampled_from(_theta_vars), st.sampled_from(_theta_vars))
def test_mixed_partials(terms, u, v):
    "Partials commute on four-variable jets"
    from pycartan.symcore import partial_derivative

    table = _theta_table()
    r = table.zero
    for c, base, index, e in terms:
        factor = table.jet('Theta', *index) if base == 'jet' else table.coordinate(base)
        r = r + factor ** e * c
    assert (partial_derivative(partial_derivative(r, u), v)
            == partial_derivative(partial_derivative(r, v), u))


_points = st.floats(0.5, 2.0)


@settings(max_examples=500, deadline=None)
@given(_polys, _polys, _polys, _points, _points)
def test_normalize_numeric(a, b, c, q, x):
    "Cancelling a common factor keeps numeric values"
    from hypothesis import assume
    from pycartan.symcore import RationalFunction, evaluate_numeric, normalize

    table = _monge_table()
    a, b, c = _build(table, a), _build(table, b), _build(table, c)
    assume(b and c)
    point = {'q': q, 'x': x}
    assume(abs(evaluate_numeric(b * c, point)) > 1e-3)
    raw = RationalFunction.from_polynomials(table, (a * c).numerator, (b * c).numerator)
    assert evaluate_numeric(normalize(raw), point) == approx(evaluate_numeric(raw, point),
                                                             rel=1e-12, abs=1e-9)
