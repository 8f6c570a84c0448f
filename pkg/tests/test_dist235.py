"""
pycartan dist235 tests
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from pytest import raises


def _spec(*terms):
    from pycartan.dist235 import MongeSpec

    return MongeSpec.explicit(terms)


def test_monge_spec():
    "Explicit specifications merge exponents and know their root"
    from pycartan.dist235 import MongeSpec

    spec = MongeSpec.explicit([(1, 2), (2, 2), (3, Fraction(1, 2)), (1, 0), (-1, 0)])
    assert spec.terms == ((3, 2), (3, Fraction(1, 2)))
    assert spec.root_degree == 2
    assert not spec.is_symbolic
    assert MongeSpec.symbolic().is_symbolic
    assert MongeSpec.explicit([]).terms == ()

    q = _spec((1, 3)).table.coordinate('q')
    assert _spec((1, 3)).jet(0) == q ** 3
    assert _spec((1, 3)).jet(2) == 6 * q
    assert not _spec((1, 3)).jet(4)
    assert _spec((1, -1)).jet(1) == -1 / q ** 2


def test_falling_factorial():
    "Falling factorials"
    from pycartan.dist235 import falling_factorial

    assert falling_factorial(Fraction(5), 3) == 60
    assert falling_factorial(Fraction(3), 4) == 0
    assert falling_factorial(Fraction(1, 2), 2) == Fraction(-1, 4)
    assert falling_factorial(Fraction(7), 0) == 1


def test_monge_coframe():
    "The Monge 1-forms"
    from pycartan.dist235 import monge_coframe
    from pycartan.exterior import differential

    spec = _spec((1, 2))
    table = spec.table
    q = table.coordinate('q')
    w1, w2, w3, w4, w5 = monge_coframe(spec)
    assert w3.coefficient('x') == -q ** 2
    assert w3.coefficient('z') == 1
    assert w2.coefficient('x') == -q
    assert w4 == differential(table, 'q')
    assert w5 == differential(table, 'x')


def test_bracket_frame():
    "Bracket-generated frame of f = q^2"
    from pycartan.dist235 import VectorField, bracket_frame, lie_bracket

    spec = _spec((1, 2))
    table = spec.table
    q = table.coordinate('q')
    frame = bracket_frame(spec)
    x1, x2, x3, x4, x5 = frame.fields
    assert x3 == VectorField(table, [0, 0, 1, 0, 2 * q])
    assert x2 == VectorField(table, [0, 0, 0, 0, 2])
    assert x1 == VectorField(table, [0, -1, 0, 0, 0])
    assert x4 == VectorField.basis(table, 'q')
    assert frame.determinant == -2
    assert frame.generic
    assert not lie_bracket(x4, x4)
    assert lie_bracket(x4, x5) == -lie_bracket(x5, x4)


def test_bracket_determinant():
    "The bracket determinant is -f''"
    from pycartan.dist235 import MongeSpec, bracket_frame

    spec = MongeSpec.symbolic()
    assert bracket_frame(spec).determinant == -spec.table.jet('f', 2)

    flat = bracket_frame(_spec((1, 1), (3, 0)))
    assert not flat.determinant
    assert not flat.generic


def test_adapted_coframe():
    "Adapted coframe of f = q^2"
    from pycartan.dist235 import monge_coframe, adapted_coframe_fq

    spec = _spec((1, 2))
    q = spec.table.coordinate('q')
    w1, w2, w3, w4, w5 = monge_coframe(spec)
    c = adapted_coframe_fq(spec)
    assert c.forms[0] == w1 - w2 * q + w3 * Fraction(1, 2)
    assert c.forms[1] == w2 * q - w3 * Fraction(1, 2)
    assert c.forms[2] == w2
    assert c.forms[3] == w4 - w5
    assert c.forms[4] == -w4
    assert c.forms[0] + c.forms[1] == w1


def test_degenerate():
    "Affine f has no adapted coframe"
    from pycartan.dist235 import adapted_coframe_fq, quartic_fq
    from pycartan.errors import DegenerateDistribution

    with raises(DegenerateDistribution):
        adapted_coframe_fq(_spec((1, 1)))
    with raises(DegenerateDistribution):
        quartic_fq(_spec())


@pytest.mark.parametrize('terms', [((1, 2),), ((1, 3),), ((1, 3), (1, 2)), ((2, 4),),
                                   ((1, -1),), ((1, Fraction(5, 2)),)])
def test_structure_forms(terms):
    "Structure equations of an adapted coframe"
    from pycartan.dist235 import (OMEGA_COUNT, adapted_coframe_fq, solve_structure_forms,
                                  structure_residual)

    c = adapted_coframe_fq(_spec(*terms))
    solved = solve_structure_forms(c)
    assert solved.residual_zero
    assert len(solved.omegas) == OMEGA_COUNT
    assert solved.solution_space_dim >= 0
    assert not any(structure_residual(c, solved.omegas))


def test_theta4_cubic():
    "θ4 of f = q^3"
    from pycartan.dist235 import adapted_coframe_fq, monge_coframe

    spec = _spec((1, 3))
    q = spec.table.coordinate('q')
    _, w2, w3, w4, w5 = monge_coframe(spec)
    c = adapted_coframe_fq(spec)
    assert c.forms[3] == (w2 * (3 * q ** 2) - w3) * (Fraction(7, 240) / q ** 3) + w4 - w5
    assert c.forms[3] == c.forms[1] * (Fraction(7, 40) / q ** 2) + w4 - w5


def test_structure_forms_closed_form():
    "A closed-form solution of the structure equations for a formal f"
    from pycartan.dist235 import MongeSpec, adapted_coframe_fq, structure_residual
    from pycartan.exterior import zero_form
    from pycartan.symcore import partial_derivative

    spec = MongeSpec.symbolic()
    f2, f3, f4 = (spec.jet(k) for k in (2, 3, 4))
    c = adapted_coframe_fq(spec)
    _, t2, t3, t4, t5 = c.forms
    a = f3 / (f2 * 4)
    k = (f3 ** 2 * 7 - f2 * f4 * 4) / (f2 ** 2 * 40)
    zero = zero_form(c.table, 1)
    omegas = [t5 * a,
              t5 * (a * 4) + t3 * k + t4 * a - t2 * (partial_derivative(k, 'q') - a * k * 3),
              zero,
              t5 * (a * -2),
              zero,
              t5 * (k * Fraction(3, 2)),
              zero]
    assert not any(structure_residual(c, omegas))


def test_structure_forms_symbolic():
    "The linear solver handles a formal f"
    from pycartan.dist235 import MongeSpec, adapted_coframe_fq, solve_structure_forms

    solved = solve_structure_forms(adapted_coframe_fq(MongeSpec.symbolic()))
    assert solved.residual_zero


def test_structure_not_adapted():
    "The coordinate coframe does not fit the normal form"
    from pycartan.dist235 import MONGE_CHART, solve_structure_forms
    from pycartan.errors import NotAdapted
    from pycartan.exterior import coordinate_coframe
    from pycartan.symcore import symbol_table

    with raises(NotAdapted):
        solve_structure_forms(coordinate_coframe(symbol_table(MONGE_CHART)))


def test_a5_residual():
    "a5 on explicit functions"
    from pycartan.dist235 import a5_residual

    assert a5_residual(_spec((1, 3))) == -290304
    assert not a5_residual(_spec((1, 2)))
    assert not a5_residual(_spec((1, -1)))
    assert not a5_residual(_spec((1, Fraction(1, 3))))


def test_monomial_a5():
    "a5(q^m) vanishes exactly for m in {-1, 1/3, 2/3, 2}"
    from pycartan.dist235 import monomial_a5

    for m in (-1, Fraction(1, 3), Fraction(2, 3), 2):
        assert monomial_a5(m) == 0
    for m in (3, 4, Fraction(1, 2), -2):
        assert monomial_a5(m) != 0
    assert monomial_a5(3) == -290304


def test_quartic_flat():
    "f = q^2 and its projective relatives are flat"
    from pycartan.dist235 import quartic_fq

    assert quartic_fq(_spec((1, 2))).is_zero()
    assert quartic_fq(_spec((1, -1))).is_zero()


def test_quartic_cubic():
    "f = q^3 has a single nonzero coefficient"
    from pycartan.dist235 import quartic_fq

    quartic = quartic_fq(_spec((1, 3)))
    assert not any((quartic.a1, quartic.a2, quartic.a3, quartic.a4))
    assert str(quartic.a5) == '-56/(25*q^4)'


@pytest.mark.slow
def test_quartic_fractional_power():
    "Rational exponents go through the root generator"
    from pycartan.dist235 import quartic_fq

    assert quartic_fq(_spec((1, Fraction(1, 3)))).is_zero()
    assert not quartic_fq(_spec((1, Fraction(1, 2)))).is_zero()


@pytest.mark.slow
def test_quartic_matches_formula():
    "A5 agrees with the closed form on explicit functions"
    from pycartan.dist235 import a5_residual, quartic_fq

    for spec in (_spec((1, 3), (1, 2)), _spec((1, 4)), _spec((2, 5), (-1, 3))):
        quartic = quartic_fq(spec)
        assert not any((quartic.a1, quartic.a2, quartic.a3, quartic.a4))
        assert quartic.a5 * 100 * spec.jet(2) ** 4 == a5_residual(spec)


@pytest.mark.slow
def test_quartic_symbolic():
    "A5 of a formal f"
    from pycartan.dist235 import MongeSpec, a5_residual, quartic_fq

    spec = MongeSpec.symbolic()
    quartic = quartic_fq(spec)
    assert not any((quartic.a1, quartic.a2, quartic.a3, quartic.a4))
    assert quartic.a5 * 100 * spec.jet(2) ** 4 == a5_residual(spec)


_exponents = st.sampled_from([2, 3, 4, 5, -1, Fraction(5, 2)])


@pytest.mark.slow
@settings(max_examples=10, deadline=None)
@given(st.dictionaries(_exponents, st.integers(-3, 3).filter(bool), min_size=1, max_size=3))
def test_quartic_matches_formula_random(terms):
    "A5 agrees with the closed form on random sums of monomials"
    from pycartan.dist235 import MongeSpec, a5_residual, quartic_fq

    spec = MongeSpec.explicit((c, e) for e, c in terms.items())
    quartic = quartic_fq(spec)
    assert not any((quartic.a1, quartic.a2, quartic.a3, quartic.a4))
    assert quartic.a5 * 100 * spec.jet(2) ** 4 == a5_residual(spec)
