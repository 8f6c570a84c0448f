"""
pycartan grammar tests
"""
from fractions import Fraction

from hypothesis import given, settings, strategies as st
from pytest import raises


def test_reserved():
    "Formal jets"
    from pycartan.grammar import ParsedSpec, format_spec, parse_spec

    assert parse_spec('jet') == ParsedSpec('jet')
    assert parse_spec(' jet4 ') == ParsedSpec('jet4')
    assert format_spec(parse_spec('jet4')) == 'jet4'


def test_explicit():
    "Sums of rational monomials"
    from pycartan.grammar import ParsedSpec, format_spec, parse_spec

    assert parse_spec('q^2') == ParsedSpec('explicit', 'q', ((1, 2),))
    spec = parse_spec('-3/2*q^(-1) + q')
    assert spec.terms == ((1, 1), (Fraction(-3, 2), -1))
    assert format_spec(spec) == 'q - 3/2*q^(-1)'
    assert parse_spec(' q ^ 2 ') == parse_spec('q^2')
    assert parse_spec('x5^5').variable == 'x5'
    assert parse_spec('q^1/2').terms == ((1, Fraction(1, 2)),)
    assert parse_spec('2*q^2 + q^2 - 1').terms == ((3, 2), (-1, 0))
    assert format_spec(parse_spec('-q^2 + 1/2')) == '-q^2 + 1/2'


def test_constants():
    "Constants and cancellations"
    from pycartan.grammar import ParsedSpec, format_spec, parse_spec

    assert parse_spec('0') == ParsedSpec('explicit', None, ())
    assert format_spec(parse_spec('0')) == '0'
    assert parse_spec('3').terms == ((3, 0),)
    assert parse_spec('q - q').terms == ()
    assert format_spec(parse_spec('q - q')) == '0'


def _error(text):
    from pycartan.errors import SpecSyntaxError
    from pycartan.grammar import parse_spec

    with raises(SpecSyntaxError) as info:
        parse_spec(text)
    return info.value


def test_errors():
    "Errors carry the offending position"
    assert _error('q^-1').position == 2
    assert 'parenthesised' in _error('q^-1').message
    assert _error('q^2 +').position == 5
    assert _error('y^2').position == 0
    assert _error('2/0*q').position == 2
    assert _error('q + x').position == 4
    assert _error('q $').position == 2
    assert _error('').position == 0
    assert _error('jet q').position == 4
    assert _error('q^(1').position == 4
    assert _error('q q').position == 2


def test_caret():
    "The message points at the offending character"
    text = str(_error('q^-1'))
    assert text.splitlines()[1:] == ['  q^-1', '    ^']
    assert 'position 2' in text.splitlines()[0]


def test_conversions():
    "Parsed specifications become f or Θ"
    from pycartan.dist235 import MongeSpec
    from pycartan.errors import SpecSyntaxError
    from pycartan.grammar import parse_spec, to_heavenly, to_monge
    from pycartan.twistor import HeavenlyMode, HeavenlySpec

    assert to_monge(parse_spec('jet')) == MongeSpec.symbolic()
    assert to_monge(parse_spec('q^3')) == MongeSpec.explicit([(1, 3)])
    assert to_monge(parse_spec('0')).terms == ()
    assert to_heavenly(parse_spec('jet4')).mode is HeavenlyMode.Jet4
    assert to_heavenly(parse_spec('jet')) == HeavenlySpec.symbolic()
    assert to_heavenly(parse_spec('x5^5')) == HeavenlySpec.explicit([(1, 5)])
    assert to_heavenly(parse_spec('x^5')) == HeavenlySpec.explicit([(1, 5)])
    with raises(SpecSyntaxError):
        to_monge(parse_spec('x^2'), 'x^2')
    with raises(SpecSyntaxError):
        to_monge(parse_spec('jet4'), 'jet4')
    with raises(SpecSyntaxError):
        to_heavenly(parse_spec('q'), 'q')


_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@settings(max_examples=300, deadline=None)
@given(st.dictionaries(_fractions, _fractions.filter(bool), max_size=4))
def test_round_trip(terms):
    "Formatting then parsing gives the specification back"
    from pycartan.grammar import ParsedSpec, format_spec, parse_spec

    ordered = tuple(sorted(((c, e) for e, c in terms.items()), key=lambda t: t[1], reverse=True))
    variable = 'q' if any(e for _, e in ordered) else None
    spec = ParsedSpec('explicit', variable, ordered)
    assert parse_spec(format_spec(spec)) == spec
