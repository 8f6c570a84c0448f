"""Parser and printer for one-variable function specifications

::

    spec     := 'jet' | 'jet4' | expr
    expr     := ['+' | '-'] term (('+' | '-') term)*
    term     := rational ['*' power] | power
    power    := var ['^' exponent]
    exponent := rational | '(' ['-'] rational ')'
    rational := INT ['/' INT]
    var      := 'q' | 'x' | 'x5'

Whitespace is ignored.  ``f`` specifications use ``q``; ``Θ``
specifications use ``x`` or its alias ``x5``.

>>> parse_spec('q^2 - 3/2*q^(-1)')
ParsedSpec(kind='explicit', variable='q', terms=((Fraction(1, 1), Fraction(2, 1)), (Fraction(-3, 2), Fraction(-1, 1))))
"""
import re
import typing
from fractions import Fraction

from .dist235 import MongeSpec
from .errors import SpecSyntaxError
from .twistor import HeavenlySpec


VARIABLES = ('q', 'x', 'x5')
RESERVED = ('jet', 'jet4')

_TOKEN = re.compile(r'\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))')


class Token(typing.NamedTuple):
    kind: str
    """``int``, ``name``, ``op`` or ``end``"""
    text: str
    position: int


def tokenize(text: str) -> typing.List[Token]:
    """Split ``text`` into tokens; the list ends with an ``end`` token"""
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            raise SpecSyntaxError("Unexpected character {!r}".format(text[pos]), text, pos)
        kind = typing.cast(str, match.lastgroup)
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token('end', '', len(text)))
    return tokens


class ParsedSpec(typing.NamedTuple):
    """Result of :func:`parse_spec`"""
    kind: str
    """``jet``, ``jet4`` or ``explicit``"""
    variable: typing.Optional[str] = None
    """Variable of an explicit specification (``None`` for a constant)"""
    terms: typing.Tuple[typing.Tuple[Fraction, Fraction], ...] = ()
    """``(c, e)`` pairs with distinct exponents, descending"""


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.variable: typing.Optional[Token] = None

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: typing.Optional[Token] = None) -> SpecSyntaxError:
        return SpecSyntaxError(message, self.text, (token or self.current).position)

    def accept(self, op: str) -> bool:
        tok = self.current
        if tok.kind == 'op' and tok.text == op:
            self.index += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            raise self.error("Expected {!r}".format(op))

    def integer(self) -> int:
        tok = self.current
        if tok.kind != 'int':
            raise self.error("Expected an integer")
        self.index += 1
        return int(tok.text)

    def rational(self) -> Fraction:
        num = self.integer()
        if self.accept('/'):
            tok = self.current
            den = self.integer()
            if den == 0:
                raise self.error("Zero denominator", tok)
            return Fraction(num, den)
        return Fraction(num)

    def exponent(self) -> Fraction:
        if self.accept('('):
            negative = self.accept('-')
            value = self.rational()
            self.expect(')')
            return -value if negative else value
        if self.current.kind == 'op' and self.current.text == '-':
            raise self.error("Negative exponents must be parenthesised")
        return self.rational()

    def power(self) -> Fraction:
        tok = self.current
        if tok.kind != 'name':
            raise self.error("Expected a variable")
        if tok.text not in VARIABLES:
            raise self.error("Unknown variable {!r}".format(tok.text))
        if self.variable is not None and self.variable.text != tok.text:
            raise self.error("Mixed variables {!r} and {!r}".format(self.variable.text, tok.text))
        self.variable = tok
        self.index += 1
        if self.accept('^'):
            return self.exponent()
        return Fraction(1)

    def term(self) -> typing.Tuple[Fraction, Fraction]:
        if self.current.kind == 'int':
            coeff = self.rational()
            if self.accept('*'):
                return coeff, self.power()
            return coeff, Fraction(0)
        return Fraction(1), self.power()

    def expr(self) -> typing.List[typing.Tuple[Fraction, Fraction]]:
        sign = 1
        if self.accept('-'):
            sign = -1
        else:
            self.accept('+')
        terms = []
        while True:
            c, e = self.term()
            terms.append((sign * c, e))
            if self.accept('+'):
                sign = 1
            elif self.accept('-'):
                sign = -1
            else:
                break
        return terms

    def parse(self) -> ParsedSpec:
        first = self.current
        if first.kind == 'name' and first.text in RESERVED:
            self.index += 1
            if self.current.kind != 'end':
                raise self.error("Unexpected input after {!r}".format(first.text))
            return ParsedSpec(first.text)
        if first.kind == 'end':
            raise self.error("Empty specification")
        terms = self.expr()
        if self.current.kind != 'end':
            raise self.error("Unexpected {!r}".format(self.current.text))
        merged: typing.Dict[Fraction, Fraction] = {}
        for c, e in terms:
            merged[e] = merged.get(e, Fraction(0)) + c
        ordered = tuple(sorted(((c, e) for e, c in merged.items() if c),
                               key=lambda t: t[1], reverse=True))
        variable = self.variable.text if self.variable is not None else None
        return ParsedSpec('explicit', variable, ordered)


def parse_spec(text: str) -> ParsedSpec:
    """Parse a specification

    :raises SpecSyntaxError: with the offending position
    """
    return _Parser(text).parse()


def _format_power(variable: str, e: Fraction) -> str:
    if e == 1:
        return variable
    if e < 0:
        return '{}^({})'.format(variable, e)
    return '{}^{}'.format(variable, e)


def format_spec(spec: ParsedSpec) -> str:
    """Canonical text of ``spec``; parsing it gives ``spec`` back"""
    if spec.kind != 'explicit':
        return spec.kind
    if not spec.terms:
        return '0'
    out = ''
    for c, e in spec.terms:
        if e == 0:
            term = str(c)
        else:
            power = _format_power(spec.variable or 'q', e)
            if c == 1:
                term = power
            elif c == -1:
                term = '-' + power
            else:
                term = '{}*{}'.format(c, power)
        if not out:
            out = term
        elif term.startswith('-'):
            out += ' - ' + term[1:]
        else:
            out += ' + ' + term
    return out


def to_monge(spec: ParsedSpec, text: str = '') -> MongeSpec:
    """``f(q)`` of a parsed specification"""
    if spec.kind == 'jet':
        return MongeSpec.symbolic()
    if spec.kind == 'jet4':
        raise SpecSyntaxError("'jet4' names a function of four variables, not f(q)", text, 0)
    if spec.variable not in (None, 'q'):
        raise SpecSyntaxError("f must be a function of q, not {}".format(spec.variable), text, 0)
    return MongeSpec.explicit(spec.terms)


def to_heavenly(spec: ParsedSpec, text: str = '') -> HeavenlySpec:
    """``Θ`` of a parsed specification"""
    if spec.kind == 'jet':
        return HeavenlySpec.symbolic()
    if spec.kind == 'jet4':
        return HeavenlySpec.four_variable()
    if spec.variable not in (None, 'x', 'x5'):
        raise SpecSyntaxError("Θ must be a function of x, not {}".format(spec.variable), text, 0)
    return HeavenlySpec.explicit(spec.terms)
