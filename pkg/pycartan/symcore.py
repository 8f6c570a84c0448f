r"""Exact scalar arithmetic

Scalars are rational functions over :math:`\mathbb{Q}` in the coordinates of a
chart and in *jet symbols*, formal variables standing for the derivatives of
an unknown function.  Differentiation knows about jets through the chain rule:

>>> from pycartan.symcore import Chart, JetFamily, symbol_table, partial_derivative
>>> chart = Chart('monge', ('x', 'y', 'p', 'q', 'z'))
>>> table = symbol_table(chart, (JetFamily('f', ('q',), 6),))
>>> q, f1 = table.coordinate('q'), table.jet('f', 1)
>>> print(partial_derivative(q * f1, 'q'))
q*f2 + f1

Arithmetic is delegated to the sparse fraction field of :mod:`sympy.polys`,
which keeps every value reduced (numerator and denominator coprime, positive
leading denominator coefficient), so equality is structural.
"""
import enum
import functools
import math
import typing
from fractions import Fraction

import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, FracField
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement

from . import config
from .errors import (ChartMismatch, DivisionByZero, JetOrderOverflow, MissingBinding,
                     NearSingularEvaluation)


Polynomial = PolyElement
"""Multivariate polynomial over QQ (numerator or denominator of a scalar)"""


class SymbolKind(str, enum.Enum):
    """Kinds of ring generators"""
    Coordinate = 'coordinate'
    Jet = 'jet'


class Symbol(typing.NamedTuple):
    """A generator of the scalar field

    Two symbols are equal iff kind, name and multi-index are equal; the
    coordinates a jet depends on are a property of the :class:`SymbolTable`.
    """
    kind: SymbolKind
    name: str
    """Coordinate name or function id"""
    index: typing.Tuple[int, ...] = ()
    """Differentiation orders of a jet, one entry per base variable"""

    @property
    def order(self) -> int:
        """Total differentiation order"""
        return sum(self.index)


def coordinate(name: str) -> Symbol:
    """Coordinate symbol called ``name``"""
    return Symbol(SymbolKind.Coordinate, name)


def jet(name: str, *index: int) -> Symbol:
    """Jet symbol of function ``name`` with the given multi-index"""
    if any(i < 0 for i in index):
        raise ValueError("Jet multi-index must be non-negative")
    return Symbol(SymbolKind.Jet, name, tuple(index))


class Chart(typing.NamedTuple):
    """Named ordered coordinate system"""
    name: str
    coordinates: typing.Tuple[str, ...]

    @property
    def dimension(self) -> int:
        """Number of coordinates"""
        return len(self.coordinates)


class JetFamily(typing.NamedTuple):
    """All jets of one unknown function up to a total order"""
    name: str
    variables: typing.Tuple[str, ...]
    """Coordinates the function depends on"""
    order: int

    def multi_indices(self) -> typing.List[typing.Tuple[int, ...]]:
        """Multi-indices of the family, graded then lexicographically descending"""
        nvars = len(self.variables)

        def compositions(total: int, slots: int) -> typing.Iterator[typing.Tuple[int, ...]]:
            if slots == 1:
                yield (total,)
                return
            for head in range(total, -1, -1):
                for tail in compositions(total - head, slots - 1):
                    yield (head,) + tail

        return [idx for total in range(self.order + 1) for idx in compositions(total, nvars)]

    def display(self, index: typing.Tuple[int, ...]) -> str:
        """Printable name of the jet with multi-index ``index``"""
        if not any(index):
            return self.name
        if len(self.variables) == 1:
            return '{}{}'.format(self.name, index[0])
        return '{}_{}'.format(self.name, ''.join(v * n for v, n in zip(self.variables, index)))


class SymbolTable:
    """Generators of one scalar field: chart coordinates followed by jets

    :param chart: the coordinate chart
    :param families: jet families, each bound to some chart coordinates
    :param roots: pairs ``(coordinate, d)``; the generator of such a
        coordinate stands for its ``d``-th root, which keeps rational powers
        inside the fraction field

    Prefer :func:`symbol_table`, which shares equal tables.
    """
    def __init__(self,
                 chart: Chart,
                 families: typing.Tuple[JetFamily, ...] = (),
                 roots: typing.Tuple[typing.Tuple[str, int], ...] = ()):
        cap = config.current().jet_order_cap
        self.chart = chart
        self.families = tuple(families)
        self.roots = tuple(sorted(roots))
        self._roots = dict(self.roots)
        for name, degree in self.roots:
            if name not in chart.coordinates:
                raise ValueError("{} is not a coordinate of {}".format(name, chart.name))
            if degree < 1:
                raise ValueError("Root degree must be positive")

        self.symbols: typing.List[Symbol] = [coordinate(c) for c in chart.coordinates]
        self._display: typing.Dict[Symbol, str] = {s: s.name for s in self.symbols}
        self._family: typing.Dict[str, JetFamily] = {}
        for fam in self.families:
            if fam.order > cap:
                raise JetOrderOverflow("Jet order {} of {} exceeds the cap {}".format(
                    fam.order, fam.name, cap))
            missing = set(fam.variables) - set(chart.coordinates)
            if missing:
                raise ValueError("{} depends on unknown coordinates {}".format(
                    fam.name, sorted(missing)))
            if fam.name in self._family or fam.name in chart.coordinates:
                raise ValueError("Duplicate symbol name {}".format(fam.name))
            self._family[fam.name] = fam
            for idx in fam.multi_indices():
                sym = jet(fam.name, *idx)
                self.symbols.append(sym)
                self._display[sym] = fam.display(idx)

        self._index = {s: i for i, s in enumerate(self.symbols)}
        gens = [sympy.Symbol(self._generator_name(s)) for s in self.symbols]
        self.field: FracField = FracField(gens, QQ, grlex)
        self._derivations: typing.Dict[str, typing.Dict[int, typing.Optional[FracElement]]] = {}

    def _generator_name(self, sym: Symbol) -> str:
        degree = self._roots.get(sym.name, 1) if sym.kind is SymbolKind.Coordinate else 1
        if degree == 1:
            return self._display[sym]
        return '{}_root{}'.format(sym.name, degree)

    def _key(self) -> typing.Tuple[typing.Any, ...]:
        return (self.chart, self.families, self.roots)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolTable):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return 'SymbolTable({}, families={}, roots={})'.format(
            self.chart.name, [f.name for f in self.families], dict(self.roots))

    def __contains__(self, sym: object) -> bool:
        return sym in self._index

    def index(self, sym: Symbol) -> int:
        """Generator position of ``sym``"""
        try:
            return self._index[sym]
        except KeyError:
            raise MissingBinding("{} is not registered in {}".format(sym, self))

    def root(self, sym: Symbol) -> int:
        """Root degree carried by the generator of ``sym`` (1 when unrooted)"""
        if sym.kind is not SymbolKind.Coordinate:
            return 1
        return self._roots.get(sym.name, 1)

    def display(self, sym: Symbol) -> str:
        """Printable name of ``sym``"""
        return self._display[sym]

    def family(self, name: str) -> JetFamily:
        """The jet family called ``name``"""
        return self._family[name]

    def generator(self, sym: Symbol) -> 'RationalFunction':
        """The raw field generator of ``sym``"""
        return RationalFunction(self, self.field.gens[self.index(sym)])

    def coordinate(self, name: str) -> 'RationalFunction':
        """Coordinate ``name`` as a scalar, accounting for its root"""
        gen = self.generator(coordinate(name))
        return gen ** self._roots.get(name, 1)

    def jet(self, name: str, *index: int) -> 'RationalFunction':
        """Jet of function ``name``; overflows past the registered order"""
        sym = jet(name, *index)
        if sym not in self._index:
            fam = self._family.get(name)
            if fam is not None and len(index) == len(fam.variables):
                raise JetOrderOverflow("{} exceeds registered order {}".format(
                    fam.display(tuple(index)), fam.order))
            raise MissingBinding("{} is not registered in {}".format(sym, self))
        return self.generator(sym)

    def constant(self, value: typing.Union[int, Fraction]) -> 'RationalFunction':
        """Constant scalar"""
        return RationalFunction(self, _ground(self.field, value))

    @property
    def zero(self) -> 'RationalFunction':
        """Additive identity"""
        return RationalFunction(self, self.field.zero)

    @property
    def one(self) -> 'RationalFunction':
        """Multiplicative identity"""
        return RationalFunction(self, self.field.one)

    def derivation(self, name: str) -> typing.Dict[int, typing.Optional[FracElement]]:
        """Derivative of every generator along coordinate ``name``

        Entries missing from the result differentiate to zero; ``None`` marks
        a jet whose derivative lies beyond the registered order.
        """
        if name in self._derivations:
            return self._derivations[name]
        if name not in self.chart.coordinates:
            raise ChartMismatch("{} is not a coordinate of {}".format(name, self.chart.name))
        gens = self.field.gens
        pos = self._index[coordinate(name)]
        degree = self._roots.get(name, 1)
        rules: typing.Dict[int, typing.Optional[FracElement]] = {}
        if degree == 1:
            rules[pos] = self.field.one
        else:
            # u = c^(1/d)  =>  du/dc = 1/(d u^(d-1))
            rules[pos] = self.field.one / (gens[pos] ** (degree - 1) * degree)
        for fam in self.families:
            if name not in fam.variables:
                continue
            slot = fam.variables.index(name)
            for idx in fam.multi_indices():
                raised = jet(fam.name, *(n + (i == slot) for i, n in enumerate(idx)))
                src = self._index[jet(fam.name, *idx)]
                rules[src] = gens[self._index[raised]] if raised in self._index else None
        self._derivations[name] = rules
        return rules


@functools.lru_cache(maxsize=None)
def symbol_table(chart: Chart,
                 families: typing.Tuple[JetFamily, ...] = (),
                 roots: typing.Tuple[typing.Tuple[str, int], ...] = ()) -> SymbolTable:
    """Shared :class:`SymbolTable` for the given layout"""
    return SymbolTable(chart, families, tuple(sorted(roots)))


def _ground(field: FracField, value: typing.Union[int, Fraction]) -> FracElement:
    if isinstance(value, Fraction):
        return field.ground_new(QQ(value.numerator, value.denominator))
    return field.ground_new(QQ(value))


def _to_fraction(coeff: typing.Any) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def _support(value: FracElement) -> typing.Set[int]:
    """Generator positions occurring in ``value``"""
    found: typing.Set[int] = set()
    for poly in (value.numer, value.denom):
        for monom in poly.itermonoms():
            found.update(i for i, e in enumerate(monom) if e)
    return found


class RationalFunction:
    """Exact scalar: an element of the fraction field of a :class:`SymbolTable`

    Values are immutable; arithmetic with ``int`` and :class:`fractions.Fraction`
    is supported, mixing tables raises :class:`~pycartan.errors.ChartMismatch`.
    """
    __slots__ = ('table', 'value')

    def __init__(self, table: SymbolTable, value: FracElement):
        self.table = table
        self.value = value

    @classmethod
    def from_polynomials(cls, table: SymbolTable,
                         numerator: Polynomial, denominator: Polynomial) -> 'RationalFunction':
        """Build ``numerator/denominator`` without reducing it

        Use :func:`normalize` to obtain the canonical representative.
        """
        if not denominator:
            raise DivisionByZero("Zero denominator")
        ring = table.field.ring
        return cls(table, table.field.raw_new(ring(numerator), ring(denominator)))

    @property
    def numerator(self) -> Polynomial:
        """Numerator polynomial"""
        return self.value.numer

    @property
    def denominator(self) -> Polynomial:
        """Denominator polynomial"""
        return self.value.denom

    @property
    def term_count(self) -> int:
        """Number of terms in numerator and denominator"""
        return len(self.value.numer) + len(self.value.denom)

    def symbols(self) -> typing.Set[Symbol]:
        """Symbols occurring in this scalar"""
        return {self.table.symbols[i] for i in _support(self.value)}

    def is_constant(self) -> bool:
        """True when no symbol occurs"""
        return not _support(self.value)

    def as_fraction(self) -> Fraction:
        """Value of a constant scalar"""
        if not self.is_constant():
            raise ValueError("{} is not constant".format(self))
        num = self.value.numer.coeff(1) if self.value.numer else 0
        return _to_fraction(QQ.convert(num)) / _to_fraction(QQ.convert(self.value.denom.coeff(1)))

    def _coerce(self, other: typing.Any) -> typing.Optional[FracElement]:
        if isinstance(other, RationalFunction):
            if other.table != self.table:
                raise ChartMismatch("Scalars from {} and {} cannot be combined".format(
                    self.table, other.table))
            return other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return _ground(self.table.field, other)
        return None

    def __add__(self, other: typing.Any) -> 'RationalFunction':
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return RationalFunction(self.table, self.value + value)

    __radd__ = __add__

    def __sub__(self, other: typing.Any) -> 'RationalFunction':
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return RationalFunction(self.table, self.value - value)

    def __rsub__(self, other: typing.Any) -> 'RationalFunction':
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return RationalFunction(self.table, value - self.value)

    def __mul__(self, other: typing.Any) -> 'RationalFunction':
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return RationalFunction(self.table, self.value * value)

    __rmul__ = __mul__

    def __truediv__(self, other: typing.Any) -> 'RationalFunction':
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        if not value:
            raise DivisionByZero("Division by zero scalar")
        return RationalFunction(self.table, self.value / value)

    def __rtruediv__(self, other: typing.Any) -> 'RationalFunction':
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        if not self.value:
            raise DivisionByZero("Division by zero scalar")
        return RationalFunction(self.table, value / self.value)

    def __neg__(self) -> 'RationalFunction':
        return RationalFunction(self.table, -self.value)

    def __pow__(self, exponent: int) -> 'RationalFunction':
        if exponent >= 0:
            return RationalFunction(self.table, self.value ** exponent)
        if not self.value:
            raise DivisionByZero("Negative power of zero")
        return RationalFunction(self.table, self.table.field.one / self.value ** -exponent)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalFunction) and other.table != self.table:
            return False
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return bool(self.value == value)

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return bool(self.value)

    def __str__(self) -> str:
        num = _format_polynomial(self.value.numer, self.table)
        if self.value.denom == 1:
            return num
        den = _format_polynomial(self.value.denom, self.table)
        if len(self.value.numer) > 1:
            num = '({})'.format(num)
        if len(self.value.denom) > 1 or '*' in den:
            den = '({})'.format(den)
        return '{}/{}'.format(num, den)

    def __repr__(self) -> str:
        return 'RationalFunction({!r})'.format(str(self))


def _format_power(table: SymbolTable, pos: int, exponent: int) -> str:
    sym = table.symbols[pos]
    power = Fraction(exponent, table.root(sym))
    name = table.display(sym)
    if power == 1:
        return name
    if power.denominator == 1:
        return '{}^{}'.format(name, power)
    return '{}^({})'.format(name, power)


def _format_polynomial(poly: Polynomial, table: SymbolTable) -> str:
    if not poly:
        return '0'
    out = ''
    for monom, coeff in poly.terms(order=grlex):
        frac = _to_fraction(coeff)
        factors = [_format_power(table, i, e) for i, e in enumerate(monom) if e]
        if not factors:
            term = str(frac)
        elif frac == 1:
            term = '*'.join(factors)
        elif frac == -1:
            term = '-' + '*'.join(factors)
        else:
            term = '*'.join([str(frac)] + factors)
        if not out:
            out = term
        elif term.startswith('-'):
            out += ' - ' + term[1:]
        else:
            out += ' + ' + term
    return out


def normalize(r: RationalFunction) -> RationalFunction:
    """Canonical representative of ``r``

    The gcd of numerator and denominator is cancelled and the sign is moved so
    that the leading denominator coefficient is positive.
    """
    if not r.value.denom:
        raise DivisionByZero("Zero denominator")
    return RationalFunction(r.table, r.table.field.new(r.value.numer, r.value.denom))


def _as_coordinate_name(c: typing.Union[str, Symbol]) -> str:
    if isinstance(c, Symbol):
        if c.kind is not SymbolKind.Coordinate:
            raise ValueError("Can only differentiate along coordinates, not {}".format(c))
        return c.name
    return c


def partial_derivative(r: RationalFunction, c: typing.Union[str, Symbol]) -> RationalFunction:
    """Partial derivative of ``r`` along coordinate ``c``

    Jets of functions depending on ``c`` are raised in the matching slot of
    their multi-index; other jets are constants.
    """
    table = r.table
    name = _as_coordinate_name(c)
    rules = table.derivation(name)
    value = r.value
    result = table.field.zero
    for pos in sorted(_support(value)):
        if pos not in rules:
            continue
        rule = rules[pos]
        if rule is None:
            sym = table.symbols[pos]
            raise JetOrderOverflow("d/d{} of {} exceeds registered jet order".format(
                name, table.display(sym)))
        result += value.diff(table.field.gens[pos]) * rule
    return RationalFunction(table, result)


def _evaluate_polynomial(poly: Polynomial,
                         values: typing.Dict[int, FracElement],
                         field: FracField) -> FracElement:
    acc = field.zero
    powers: typing.Dict[typing.Tuple[int, int], FracElement] = {}
    for monom, coeff in poly.iterterms():
        term = field.ground_new(coeff)
        for pos, exp in enumerate(monom):
            if not exp:
                continue
            if (pos, exp) not in powers:
                powers[pos, exp] = values[pos] ** exp
            term = term * powers[pos, exp]
        acc += term
    return acc


def _as_symbol(key: typing.Union[str, Symbol]) -> Symbol:
    return key if isinstance(key, Symbol) else coordinate(key)


def substitute(r: RationalFunction,
               bindings: typing.Mapping[typing.Union[str, Symbol], RationalFunction],
               target: typing.Optional[SymbolTable] = None) -> RationalFunction:
    """Simultaneously replace symbols of ``r`` and normalize

    :param bindings: values for symbols of ``r.table`` (strings name coordinates)
    :param target: table of the result; defaults to the table of the bound
        values, or ``r.table`` when nothing is bound.  Unbound symbols are
        carried over to the same symbol of ``target``.
    :raises ValueError: if, on the source table, a value mentions a bound
        symbol other than through the identity binding
    """
    source = r.table
    binds = {_as_symbol(k): v for k, v in bindings.items()}
    if target is None:
        tables = {v.table for v in binds.values()}
        if len(tables) > 1:
            raise ChartMismatch("Bindings live on different tables")
        target = tables.pop() if tables else source

    if target == source:
        for sym, value in binds.items():
            if value.table != source or (sym in source and value == source.generator(sym)):
                continue
            looped = value.symbols() & binds.keys()
            if looped:
                raise ValueError("A binding mentions the bound symbol {}".format(
                    source.display(min(looped, key=repr))))

    gens = target.field.gens
    values: typing.Dict[int, FracElement] = {}
    for pos in _support(r.value):
        sym = source.symbols[pos]
        degree = source.root(sym)
        if sym in binds:
            value = binds[sym]
            if value.table != target:
                raise ChartMismatch("Binding of {} is not on {}".format(sym, target))
            if degree == 1:
                values[pos] = value.value
                continue
            for name, tdegree in target.roots:
                if tdegree == degree and value == target.coordinate(name):
                    values[pos] = gens[target.index(coordinate(name))]
                    break
            else:
                raise ValueError("Rooted coordinate {} can only be renamed".format(sym.name))
        elif sym in target and target.root(sym) == degree:
            values[pos] = gens[target.index(sym)]
        else:
            raise MissingBinding("No value for {}".format(source.display(sym)))

    num = _evaluate_polynomial(r.value.numer, values, target.field)
    den = _evaluate_polynomial(r.value.denom, values, target.field)
    if not den:
        raise DivisionByZero("Substitution makes the denominator vanish")
    return RationalFunction(target, num / den)


def _float_polynomial(poly: Polynomial, values: typing.Dict[int, float]) -> float:
    total = 0.0
    for monom, coeff in poly.iterterms():
        term = float(_to_fraction(coeff))
        for pos, exp in enumerate(monom):
            if exp:
                term *= values[pos] ** exp
        total += term
    return total


def evaluate_numeric(r: RationalFunction,
                     point: typing.Mapping[typing.Union[str, Symbol], float]) -> float:
    """Evaluate ``r`` in IEEE doubles

    :param point: value of every symbol of ``r`` (strings name coordinates);
        rooted coordinates take the coordinate value, not the root
    """
    table = r.table
    binds = {_as_symbol(k): v for k, v in point.items()}
    values: typing.Dict[int, float] = {}
    for pos in _support(r.value):
        sym = table.symbols[pos]
        if sym not in binds:
            raise MissingBinding("No value for {}".format(table.display(sym)))
        value = float(binds[sym])
        degree = table.root(sym)
        values[pos] = value if degree == 1 else math.pow(value, 1.0 / degree)
    den = _float_polynomial(r.value.denom, values)
    if abs(den) < config.current().denominator_floor:
        raise NearSingularEvaluation("Denominator {} is below the floor".format(den))
    return _float_polynomial(r.value.numer, values) / den
