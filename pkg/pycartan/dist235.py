"""Monge distributions ``D = Span(∂q, ∂x + p∂y + q∂p + f(q)∂z)``

The chart is ``(x, y, p, q, z)``.  ``f`` is either a formal jet (``f``,
``f1``, ``f2``, …) or an explicit sum of rational monomials ``c*q^e``:

>>> from fractions import Fraction
>>> spec = MongeSpec.explicit([(Fraction(1), Fraction(3))])
>>> print(quartic_fq(spec).a5)
-56/(25*q^4)
"""
import functools
import logging
import math
import typing
from fractions import Fraction

from . import linalg
from .curvature import CartanQuartic, quartic_of_coframe
from .errors import DegenerateDistribution, InconsistentSystem, NotAdapted
from .exterior import (Coframe, DifferentialForm, differential, exterior_derivative,
                       express_in_coframe, wedge, zero_form)
from .symcore import (Chart, JetFamily, RationalFunction, SymbolTable, coordinate,
                      partial_derivative, symbol_table)


logger = logging.getLogger(__name__)

MONGE_CHART = Chart('monge', ('x', 'y', 'p', 'q', 'z'))
"""Coordinates ``(x, y, p, q, z)``"""

Term = typing.Tuple[Fraction, Fraction]
"""``(c, e)`` standing for ``c*q^e``"""


def falling_factorial(e: Fraction, k: int) -> Fraction:
    """``e (e-1) … (e-k+1)``"""
    out = Fraction(1)
    for i in range(k):
        out *= e - i
    return out


class MongeSpec(typing.NamedTuple):
    """The function ``f(q)``

    ``terms`` is ``None`` for a formal jet of order ``order``; otherwise it is
    the list of monomials ``c*q^e`` with distinct exponents and nonzero ``c``.
    """
    terms: typing.Optional[typing.Tuple[Term, ...]] = None
    order: int = 6

    @classmethod
    def symbolic(cls, order: int = 6) -> 'MongeSpec':
        """Formal ``f`` with jets up to ``order``"""
        return cls(None, order)

    @classmethod
    def explicit(cls, terms: typing.Iterable[typing.Tuple[typing.Any, typing.Any]]) -> 'MongeSpec':
        """Sum of ``c*q^e``; like exponents are merged and zero terms dropped"""
        merged: typing.Dict[Fraction, Fraction] = {}
        for c, e in terms:
            e = Fraction(e)
            merged[e] = merged.get(e, Fraction(0)) + Fraction(c)
        return cls(tuple(sorted(((c, e) for e, c in merged.items() if c),
                                key=lambda t: t[1], reverse=True)))

    @property
    def is_symbolic(self) -> bool:
        """True for a formal jet"""
        return self.terms is None

    @property
    def root_degree(self) -> int:
        """Common denominator ``d`` of the exponents"""
        if self.terms is None:
            return 1
        return functools.reduce(lambda a, b: a * b // math.gcd(a, b),
                                (e.denominator for _, e in self.terms), 1)

    @property
    def table(self) -> SymbolTable:
        """Scalar table on :data:`MONGE_CHART`"""
        if self.terms is None:
            return symbol_table(MONGE_CHART, (JetFamily('f', ('q',), self.order),))
        d = self.root_degree
        return symbol_table(MONGE_CHART, (), (('q', d),) if d > 1 else ())

    def jet(self, k: int) -> RationalFunction:
        """``f^(k)`` as a scalar"""
        table = self.table
        if self.terms is None:
            return table.jet('f', k)
        d = self.root_degree
        u = table.generator(coordinate('q'))
        acc = table.zero
        for c, e in self.terms:
            coeff = c * falling_factorial(e, k)
            if coeff:
                acc = acc + (u ** int((e - k) * d)) * coeff
        return acc


def monge_coframe(spec: MongeSpec) -> typing.Tuple[DifferentialForm, ...]:
    """``(ω1, …, ω5) = (dy - p dx, dp - q dx, dz - f dx, dq, dx)``"""
    table = spec.table
    d = functools.partial(differential, table)
    dx = d('x')
    return (d('y') - dx * table.coordinate('p'),
            d('p') - dx * table.coordinate('q'),
            d('z') - dx * spec.jet(0),
            d('q'),
            dx)


class VectorField:
    """Vector field ``Σ X^μ ∂_μ`` on a chart"""
    __slots__ = ('table', 'coefficients')

    def __init__(self, table: SymbolTable, coefficients: typing.Sequence[typing.Any]):
        if len(coefficients) != table.chart.dimension:
            raise ValueError("Expected {} coefficients".format(table.chart.dimension))
        self.table = table
        self.coefficients = tuple(table.zero + c for c in coefficients)

    @classmethod
    def basis(cls, table: SymbolTable, name: str) -> 'VectorField':
        """Coordinate field ``∂_name``"""
        coords = table.chart.coordinates
        return cls(table, [int(c == name) for c in coords])

    def component(self, name: str) -> RationalFunction:
        """Coefficient of ``∂_name``"""
        return self.coefficients[self.table.chart.coordinates.index(name)]

    def apply(self, r: RationalFunction) -> RationalFunction:
        """Directional derivative ``X(r)``"""
        acc = self.table.zero
        for name, coeff in zip(self.table.chart.coordinates, self.coefficients):
            if coeff:
                acc = acc + coeff * partial_derivative(r, name)
        return acc

    def __add__(self, other: 'VectorField') -> 'VectorField':
        return VectorField(self.table, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other: 'VectorField') -> 'VectorField':
        return VectorField(self.table, [a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __mul__(self, scalar: typing.Any) -> 'VectorField':
        return VectorField(self.table, [a * scalar for a in self.coefficients])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.table == other.table and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    def __bool__(self) -> bool:
        return any(self.coefficients)

    def __repr__(self) -> str:
        terms = ['({})*d_{}'.format(c, n)
                 for n, c in zip(self.table.chart.coordinates, self.coefficients) if c]
        return ' + '.join(terms) if terms else '0'


def lie_bracket(a: VectorField, b: VectorField) -> VectorField:
    """``[a, b]^μ = a(b^μ) - b(a^μ)``"""
    return VectorField(a.table, [a.apply(bc) - b.apply(ac)
                                 for ac, bc in zip(a.coefficients, b.coefficients)])


class BracketFrame(typing.NamedTuple):
    """``([X5,[X4,X5]], [X4,[X4,X5]], [X4,X5], X4, X5)`` and its determinant"""
    fields: typing.Tuple[VectorField, ...]
    determinant: RationalFunction

    @property
    def generic(self) -> bool:
        """True when the fields span the tangent space"""
        return bool(self.determinant)


def bracket_frame(spec: MongeSpec) -> BracketFrame:
    """Bracket-generated frame of the distribution"""
    table = spec.table
    x4 = VectorField.basis(table, 'q')
    x5 = VectorField(table, [1, table.coordinate('p'), table.coordinate('q'), 0, spec.jet(0)])
    x3 = lie_bracket(x4, x5)
    fields = (lie_bracket(x5, x3), lie_bracket(x4, x3), x3, x4, x5)
    det = linalg.determinant([list(f.coefficients) for f in fields])
    logger.debug("Bracket frame determinant: %s", det)
    return BracketFrame(fields, det)


def adapted_coframe_fq(spec: MongeSpec) -> Coframe:
    """Adapted coframe of the ``f(q)`` distribution

    :raises DegenerateDistribution: if ``f''`` vanishes identically
    """
    f1, f2, f3, f4 = (spec.jet(k) for k in range(1, 5))
    if not f2:
        raise DegenerateDistribution("f'' vanishes identically")
    w1, w2, w3, w4, w5 = monge_coframe(spec)
    contact = w2 * f1 - w3
    core = contact * (1 / f2)
    theta3 = w2 * ((f2 ** 2 * 4 - f1 * f3) / (f2 ** 2 * 4)) + w3 * (f3 / (f2 ** 2 * 4))
    # the θ⁴ coefficient multiplies f'ω2 - ω3 itself, not θ²
    theta4 = contact * ((f3 ** 2 * 7 - f2 * f4 * 4) / (f2 ** 3 * 40)) + w4 - w5
    return Coframe([w1 - core, core, theta3, theta4, -w4])


class _Term(typing.NamedTuple):
    left: int
    """θ index on the left of the wedge (0-based)"""
    omegas: typing.Tuple[typing.Tuple[int, Fraction], ...]
    """``(μ, weight)`` pairs of the 1-based Ω forms on the right"""


class StructureEquation(typing.NamedTuple):
    """``dθ^i = Σ θ^a∧(Σ w Ω_μ) + Σ θ^a∧θ^b``"""
    terms: typing.Tuple[_Term, ...]
    fixed: typing.Tuple[typing.Tuple[int, int], ...]
    """Constant ``θ^a∧θ^b`` pieces"""


def _eq(terms: typing.Sequence[typing.Tuple[int, typing.Dict[int, typing.Any]]],
        fixed: typing.Sequence[typing.Tuple[int, int]] = ()) -> StructureEquation:
    return StructureEquation(
        tuple(_Term(a, tuple((mu, Fraction(w)) for mu, w in om.items())) for a, om in terms),
        tuple(fixed))


STRUCTURE = (
    _eq([(0, {1: 2, 4: 1}), (1, {2: 1})], [(2, 3)]),
    _eq([(0, {3: 1}), (1, {1: 1, 4: 2})], [(2, 4)]),
    _eq([(0, {5: 1}), (1, {6: 1}), (2, {1: 1, 4: 1})], [(3, 4)]),
    _eq([(0, {7: 1}), (2, {6: Fraction(4, 3)}), (3, {1: 1}), (4, {2: 1})]),
    _eq([(1, {7: 1}), (2, {5: Fraction(-4, 3)}), (3, {3: 1}), (4, {4: 1})]),
)
"""Normal form of ``dθ¹ … dθ⁵`` in terms of ``Ω1 … Ω7``"""

OMEGA_COUNT = 7


class StructureForms(typing.NamedTuple):
    """A particular solution of the structure equations"""
    omegas: typing.Tuple[DifferentialForm, ...]
    """``Ω1 … Ω7`` on the coordinate chart"""
    coefficients: typing.Tuple[typing.Tuple[RationalFunction, ...], ...]
    """θ-basis components of each ``Ω_μ``"""
    solution_space_dim: int
    residual_zero: bool


def structure_residual(c: Coframe, omegas: typing.Sequence[DifferentialForm]) -> typing.List[DifferentialForm]:
    """``dθ^i`` minus the right-hand side rebuilt from coordinate wedges"""
    out = []
    for i, eq in enumerate(STRUCTURE):
        acc = exterior_derivative(c.forms[i])
        for term in eq.terms:
            combo = zero_form(c.table, 1)
            for mu, weight in term.omegas:
                combo = combo + omegas[mu - 1] * weight
            acc = acc - wedge(c.forms[term.left], combo)
        for a, b in eq.fixed:
            acc = acc - wedge(c.forms[a], c.forms[b])
        out.append(acc)
    return out


def solve_structure_forms(c: Coframe) -> StructureForms:
    """Solve the linear system for ``Ω_μ = Σ_k w_μk θ^k``

    Each ``dθ^i`` contributes one equation per ``θ^l∧θ^m``, ``l < m``.

    :raises NotAdapted: if the coframe does not fit the normal form
    """
    n = c.dimension
    table = c.table
    pairs = [(l, m) for l in range(n) for m in range(l + 1, n)]
    row_of = {p: r for r, p in enumerate(pairs)}
    nunk = OMEGA_COUNT * n
    matrix = []
    rhs = []
    for i, eq in enumerate(STRUCTURE):
        rows = [[Fraction(0)] * nunk for _ in pairs]
        values = [table.zero for _ in pairs]
        for (l, m), val in express_in_coframe(exterior_derivative(c.forms[i]), c).items():
            values[row_of[l, m]] = val
        for a, b in eq.fixed:
            values[row_of[a, b]] = values[row_of[a, b]] - 1
        for term in eq.terms:
            for mu, weight in term.omegas:
                for k in range(n):
                    if k == term.left:
                        continue
                    key, sign = ((term.left, k), 1) if term.left < k else ((k, term.left), -1)
                    rows[row_of[key]][(mu - 1) * n + k] += sign * weight
        matrix.extend([[table.constant(v) for v in row] for row in rows])
        rhs.extend([[v] for v in values])

    logger.debug("Solving %d structure equations in %d unknowns", len(matrix), nunk)
    try:
        sol = linalg.solve(matrix, rhs)
    except InconsistentSystem:
        raise NotAdapted("Coframe does not satisfy the structure equations")
    column = sol.columns[0]
    coefficients = tuple(tuple(column[mu * n + k] for k in range(n)) for mu in range(OMEGA_COUNT))
    omegas = []
    for row in coefficients:
        form = zero_form(table, 1)
        for k, val in enumerate(row):
            if val:
                form = form + c.forms[k] * val
        omegas.append(form)
    residual_zero = not any(structure_residual(c, omegas))
    logger.info("Structure forms solved: nullity %d, residual zero %s", sol.nullity, residual_zero)
    return StructureForms(tuple(omegas), coefficients, sol.nullity, residual_zero)


def a5_terms(f2: typing.Any, f3: typing.Any, f4: typing.Any, f5: typing.Any,
             f6: typing.Any) -> typing.List[typing.Any]:
    """The five signed monomials of :func:`a5_expression`"""
    return [f6 * f2 ** 3 * 10, -(f2 ** 2 * f3 * f5 * 80), -(f2 ** 2 * f4 ** 2 * 51),
            f2 * f3 ** 2 * f4 * 336, -(f3 ** 4 * 224)]


def a5_expression(f2: typing.Any, f3: typing.Any, f4: typing.Any, f5: typing.Any, f6: typing.Any) -> typing.Any:
    """``10 f6 f2³ - 80 f2² f3 f5 - 51 f2² f4² + 336 f2 f3² f4 - 224 f3⁴``

    Works on scalars, fractions and floats alike.
    """
    return sum(a5_terms(f2, f3, f4, f5, f6))


def a5_residual(spec: MongeSpec) -> RationalFunction:
    """The quartic numerator evaluated on the jets of ``f``"""
    return typing.cast(RationalFunction, a5_expression(*(spec.jet(k) for k in range(2, 7))))


def monomial_a5(m: typing.Any) -> Fraction:
    """``P(m)`` with ``a5(q^m) = P(m) q^(4m-12)``"""
    m = Fraction(m)
    return typing.cast(Fraction, a5_expression(*(falling_factorial(m, k) for k in range(2, 7))))


def quartic_fq(spec: MongeSpec) -> CartanQuartic:
    """Cartan quartic of the ``f(q)`` distribution

    :raises DegenerateDistribution: if ``f''`` vanishes identically
    """
    logger.debug("Quartic pipeline for %s", spec)
    return quartic_of_coframe(adapted_coframe_fq(spec))
