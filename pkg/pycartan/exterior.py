"""Exterior algebra of differential forms on a coordinate chart

A :class:`DifferentialForm` stores its coefficients on strictly increasing
tuples of coordinate positions, so ``dq∧dx`` on the chart ``(x,y,p,q,z)`` is
kept as ``-dx∧dq``:

>>> from pycartan.symcore import Chart, symbol_table
>>> from pycartan.exterior import differential, wedge
>>> table = symbol_table(Chart('monge', ('x', 'y', 'p', 'q', 'z')))
>>> form = wedge(differential(table, 'q'), differential(table, 'x'))
>>> form.components
{(0, 3): RationalFunction('-1')}

Coefficients are :class:`~pycartan.symcore.RationalFunction` values of one
:class:`~pycartan.symcore.SymbolTable`; combining forms of different tables
raises :class:`~pycartan.errors.ChartMismatch`.
"""
import itertools
import typing
from fractions import Fraction

from . import linalg
from .errors import ChartMismatch, DegreeMismatch, SingularCoframe, SingularMatrix
from .symcore import RationalFunction, SymbolTable, partial_derivative


Index = typing.Tuple[int, ...]
Scalar = typing.Union[RationalFunction, int, Fraction]


def _sort_sign(indices: typing.Sequence[int]) -> typing.Tuple[int, Index]:
    """Sign of the sorting permutation and the sorted tuple (sign 0 on repeats)"""
    if len(set(indices)) != len(indices):
        return 0, ()
    inversions = sum(1 for a, b in itertools.combinations(indices, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


class DifferentialForm:
    """Homogeneous differential form

    :param table: scalar table (and chart) of the coefficients
    :param degree: form degree; past the chart dimension only zero remains
    :param components: coefficient per coordinate index tuple; unsorted tuples
        are reordered with the matching sign and zero entries dropped
    """
    __slots__ = ('table', 'degree', 'components')

    def __init__(self, table: SymbolTable, degree: int,
                 components: typing.Optional[typing.Mapping[Index, Scalar]] = None):
        dim = table.chart.dimension
        if degree < 0:
            raise DegreeMismatch("Negative degree {}".format(degree))
        self.table = table
        self.degree = degree
        comps: typing.Dict[Index, RationalFunction] = {}
        for key, coeff in (components or {}).items():
            if len(key) != degree or any(not 0 <= i < dim for i in key):
                raise ValueError("Invalid index {} for a {}-form".format(key, degree))
            sign, ordered = _sort_sign(key)
            if not sign:
                continue
            value = table.zero + coeff
            comps[ordered] = comps[ordered] + sign * value if ordered in comps else sign * value
        self.components = {k: v for k, v in sorted(comps.items()) if v}

    @classmethod
    def scalar(cls, value: RationalFunction) -> 'DifferentialForm':
        """0-form with value ``value``"""
        return cls(value.table, 0, {(): value})

    @property
    def chart(self) -> typing.Any:
        """Coordinate chart of the form"""
        return self.table.chart

    def coefficient(self, *names: str) -> RationalFunction:
        """Coefficient of ``d<names[0]>∧d<names[1]>…`` with sign"""
        coords = self.table.chart.coordinates
        sign, key = _sort_sign([coords.index(n) for n in names])
        if len(names) != self.degree:
            raise DegreeMismatch("Expected {} coordinate names".format(self.degree))
        if not sign:
            return self.table.zero
        return sign * self.components.get(key, self.table.zero)

    def _check(self, other: 'DifferentialForm') -> None:
        if other.table != self.table:
            raise ChartMismatch("Forms on {} and {} cannot be combined".format(
                self.table.chart.name, other.table.chart.name))
        if other.degree != self.degree:
            raise DegreeMismatch("Cannot add a {}-form to a {}-form".format(
                other.degree, self.degree))

    def __add__(self, other: 'DifferentialForm') -> 'DifferentialForm':
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self._check(other)
        comps = dict(self.components)
        for key, val in other.components.items():
            comps[key] = comps[key] + val if key in comps else val
        return DifferentialForm(self.table, self.degree, comps)

    def __sub__(self, other: 'DifferentialForm') -> 'DifferentialForm':
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> 'DifferentialForm':
        return DifferentialForm(self.table, self.degree,
                                {k: -v for k, v in self.components.items()})

    def __mul__(self, scalar: Scalar) -> 'DifferentialForm':
        if isinstance(scalar, DifferentialForm):
            return NotImplemented
        return DifferentialForm(self.table, self.degree,
                                {k: v * scalar for k, v in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (self.table == other.table and self.degree == other.degree
                and self.components == other.components)

    def __hash__(self) -> int:
        return hash((self.degree, tuple(self.components.items())))

    def __bool__(self) -> bool:
        return bool(self.components)

    def __repr__(self) -> str:
        coords = self.table.chart.coordinates
        if not self.components:
            return '0'
        parts = []
        for key, val in self.components.items():
            basis = '∧'.join('d' + coords[i] for i in key)
            parts.append('({})'.format(val) + ('*' + basis if basis else ''))
        return ' + '.join(parts)


def zero_form(table: SymbolTable, degree: int) -> DifferentialForm:
    """Zero ``degree``-form"""
    return DifferentialForm(table, degree)


def differential(table: SymbolTable, name: str) -> DifferentialForm:
    """Coordinate differential ``d<name>``"""
    return DifferentialForm(table, 1, {(table.chart.coordinates.index(name),): 1})


def one_form(table: SymbolTable, coefficients: typing.Mapping[str, Scalar]) -> DifferentialForm:
    """1-form ``Σ c_name d<name>``"""
    coords = table.chart.coordinates
    return DifferentialForm(table, 1, {(coords.index(n),): c for n, c in coefficients.items()})


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Exterior product ``a∧b``"""
    if a.table != b.table:
        raise ChartMismatch("Forms on {} and {} cannot be combined".format(
            a.table.chart.name, b.table.chart.name))
    degree = a.degree + b.degree
    comps: typing.Dict[Index, RationalFunction] = {}
    for ka, va in a.components.items():
        for kb, vb in b.components.items():
            sign, key = _sort_sign(ka + kb)
            if not sign:
                continue
            term = va * vb if sign > 0 else -(va * vb)
            comps[key] = comps[key] + term if key in comps else term
    return DifferentialForm(a.table, degree, comps)


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    """Exterior derivative ``da``

    Coefficients are differentiated with
    :func:`~pycartan.symcore.partial_derivative`, so jets obey the chain rule.
    """
    dim = a.table.chart.dimension
    if a.degree >= dim:
        raise DegreeMismatch("Cannot differentiate a {}-form on a {}-chart".format(a.degree, dim))
    coords = a.table.chart.coordinates
    comps: typing.Dict[Index, RationalFunction] = {}
    for key, val in a.components.items():
        for mu, name in enumerate(coords):
            if mu in key:
                continue
            deriv = partial_derivative(val, name)
            if not deriv:
                continue
            # dx^mu moves past the indices of key smaller than mu
            sign, ordered = _sort_sign((mu,) + key)
            term = deriv if sign > 0 else -deriv
            comps[ordered] = comps[ordered] + term if ordered in comps else term
    return DifferentialForm(a.table, a.degree + 1, comps)


class Coframe:
    """Ordered coframe ``θ¹…θⁿ`` with a constant frame metric

    :param forms: ``n`` 1-forms on an ``n``-chart
    :param metric: constant symmetric matrix ``g_ij``; defaults to
        :data:`CONFORMAL_METRIC` on 5-charts
    :raises SingularCoframe: if the forms are linearly dependent
    """
    def __init__(self, forms: typing.Sequence[DifferentialForm],
                 metric: typing.Optional[typing.Sequence[typing.Sequence[Fraction]]] = None):
        if not forms:
            raise ValueError("Empty coframe")
        table = forms[0].table
        dim = table.chart.dimension
        if len(forms) != dim:
            raise ValueError("A coframe on {} needs {} forms".format(table.chart.name, dim))
        for form in forms:
            if form.table != table:
                raise ChartMismatch("Coframe forms must share one chart")
            if form.degree != 1:
                raise DegreeMismatch("Coframe forms must be 1-forms")
        self.table = table
        self.forms = tuple(forms)
        self.matrix = [[form.components.get((mu,), table.zero) for mu in range(dim)]
                       for form in forms]
        """Rows are the forms in the coordinate cobasis"""
        try:
            self.inverse = linalg.inverse(self.matrix)
        except SingularMatrix:
            raise SingularCoframe("Coframe forms are linearly dependent")
        if metric is None:
            if dim != 5:
                raise ValueError("No default metric for dimension {}".format(dim))
            metric = CONFORMAL_METRIC
        self.metric = tuple(tuple(Fraction(v) for v in row) for row in metric)
        self._minors: typing.Dict[typing.Tuple[Index, Index], RationalFunction] = {}

    @property
    def dimension(self) -> int:
        """Number of forms"""
        return len(self.forms)

    def determinant(self) -> RationalFunction:
        """Determinant of the coefficient matrix"""
        return typing.cast(RationalFunction, linalg.determinant(self.matrix))

    def _minor(self, rows: Index, cols: Index) -> RationalFunction:
        key = (rows, cols)
        if key not in self._minors:
            sub = [[self.inverse[r][c] for c in cols] for r in rows]
            self._minors[key] = typing.cast(RationalFunction, linalg.determinant(sub))
        return self._minors[key]


CONFORMAL_METRIC = tuple(tuple(Fraction(v) for v in row) for row in (
    (0, 0, 0, 0, 1),
    (0, 0, 0, -1, 0),
    (0, 0, Fraction(4, 3), 0, 0),
    (0, -1, 0, 0, 0),
    (1, 0, 0, 0, 0),
))
"""``θ¹⊗θ⁵ + θ⁵⊗θ¹ − θ²⊗θ⁴ − θ⁴⊗θ² + 4/3 θ³⊗θ³``"""


def coordinate_coframe(table: SymbolTable,
                       metric: typing.Optional[typing.Sequence[typing.Sequence[Fraction]]] = None
                       ) -> Coframe:
    """Coframe of the coordinate differentials"""
    return Coframe([differential(table, n) for n in table.chart.coordinates], metric)


def express_in_coframe(a: DifferentialForm, c: Coframe) -> typing.Dict[Index, RationalFunction]:
    """Components of ``a`` on the increasing wedges of the coframe

    ``dx^μ = Σ_i (B⁻¹)^μ_i θ^i``, so a coordinate wedge contributes the
    matching minor of ``B⁻¹``.
    """
    if a.table != c.table:
        raise ChartMismatch("Form and coframe live on different charts")
    if a.degree == 0:
        return {(): a.components[()]} if a.components else {}
    out: typing.Dict[Index, RationalFunction] = {}
    for target in itertools.combinations(range(c.dimension), a.degree):
        acc = c.table.zero
        for key, val in a.components.items():
            minor = c._minor(key, target)  #pylint: disable=protected-access
            if minor:
                acc = acc + val * minor
        if acc:
            out[target] = acc
    return out


def reconstruct(components: typing.Mapping[Index, Scalar], c: Coframe,
                degree: typing.Optional[int] = None) -> DifferentialForm:
    """Form ``Σ α_J θ^J`` from coframe components"""
    if degree is None:
        if not components:
            raise ValueError("Degree of an empty component map is ambiguous")
        degree = len(next(iter(components)))
    total = zero_form(c.table, degree)
    for key, val in components.items():
        term = DifferentialForm.scalar(c.table.zero + val)
        for i in key:
            term = wedge(term, c.forms[i])
        total = total + term
    return total


def frame_derivatives(r: RationalFunction, c: Coframe) -> typing.List[RationalFunction]:
    """Derivatives ``e_l(r)`` along the frame dual to ``c``"""
    comps = express_in_coframe(exterior_derivative(DifferentialForm.scalar(r)), c)
    return [comps.get((l,), c.table.zero) for l in range(c.dimension)]


class SymmetricTensor2:
    """Symmetric 2-tensor ``Σ g_ab dx^a⊗dx^b`` in the coordinate basis"""
    __slots__ = ('table', 'components')

    def __init__(self, table: SymbolTable,
                 components: typing.Sequence[typing.Sequence[Scalar]]):
        dim = table.chart.dimension
        if len(components) != dim or any(len(r) != dim for r in components):
            raise ValueError("Components must form a {0}x{0} matrix".format(dim))
        comps = tuple(tuple(table.zero + v for v in row) for row in components)
        for i in range(dim):
            for j in range(i):
                if comps[i][j] != comps[j][i]:
                    raise ValueError("Components are not symmetric")
        self.table = table
        self.components = comps

    @classmethod
    def symmetric_product(cls, a: DifferentialForm, b: DifferentialForm) -> 'SymmetricTensor2':
        """``a⊗b + b⊗a``, so that ``a`` times itself is ``a²``"""
        for form in (a, b):
            if form.degree != 1:
                raise DegreeMismatch("Symmetric products need 1-forms")
        if a.table != b.table:
            raise ChartMismatch("Forms live on different charts")
        dim = a.table.chart.dimension
        zero = a.table.zero
        va = [a.components.get((i,), zero) for i in range(dim)]
        vb = [b.components.get((i,), zero) for i in range(dim)]
        return cls(a.table, [[va[i] * vb[j] + vb[i] * va[j] for j in range(dim)]
                             for i in range(dim)])

    def component(self, a: str, b: str) -> RationalFunction:
        """Component ``g_ab`` by coordinate names"""
        coords = self.table.chart.coordinates
        return self.components[coords.index(a)][coords.index(b)]

    def __add__(self, other: 'SymmetricTensor2') -> 'SymmetricTensor2':
        if not isinstance(other, SymmetricTensor2):
            return NotImplemented
        if other.table != self.table:
            raise ChartMismatch("Tensors live on different charts")
        return SymmetricTensor2(self.table, [[a + b for a, b in zip(ra, rb)]
                                             for ra, rb in zip(self.components, other.components)])

    def __mul__(self, scalar: Scalar) -> 'SymmetricTensor2':
        return SymmetricTensor2(self.table, [[a * scalar for a in row] for row in self.components])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymmetricTensor2):
            return NotImplemented
        return self.table == other.table and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return 'SymmetricTensor2({})'.format(
            [[str(v) for v in row] for row in self.components])


def metric_from_null_pairing(t1: DifferentialForm, t2: DifferentialForm,
                             t3: DifferentialForm, t4: DifferentialForm) -> SymmetricTensor2:
    """``τ¹⊗τ² + τ²⊗τ¹ + τ³⊗τ⁴ + τ⁴⊗τ³``"""
    for form in (t1, t2, t3, t4):
        if form.degree != 1:
            raise DegreeMismatch("Null pairing needs 1-forms, got a {}-form".format(form.degree))
    return (SymmetricTensor2.symmetric_product(t1, t2)
            + SymmetricTensor2.symmetric_product(t3, t4))
