"""Levi-Civita connection, curvature and the Cartan quartic of a coframe

All tensors are stored in the θ-basis of a :class:`~pycartan.exterior.Coframe`
with 0-based indices.  Conventions:

* ``dθ^i = -Γ^i_j∧θ^j`` and ``Γ^i_j = Γ^i_jk θ^k``
* ``R^i_j = dΓ^i_j + Γ^i_k∧Γ^k_j = ½ R^i_jkl θ^k∧θ^l``
* ``Ric_jl = R^i_jil``, ``R_ijkl = g_ip R^p_jkl``

The quartic is read off the lowered Weyl tensor with the 1-based recipe
``A1=W4114, A2=W4124, A3=W4125, A4=W4225, A5=W5225``.
"""
import itertools
import logging
import typing
from fractions import Fraction

from . import linalg
from .errors import SingularMatrix, SingularMetric
from .exterior import (Coframe, DifferentialForm, exterior_derivative, express_in_coframe,
                       frame_derivatives, wedge, zero_form)
from .symcore import RationalFunction


logger = logging.getLogger(__name__)

Scalar = typing.Union[RationalFunction, int, Fraction]
Table3 = typing.List[typing.List[typing.List[RationalFunction]]]


def _scaled(c: Fraction, r: RationalFunction) -> RationalFunction:
    return r if c == 1 else r * c


def inverse_metric(c: Coframe) -> typing.List[typing.List[Fraction]]:
    """Inverse of the frame metric ``g^ij``

    :raises SingularMetric: on a degenerate metric
    """
    try:
        return linalg.inverse([list(row) for row in c.metric])
    except SingularMatrix:
        raise SingularMetric("Frame metric is degenerate")


def structure_functions(c: Coframe) -> Table3:
    """``c^i_jk`` with ``dθ^i = ½ c^i_jk θ^j∧θ^k``"""
    n = c.dimension
    zero = c.table.zero
    out = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, form in enumerate(c.forms):
        for (j, k), val in express_in_coframe(exterior_derivative(form), c).items():
            out[i][j][k] = val
            out[i][k][j] = -val
    return out


class ConnectionForms:
    """Connection 1-forms ``Γ^i_j`` of a coframe

    :param coframe: the coframe the forms are expanded in
    :param coefficients: ``Γ^i_jk``, so that ``Γ^i_j = Σ_k Γ^i_jk θ^k``
    :param structure: ``c^i_jk`` of the coframe
    """
    def __init__(self, coframe: Coframe, coefficients: Table3, structure: Table3):
        self.coframe = coframe
        self.coefficients = coefficients
        self.structure = structure
        self._forms: typing.Optional[typing.List[typing.List[DifferentialForm]]] = None

    @property
    def forms(self) -> typing.List[typing.List[DifferentialForm]]:
        """``Γ^i_j`` as 1-forms on the coordinate chart"""
        if self._forms is None:
            n = self.coframe.dimension
            forms = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = zero_form(self.coframe.table, 1)
                    for k in range(n):
                        coeff = self.coefficients[i][j][k]
                        if coeff:
                            acc = acc + self.coframe.forms[k] * coeff
                    row.append(acc)
                forms.append(row)
            self._forms = forms
        return self._forms

    def is_zero(self) -> bool:
        """True for the flat connection"""
        return not any(v for plane in self.coefficients for row in plane for v in row)


def connection_forms(c: Coframe) -> ConnectionForms:
    """The torsion-free connection compatible with the frame metric

    With ``c_ijk = g_ip c^p_jk`` the lowered coefficients are
    ``Γ_ijk = ½(c_ijk + c_jki - c_kij)``; raising the first index gives
    ``Γ^i_jk``.

    :raises SingularMetric: on a degenerate metric
    """
    n = c.dimension
    zero = c.table.zero
    g = c.metric
    ginv = inverse_metric(c)
    logger.debug("Expanding the structure functions of a %d-coframe", n)
    cs = structure_functions(c)

    lowered = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        acc = zero
        for p in range(n):
            if g[i][p] and cs[p][j][k]:
                acc = acc + _scaled(g[i][p], cs[p][j][k])
        lowered[i][j][k] = acc

    half = Fraction(1, 2)
    gamma_low = [[[(lowered[i][j][k] + lowered[j][k][i] - lowered[k][i][j]) * half
                   for k in range(n)] for j in range(n)] for i in range(n)]
    gamma = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        acc = zero
        for p in range(n):
            if ginv[i][p] and gamma_low[p][j][k]:
                acc = acc + _scaled(ginv[i][p], gamma_low[p][j][k])
        gamma[i][j][k] = acc
    logger.debug("Connection computed")
    return ConnectionForms(c, gamma, cs)


def torsion_residual(gamma: ConnectionForms) -> typing.List[DifferentialForm]:
    """``dθ^i + Γ^i_j∧θ^j`` built from forms and wedges; all zero when torsion-free"""
    c = gamma.coframe
    out = []
    for i, form in enumerate(c.forms):
        acc = exterior_derivative(form)
        for j in range(c.dimension):
            acc = acc + wedge(gamma.forms[i][j], c.forms[j])
        out.append(acc)
    return out


def metricity_residual(gamma: ConnectionForms) -> typing.Dict[typing.Tuple[int, int], DifferentialForm]:
    """Nonzero ``Γ_ij + Γ_ji`` with ``Γ_ij = g_ik Γ^k_j``"""
    c = gamma.coframe
    n = c.dimension
    g = c.metric

    def lowered(i: int, j: int) -> DifferentialForm:
        acc = zero_form(c.table, 1)
        for k in range(n):
            if g[i][k]:
                acc = acc + gamma.forms[k][j] * g[i][k]
        return acc

    out = {}
    for i in range(n):
        for j in range(i, n):
            res = lowered(i, j) + lowered(j, i)
            if res:
                out[i, j] = res
    return out


def curvature_form(gamma: ConnectionForms, i: int, j: int) -> DifferentialForm:
    """Curvature 2-form ``dΓ^i_j + Γ^i_k∧Γ^k_j`` on the coordinate chart"""
    forms = gamma.forms
    acc = exterior_derivative(forms[i][j])
    for k in range(gamma.coframe.dimension):
        acc = acc + wedge(forms[i][k], forms[k][j])
    return acc


class RiemannTensor:
    """Riemann components ``R^i_jkl`` in the θ-basis

    Only ``k < l`` is stored in :attr:`components`; :meth:`component` serves
    every index combination.
    """
    def __init__(self, coframe: Coframe,
                 components: typing.Dict[typing.Tuple[int, int, int, int], RationalFunction]):
        self.coframe = coframe
        self.components = components

    def component(self, i: int, j: int, k: int, l: int) -> RationalFunction:
        """``R^i_jkl``"""
        if k == l:
            return self.coframe.table.zero
        if k < l:
            return self.components[i, j, k, l]
        return -self.components[i, j, l, k]

    def lowered(self, i: int, j: int, k: int, l: int) -> RationalFunction:
        """``R_ijkl = g_ip R^p_jkl``"""
        g = self.coframe.metric
        acc = self.coframe.table.zero
        for p in range(self.coframe.dimension):
            if g[i][p]:
                acc = acc + _scaled(g[i][p], self.component(p, j, k, l))
        return acc

    def is_zero(self) -> bool:
        """True for a flat connection"""
        return not any(self.components.values())


def riemann(gamma: ConnectionForms, c: Coframe) -> RiemannTensor:
    """Components of ``R^i_j = dΓ^i_j + Γ^i_k∧Γ^k_j``

    ``R^i_jlm = e_l(Γ^i_jm) - e_m(Γ^i_jl) + Γ^i_jk c^k_lm
    + Γ^i_kl Γ^k_jm - Γ^i_km Γ^k_jl`` with ``e_l`` the dual frame.
    """
    if gamma.coframe is not c and gamma.coframe.forms != c.forms:
        raise ValueError("Connection was computed for another coframe")
    n = c.dimension
    zero = c.table.zero
    G = gamma.coefficients
    cs = gamma.structure
    logger.debug("Differentiating %d connection coefficients", n ** 3)
    derivs = [[[frame_derivatives(G[i][j][m], c) if G[i][j][m] else [zero] * n
                for m in range(n)] for j in range(n)] for i in range(n)]

    comps = {}
    for i, j in itertools.product(range(n), repeat=2):
        for l, m in itertools.combinations(range(n), 2):
            acc = derivs[i][j][m][l] - derivs[i][j][l][m]
            for k in range(n):
                if G[i][j][k] and cs[k][l][m]:
                    acc = acc + G[i][j][k] * cs[k][l][m]
                if G[i][k][l] and G[k][j][m]:
                    acc = acc + G[i][k][l] * G[k][j][m]
                if G[i][k][m] and G[k][j][l]:
                    acc = acc - G[i][k][m] * G[k][j][l]
            comps[i, j, l, m] = acc
    logger.debug("Riemann tensor computed")
    return RiemannTensor(c, comps)


def bianchi_residual(r: RiemannTensor) -> typing.Dict[typing.Tuple[int, int, int, int], RationalFunction]:
    """Nonzero ``R^i_jkl + R^i_klj + R^i_ljk`` over ``j < k < l``"""
    n = r.coframe.dimension
    out = {}
    for i in range(n):
        for j, k, l in itertools.combinations(range(n), 3):
            res = r.component(i, j, k, l) + r.component(i, k, l, j) + r.component(i, l, j, k)
            if res:
                out[i, j, k, l] = res
    return out


def ricci(r: RiemannTensor) -> typing.List[typing.List[RationalFunction]]:
    """``Ric_jl = R^i_jil``"""
    n = r.coframe.dimension
    out = []
    for j in range(n):
        row = []
        for l in range(n):
            acc = r.coframe.table.zero
            for i in range(n):
                acc = acc + r.component(i, j, i, l)
            row.append(acc)
        out.append(row)
    return out


class WeylComponents:
    """Lowered Weyl tensor, filled lazily

    :param riemann: the Riemann tensor
    :param schouten: ``P_jl``
    """
    def __init__(self, riemann: RiemannTensor, schouten: typing.List[typing.List[RationalFunction]]):
        self.riemann = riemann
        self.schouten = schouten
        self.metric = riemann.coframe.metric
        self._memo: typing.Dict[typing.Tuple[int, int, int, int], RationalFunction] = {}

    @property
    def dimension(self) -> int:
        """Frame dimension"""
        return self.riemann.coframe.dimension

    def component(self, i: int, j: int, k: int, l: int) -> RationalFunction:
        """``W_ijkl``"""
        key = (i, j, k, l)
        if key not in self._memo:
            g, P = self.metric, self.schouten
            acc = self.riemann.lowered(i, j, k, l)
            for coeff, val in ((g[i][k], P[j][l]), (-g[i][l], P[j][k]),
                               (g[j][l], P[i][k]), (-g[j][k], P[i][l])):
                if coeff and val:
                    acc = acc - val * coeff
            self._memo[key] = acc
        return self._memo[key]

    def table(self) -> typing.Dict[typing.Tuple[int, int, int, int], RationalFunction]:
        """Every nonzero ``W_ijkl``"""
        n = self.dimension
        out = {}
        for key in itertools.product(range(n), repeat=4):
            val = self.component(*key)
            if val:
                out[key] = val
        return out

    def trace(self, j: int, l: int) -> RationalFunction:
        """``g^ik W_ijkl``"""
        ginv = inverse_metric(self.riemann.coframe)
        n = self.dimension
        acc = self.riemann.coframe.table.zero
        for i, k in itertools.product(range(n), repeat=2):
            if ginv[i][k]:
                acc = acc + _scaled(ginv[i][k], self.component(i, j, k, l))
        return acc

    def trace_residuals(self) -> typing.Dict[typing.Tuple[int, int], RationalFunction]:
        """Nonzero traces; empty for a genuine Weyl tensor"""
        n = self.dimension
        out = {}
        for j, l in itertools.product(range(n), repeat=2):
            val = self.trace(j, l)
            if val:
                out[j, l] = val
        return out

    def is_zero(self) -> bool:
        """True when the whole table vanishes"""
        return not self.table()


def weyl(r: RiemannTensor, g: typing.Optional[typing.Sequence[typing.Sequence[Fraction]]] = None
         ) -> WeylComponents:
    """Weyl tensor of a 5-dimensional frame metric

    ``P = (Ric - s g / 8) / 3`` and
    ``W_ijkl = R_ijkl - (g_ik P_jl - g_il P_jk + g_jl P_ik - g_jk P_il)``.

    :param g: the frame metric; must match the coframe of ``r`` when given
    """
    c = r.coframe
    if g is not None and tuple(tuple(Fraction(v) for v in row) for row in g) != c.metric:
        raise ValueError("Metric differs from the coframe metric")
    if c.dimension != 5:
        raise ValueError("Weyl decomposition is specialised to dimension 5")
    n = c.dimension
    ginv = inverse_metric(c)
    ric = ricci(r)
    scalar = c.table.zero
    for j, l in itertools.product(range(n), repeat=2):
        if ginv[j][l]:
            scalar = scalar + _scaled(ginv[j][l], ric[j][l])
    logger.debug("Scalar curvature: %s", scalar)
    schouten = [[(ric[j][l] - scalar * (c.metric[j][l] / 8)) / 3 for l in range(n)]
                for j in range(n)]
    return WeylComponents(r, schouten)


class CartanQuartic(typing.NamedTuple):
    """``C(ζ) = A1 + 4 A2 ζ + 6 A3 ζ² + 4 A4 ζ³ + A5 ζ⁴``"""
    a1: RationalFunction
    a2: RationalFunction
    a3: RationalFunction
    a4: RationalFunction
    a5: RationalFunction

    def coefficients(self) -> typing.Tuple[RationalFunction, ...]:
        """Coefficients of ``1, ζ, ζ², ζ³, ζ⁴``"""
        return (self.a1, self.a2 * 4, self.a3 * 6, self.a4 * 4, self.a5)

    def evaluate(self, zeta: Scalar) -> RationalFunction:
        """``C(ζ)`` by Horner's rule"""
        acc = self.a5 * 0
        for coeff in reversed(self.coefficients()):
            acc = acc * zeta + coeff
        return acc

    def is_zero(self) -> bool:
        """True when all five coefficients vanish"""
        return not any(self)


def cartan_quartic(w: WeylComponents) -> CartanQuartic:
    """Quartic coefficients of an adapted coframe"""
    quartic = CartanQuartic(w.component(3, 0, 0, 3), w.component(3, 0, 1, 3),
                            w.component(3, 0, 1, 4), w.component(3, 1, 1, 4),
                            w.component(4, 1, 1, 4))
    logger.info("Cartan quartic: A5 = %s", quartic.a5)
    return quartic


def quartic_of_coframe(c: Coframe) -> CartanQuartic:
    """Connection, Riemann, Weyl and quartic of ``c`` in one pass"""
    gamma = connection_forms(c)
    return cartan_quartic(weyl(riemann(gamma, c)))
