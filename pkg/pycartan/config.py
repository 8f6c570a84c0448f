"""Runtime settings of pycartan

Every value has a default and can be overridden through an environment
variable, which is read each time :func:`current` is called.
"""
import os
import typing


class Settings(typing.NamedTuple):
    """Tunable limits shared by the symbolic and numeric layers"""
    jet_order_cap: int = 12
    """Highest total differentiation order a jet symbol may carry

    Overridden by ``PYCARTAN_JET_ORDER_CAP``.
    """
    denominator_floor: float = 1e-300
    """Smallest denominator magnitude accepted by numeric evaluation

    Overridden by ``PYCARTAN_DENOMINATOR_FLOOR``.
    """
    guard_epsilon: float = 1e-9
    """Guard on the leading derivative of the 7th/8th order ODEs

    Overridden by ``PYCARTAN_GUARD_EPSILON``.
    """


_ENVIRON: typing.Dict[str, typing.Tuple[str, typing.Callable[[str], typing.Any]]] = {
    'jet_order_cap': ('PYCARTAN_JET_ORDER_CAP', int),
    'denominator_floor': ('PYCARTAN_DENOMINATOR_FLOOR', float),
    'guard_epsilon': ('PYCARTAN_GUARD_EPSILON', float),
}


def current(environ: typing.Optional[typing.Mapping[str, str]] = None) -> Settings:
    """Return settings with environment overrides applied

    :param environ: mapping to read instead of :data:`os.environ`
    """
    if environ is None:
        environ = os.environ
    overrides: typing.Dict[str, typing.Any] = {}
    for field, (var, conv) in _ENVIRON.items():
        if var not in environ:
            continue
        try:
            overrides[field] = conv(environ[var])
        except ValueError:
            raise ValueError("Invalid value {} for {}".format(repr(environ[var]), var))
    settings = Settings(**overrides)
    if settings.jet_order_cap < 0:
        raise ValueError("PYCARTAN_JET_ORDER_CAP must be non-negative")
    return settings
