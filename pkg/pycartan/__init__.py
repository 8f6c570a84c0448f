"""Top module of pycartan"""
from .symcore import RationalFunction, normalize, partial_derivative, substitute, evaluate_numeric
from .exterior import DifferentialForm, Coframe, wedge, exterior_derivative, express_in_coframe
from .curvature import CartanQuartic, cartan_quartic
from .dist235 import MongeSpec, quartic_fq
from .twistor import HeavenlySpec, quartic_theta

__all__ = ['RationalFunction', 'normalize', 'partial_derivative', 'substitute',
           'evaluate_numeric', 'DifferentialForm', 'Coframe', 'wedge', 'exterior_derivative',
           'express_in_coframe', 'CartanQuartic', 'cartan_quartic', 'MongeSpec', 'quartic_fq',
           'HeavenlySpec', 'quartic_theta']
