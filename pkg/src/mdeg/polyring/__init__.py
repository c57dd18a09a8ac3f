"""Multivariate polynomial engine: orders, Groebner bases, ideal operations."""

from .ring import GREVLEX, LEX, MonomialOrder, VarSpec, x_name
from .poly import MultiPoly
from .groebner import (
    Caps,
    DEFAULT_CAPS,
    ResourceLimitExceeded,
    buchberger,
    is_groebner,
    normal_form,
    spolynomial,
)
from .ideal import (
    EmptySchemeError,
    IdealHandle,
    colon,
    eliminate,
    ideal_contains,
    ideal_equal,
    initial_ideal,
    intersect,
    intersect_all,
    is_monomial_ideal,
    is_saturated,
    saturate,
    saturate_by_auxiliary,
    specialize_t0,
)
from .hilbert import ChowClass, codimension, dimension, hilbert_function, kpolynomial, multidegree
