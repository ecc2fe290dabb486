"""Generalized dyadic maximal operators with infinite-product structure on finite dyadic models."""

from .dyadic_model import EXACT, FLOAT, CubeId, DyadicModel
from .exponents import ExponentSequence, Geometric, conjugate_product, harmonic_sum
from .function_vectors import FunctionVector, WeightVector, make_function_vector, make_weight_vector
from .operators import maximal, product_maximal

__all__ = [
    "EXACT",
    "FLOAT",
    "CubeId",
    "DyadicModel",
    "ExponentSequence",
    "FunctionVector",
    "Geometric",
    "WeightVector",
    "conjugate_product",
    "harmonic_sum",
    "make_function_vector",
    "make_weight_vector",
    "maximal",
    "product_maximal",
]
