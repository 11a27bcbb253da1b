"""Principal well-rounded ideals of real quadratic fields."""
from .arith import bezout_squares, is_squarefree
from .generate import GenClass, alg1, alg2, alg3
from .pell import fundamental_unit, has_pwr, is_principal_cycle, solve_gpell, solve_pair
from .quadfield import make_field
from .wrideal import build_pwr_ideals, enumerate_wr, generator_from_pell, make_pair

__version__ = "0.1.0"

__all__ = [
    "GenClass",
    "alg1",
    "alg2",
    "alg3",
    "bezout_squares",
    "build_pwr_ideals",
    "enumerate_wr",
    "fundamental_unit",
    "generator_from_pell",
    "has_pwr",
    "is_principal_cycle",
    "is_squarefree",
    "make_field",
    "make_pair",
    "solve_gpell",
    "solve_pair",
]
