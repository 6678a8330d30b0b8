"""Exact computations in preabelian categories.

The concrete backend is the category of finite-dimensional rational vector
spaces with a distinguished subspace (``vectpair``).  On top of it sit the
two-square comparison maps, the two constructions of the snake connecting
morphism, a small diagram file format and a command-line driver.
"""

from .catcore import PreabelianCategory, derive_seed
from .diagdsl import elaborate, emit, format_ast, parse
from .ratmat import Matrix, Subspace
from .snake import SnakeInput, build_snake, run_snake_checks
from .twosquare import TwoSquareInput, build_two_square, classify_eta
from .vectpair import VECTPAIR, PairMorphism, PairObject, make_morphism, make_object

__all__ = [
    "Matrix",
    "Subspace",
    "PreabelianCategory",
    "derive_seed",
    "VECTPAIR",
    "PairObject",
    "PairMorphism",
    "make_object",
    "make_morphism",
    "TwoSquareInput",
    "build_two_square",
    "classify_eta",
    "SnakeInput",
    "build_snake",
    "run_snake_checks",
    "parse",
    "format_ast",
    "elaborate",
    "emit",
]
__version__ = "0.1.0"
