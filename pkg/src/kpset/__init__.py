"""Shifted Korobov polynomial lattice unions over GF(2) and their star discrepancy."""

from .bounds import BoundParams, leading_constant, pgen_bound, t_zero, theorem_bound
from .discrepancy import grid_discrepancy, star_discrepancy_exact
from .lattice import PointSet, UnionRecipe, build_union, draw_recipe, korobov_set, shift_set

__version__ = "0.1.0"

__all__ = [
    "BoundParams", "PointSet", "UnionRecipe", "build_union", "draw_recipe", "grid_discrepancy",
    "korobov_set", "leading_constant", "pgen_bound", "shift_set", "star_discrepancy_exact",
    "t_zero", "theorem_bound",
]
