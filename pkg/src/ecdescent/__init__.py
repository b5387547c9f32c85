"""Find points of infinite order on y^2 = x^3 + a x^2 + b x by 4- and 8-descent.

Everything is exact integer/rational arithmetic; numpy is only used to screen
search candidates with square-residue tables.
"""

from .descent import (
    Descent,
    DescentResult,
    DescentTrace,
    ModelMap,
    RationalPoint,
    eight_descent,
    four_descent,
    has_finite_order,
    is_torsion,
    isogeny_shift_variants,
    naive_height,
)
from .families import family_bremner, family_congruent, family_triangle
from .forms import ConicForm, ConicSolution, Curve, QuarticFactorization, QuarticForm
from .search import SearchBounds
from .solubility import is_everywhere_locally_soluble

__all__ = [
    "ConicForm",
    "ConicSolution",
    "Curve",
    "Descent",
    "DescentResult",
    "DescentTrace",
    "ModelMap",
    "QuarticFactorization",
    "QuarticForm",
    "RationalPoint",
    "SearchBounds",
    "eight_descent",
    "family_bremner",
    "family_congruent",
    "family_triangle",
    "four_descent",
    "has_finite_order",
    "is_everywhere_locally_soluble",
    "is_torsion",
    "isogeny_shift_variants",
    "naive_height",
]
