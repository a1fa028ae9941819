"""Exact computation with one- and two-variable McNaughton functions.

Everything is exact rational arithmetic; see the README for the CLI and the
HTTP service (`mvproj.service.create_app`).
"""

__version__ = "0.1.0"

from .builders import (
    RectTypeSpec,
    TriangleFanSpec,
    TriangleSpec,
    build_case_i,
    build_case_ii,
    build_case_iii,
    case_ii_constants,
    check_bullet_conditions,
    solve_diophantine,
)
from .chain import ChainElement, is_cyclic_generator, multipliers, orbit, t_step
from .geometry import AffineForm2, CellComplex, ConvexCell
from .projectivity import (
    SubstitutionPair,
    check_projective,
    check_projective_1d,
    equalizer,
    eta_bridge_check,
    grid_oracle,
    image_over,
    retract_presentation,
)
from .pwl1 import Pwl1
from .pwl2 import Pwl2
from .ranges import extremals, iso_by_range, pair_range
from .terms import (
    apply_term,
    compile_term,
    descent_term,
    fails_archimedean_joint,
    is_archimedean,
    joint_zero_element,
    point_zero_term,
    unit_zero_term,
)
from .termsyntax import parse_term, print_term

__all__ = [
    "AffineForm2", "CellComplex", "ChainElement", "ConvexCell", "Pwl1",
    "Pwl2", "RectTypeSpec", "SubstitutionPair", "TriangleFanSpec",
    "TriangleSpec", "apply_term", "build_case_i", "build_case_ii",
    "build_case_iii", "case_ii_constants", "check_bullet_conditions",
    "check_projective", "check_projective_1d", "compile_term",
    "descent_term", "equalizer", "eta_bridge_check", "extremals",
    "fails_archimedean_joint", "grid_oracle", "image_over", "is_archimedean",
    "is_cyclic_generator", "iso_by_range", "joint_zero_element",
    "multipliers", "orbit", "pair_range", "parse_term", "point_zero_term",
    "print_term", "retract_presentation", "solve_diophantine", "t_step",
    "unit_zero_term",
]
