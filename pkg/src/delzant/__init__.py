"""Exact-arithmetic pipeline from rational polytopes to toric chart data.

The layers, bottom up: integer/rational linear algebra with lattice
normal forms (`lattice`), exact cone duality (`cones`), H-polytopes
with their face lattices (`polytope`), the torus-reduction data and
moment maps (`construction`), the normal fan with chart semigroups
(`toric`), and a seeded verification harness (`verify`).  `cli` is the
command-line front end; `io` and `plots` handle files and figures.
"""

__version__ = "0.1.0"

from .construction import (
    DelzantData,
    FaceStabilizer,
    LatticeRetarget,
    ZeroLevelPoint,
    build_delzant_data,
    fiber_radii,
    moment_ambient,
    moment_reduction,
    moment_torus,
    properness_bound,
    retarget_lattice,
    sample_zero_level,
    stabilizer_data,
)
from .lattice import (
    SmithDecomposition,
    cokernel_invariants,
    hermite_normal_form,
    kernel_basis,
    primitive_vector,
    saturate_sublattice,
    smith_normal_form,
    solve_integer_system,
)
from .polytope import (
    Face,
    FaceLattice,
    HPolytope,
    build_face_lattice,
    enumerate_vertices,
    normalize_h_rep,
    relative_interior_point,
)
from .toric import (
    ChartMonoid,
    ChartPoint,
    Cone,
    Fan,
    build_fan,
    chart_inclusion,
    dual_cone,
    dual_monoid,
    evaluate_chart,
    fiber_log_solve,
    project_to_perp,
    relate_fiber_points,
    transversality_check,
)
from .verify import VerificationReport, VerifyConfig, run_all

__all__ = [
    "__version__",
    "DelzantData",
    "FaceStabilizer",
    "LatticeRetarget",
    "ZeroLevelPoint",
    "build_delzant_data",
    "fiber_radii",
    "moment_ambient",
    "moment_reduction",
    "moment_torus",
    "properness_bound",
    "retarget_lattice",
    "sample_zero_level",
    "stabilizer_data",
    "SmithDecomposition",
    "cokernel_invariants",
    "hermite_normal_form",
    "kernel_basis",
    "primitive_vector",
    "saturate_sublattice",
    "smith_normal_form",
    "solve_integer_system",
    "Face",
    "FaceLattice",
    "HPolytope",
    "build_face_lattice",
    "enumerate_vertices",
    "normalize_h_rep",
    "relative_interior_point",
    "ChartMonoid",
    "ChartPoint",
    "Cone",
    "Fan",
    "build_fan",
    "chart_inclusion",
    "dual_cone",
    "dual_monoid",
    "evaluate_chart",
    "fiber_log_solve",
    "project_to_perp",
    "relate_fiber_points",
    "transversality_check",
    "VerificationReport",
    "VerifyConfig",
    "run_all",
]
