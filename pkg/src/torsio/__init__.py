"""torsio: p-torsion functions, p-torsional rigidity and the bottom of the
p-spectrum on finite weighted graphs, with surgery operations, closed-form
oracles and a structured inequality suite."""

from .bounds import (
    BoundCheck,
    BoundReport,
    check_all,
    fiedler_dirichlet,
    fiedler_neumann_p2,
    kohler_jobin_classical,
    kohler_jobin_classical_unit,
    kohler_jobin_modified,
    landscape_lower,
    mean_distance_bounds,
    normalized_saint_venant,
    path_inradius_lower,
    polya_szego_product,
    rayleigh_symmetrization_lower,
    saint_venant_general,
    saint_venant_p2_unit,
    symmetrization_upper,
    symmetrization_upper_mtilde,
    torsion_ordered_path,
    tree_inradius_lower,
    trivial_lower,
)
from .closed_forms import (
    PathSpecParams,
    path_rigidity,
    path_torsion,
    path_torsion_two_dirichlet_symmetric,
    path_torsion_values,
    reference_values,
    star_rigidity,
    star_torsion,
)
from .energy import (
    VertexFunction,
    energy_Qp,
    functional_Fp,
    gradient_Fp,
    phi_p,
    polya_quotient,
    rayleigh_quotient,
)
from .errors import *  # noqa: F401,F403 -- the error hierarchy is part of the API
from .geometry import (
    UNREACHABLE,
    GeometrySummary,
    Unreachable,
    geometry_summary,
    min_cut_weight,
    p_diameter_inverted,
    q_distance,
    q_inradius,
    q_mean_distance,
)
from .graphs import (
    ProblemSpec,
    ScaleParams,
    VertexId,
    WeightedGraph,
    build_graph,
    degree,
    insert_graph,
    invert_edge_weights,
    make_complete,
    make_path,
    make_random_connected,
    make_star,
    merge_dirichlet,
    scale,
    weaken,
)
from .solver import (
    BalanceResult,
    SolverOptions,
    TorsionSolution,
    balance_check,
    pointwise_residual,
    rigidity_via_min,
    solve_torsion,
)
from .spectral import SpectralSolution, lambda0, lambda1_p2

__version__ = "0.1.0"
