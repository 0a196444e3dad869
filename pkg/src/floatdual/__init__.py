"""Floating/illumination body duality for centrally symmetric polytopes.

Exact closed-form computation of the affine invariant G(P) via polar
facets, Santalo points and relative polars, together with independent
numerical oracles for floating bodies, illumination bodies and the
polar-of-illumination approximant, reproducing the characterization of
G(P) as the limit of (d_P(delta) - 1) / delta^(1/n).
"""

from .config import RunConfig
from .duality import (
    PolarFacetData,
    polar,
    polar_facet_data,
    polar_facet_for_vertex,
    relative_polar,
    santalo_point,
)
from .errors import (
    BadParameter,
    ConvergenceFailure,
    DegenerateInput,
    EmptyIntersection,
    GeometryError,
    NotAVertex,
    NotInJohnSandwich,
    OriginNotInterior,
    PointNotInRelativeInterior,
    SingularMatrix,
    SymmetryRequired,
    UnknownGenerator,
)
from .geometry import (
    DEFAULT_TOL,
    Facet,
    Halfspace,
    HPolytope,
    VPolytope,
    apply_linear,
    cap_volume,
    centroid,
    clip,
    cone_hull_volume,
    enumerate_vertices,
    extreme_points,
    facet_list,
    facet_measure,
    hull_facets,
    is_centrally_symmetric,
    radial,
    support,
    triangulate,
    validate_vpolytope,
    volume,
)
from .invariants import (
    InvariantReport,
    VertexInvariants,
    generator,
    invariant_g,
    lambda_constant,
    vertex_invariants,
)
from .oracles import (
    BodyOracle,
    ConvergenceResult,
    ConvergenceRow,
    DirectionGrid,
    DPDeltaResult,
    FloatingBody,
    IlluminationBody,
    SearchConfig,
    augment_grid,
    convergence_table,
    d_p_delta,
    direction_grid,
    distance_d,
    floating_oracle,
    floating_radial,
    floating_support,
    illumination_radial,
    inclusion_chain,
    polar_illumination_oracle,
    polytope_oracle,
    uniform_bound_check,
    uniform_bound_constant,
    vertex_fan_directions,
    vertex_float_ratio,
)

__version__ = "0.1.0"
