"""Convex geodesic bicombings and hyperconvex geometry at desk scale.

Core pieces: validated finite metric spaces and sup-norm geometry
(``metric``), model spaces (``spaces``), sampled paths (``paths``),
injective hulls (``tightspan``), bicombing handles with a sampling-based
checker suite (``bicombing``), chart atlases with endpoint perturbation,
continuation, and universal-cover enumeration (``localglobal``), and
Helly-property machinery (``hyperconvex``).
"""

__version__ = "0.1.0"

from .metric import DistanceMatrix, MetricError, kuratowski_embed, linf_distance, mcshane_extend, validate_metric
from .paths import PolyLinePath, geodesic_defect, path_distance, path_length
from .tightspan import (
    TightSpanComplex,
    TightSpanSpace,
    combinatorial_dimension,
    enumerate_cells,
    is_admissible,
    project_to_extremal,
    tight_span_distance,
)
from .bicombing import (
    BicombingHandle,
    CheckReport,
    SamplePlan,
    check_conical,
    check_consistency,
    check_convexity,
    check_geodesic,
    check_reversibility,
    linear_bicombing,
    solve_convex_bicombing,
)
from .localglobal import (
    Chart,
    ChartAtlas,
    CoverPoint,
    LocalGeodesicPath,
    build_cover,
    certify_local_geodesic,
    check_global_convexity,
    continue_along_path,
    cover_retraction,
    global_bicombing,
    perturb_geodesic,
    validate_atlas,
)
from .hyperconvex import (
    BallFamily,
    Witness,
    halving_witness,
    helly_witness_finite,
    helly_witness_linf,
    is_hyperconvex_sampled,
    pairwise_feasible,
    retraction_geodesic,
    shorten_loop,
    sphere_counterexample,
)
from .models import generate_model
