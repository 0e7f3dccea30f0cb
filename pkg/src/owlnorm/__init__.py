"""Ordered weighted l1 (OWL / OSCAR) norm toolkit.

Norm and dual-norm evaluation, the exact Moreau proximity operator, and
ISTA/FISTA solvers for OWL-regularized least squares with a duality-gap
stopping rule.
"""

from .norm import (
    SortPermutation,
    dual_norm,
    dual_norm_by_vertex_enumeration,
    norm_value,
    sort_by_abs_desc,
    unit_ball_vertices_2d,
    unsort,
)
from .prox import (
    GroupPartition,
    ProxCertificate,
    group_and_average,
    prox,
    prox_certificate,
    prox_objective,
    prox_subgradient,
    shrinkage_preserves_order,
)
from .solver import (
    Cluster,
    Problem,
    SolveResult,
    SolverConfig,
    cluster_report,
    duality_gap,
    lipschitz_estimate,
    objective,
    solve,
)
from .weights import (
    WeightVector,
    as_weights,
    l1_weights,
    linf_weights,
    load_weights,
    oscar_weights,
)

__version__ = "0.1.0"

__all__ = [
    "Cluster",
    "GroupPartition",
    "Problem",
    "ProxCertificate",
    "SolveResult",
    "SolverConfig",
    "SortPermutation",
    "WeightVector",
    "as_weights",
    "cluster_report",
    "dual_norm",
    "dual_norm_by_vertex_enumeration",
    "duality_gap",
    "group_and_average",
    "l1_weights",
    "linf_weights",
    "lipschitz_estimate",
    "load_weights",
    "norm_value",
    "objective",
    "oscar_weights",
    "prox",
    "prox_certificate",
    "prox_objective",
    "prox_subgradient",
    "shrinkage_preserves_order",
    "solve",
    "sort_by_abs_desc",
    "unit_ball_vertices_2d",
    "unsort",
]
