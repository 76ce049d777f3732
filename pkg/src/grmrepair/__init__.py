"""Repair-bandwidth toolkit for generalized Reed-Muller coded storage."""

from .analysis import (
    CodeShape,
    PartitionType,
    RegimeParams,
    bound_curves,
    exact_expected_bandwidth,
    monte_carlo_expectation,
    partition_probability,
    partition_types,
    regime,
)
from .fields import (
    FieldElement,
    FieldSpec,
    Subspace,
    dual_basis,
    field,
    span_basis,
    subspace_c0,
    subspace_poly_eval,
    trace,
)
from .grm import (
    Codeword,
    ErasedCodeword,
    ErasedSymbolError,
    GrmParams,
    MultiPoly,
    brute_min_distance,
    dual_min_distance,
    encode,
    is_dual_pair,
    min_distance,
    monomials,
    random_codeword,
)
from .repair_multi import (
    DistributedPlan,
    ErasurePattern,
    Grouping,
    MatrixPropertyViolation,
    RepairMatrix,
    build_distributed_plan,
    build_repair_matrix,
    choose_axis,
    group_erasures,
    make_pattern,
    run_centralized_repair,
    run_distributed_repair,
    verify_repair_matrix,
)
from .repair_single import (
    BandwidthReport,
    HelperResponse,
    IncompleteDownloadError,
    InfeasibleSchemeError,
    SingleRepairPlan,
    build_single_plan,
    disjoint_repair_sets,
    eval_repair_poly,
    helper_respond,
    lower_bound,
    recover_single,
    repair_codeword,
    trivial_k_bandwidth,
    trivial_repair_all,
)

__version__ = "0.1.0"
