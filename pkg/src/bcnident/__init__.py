"""Boolean (control) network analysis and identification via the semi-tensor product."""

from .analysis import (
    CoverageError,
    NotABcnError,
    NotABnError,
    O1Test,
    build_cover_sequence,
    build_o1_test,
    covered_pairs,
    data_arrays,
    distinguishing_sequence,
    effective_output_sequence,
    find_o3_test,
    indistinguishable_pairs,
    is_controllable,
    is_o1_observable,
    is_observable_bn,
    observability_matrix_bcn,
    observability_matrix_bn,
    pair_count,
    pair_index,
    pair_of_index,
    reach_walks,
    reachable_set,
    validate_o1_test,
)
from .harness import ExperimentLog, Plant, check_sufficiency, gen_case, query
from .ident import (
    IdentResult,
    InconsistentDataError,
    Member,
    ProtocolError,
    SampleGroup,
    SampleSet,
    SignatureTable,
    identify_bcn_o1_multi,
    identify_bcn_o1_single,
    identify_bcn_o3,
    identify_bn,
    identify_bn_overlap,
    identify_bn_state_observed,
    identify_from_p0,
    retrieve_effective_sequences,
    retrieve_o1_arrays,
    retrieve_o3_signatures,
)
from .logic import NetworkSyntaxError, compile_network, parse_expr, parse_network, structure_matrix
from .network import Bcn, PermutationMap, Trajectory, bcn, bn, equivalent, free_run, simulate, step, transform
from .stp import DeltaVector, DimensionError, LogicalMatrix, delta, khatri_rao, kron, stp

__version__ = "0.1.0"
