"""Grey-DEMATEL: grey expert surveys to total-relation matrices, cause/effect
groups, threshold-filtered causal loop diagrams, and sensitivity reports."""

from .defuzz import CFCSVariant, RowNormalization, defuzzify, row_normalization
from .dematel import (
    DegenerateStudyError,
    InfeasibleStudyError,
    ProminenceRecord,
    ipm_points,
    normalize_direct_matrix,
    prominence_table,
    row_column_sums,
    total_relation_matrix,
)
from .graph import (
    CausalGraph,
    Edge,
    LoopOverflowError,
    ThresholdKind,
    ThresholdPolicy,
    ThresholdSpec,
    compute_threshold,
    enumerate_loops,
    export_cld,
    extract_edges,
)
from .grey import (
    DEFAULT_SCALE,
    GreyMatrix,
    GreyNumber,
    LinguisticScale,
    assessment_to_grey_matrix,
    rating_to_grey,
    weighted_average_grey,
)
from .outputs import write_outputs, write_sensitivity
from .sensitivity import (
    PipelineConfig,
    PipelineResult,
    SensitivityReport,
    edge_presence_matrix,
    rank_delta_table,
    run_pipeline,
    run_sensitivity,
)
from .study import Scenario, Study, StudyError, load_scenarios, load_study, save_study

__version__ = "0.1.0"
