"""Model-agnostic auditing of per-concept, per-group performance disparities
for multi-label image classifiers."""

__version__ = "0.1.0"

from .data import (
    AnnotatedImage,
    BoxAnnotation,
    ExclusionReason,
    GroupAssignment,
    PredictionRecord,
    load_annotations,
    load_predictions,
    validate_dataset,
)
from .errors import AuditError, ConfigError, DataError, InvariantError
from .groups import (
    GroupTermConfig,
    MinAreaPixels,
    NoBoxFilter,
    RegionGroupConfig,
    RelativeArea,
    assign_group_from_boxes,
    assign_group_from_captions,
    assign_group_from_metadata,
    assignment_summary,
)
from .concepts import (
    ClassMapping,
    ConceptEvalTable,
    GroupPool,
    build_concept_tables,
    canonicalize_label,
    display_name,
    image_target_set,
    map_to_model_classes,
)
from .metrics import (
    ConfusionCounts,
    RateBundle,
    ThresholdChoice,
    accuracy_from_rates,
    auc_roc,
    average_precision,
    confusion_at_threshold,
    hit_rate_at_k,
    precision_from_rates,
    rates_from_confusion,
    select_threshold,
    split_validation_test,
)
from .sampling import (
    BootstrapDraw,
    SamplingPlan,
    baseline_full_sample,
    compute_budget,
    derive_rng,
    derive_seed,
    draw_baseline_bootstrap,
    draw_bootstrap,
    filter_rare_concepts,
)
from .disparity import (
    MetricEstimate,
    aggregate_disparity,
    max_pairwise_spread,
    per_concept_disparity,
    percentile,
    significance_flag,
)
from .synth import CellSpec, ScenarioSpec, closed_form_auc, generate, prevalence_sweep
