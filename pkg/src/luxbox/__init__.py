"""Shoebox daylight and quality-view surrogate modeling toolkit.

Pipeline: enumerate a parametric design space, label each room with exact
geometric view metrics plus proxy (or ingested) annual daylight/glare
metrics, train a small neural network on the labels, evaluate it on an
unseen validation space, and attribute its predictions to the design
variables with exact Shapley values.
"""

from .scene import (
    AnalysisGrid,
    ClampWarning,
    DesignSpace,
    DesignSpaceError,
    FEATURE_NAMES,
    NormalizationBounds,
    Orientation,
    PRESETS,
    RoomConfig,
    ShadingState,
    TRAINING_SPACE,
    VALIDATION_SPACE,
    WindowDivisions,
    WindowRect,
    build_grid,
    encode,
    encode_many,
    enumerate_design_space,
    glazed_area,
    resolve_space,
    window_rects,
)
from .views import (
    ViewResult,
    evaluate_views,
    export_view_table,
    glazing_solid_angle,
    view_depth_fraction,
    view_factor_fraction,
    view_range_fraction,
)
from .solar import Location, SunPosition, TEHRAN, sun_position
from .daylight import (
    AnnualPointSeries,
    DaylightMetrics,
    METRIC_NAMES,
    MetricVector,
    ProxyOracle,
    PseudoClimate,
    Schedule,
    annual_metrics,
    direct_sun_hits,
    point_series,
    proxy_illuminance,
)
from .datasets import (
    LabelIngestError,
    LabeledDataset,
    label_dataset,
    read_configs,
    read_labeled_dataset,
    write_configs,
    write_labeled_dataset,
)
from .ann import (
    EvalReport,
    SurrogateNet,
    TrainConfig,
    load_model,
    mae,
    mse,
    save_model,
    split,
    train,
    validate,
)
from .shapley import FeatureGrouping, ShapReport, exact_shap, sample_background, shap_summary
from .service import ModelService, make_service, serve
from .cli import RunManifest, run_pipeline

__version__ = "0.1.0"
