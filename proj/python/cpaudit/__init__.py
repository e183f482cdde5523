"""Conformal prediction-set calibration and audit toolkit.

The compiled core does the work; this package re-exports it. Structured
results (reports, curves, pitfall bundles) arrive as plain dicts.
"""

from ._core import (  # noqa: F401
    CalibrationResult,
    IoError,
    LabeledDataset,
    PredictionRecord,
    PredictionSet,
    ValidationError,
    __version__,
    adversarial_label_target,
    aps_score,
    calibrate,
    calibrate_dataset,
    calibration_curve,
    choose_lambda,
    clopper_pearson_lower,
    coverage_report,
    default_alpha_grid,
    efficiency_curve,
    generate,
    generate_from_config,
    hoeffding_lcb,
    label_shift_weights,
    load_dataset,
    predict_sets,
    run_pitfalls,
    save_dataset,
    score_dataset,
    selective_curve,
    shift_experiment,
    split_dataset,
    superclass_collapse,
    top1_accuracy,
    weighted_calibrate,
)
