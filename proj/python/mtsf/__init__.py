"""Rolling-window benchmark harness for multiple-series single-step forecasting.

Data matrices are L x N numpy arrays: one row per time step, one column per series.
"""

from ._core import (
    ConfigError,
    DataError,
    Error,
    IoError,
    ModelError,
    ScalingTransform,
    SeriesMatrix,
    cv_objective,
    default_grid,
    family_names,
    fit_scaler,
    format_csv,
    format_report,
    grid_search,
    load_csv,
    maape,
    mase,
    parse_csv,
    plan,
    prepare_dataset,
    resample_mean,
    resample_sum,
    run_benchmark,
    run_single,
    select_columns,
    slice_window,
    smape,
    synthetic,
    write_csv,
)

__version__ = "0.1.0"
