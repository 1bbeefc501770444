"""SIGTRON sigmoids, the losses they induce, and imbalanced linear classification.

The package is organised in layers:

``sigtron.extfun``
    extended exponential/logarithm, the SIGTRON family and its derivatives,
    and the integral ``F(z; b)`` behind the induced loss.
``sigtron.loss``
    SIGTRON-induced, logistic and focal margin losses and the regularized
    objective.
``sigtron.optim``
    L-BFGS with an interval-bisection line search.
``sigtron.data``
    dataset I/O, standardization, folds and imbalance statistics.
``sigtron.classify``
    training, lambda cross-validation, one-vs-all and grid sweeps.
"""

from .classify import (
    LAMBDA_GRID,
    Hyperplane,
    Model,
    SweepResult,
    accuracy,
    alpha_grid,
    cross_validate_lambda,
    diagnostics,
    evaluate_specs,
    fit_model,
    focal_grid,
    predict_binary,
    sweep_alpha_grid,
    train_binary,
    train_ova,
)
from .data import Dataset, imbalance_stats, kfold_assign, load_dataset, standardize
from .exceptions import (
    ConfigurationError,
    DataError,
    DegenerateHyperplaneError,
    DomainError,
    NumericFailure,
    OverflowGuardError,
    UnsupportedParameterError,
)
from .extfun import (
    SigtronParams,
    ext_exp,
    ext_ln,
    f_integral,
    inflection_point,
    sigtron,
    sigtron_grad,
    sigtron_nth_deriv,
)
from .loss import SIC, Focal, Logistic, Objective, sigtron_loss, sigtron_loss_grad
from .optim import OptimConfig, Trace, bisection_line_search, minimize

__version__ = "0.1.0"

__all__ = [
    "LAMBDA_GRID", "Hyperplane", "Model", "SweepResult", "accuracy", "alpha_grid",
    "cross_validate_lambda", "diagnostics", "evaluate_specs", "fit_model", "focal_grid",
    "predict_binary", "sweep_alpha_grid", "train_binary", "train_ova",
    "Dataset", "imbalance_stats", "kfold_assign", "load_dataset", "standardize",
    "ConfigurationError", "DataError", "DegenerateHyperplaneError", "DomainError",
    "NumericFailure", "OverflowGuardError", "UnsupportedParameterError",
    "SigtronParams", "ext_exp", "ext_ln", "f_integral", "inflection_point", "sigtron",
    "sigtron_grad", "sigtron_nth_deriv",
    "SIC", "Focal", "Logistic", "Objective", "sigtron_loss", "sigtron_loss_grad",
    "OptimConfig", "Trace", "bisection_line_search", "minimize",
]
