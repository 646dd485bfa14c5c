from backend.core.estimators.dml.nuisance import (
    DeepWideNuisance,
    LassoNuisance,
    OlsNuisance,
    OracleNuisance,
    NuisanceKind,
    NuisanceSample,
    NuisanceModels,
    NuisanceEstimates,
    fit_nuisances,
    predict_nuisances,
)
from backend.core.estimators.dml.crossfit import (
    FoldEstimate,
    CrossFitResult,
    theta_on_split,
    theta_crossfit,
    crossfit_standard_error,
)
from backend.core.estimators.dml.dml_estimator import (
    DMLConfig,
    DMLResult,
    dml_estimate,
    estimate_effect,
    select_controls,
    order_median,
    median_adjusted_se,
)
from backend.core.estimators.dml.exceptions import (
    DMLError,
    DegenerateTreatmentResidualError,
    ScoreOrthogonalityError,
    RepetitionFailureError,
    UnknownControlGroupError,
)

__all__ = [
    'DeepWideNuisance',
    'LassoNuisance',
    'OlsNuisance',
    'OracleNuisance',
    'NuisanceKind',
    'NuisanceSample',
    'NuisanceModels',
    'NuisanceEstimates',
    'FoldEstimate',
    'CrossFitResult',
    'DMLConfig',
    'DMLResult',
    'fit_nuisances',
    'predict_nuisances',
    'theta_on_split',
    'theta_crossfit',
    'crossfit_standard_error',
    'dml_estimate',
    'estimate_effect',
    'select_controls',
    'order_median',
    'median_adjusted_se',
    'DMLError',
    'DegenerateTreatmentResidualError',
    'ScoreOrthogonalityError',
    'RepetitionFailureError',
    'UnknownControlGroupError',
]
