from backend.core.estimators.linear.ols import (
    OLSFit,
    ClusterSpec,
    ols_fit,
    clustered_covariance,
    ols_clustered,
)
from backend.core.estimators.linear.lasso import (
    LassoFit,
    lasso_fit,
    lasso_path,
    lasso_lambda_cv,
    lasso_objective,
    lambda_max,
    lambda_grid,
    soft_threshold,
)
from backend.core.estimators.linear.exceptions import (
    LinearModelError,
    RankDeficiencyError,
    ClusterError,
    LassoConfigurationError,
)

__all__ = [
    'OLSFit',
    'ClusterSpec',
    'LassoFit',
    'ols_fit',
    'clustered_covariance',
    'ols_clustered',
    'lasso_fit',
    'lasso_path',
    'lasso_lambda_cv',
    'lasso_objective',
    'lambda_max',
    'lambda_grid',
    'soft_threshold',
    'LinearModelError',
    'RankDeficiencyError',
    'ClusterError',
    'LassoConfigurationError',
]
