"""Standardized OLS on neighborhood-level tables."""

from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd
from scipy import linalg, stats

from src.errors import InsufficientSampleError, NumericalError, ValidationError
from src.models.regression import (
    INTERCEPT,
    CoefficientRow,
    RegressionFit,
    RegressionSpec,
    SimpleSlope,
    interaction_name,
)
from src.models.summary import NeighborhoodSummary
from src.storage import load_csv
from src.utils.logger import get_logger

logger = get_logger(__name__)

KEY = "neighborhood_id"


def standardize(column: Sequence[float]) -> np.ndarray:
    """Center on the sample mean and scale by the sample SD (divisor n - 1)."""
    x = np.asarray(column, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValidationError("standardize needs at least two values")
    if not np.all(np.isfinite(x)):
        raise ValidationError("standardize needs finite values")
    sd = x.std(ddof=1)
    if sd == 0:
        raise ValidationError("cannot standardize a constant column")
    return (x - x.mean()) / sd


def load_covariates(path: Path) -> pd.DataFrame:
    """Read ``neighborhood_id,<covariates...>``; ids stay strings."""
    path = Path(path)
    frame = load_csv(path, dtype={KEY: str})
    if KEY not in frame.columns:
        raise ValidationError(f"{path} has no {KEY} column")
    if frame[KEY].duplicated().any():
        raise ValidationError(f"{path} lists a neighborhood more than once")
    return frame


def build_neighborhood_table(
    summaries: Sequence[NeighborhoodSummary], covariates: pd.DataFrame | None = None
) -> pd.DataFrame:
    """Neighborhood summaries left-joined to covariates on ``neighborhood_id``."""
    table = pd.DataFrame([s.to_dict() for s in summaries])
    if table.empty:
        raise ValidationError("no neighborhood summaries to tabulate")
    table = table.drop(columns=["singleton"])
    table["total_variation"] = pd.to_numeric(table["total_variation"], errors="coerce")
    if covariates is None:
        return table
    if KEY not in covariates.columns:
        raise ValidationError(f"covariates need a {KEY} column")
    clash = (set(covariates.columns) & set(table.columns)) - {KEY}
    if clash:
        raise ValidationError(f"covariate columns clash with summary columns: {sorted(clash)}")
    covariates = covariates.astype({KEY: str})
    unmatched = int((~table[KEY].isin(covariates[KEY])).sum())
    if unmatched:
        logger.warning(f"{unmatched} neighborhoods have no covariate row")
    return table.merge(covariates, on=KEY, how="left", validate="one_to_one")


def _design(table: pd.DataFrame, spec: RegressionSpec) -> tuple[np.ndarray, np.ndarray, int]:
    needed = [spec.response, *spec.terms]
    missing = [c for c in needed if c not in table.columns]
    if missing:
        raise ValidationError(f"table has no column(s) {', '.join(missing)}")
    data = table[needed].apply(pd.to_numeric, errors="coerce")
    complete = data.notna().all(axis=1).to_numpy()
    dropped = int((~complete).sum())
    if dropped:
        logger.warning(f"Dropped {dropped} rows with missing values (listwise deletion)")
    data = data[complete]

    n = len(data)
    p = 1 + len(spec.columns)
    if n <= p:
        raise InsufficientSampleError(f"{n} complete rows for {p} parameters")

    prepare = standardize if spec.standardize else (lambda x: np.asarray(x, dtype=np.float64))
    y = prepare(data[spec.response].to_numpy())
    mains = {term: prepare(data[term].to_numpy()) for term in spec.terms}
    columns = [np.ones(n)] + [mains[t] for t in spec.terms]
    columns += [mains[a] * mains[b] for a, b in spec.interactions]
    return np.column_stack(columns), y, dropped


def ols_fit(table: pd.DataFrame, spec: RegressionSpec) -> RegressionFit:
    """Least squares through a QR decomposition with classical standard errors.

    With ``spec.standardize`` the response and main effects are standardized
    and interactions are products of the standardized mains. p-values are
    two-sided from the t distribution with n - p degrees of freedom.
    """
    X, y, dropped = _design(table, spec)
    n, p = X.shape
    if np.linalg.matrix_rank(X) < p:
        raise NumericalError("design matrix is rank deficient")

    Q, R = linalg.qr(X, mode="economic")
    beta = linalg.solve_triangular(R, Q.T @ y)
    residuals = y - X @ beta
    rss = float(residuals @ residuals)
    centered = y - y.mean()
    tss = float(centered @ centered)
    if tss == 0:
        raise ValidationError("response is constant")
    df = n - p
    R_inv = linalg.solve_triangular(R, np.eye(p))
    covariance = (rss / df) * (R_inv @ R_inv.T)
    se = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
    with np.errstate(divide="ignore", invalid="ignore"):
        t_values = beta / se
    p_values = 2.0 * stats.t.sf(np.abs(t_values), df)

    names = [INTERCEPT, *spec.columns]
    rows = [
        CoefficientRow(
            term=name,
            estimate=float(beta[k]),
            se=float(se[k]),
            t_value=float(t_values[k]),
            p_value=float(p_values[k]),
        )
        for k, name in enumerate(names)
    ]
    fit = RegressionFit(
        spec=spec,
        coefficients=rows,
        n=n,
        r_squared=float(1.0 - rss / tss),
        df_resid=df,
        covariance=covariance,
        n_dropped=dropped,
    )
    logger.info(f"OLS {spec.response} ~ {' + '.join(spec.columns)}: n={n}, R2={fit.r_squared:.4f}")
    return fit


def interaction_fit(table: pd.DataFrame, spec: RegressionSpec) -> RegressionFit:
    """OLS with exactly one product term."""
    if len(spec.interactions) != 1:
        raise ValidationError(
            f"interaction_fit needs exactly one interaction, got {len(spec.interactions)}"
        )
    return ols_fit(table, spec)


def simple_slopes(
    fit: RegressionFit, focal: str, moderator: str, at: Sequence[float]
) -> list[SimpleSlope]:
    """Effect of ``focal`` at given ``moderator`` values (in the fit's units).

    slope = b_focal + b_interaction * m, with variance from the coefficient
    covariance.
    """
    for name in (interaction_name(focal, moderator), interaction_name(moderator, focal)):
        if name in fit.spec.columns:
            interaction = name
            break
    else:
        raise ValidationError(f"the fit has no {focal}:{moderator} interaction")

    f = fit.index_of(focal)
    k = fit.index_of(interaction)
    V = fit.covariance
    b_f = fit.coefficients[f].estimate
    b_k = fit.coefficients[k].estimate
    slopes = []
    for m in at:
        m = float(m)
        slope = b_f + b_k * m
        variance = V[f, f] + m * m * V[k, k] + 2.0 * m * V[f, k]
        se = float(np.sqrt(max(variance, 0.0)))
        p_value = float(2.0 * stats.t.sf(abs(slope / se), fit.df_resid)) if se > 0 else None
        slopes.append(SimpleSlope(moderator_value=m, slope=float(slope), se=se, p_value=p_value))
    return slopes
