"""Vector autoregression over surface state plus sentiment components.

The state vector keeps a fixed ordering (surface variables, then HFS, then
LFS). Estimation is equation-by-equation least squares with a shared
regressor matrix; spot and rate may enter contemporaneously as exogenous
columns. Lag order comes from the Akaike criterion on a common sample.
"""

from __future__ import annotations

import datetime as dt
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import f as f_dist

from .errors import (
    InsufficientSample,
    MisalignedDates,
    MissingExogenous,
    RankDeficient,
    UnknownVariable,
)
from .sentiment import SentimentSeries
from .surface import IVSurfaceGrid, SurfaceParamVector, param_names, strike_code

NONPARAM_LEVELS = (1.300, 0.975, 0.600)

# two-sided normal critical values for the 10% / 5% / 1% star levels
_STAR_CUTOFFS = ((2.5758293035489004, "***"), (1.959963984540054, "**"), (1.6448536269514722, "*"))


@dataclass
class StatePanel:
    """Dated state vectors in fixed variable order."""

    dates: tuple[dt.date, ...]
    var_names: tuple[str, ...]
    values: np.ndarray  # (T, n)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.dates), len(self.var_names)):
            raise ValueError(
                f"panel shape {self.values.shape} != ({len(self.dates)}, {len(self.var_names)})"
            )

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.var_names.index(name)]

    def subset(self, names: Sequence[str]) -> "StatePanel":
        idx = [self.var_names.index(n) for n in names]
        return StatePanel(self.dates, tuple(names), self.values[:, idx])

    def window(self, start: int, stop: int) -> "StatePanel":
        return StatePanel(self.dates[start:stop], self.var_names, self.values[start:stop])


@dataclass
class VarModel:
    var_names: tuple[str, ...]
    p: int
    intercept: np.ndarray  # (n,)
    phi: np.ndarray  # (p, n, n); phi[k][i, j] = effect of var j at lag k+1 on var i
    gamma: np.ndarray  # (n, q)
    exog_names: tuple[str, ...]
    sigma: np.ndarray  # (n, n)
    nobs: int  # effective sample size T - p
    se_intercept: np.ndarray
    se_phi: np.ndarray
    se_gamma: np.ndarray

    @property
    def n_vars(self) -> int:
        return len(self.var_names)

    @property
    def n_exog(self) -> int:
        return len(self.exog_names)

    def companion(self) -> np.ndarray:
        n, p = self.n_vars, self.p
        comp = np.zeros((n * p, n * p))
        for k in range(p):
            comp[:n, k * n:(k + 1) * n] = self.phi[k]
        if p > 1:
            comp[n:, :-n] = np.eye(n * (p - 1))
        return comp

    def aic(self) -> float:
        n, p, q = self.n_vars, self.p, self.n_exog
        sign, logdet = np.linalg.slogdet(self.sigma)
        if sign <= 0:
            return np.inf
        return logdet + 2.0 * (n * n * p + n + n * q) / self.nobs


@dataclass
class IrfResult:
    shock: str
    response_names: tuple[str, ...]
    horizons: np.ndarray
    values: np.ndarray  # (H + 1, n)
    orthogonalized: bool


def build_state_panel(
    surfaces: Sequence[IVSurfaceGrid] | None = None,
    params: Sequence[SurfaceParamVector] | None = None,
    hfs: SentimentSeries | None = None,
    lfs: SentimentSeries | None = None,
    form: str = "nonparameter",
    selection: Sequence[float] = NONPARAM_LEVELS,
) -> StatePanel:
    """Assemble the dated state panel in the canonical variable order.

    Non-parameter form keeps the selected moneyness levels at every grid
    maturity; parameter form uses the full descriptor vector. HFS and LFS
    are appended last. All inputs must share the same date sequence.
    """
    if form == "nonparameter":
        if not surfaces:
            raise MisalignedDates("no surfaces supplied")
        dates = tuple(s.date for s in surfaces)
        grid = surfaces[0]
        cols = []
        names = []
        level_idx = []
        for m in selection:
            match = [j for j, lvl in enumerate(grid.moneyness_levels) if abs(lvl - m) < 1e-9]
            if not match:
                raise UnknownVariable(f"selection level {m} not on the grid")
            level_idx.append(match[0])
        for i, months in enumerate(grid.maturities):
            for m, j in zip(selection, level_idx):
                names.append(f"iv_{months}m_{strike_code(m)}")
                cols.append(np.array([s.values[i, j] for s in surfaces]))
        values = np.column_stack(cols)
    elif form == "parameter":
        if not params:
            raise MisalignedDates("no parameter vectors supplied")
        dates = tuple(p.date for p in params)
        n_tau = len(params[0].skew_by_tau)
        n_m = len(params[0].slope_by_m)
        names = list(param_names()) if (n_tau, n_m) == (4, 7) else (
            [f"skew_{i}" for i in range(n_tau)]
            + [f"cur_{i}" for i in range(n_tau)]
            + [f"slope_{i}" for i in range(n_m)]
        )
        values = np.vstack([p.as_vector() for p in params])
    else:
        raise ValueError(f"unknown form {form!r}")

    if hfs is not None or lfs is not None:
        if hfs is None or lfs is None:
            raise MisalignedDates("HFS and LFS must be supplied together")
        if hfs.dates != dates or lfs.dates != dates:
            raise MisalignedDates("sentiment dates do not match surface dates")
        values = np.column_stack([values, hfs.values, lfs.values])
        names = list(names) + ["hfs", "lfs"]

    return StatePanel(dates=dates, var_names=tuple(names), values=values)


def _design(
    values: np.ndarray, p: int, exog: np.ndarray | None, offset: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Target matrix Y and regressors [1, y_{t-1}..y_{t-p}, x_t]."""
    start = p if offset is None else offset
    T = values.shape[0]
    Y = values[start:]
    blocks = [np.ones((T - start, 1))]
    for k in range(1, p + 1):
        blocks.append(values[start - k:T - k])
    if exog is not None and exog.size:
        blocks.append(exog[start:])
    return Y, np.hstack(blocks)


def fit_var(
    panel: StatePanel,
    p: int,
    exog: StatePanel | None = None,
) -> VarModel:
    """Least-squares VAR(p), optionally with contemporaneous exogenous terms."""
    values = panel.values
    names = list(panel.var_names)

    keep = [j for j in range(values.shape[1]) if values[:, j].std() > 0]
    if len(keep) < values.shape[1]:
        dropped = [names[j] for j in range(values.shape[1]) if j not in keep]
        warnings.warn(f"dropping constant variables {dropped}")
        values = values[:, keep]
        names = [names[j] for j in keep]
    n = values.shape[1]

    exog_values = None
    exog_names: tuple[str, ...] = ()
    if exog is not None:
        if exog.dates != panel.dates:
            raise MisalignedDates("exogenous dates do not match the panel")
        cols = [j for j in range(exog.values.shape[1]) if exog.values[:, j].std() > 0]
        if len(cols) < exog.values.shape[1]:
            dropped = [exog.var_names[j] for j in range(exog.values.shape[1]) if j not in cols]
            warnings.warn(f"dropping constant exogenous columns {dropped}")
        if cols:
            exog_values = exog.values[:, cols]
            exog_names = tuple(exog.var_names[j] for j in cols)
    q = len(exog_names)

    T = values.shape[0]
    if T - p <= n * p + q + 1:
        raise InsufficientSample(f"T-p={T - p} too small for {n * p + q + 1} regressors")

    Y, Z = _design(values, p, exog_values)
    k = Z.shape[1]
    gram = Z.T @ Z
    if np.linalg.matrix_rank(gram) < k:
        raise RankDeficient("regressor matrix is rank deficient (collinear columns)")
    gram_inv = np.linalg.inv(gram)
    B = gram_inv @ (Z.T @ Y)  # (k, n)
    resid = Y - Z @ B
    dof = Y.shape[0] - k
    sigma = resid.T @ resid / dof
    se = np.sqrt(np.outer(np.diag(gram_inv), np.diag(sigma)))  # (k, n)

    phi = np.empty((p, n, n))
    se_phi = np.empty((p, n, n))
    for lag in range(p):
        block = slice(1 + lag * n, 1 + (lag + 1) * n)
        phi[lag] = B[block].T
        se_phi[lag] = se[block].T
    gamma = B[1 + p * n:].T if q else np.zeros((n, 0))
    se_gamma = se[1 + p * n:].T if q else np.zeros((n, 0))

    return VarModel(
        var_names=tuple(names),
        p=p,
        intercept=B[0],
        phi=phi,
        gamma=gamma,
        exog_names=exog_names,
        sigma=sigma,
        nobs=Y.shape[0],
        se_intercept=se[0],
        se_phi=se_phi,
        se_gamma=se_gamma,
    )


def select_lag(
    panel: StatePanel,
    p_max: int = 8,
    exog: StatePanel | None = None,
) -> tuple[int, dict[int, float]]:
    """Smallest-AIC lag order over a common estimation sample."""
    T, n = panel.values.shape
    q = exog.values.shape[1] if exog is not None else 0
    if T - p_max <= n * p_max + q + 1:
        raise InsufficientSample(f"T={T} too small to compare lags up to {p_max}")
    exog_values = exog.values if exog is not None else None

    aics: dict[int, float] = {}
    best_p, best_aic = 1, np.inf
    nobs = T - p_max
    for p in range(1, p_max + 1):
        Y, Z = _design(panel.values, p, exog_values, offset=p_max)
        gram = Z.T @ Z
        B = np.linalg.solve(gram, Z.T @ Y)
        resid = Y - Z @ B
        dof = nobs - Z.shape[1]
        sigma = resid.T @ resid / dof
        sign, logdet = np.linalg.slogdet(sigma)
        aic = (logdet if sign > 0 else np.inf) + 2.0 * (n * n * p + n + n * q) / nobs
        aics[p] = float(aic)
        if aic < best_aic:
            best_p, best_aic = p, aic
    return best_p, aics


def forecast(
    model: VarModel,
    history: np.ndarray,
    horizon: int = 1,
    exog_future: np.ndarray | None = None,
) -> np.ndarray:
    """Iterated one-step predictions from the last p observations."""
    history = np.atleast_2d(np.asarray(history, dtype=float))
    if history.shape[0] < model.p:
        raise InsufficientSample(f"need {model.p} trailing observations, got {history.shape[0]}")
    if model.n_exog:
        if exog_future is None:
            raise MissingExogenous(f"model uses exogenous {model.exog_names}")
        exog_future = np.atleast_2d(np.asarray(exog_future, dtype=float))
        if exog_future.shape[0] < horizon:
            raise MissingExogenous(f"need {horizon} exogenous rows, got {exog_future.shape[0]}")

    buf = list(history[-model.p:])
    out = np.empty((horizon, model.n_vars))
    for h in range(horizon):
        y = model.intercept.copy()
        for k in range(model.p):
            y += model.phi[k] @ buf[-1 - k]
        if model.n_exog:
            y += model.gamma @ exog_future[h]
        out[h] = y
        buf.append(y)
    return out


def stability_check(model: VarModel) -> tuple[bool, float]:
    eigvals = np.linalg.eigvals(model.companion())
    modulus = float(np.max(np.abs(eigvals)))
    return modulus < 1.0, modulus


def irf(
    model: VarModel,
    shock: str,
    horizon: int = 20,
    orthogonalized: bool = False,
) -> IrfResult:
    """Response of every variable to a one-time shock in one variable.

    Reduced form traces a unit reduced-form innovation; the orthogonalized
    variant shocks one column of the lower-triangular factor of the
    residual covariance, in state-vector order.
    """
    if shock not in model.var_names:
        raise UnknownVariable(f"unknown shock variable {shock!r}")
    stable, modulus = stability_check(model)
    if not stable:
        warnings.warn(f"model is unstable (companion modulus {modulus:.3f}); IRF may diverge")

    n = model.n_vars
    j = model.var_names.index(shock)
    comp = model.companion()
    impact = np.linalg.cholesky(model.sigma)[:, j] if orthogonalized else np.eye(n)[:, j]

    responses = np.empty((horizon + 1, n))
    power = np.eye(comp.shape[0])
    for h in range(horizon + 1):
        responses[h] = power[:n, :n] @ impact
        power = comp @ power
    return IrfResult(
        shock=shock,
        response_names=model.var_names,
        horizons=np.arange(horizon + 1),
        values=responses,
        orthogonalized=orthogonalized,
    )


def granger(
    panel: StatePanel,
    cause: Sequence[str] | str,
    effect: str,
    p: int,
    exog: StatePanel | None = None,
) -> tuple[float, float]:
    """F-test that lags of the cause variables improve the effect equation."""
    cause_names = [cause] if isinstance(cause, str) else list(cause)
    for name in cause_names + [effect]:
        if name not in panel.var_names:
            raise UnknownVariable(f"unknown variable {name!r}")

    values = panel.values
    exog_values = exog.values if exog is not None else None
    Y, Z = _design(values, p, exog_values)
    y = Y[:, panel.var_names.index(effect)]

    cause_cols = set()
    for name in cause_names:
        j = panel.var_names.index(name)
        for lag in range(p):
            cause_cols.add(1 + lag * len(panel.var_names) + j)
    keep = [c for c in range(Z.shape[1]) if c not in cause_cols]

    def rss(X: np.ndarray) -> float:
        if np.linalg.matrix_rank(X.T @ X) < X.shape[1]:
            raise RankDeficient("rank-deficient regression in Granger test")
        beta, *_ = np.linalg.lstsq(X, y, rcond=None)
        e = y - X @ beta
        return float(e @ e)

    rss_u = rss(Z)
    rss_r = rss(Z[:, keep])
    df1 = p * len(cause_names)
    df2 = len(y) - Z.shape[1]
    if df2 <= 0:
        raise InsufficientSample("no residual degrees of freedom")
    f_stat = ((rss_r - rss_u) / df1) / (rss_u / df2)
    p_value = float(f_dist.sf(max(f_stat, 0.0), df1, df2))
    return float(f_stat), p_value


def significance_stars(t_stat: float) -> str:
    for cutoff, stars in _STAR_CUTOFFS:
        if abs(t_stat) > cutoff:
            return stars
    return ""


def format_coefficient(coef: float, se: float) -> str:
    stars = significance_stars(coef / se) if se > 0 else ""
    return f"{coef:.3g}{stars} ({se:.3g})"


@dataclass
class CoefficientReport:
    """Per-equation coefficient table in the source table layout."""

    equations: tuple[str, ...]
    regressors: tuple[str, ...]
    coefs: np.ndarray  # (n_regressors, n_equations)
    ses: np.ndarray
    rows: list[list[str]] = field(default_factory=list)

    def cell(self, regressor: str, equation: str) -> str:
        i = self.regressors.index(regressor)
        j = self.equations.index(equation)
        return format_coefficient(self.coefs[i, j], self.ses[i, j])

    def to_rows(self) -> list[list[str]]:
        """CSV rows with coefficient, standard error, and t labeled."""
        out = [["regressor", "equation", "coef", "se", "tstat", "stars"]]
        for i, reg in enumerate(self.regressors):
            for j, eq in enumerate(self.equations):
                coef, se = float(self.coefs[i, j]), float(self.ses[i, j])
                t = coef / se if se > 0 else np.nan
                out.append([reg, eq, coef, se, t, significance_stars(t) if se > 0 else ""])
        return out

    def render_text(self) -> str:
        """Paper-style layout: one row per regressor, '(se)' in the cell."""
        width = 24
        lines = ["".ljust(width) + "".join(eq.ljust(width) for eq in self.equations)]
        for i, reg in enumerate(self.regressors):
            cells = [
                format_coefficient(float(self.coefs[i, j]), float(self.ses[i, j]))
                for j in range(len(self.equations))
            ]
            lines.append(reg.ljust(width) + "".join(c.ljust(width) for c in cells))
        return "\n".join(lines) + "\n"


def coefficient_report(model: VarModel) -> CoefficientReport:
    regressors = []
    coef_rows = []
    se_rows = []
    for lag in range(model.p):
        for j, name in enumerate(model.var_names):
            regressors.append(f"{name}[t-{lag + 1}]")
            coef_rows.append(model.phi[lag][:, j])
            se_rows.append(model.se_phi[lag][:, j])
    for j, name in enumerate(model.exog_names):
        regressors.append(name)
        coef_rows.append(model.gamma[:, j])
        se_rows.append(model.se_gamma[:, j])
    regressors.append("Constant")
    coef_rows.append(model.intercept)
    se_rows.append(model.se_intercept)
    return CoefficientReport(
        equations=model.var_names,
        regressors=tuple(regressors),
        coefs=np.array(coef_rows),
        ses=np.array(se_rows),
    )


def model_to_json(model: VarModel, path: str | Path) -> None:
    payload = {
        "var_names": list(model.var_names),
        "p": model.p,
        "intercept": model.intercept.tolist(),
        # phi[k] is row-major: phi[k][i][j] = effect of var j at lag k+1 on var i
        "phi": [m.tolist() for m in model.phi],
        "gamma": model.gamma.tolist(),
        "exog_names": list(model.exog_names),
        "sigma": model.sigma.tolist(),
        "nobs": model.nobs,
        "se_intercept": model.se_intercept.tolist(),
        "se_phi": [m.tolist() for m in model.se_phi],
        "se_gamma": model.se_gamma.tolist(),
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def model_from_json(path: str | Path) -> VarModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return VarModel(
        var_names=tuple(payload["var_names"]),
        p=payload["p"],
        intercept=np.array(payload["intercept"]),
        phi=np.array(payload["phi"]),
        gamma=np.array(payload["gamma"]).reshape(len(payload["var_names"]), -1),
        exog_names=tuple(payload["exog_names"]),
        sigma=np.array(payload["sigma"]),
        nobs=payload["nobs"],
        se_intercept=np.array(payload["se_intercept"]),
        se_phi=np.array(payload["se_phi"]),
        se_gamma=np.array(payload["se_gamma"]).reshape(len(payload["var_names"]), -1),
    )
