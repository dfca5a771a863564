"""Dense OLS with classical inference and high-dimensional fixed-effect
absorption by iterated demeaning.

The solver works on an explicit design matrix (intercept included by the
caller or via ``design_matrix``). Collinear columns are dropped greedily in
column order, so dummy traps resolve deterministically: the later-indexed
redundant column goes, and the result records which.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

Z_95 = 1.96  # normal critical value; sample sizes here make Student-t moot

_RANK_RTOL = 1e-10


class DemeaningConvergenceError(RuntimeError):
    """Iterated demeaning failed to converge within the sweep budget."""


@dataclass
class RegressionResult:
    coefficients: dict[str, float]
    std_errors: dict[str, float]
    conf_intervals_95: dict[str, tuple[float, float]]
    r_squared: float
    n_obs: int
    dof: int
    dropped_terms: list[str] = field(default_factory=list)

    def coef(self, name: str) -> float:
        return self.coefficients[name]

    def ci(self, name: str) -> tuple[float, float]:
        return self.conf_intervals_95[name]


def _independent_columns(X: np.ndarray, rtol: float = _RANK_RTOL) -> list[int]:
    """Greedy forward selection of linearly independent columns.

    Modified Gram-Schmidt with one reorthogonalization pass; a column is kept
    when its residual against the span of earlier kept columns exceeds
    ``rtol`` times its own norm.
    """
    n, k = X.shape
    Q = np.empty((n, k))
    kept: list[int] = []
    for j in range(k):
        x = X[:, j]
        norm0 = np.linalg.norm(x)
        if norm0 == 0.0:
            continue
        r = x.astype(float, copy=True)
        for _ in range(2):
            if kept:
                basis = Q[:, : len(kept)]
                r -= basis @ (basis.T @ r)
        norm_r = np.linalg.norm(r)
        if norm_r > rtol * norm0:
            Q[:, len(kept)] = r / norm_r
            kept.append(j)
    return kept


def ols(
    y: np.ndarray,
    X: np.ndarray,
    names: Sequence[str] | None = None,
    extra_dof_absorbed: int = 0,
) -> RegressionResult:
    """Least squares via QR with classical homoskedastic standard errors.

    ``extra_dof_absorbed`` charges degrees of freedom for fixed effects that
    were swept out of ``y`` and ``X`` before the call.
    """
    y = np.asarray(y, dtype=float).ravel()
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"design has {X.shape[0]} rows for {y.shape[0]} responses")
    n, k = X.shape
    if names is None:
        names = [f"x{j}" for j in range(k)]
    if len(names) != k:
        raise ValueError(f"{len(names)} names for {k} columns")

    kept = _independent_columns(X)
    if not kept:
        raise ValueError("design matrix has no independent columns")
    dropped = [names[j] for j in range(k) if j not in set(kept)]
    Xk = X[:, kept]
    k_eff = len(kept)
    dof = n - k_eff - extra_dof_absorbed
    if dof < 1:
        raise ValueError(
            f"insufficient observations: n={n}, parameters={k_eff + extra_dof_absorbed}"
        )

    Q, R = np.linalg.qr(Xk)
    beta = solve_triangular(R, Q.T @ y)
    resid = y - Xk @ beta
    sse = float(resid @ resid)
    centered = y - y.mean()
    sst = float(centered @ centered)
    if sst > 0.0:
        r_squared = 1.0 - sse / sst
    else:
        r_squared = 0.0

    sigma2 = sse / dof
    r_inv = solve_triangular(R, np.eye(k_eff))
    xtx_inv_diag = np.sum(r_inv * r_inv, axis=1)
    se = np.sqrt(sigma2 * xtx_inv_diag)

    kept_names = [names[j] for j in kept]
    coefficients = dict(zip(kept_names, beta.tolist()))
    std_errors = dict(zip(kept_names, se.tolist()))
    conf = {
        name: (b - Z_95 * s, b + Z_95 * s)
        for name, b, s in zip(kept_names, beta.tolist(), se.tolist())
    }
    return RegressionResult(
        coefficients=coefficients,
        std_errors=std_errors,
        conf_intervals_95=conf,
        r_squared=r_squared,
        n_obs=n,
        dof=dof,
        dropped_terms=dropped,
    )


def design_matrix(
    columns: Sequence[np.ndarray], names: Sequence[str], intercept: bool = True
) -> tuple[np.ndarray, list[str]]:
    """Stack regressors into a design, with the intercept first."""
    cols = [np.asarray(c, dtype=float).ravel() for c in columns]
    out_names = list(names)
    if intercept:
        cols = [np.ones_like(cols[0])] + cols
        out_names = ["const"] + out_names
    return np.column_stack(cols), out_names


def dummy_columns(labels: Sequence, prefix: str) -> tuple[np.ndarray, list[str]]:
    """Full indicator expansion of a categorical variable (no level dropped;
    the solver's rank handling resolves the dummy trap)."""
    arr = np.asarray(labels)
    levels, codes = np.unique(arr, return_inverse=True)
    mat = np.zeros((arr.shape[0], levels.shape[0]))
    mat[np.arange(arr.shape[0]), codes] = 1.0
    names = [f"{prefix}[{lvl}]" for lvl in levels]
    return mat, names


def _factorize(labels: Sequence) -> tuple[np.ndarray, int]:
    levels, codes = np.unique(np.asarray(labels), return_inverse=True)
    return codes, levels.shape[0]


def absorbed_dof(groups: Sequence[Sequence]) -> int:
    """Parameters implicitly spent on absorbed fixed effects: total levels
    minus the redundant shared intercepts between factors."""
    counts = [_factorize(g)[1] for g in groups]
    return sum(counts) - (len(counts) - 1)


def absorb_fixed_effects(
    y: np.ndarray,
    X: np.ndarray | None,
    groups: Sequence[Sequence],
    tol: float = 1e-10,
    max_sweeps: int = 10_000,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Within-transform ``y`` (and ``X``) against one or more categorical
    factors by iterated demeaning.

    A single factor converges in one sweep; multiple factors alternate until
    the largest absolute adjustment falls below ``tol``. Frisch-Waugh
    guarantees the subsequent OLS coefficients match full-dummy OLS.
    """
    if not groups:
        raise ValueError("need at least one factor to absorb")
    y = np.asarray(y, dtype=float).ravel()
    if X is None:
        Z = y[:, None].copy()
    else:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Z = np.column_stack([y, X])
    factors = [_factorize(g) for g in groups]
    for codes, _ in factors:
        if codes.shape[0] != Z.shape[0]:
            raise ValueError("factor length does not match the data")

    for _ in range(max_sweeps):
        max_change = 0.0
        for codes, n_levels in factors:
            counts = np.bincount(codes, minlength=n_levels).astype(float)
            for col in range(Z.shape[1]):
                sums = np.bincount(codes, weights=Z[:, col], minlength=n_levels)
                means = sums / counts
                adjustment = means[codes]
                Z[:, col] -= adjustment
                change = float(np.max(np.abs(adjustment))) if adjustment.size else 0.0
                max_change = max(max_change, change)
        if max_change < tol:
            break
    else:
        raise DemeaningConvergenceError(
            f"demeaning did not converge below {tol} in {max_sweeps} sweeps"
        )

    y_out = Z[:, 0].copy()
    X_out = Z[:, 1:].copy() if X is not None else None
    return y_out, X_out


def ols_absorbed(
    y: np.ndarray,
    X: np.ndarray,
    names: Sequence[str],
    groups: Sequence[Sequence],
) -> RegressionResult:
    """OLS after sweeping out fixed effects, with degrees of freedom charged
    for the absorbed group dummies. The reported R-squared is the within
    R-squared (variation around the absorbed group structure).

    Raises if the absorbed structure soaks up all variation in ``y``.
    """
    y = np.asarray(y, dtype=float).ravel()
    y_dm, X_dm = absorb_fixed_effects(y, X, groups)
    total = float(y @ y)
    residual = float(y_dm @ y_dm)
    if total > 0.0 and residual <= 1e-12 * total:
        raise ValueError("fixed effects absorb all variation in the dependent variable")
    return ols(y_dm, X_dm, names=names, extra_dof_absorbed=absorbed_dof(groups))
