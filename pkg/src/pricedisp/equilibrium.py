"""Closed-form equilibrium of a two-firm pricing game with unit capacity and
uncertain aggregate demand.

Two symmetric firms with marginal cost ``c`` face consumers with reservation
value ``v``. Demand is high (two consumers) with probability ``alpha`` and low
(one consumer) otherwise; each firm can sell at most one unit. The game has no
symmetric pure-strategy equilibrium; the symmetric mixed equilibrium has each
firm drawing its price from the distribution

    F(p) = ((p - c) - alpha*(v - c)) / ((p - c)*(1 - alpha))

on the support [alpha*v + (1 - alpha)*c, v], which makes every supported price
earn the same expected profit alpha*(v - c).

This module provides the analytic objects (CDF, quantile, density, moments,
profit) and grid-based deviation searches that certify the pure-strategy
(non-)existence results numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy import integrate

# Relative margin below which a profit difference does not count as a
# profitable deviation (scaled by v - c to stay unit-free).
PROFIT_TOL_FRAC = 1e-12

# Deviation step sizes as fractions of (v - c); the existence arguments only
# need *some* small step, so a geometric grid suffices.
EPS_FRACTIONS = tuple(10.0 ** -k for k in range(1, 9))


class IntegrationError(RuntimeError):
    """Raised when numerical quadrature cannot reach the required tolerance."""


@dataclass(frozen=True)
class MarketParams:
    """Primitives of one market: cost c, reservation value v, and the
    probability alpha of the high-demand state."""

    c: float
    v: float
    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.c) or self.c < 0:
            raise ValueError(f"marginal cost must be finite and >= 0, got {self.c}")
        if not math.isfinite(self.v) or not self.v > self.c:
            raise ValueError(f"reservation value must exceed cost: v={self.v}, c={self.c}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"high-demand probability must lie in (0, 1), got {self.alpha}")

    @property
    def scale(self) -> float:
        """Price scale v - c used for unit-free tolerances."""
        return self.v - self.c


@dataclass(frozen=True)
class TieBreakRule:
    """Probabilities of serving demand on a price tie.

    ``t`` is the chance the checked firm serves the single low-state consumer;
    ``r`` and ``s`` are the chances of selling two units and one unit on a
    high-state tie in the no-capacity variant (residual mass 1 - r - s is no
    sale).
    """

    t: float = 0.5
    r: float = 1.0 / 3.0
    s: float = 1.0 / 3.0

    def __post_init__(self) -> None:
        if not 0.0 < self.t < 1.0:
            raise ValueError(f"t must lie in (0, 1), got {self.t}")
        if not 0.0 < self.r < 1.0:
            raise ValueError(f"r must lie in (0, 1), got {self.r}")
        if not 0.0 < self.s < 1.0 - self.r:
            raise ValueError(f"s must lie in (0, 1 - r), got s={self.s}, r={self.r}")


class DemandState(Enum):
    HIGH = "high"  # two active consumers
    LOW = "low"  # one active consumer


@dataclass(frozen=True)
class DeviationReport:
    """Outcome of a deviation search at one symmetric price candidate."""

    candidate_price: float
    best_deviation_price: float
    profit_at_candidate: float
    profit_at_deviation: float
    profitable: bool


def equilibrium_support(params: MarketParams) -> tuple[float, float]:
    """Support endpoints of the mixed equilibrium: (alpha*v + (1-alpha)*c, v)."""
    p_lower = params.alpha * params.v + (1.0 - params.alpha) * params.c
    return p_lower, params.v


def equilibrium_cdf(params: MarketParams, p) -> float | np.ndarray:
    """Equilibrium price CDF, extended by 0 below the support and 1 above."""
    p_arr = np.asarray(p, dtype=float)
    p_lower, p_upper = equilibrium_support(params)
    with np.errstate(divide="ignore", invalid="ignore"):
        markup = p_arr - params.c
        interior = (markup - params.alpha * (params.v - params.c)) / (
            markup * (1.0 - params.alpha)
        )
    out = np.where(p_arr <= p_lower, 0.0, np.where(p_arr >= p_upper, 1.0, interior))
    if np.isscalar(p) or p_arr.ndim == 0:
        return float(out)
    return out


def equilibrium_quantile(params: MarketParams, u) -> float | np.ndarray:
    """Inverse of the equilibrium CDF: P(u) = c + alpha*(v-c)/(1 - u*(1-alpha))."""
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0.0) or np.any(u_arr > 1.0):
        raise ValueError("quantile argument must lie in [0, 1]")
    out = params.c + params.alpha * (params.v - params.c) / (
        1.0 - u_arr * (1.0 - params.alpha)
    )
    if np.isscalar(u) or u_arr.ndim == 0:
        return float(out)
    return out


def equilibrium_density(params: MarketParams, p) -> float | np.ndarray:
    """Density of the equilibrium distribution, zero off the support.

    Differentiating the CDF in p gives f(p) = alpha*(v-c) / ((1-alpha)*(p-c)^2).
    """
    p_arr = np.asarray(p, dtype=float)
    p_lower, p_upper = equilibrium_support(params)
    with np.errstate(divide="ignore"):
        interior = (
            params.alpha
            * (params.v - params.c)
            / ((1.0 - params.alpha) * (p_arr - params.c) ** 2)
        )
    out = np.where((p_arr < p_lower) | (p_arr > p_upper), 0.0, interior)
    if np.isscalar(p) or p_arr.ndim == 0:
        return float(out)
    return out


def expected_profit(
    params: MarketParams, p, opponent_cdf: Callable[[float], float]
) -> float | np.ndarray:
    """Expected profit of a firm posting ``p`` against an opponent mixing per
    ``opponent_cdf``. Accepts scalar or array prices.

    The firm sells for sure when it is cheaper (probability 1 - F(p)) and only
    in the high state when undercut (probability alpha * F(p)).
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < params.c) or np.any(p_arr > params.v):
        raise ValueError(f"price {p} outside [c, v] = [{params.c}, {params.v}]")
    f_p = np.asarray(opponent_cdf(p_arr), dtype=float)
    markup = p_arr - params.c
    out = markup * (1.0 - f_p) + params.alpha * markup * f_p
    if np.isscalar(p) or p_arr.ndim == 0:
        return float(out)
    return out


def equilibrium_profit(params: MarketParams) -> float:
    """Per-firm expected profit in the mixed equilibrium: alpha*(v - c)."""
    return params.alpha * (params.v - params.c)


def equilibrium_moments(params: MarketParams) -> tuple[float, float, float]:
    """Mean, standard deviation, and CV of the equilibrium price distribution.

    Computed by adaptive quadrature of the density over the support (the
    distribution is atomless, so no point-mass correction is needed).

    Raises IntegrationError if the quadrature error estimate exceeds the
    1e-10 relative tolerance.
    """
    p_lower, p_upper = equilibrium_support(params)

    def _quad(f) -> float:
        val, err = integrate.quad(
            f, p_lower, p_upper, epsabs=1e-13, epsrel=1e-13, limit=200
        )
        if err > 1e-10 * max(1.0, abs(val)):
            raise IntegrationError(
                f"quadrature error {err:.3e} exceeds tolerance for {params}"
            )
        return val

    density = lambda p: equilibrium_density(params, p)
    mass = _quad(density)
    if abs(mass - 1.0) > 1e-9:
        raise IntegrationError(f"density mass {mass} != 1 for {params}")
    mean = _quad(lambda p: p * density(p))
    second = _quad(lambda p: p * p * density(p))
    var = max(second - mean * mean, 0.0)
    std = math.sqrt(var)
    return mean, std, std / mean


@dataclass(frozen=True)
class MixedStrategy:
    """Bound view of the mixed equilibrium for a fixed parameter set."""

    p_lower: float
    p_upper: float
    params: MarketParams

    @classmethod
    def from_params(cls, params: MarketParams) -> "MixedStrategy":
        lo, hi = equilibrium_support(params)
        return cls(p_lower=lo, p_upper=hi, params=params)

    def cdf(self, p):
        return equilibrium_cdf(self.params, p)

    def quantile(self, u):
        return equilibrium_quantile(self.params, u)

    def density(self, p):
        return equilibrium_density(self.params, p)

    def moments(self) -> tuple[float, float, float]:
        return equilibrium_moments(self.params)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Inverse-transform draws from the equilibrium distribution."""
        return np.asarray(equilibrium_quantile(self.params, rng.random(size)))


def _profit_tol(params: MarketParams) -> float:
    return PROFIT_TOL_FRAC * params.scale


def _best_of(prices_profits: list[tuple[float, float]]) -> tuple[float, float]:
    return max(prices_profits, key=lambda pair: pair[1])


def check_no_pure_symmetric(
    params: MarketParams,
    tie_break: TieBreakRule | None = None,
    grid_size: int = 101,
) -> list[DeviationReport]:
    """Deviation search over symmetric pure candidates in the capacity-
    constrained game with uncertain demand.

    At a common price P > c the checked firm earns [alpha + t*(1-alpha)]*(P-c);
    undercutting to P - eps earns P - c - eps, which wins for small eps. At
    P = c the firm earns zero and raising to c + eps earns alpha*eps (it still
    sells in the high state because the rival's capacity binds). Every
    candidate therefore admits a profitable deviation.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    tie = tie_break or TieBreakRule()
    tol = _profit_tol(params)
    reports = []
    for p_cand in np.linspace(params.c, params.v, grid_size):
        p_cand = float(p_cand)
        if p_cand <= params.c:
            cand_profit = 0.0
            options = [
                (params.c + eps, params.alpha * eps)
                for eps in (f * params.scale for f in EPS_FRACTIONS)
                if params.c + eps < params.v
            ]
        else:
            cand_profit = (params.alpha + tie.t * (1.0 - params.alpha)) * (
                p_cand - params.c
            )
            options = [
                (p_cand - eps, p_cand - params.c - eps)
                for eps in (f * params.scale for f in EPS_FRACTIONS)
                if p_cand - eps > params.c
            ]
        best_price, best_profit = _best_of(options)
        reports.append(
            DeviationReport(
                candidate_price=p_cand,
                best_deviation_price=best_price,
                profit_at_candidate=cand_profit,
                profit_at_deviation=best_profit,
                profitable=best_profit > cand_profit + tol,
            )
        )
    return reports


def pure_equilibrium_no_capacity(params: MarketParams) -> float:
    """Symmetric pure equilibrium price with uncertain demand but no capacity
    limit: marginal-cost pricing, as in standard Bertrand competition."""
    return params.c


def check_no_capacity_candidates(
    params: MarketParams,
    tie_break: TieBreakRule | None = None,
    grid_size: int = 101,
) -> list[DeviationReport]:
    """Deviation search in the no-capacity variant.

    The candidate P = c admits no profitable deviation (raising the price
    loses all sales to the unconstrained rival). Every candidate P > c is
    beaten by undercutting: the tie earns [alpha*(2r+s) + (1-alpha)*t]*(P-c)
    while P - eps serves all demand and earns (1+alpha)*(P-c-eps).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    tie = tie_break or TieBreakRule()
    tol = _profit_tol(params)
    reports = []
    for p_cand in np.linspace(params.c, params.v, grid_size):
        p_cand = float(p_cand)
        if p_cand <= params.c:
            # Raising the price yields zero sales against a rival at c.
            options = [
                (params.c + eps, 0.0)
                for eps in (f * params.scale for f in EPS_FRACTIONS)
                if params.c + eps <= params.v
            ]
            cand_profit = 0.0
        else:
            cand_profit = (
                params.alpha * (2.0 * tie.r + tie.s) + (1.0 - params.alpha) * tie.t
            ) * (p_cand - params.c)
            options = [
                (p_cand - eps, (1.0 + params.alpha) * (p_cand - params.c - eps))
                for eps in (f * params.scale for f in EPS_FRACTIONS)
                if p_cand - eps > params.c
            ]
        best_price, best_profit = _best_of(options)
        reports.append(
            DeviationReport(
                candidate_price=p_cand,
                best_deviation_price=best_price,
                profit_at_candidate=cand_profit,
                profit_at_deviation=best_profit,
                profitable=best_profit > cand_profit + tol,
            )
        )
    return reports


def pure_equilibrium_known_state(params: MarketParams, state: DemandState) -> float:
    """Symmetric pure equilibrium price when the demand state is known and
    capacity binds: v in the high state, c in the low state."""
    return params.v if state is DemandState.HIGH else params.c


def check_known_state_equilibrium(
    params: MarketParams,
    state: DemandState,
    tie_break: TieBreakRule | None = None,
    grid_size: int = 1001,
) -> DeviationReport:
    """Verify on a deviation-price grid that the known-state equilibrium price
    admits no profitable unilateral deviation."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    tol = _profit_tol(params)
    eq_price = pure_equilibrium_known_state(params, state)
    grid = np.linspace(params.c, params.v, grid_size)
    if state is DemandState.HIGH:
        # Rival at v with unit capacity: the deviating firm sells with
        # probability one at any price in [c, v].
        cand_profit = params.v - params.c
        profits = grid - params.c
    else:
        tie = tie_break or TieBreakRule()
        # Rival at c: only a tie at c (zero markup) ever sells.
        cand_profit = 0.0
        profits = np.where(grid <= params.c, tie.t * (grid - params.c), 0.0)
    best = int(np.argmax(profits))
    return DeviationReport(
        candidate_price=eq_price,
        best_deviation_price=float(grid[best]),
        profit_at_candidate=cand_profit,
        profit_at_deviation=float(profits[best]),
        profitable=float(profits[best]) > cand_profit + tol,
    )


def check_mixed_equilibrium(
    params: MarketParams, grid_size: int = 1001
) -> list[DeviationReport]:
    """Certify the mixed equilibrium on a grid over [c, v].

    Prices on the support must earn the constant profit alpha*(v-c); prices
    strictly below the lower endpoint must earn strictly less. A report is
    'profitable' when the candidate beats the equilibrium profit beyond
    tolerance, so the equilibrium verifies iff no report is profitable.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    strategy = MixedStrategy.from_params(params)
    eq_profit = equilibrium_profit(params)
    tol = _profit_tol(params)
    reports = []
    for p in np.linspace(params.c, params.v, grid_size):
        profit = expected_profit(params, float(p), strategy.cdf)
        reports.append(
            DeviationReport(
                candidate_price=float(p),
                best_deviation_price=float(p),
                profit_at_candidate=eq_profit,
                profit_at_deviation=profit,
                profitable=profit > eq_profit + tol,
            )
        )
    return reports
