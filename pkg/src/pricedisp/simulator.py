"""Synthetic posted-price panel generator.

Each website posting a price for a hotel room plays the mixed-strategy
equilibrium of the capacity-constrained pricing game, so prices across
websites for the same room are independent draws from the equilibrium
distribution. The high-demand probability follows a schedule in days before
the stay date; with the default schedule uncertainty resolves toward the stay
date, which raises mean prices and shrinks cross-website dispersion.

Determinism contract: every (hotel, stay date) cell draws from its own RNG
substream derived from the master seed, so the panel is bit-identical no
matter in what order (or on how many workers) cells are generated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .equilibrium import MarketParams, equilibrium_quantile
from .panel import PriceObservation, sort_panel

# Substream tags keeping hotel-attribute draws, price draws, and sell-out
# draws on disjoint seed sequences.
_STREAM_HOTELS = 0
_STREAM_PRICES = 1
_STREAM_SELLOUT = 2

DEFAULT_STAY_DATES = tuple(date(2017, 11, 7) + timedelta(days=k) for k in range(7))

_WEBSITE_POOL = tuple(f"site_{k:02d}" for k in range(19))


def linear_alpha_schedule(horizon_days: int, alpha_far: float = 0.5) -> dict[int, float]:
    """Linearly resolving uncertainty: alpha(d) = 1 - (1 - alpha_far) * d / D
    for d = 1..D days before the stay, so alpha rises toward 1 near check-in.
    """
    if horizon_days < 1:
        raise ValueError("horizon must be at least 1 day")
    if not 0.0 < alpha_far < 1.0:
        raise ValueError("alpha_far must lie in (0, 1)")
    return {
        d: 1.0 - (1.0 - alpha_far) * d / horizon_days
        for d in range(1, horizon_days + 1)
    }


@dataclass(frozen=True)
class SimulationConfig:
    num_hotels: int = 200
    websites_min: int = 1
    websites_max: int = 19
    stay_dates: tuple[date, ...] = DEFAULT_STAY_DATES
    horizon_days: int = 15
    alpha_schedule: Mapping[int, float] | None = None
    cost_range: tuple[float, float] = (10.0, 55.0)
    value_range: tuple[float, float] = (60.0, 1000.0)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_hotels < 1:
            raise ValueError("need at least one hotel")
        if not 1 <= self.websites_min <= self.websites_max <= len(_WEBSITE_POOL):
            raise ValueError(
                f"website bounds must satisfy 1 <= min <= max <= {len(_WEBSITE_POOL)}"
            )
        if not self.stay_dates:
            raise ValueError("need at least one stay date")
        if self.horizon_days < 1:
            raise ValueError("horizon must be at least 1 day")
        if not self.cost_range[0] <= self.cost_range[1]:
            raise ValueError(f"cost range out of order: {self.cost_range}")
        if not self.value_range[0] <= self.value_range[1]:
            raise ValueError(f"value range out of order: {self.value_range}")
        if not self.value_range[0] > self.cost_range[1]:
            raise ValueError(
                "value range must sit strictly above the cost range so every "
                f"hotel draw has v > c; got {self.cost_range} vs {self.value_range}"
            )
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        for d, a in self.schedule.items():
            if not 1 <= d <= self.horizon_days:
                raise ValueError(f"schedule key {d} outside 1..{self.horizon_days}")
            if not 0.0 < a < 1.0:
                raise ValueError(f"schedule alpha at {d} days must be in (0, 1), got {a}")
        if set(self.schedule) != set(range(1, self.horizon_days + 1)):
            raise ValueError("alpha schedule must cover every lead time 1..horizon")

    @property
    def schedule(self) -> Mapping[int, float]:
        if self.alpha_schedule is not None:
            return self.alpha_schedule
        return linear_alpha_schedule(self.horizon_days)

    def to_json(self) -> str:
        doc = {
            "num_hotels": self.num_hotels,
            "websites_min": self.websites_min,
            "websites_max": self.websites_max,
            "stay_dates": [d.isoformat() for d in self.stay_dates],
            "horizon_days": self.horizon_days,
            "alpha_schedule": {str(k): v for k, v in self.schedule.items()},
            "cost_range": list(self.cost_range),
            "value_range": list(self.value_range),
            "seed": self.seed,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SimulationConfig":
        doc = json.loads(text)
        known = {
            "num_hotels",
            "websites_min",
            "websites_max",
            "stay_dates",
            "horizon_days",
            "alpha_schedule",
            "cost_range",
            "value_range",
            "seed",
        }
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        kwargs: dict = {}
        if "stay_dates" in doc:
            kwargs["stay_dates"] = tuple(date.fromisoformat(d) for d in doc["stay_dates"])
        if "alpha_schedule" in doc and doc["alpha_schedule"] is not None:
            kwargs["alpha_schedule"] = {
                int(k): float(v) for k, v in doc["alpha_schedule"].items()
            }
        for key in ("num_hotels", "websites_min", "websites_max", "horizon_days", "seed"):
            if key in doc:
                kwargs[key] = int(doc[key])
        for key in ("cost_range", "value_range"):
            if key in doc:
                kwargs[key] = (float(doc[key][0]), float(doc[key][1]))
        return cls(**kwargs)


@dataclass(frozen=True)
class Hotel:
    """One hotel-room product with its fixed covariates and market primitives."""

    hotel_id: str
    room_type: str
    c: float
    v: float
    websites: tuple[str, ...]
    page_number: int
    num_reviews: int
    star_rating: int
    review_rating: float


def draw_hotels(config: SimulationConfig) -> list[Hotel]:
    """Hotel attributes drawn once from the master seed (shared across cells)."""
    hotels = []
    for i in range(config.num_hotels):
        rng = np.random.default_rng(
            np.random.SeedSequence([config.seed, _STREAM_HOTELS, i])
        )
        c = rng.uniform(*config.cost_range)
        v = rng.uniform(*config.value_range)
        n_sites = int(rng.integers(config.websites_min, config.websites_max + 1))
        websites = tuple(
            sorted(rng.choice(len(_WEBSITE_POOL), size=n_sites, replace=False))
        )
        hotels.append(
            Hotel(
                hotel_id=f"hotel_{i:04d}",
                room_type="Double" if rng.random() < 0.5 else "Single",
                c=float(c),
                v=float(v),
                websites=tuple(_WEBSITE_POOL[w] for w in websites),
                page_number=i // 25 + 1,
                num_reviews=int(round(10.0 ** rng.uniform(1.0, math.log10(5000.0)))),
                star_rating=int(rng.integers(2, 6)),
                review_rating=float(np.round(rng.uniform(6.0, 10.0), 1)),
            )
        )
    return hotels


def _simulate_cell(
    config: SimulationConfig, hotel: Hotel, hotel_idx: int, stay_idx: int
) -> list[PriceObservation]:
    """All observations for one (hotel, stay date) cell from its own substream."""
    rng = np.random.default_rng(
        np.random.SeedSequence([config.seed, _STREAM_PRICES, hotel_idx, stay_idx])
    )
    stay = config.stay_dates[stay_idx]
    out = []
    for d in range(config.horizon_days, 0, -1):
        params = MarketParams(c=hotel.c, v=hotel.v, alpha=config.schedule[d])
        prices = equilibrium_quantile(params, rng.random(len(hotel.websites)))
        booking = stay - timedelta(days=d)
        for website, price in zip(hotel.websites, np.atleast_1d(prices)):
            out.append(
                PriceObservation(
                    stay_date=stay,
                    booking_date=booking,
                    hotel_id=hotel.hotel_id,
                    room_type=hotel.room_type,
                    website_id=website,
                    price=float(price),
                    page_number=hotel.page_number,
                    num_reviews=hotel.num_reviews,
                    star_rating=hotel.star_rating,
                    review_rating=hotel.review_rating,
                )
            )
    return out


def simulate_panel(
    config: SimulationConfig,
    cell_order: Sequence[tuple[int, int]] | None = None,
) -> list[PriceObservation]:
    """Generate the full panel.

    ``cell_order`` exists to exercise the determinism contract: generating the
    (hotel, stay) cells in any order yields the identical sorted panel.
    """
    hotels = draw_hotels(config)
    if cell_order is None:
        cell_order = [
            (h, s) for h in range(len(hotels)) for s in range(len(config.stay_dates))
        ]
    panel: list[PriceObservation] = []
    for hotel_idx, stay_idx in cell_order:
        panel.extend(_simulate_cell(config, hotels[hotel_idx], hotel_idx, stay_idx))
    return sort_panel(panel)


@dataclass(frozen=True)
class SelloutProcess:
    """Daily booking counts, Poisson with a fixed mean, on their own seed."""

    daily_booking_rate: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.daily_booking_rate < 0:
            raise ValueError("booking rate must be >= 0")


def apply_sellout(
    panel: Iterable[PriceObservation],
    capacity_per_hotel: float,
    demand_process: SelloutProcess | None = None,
) -> list[PriceObservation]:
    """Drop observations after a (hotel, stay) cell's cumulative bookings reach
    capacity, mimicking fully booked hotels vanishing from search results.

    ``capacity_per_hotel`` may be ``math.inf`` to disable the constraint.
    """
    if capacity_per_hotel < 1:
        raise ValueError("capacity must be at least 1 room")
    process = demand_process or SelloutProcess()
    panel = sort_panel(panel)
    if math.isinf(capacity_per_hotel):
        return panel

    cells: dict[tuple, list[date]] = {}
    for obs in panel:
        key = (obs.hotel_id, obs.stay_date)
        dates = cells.setdefault(key, [])
        if obs.booking_date not in dates:
            dates.append(obs.booking_date)

    cutoff: dict[tuple, date] = {}
    for idx, (key, booking_dates) in enumerate(sorted(cells.items())):
        rng = np.random.default_rng(
            np.random.SeedSequence([process.seed, _STREAM_SELLOUT, idx])
        )
        sold = 0
        for day in sorted(booking_dates):
            sold += int(rng.poisson(process.daily_booking_rate))
            if sold >= capacity_per_hotel:
                cutoff[key] = day
                break

    kept = []
    for obs in panel:
        limit = cutoff.get((obs.hotel_id, obs.stay_date))
        if limit is None or obs.booking_date <= limit:
            kept.append(obs)
    return kept
