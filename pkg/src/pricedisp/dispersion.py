"""Group-level price dispersion statistics.

A group is a (stay date, booking date, hotel, room type) cell; its prices are
what different websites post for the same room at the same moment. The
headline statistic is the coefficient of variation (std / mean), which is zero
by definition for single-website groups.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

from .panel import PriceObservation

DISPERSION_HEADER = [
    "stay_date",
    "booking_date",
    "hotel_id",
    "room_type",
    "n_websites",
    "mean_price",
    "std_price",
    "cv",
    "range",
    "min_price",
    "max_price",
]

LEAD_TIME_HEADER = ["days_before_stay", "mean_price"]


@dataclass(frozen=True)
class DispersionRecord:
    stay_date: date
    booking_date: date
    hotel_id: str
    room_type: str
    n_websites: int
    mean_price: float
    std_price: float
    cv: float
    range: float
    min_price: float
    max_price: float

    @property
    def group_key(self) -> tuple[date, date, str, str]:
        return (self.stay_date, self.booking_date, self.hotel_id, self.room_type)

    @property
    def lead_time_days(self) -> int:
        return (self.stay_date - self.booking_date).days


class _Welford:
    """Numerically stable streaming mean/variance accumulator."""

    __slots__ = ("n", "mean", "m2", "min", "max")

    def __init__(self) -> None:
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.min = math.inf
        self.max = -math.inf

    def add(self, x: float) -> None:
        self.n += 1
        delta = x - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (x - self.mean)
        self.min = min(self.min, x)
        self.max = max(self.max, x)

    def sample_std(self) -> float:
        if self.n < 2:
            return 0.0
        return math.sqrt(max(self.m2, 0.0) / (self.n - 1))


def compute_dispersion(panel: Iterable[PriceObservation]) -> list[DispersionRecord]:
    """One record per group, in group-key order.

    Uses the sample (n-1) standard deviation for groups with at least two
    websites; single-website groups get std = cv = 0.
    """
    groups: dict[tuple, _Welford] = {}
    for obs in panel:
        if not obs.price > 0:
            raise ValueError(f"nonpositive price {obs.price} in group {obs.group_key}")
        groups.setdefault(obs.group_key, _Welford()).add(obs.price)
    records = []
    for key in sorted(groups):
        acc = groups[key]
        std = acc.sample_std()
        records.append(
            DispersionRecord(
                stay_date=key[0],
                booking_date=key[1],
                hotel_id=key[2],
                room_type=key[3],
                n_websites=acc.n,
                mean_price=acc.mean,
                std_price=std,
                cv=std / acc.mean if acc.n >= 2 else 0.0,
                range=acc.max - acc.min,
                min_price=acc.min,
                max_price=acc.max,
            )
        )
    return records


def mean_price_by_lead_time(panel: Sequence[PriceObservation]) -> dict[int, float]:
    """Arithmetic mean of all posted prices at each lead time (days before stay)."""
    if not panel:
        raise ValueError("empty panel")
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for obs in panel:
        d = obs.lead_time_days
        sums[d] = sums.get(d, 0.0) + obs.price
        counts[d] = counts.get(d, 0) + 1
    return {d: sums[d] / counts[d] for d in sorted(sums)}


def write_dispersion_csv(records: Sequence[DispersionRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(DISPERSION_HEADER)
        for rec in records:
            writer.writerow(
                [
                    rec.stay_date.isoformat(),
                    rec.booking_date.isoformat(),
                    rec.hotel_id,
                    rec.room_type,
                    rec.n_websites,
                    repr(rec.mean_price),
                    repr(rec.std_price),
                    repr(rec.cv),
                    repr(rec.range),
                    repr(rec.min_price),
                    repr(rec.max_price),
                ]
            )


def write_lead_time_csv(table: dict[int, float], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LEAD_TIME_HEADER)
        for d in sorted(table):
            writer.writerow([d, repr(table[d])])


def scatter_rows(
    records: Sequence[DispersionRecord], kind: str
) -> list[tuple[float, float]]:
    """(mean price, dispersion statistic) pairs for scatter plotting."""
    if kind == "cv":
        return [(rec.mean_price, rec.cv) for rec in records]
    if kind == "std":
        return [(rec.mean_price, rec.std_price) for rec in records]
    raise ValueError(f"scatter kind must be 'cv' or 'std', got {kind!r}")


def write_scatter_csv(
    records: Sequence[DispersionRecord], kind: str, path: str | Path
) -> None:
    rows = scatter_rows(records, kind)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["mean_price", kind])
        for mean_price, stat in rows:
            writer.writerow([repr(mean_price), repr(stat)])
