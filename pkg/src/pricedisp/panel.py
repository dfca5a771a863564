"""Posted-price panel records and their CSV serialization.

One observation is a price listed on a website for a (stay date, booking date,
hotel, room type) cell, together with hotel-level covariates. The CSV layout
is fixed:

    stay_date,booking_date,hotel_id,room_type,website_id,price_gbp,page_number,num_reviews,star_rating,review_rating

with ISO-8601 dates and full-precision prices.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

ROOM_TYPES = ("Single", "Double")

PANEL_HEADER = [
    "stay_date",
    "booking_date",
    "hotel_id",
    "room_type",
    "website_id",
    "price_gbp",
    "page_number",
    "num_reviews",
    "star_rating",
    "review_rating",
]


class PanelFormatError(ValueError):
    """Raised when a panel CSV violates the schema."""


@dataclass(frozen=True)
class PriceObservation:
    stay_date: date
    booking_date: date
    hotel_id: str
    room_type: str
    website_id: str
    price: float
    page_number: int
    num_reviews: int
    star_rating: int
    review_rating: float

    def __post_init__(self) -> None:
        if self.booking_date > self.stay_date:
            raise ValueError(
                f"booking date {self.booking_date} after stay date {self.stay_date}"
            )
        if not (math.isfinite(self.price) and self.price > 0):
            raise ValueError(f"price must be positive and finite, got {self.price}")
        if self.room_type not in ROOM_TYPES:
            raise ValueError(f"room type must be one of {ROOM_TYPES}, got {self.room_type!r}")
        if self.page_number < 1:
            raise ValueError(f"page number must be >= 1, got {self.page_number}")
        if self.num_reviews < 0:
            raise ValueError(f"review count must be >= 0, got {self.num_reviews}")
        if not 0 <= self.star_rating <= 5:
            raise ValueError(f"star rating must be in 0..5, got {self.star_rating}")
        if not 1.0 <= self.review_rating <= 10.0:
            raise ValueError(f"review rating must be in [1, 10], got {self.review_rating}")

    @property
    def lead_time_days(self) -> int:
        """Days before the stay date (the paper's x-axis)."""
        return (self.stay_date - self.booking_date).days

    @property
    def group_key(self) -> tuple[date, date, str, str]:
        return (self.stay_date, self.booking_date, self.hotel_id, self.room_type)

    @property
    def full_key(self) -> tuple[date, date, str, str, str]:
        return self.group_key + (self.website_id,)


def sort_panel(panel: Iterable[PriceObservation]) -> list[PriceObservation]:
    """Canonical panel order, independent of how observations were produced."""
    return sorted(panel, key=lambda o: o.full_key)


def write_panel_csv(panel: Sequence[PriceObservation], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PANEL_HEADER)
        for obs in panel:
            writer.writerow(
                [
                    obs.stay_date.isoformat(),
                    obs.booking_date.isoformat(),
                    obs.hotel_id,
                    obs.room_type,
                    obs.website_id,
                    repr(obs.price),
                    obs.page_number,
                    obs.num_reviews,
                    obs.star_rating,
                    repr(obs.review_rating),
                ]
            )


def read_panel_csv(path: str | Path) -> list[PriceObservation]:
    """Parse and validate a panel CSV.

    Rejects header mismatches, malformed rows (with row/column diagnostics),
    invariant violations, and duplicate (stay, booking, hotel, room, website)
    keys.
    """
    panel: list[PriceObservation] = []
    seen: dict[tuple, int] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PanelFormatError(f"{path}: empty file, expected header row")
        if header != PANEL_HEADER:
            raise PanelFormatError(
                f"{path}: header mismatch: expected {PANEL_HEADER}, got {header}"
            )
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(PANEL_HEADER):
                raise PanelFormatError(
                    f"{path}:{row_no}: expected {len(PANEL_HEADER)} columns, got {len(row)}"
                )
            try:
                obs = PriceObservation(
                    stay_date=date.fromisoformat(row[0]),
                    booking_date=date.fromisoformat(row[1]),
                    hotel_id=row[2],
                    room_type=row[3],
                    website_id=row[4],
                    price=float(row[5]),
                    page_number=int(row[6]),
                    num_reviews=int(row[7]),
                    star_rating=int(row[8]),
                    review_rating=float(row[9]),
                )
            except ValueError as exc:
                raise PanelFormatError(f"{path}:{row_no}: {exc}") from exc
            prior = seen.get(obs.full_key)
            if prior is not None:
                raise PanelFormatError(
                    f"{path}:{row_no}: duplicate observation key {obs.full_key} "
                    f"(first seen at row {prior})"
                )
            seen[obs.full_key] = row_no
            panel.append(obs)
    return panel
