"""The paper-style regression batteries over price panels.

Three analyses:

* an R-squared sweep regressing price on hotel-room and website dummies
  separately for every (stay date, booking date) pair, to measure how much
  dispersion website identity explains;
* pooled persistence regressions of a group's CV on its previous-day CV under
  seven control/fixed-effect specifications, with log-CV, log-range, and
  drop-single-website robustness variants;
* a one-day-ahead lag sweep estimating the CV persistence coefficient
  separately at each lead time.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from .dispersion import DispersionRecord, compute_dispersion
from .panel import PriceObservation
from .regression import (
    RegressionResult,
    design_matrix,
    dummy_columns,
    ols,
    ols_absorbed,
)

PERSISTENCE_VARIANTS = ("baseline", "drop-single", "log-cv", "log-range")

EQ1_HEADER = ["stay_date", "booking_date", "n_obs", "r_squared"]
TERMS_HEADER = ["term", "coefficient", "std_error", "ci_low", "ci_high"]
SUMMARY_HEADER = ["spec_id", "n_obs", "r_squared", "dropped_terms"]
LAG_SWEEP_HEADER = ["lag_k", "coefficient", "ci_low", "ci_high"]

# Cumulative control sets of the seven persistence specifications.
_WEBSITE_CONTROLS = ["n_websites", "page_number", "last3_dummy"]
_HOTEL_CONTROLS = ["num_reviews_k", "star_rating", "review_rating"]


@dataclass(frozen=True)
class Eq1Cell:
    stay_date: date
    booking_date: date
    n_obs: int
    r_squared: float


@dataclass
class PersistenceRun:
    spec_id: int
    variant: str
    result: RegressionResult
    n_dropped_zero: int = 0  # zero-CV/range rows excluded from log variants


@dataclass(frozen=True)
class LagSweepPoint:
    lag_k: int
    coefficient: float
    ci_low: float
    ci_high: float
    n_pairs: int


def quality_category(review_rating: float) -> str:
    """Bucket consumer ratings into the five listed quality tiers."""
    if review_rating >= 9.0:
        return "Excellent"
    if review_rating >= 8.0:
        return "Very Good"
    if review_rating >= 7.0:
        return "Good"
    if review_rating >= 6.0:
        return "Average"
    return "Satisfactory"


def panel_frame(panel: Sequence[PriceObservation]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "stay_date": [o.stay_date for o in panel],
            "booking_date": [o.booking_date for o in panel],
            "hotel_id": [o.hotel_id for o in panel],
            "room_type": [o.room_type for o in panel],
            "website_id": [o.website_id for o in panel],
            "price": [o.price for o in panel],
            "page_number": [o.page_number for o in panel],
            "num_reviews": [o.num_reviews for o in panel],
            "star_rating": [o.star_rating for o in panel],
            "review_rating": [o.review_rating for o in panel],
        }
    )


def records_frame(records: Sequence[DispersionRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "stay_date": [r.stay_date for r in records],
            "booking_date": [r.booking_date for r in records],
            "hotel_id": [r.hotel_id for r in records],
            "room_type": [r.room_type for r in records],
            "n_websites": [r.n_websites for r in records],
            "cv": [r.cv for r in records],
            "range": [r.range for r in records],
            "lead_time": [r.lead_time_days for r in records],
        }
    )


def build_lag(records: Sequence[DispersionRecord]) -> pd.DataFrame:
    """Pair each group's record with the same group one booking day earlier.

    Gaps in booking dates (missing days, sell-outs) produce no pair.
    """
    df = records_frame(records)
    if df.empty:
        return df.assign(cv_lag=[], range_lag=[], n_websites_lag=[])
    lagged = df[
        ["stay_date", "booking_date", "hotel_id", "room_type", "cv", "range", "n_websites"]
    ].copy()
    lagged["booking_date"] = lagged["booking_date"] + timedelta(days=1)
    merged = df.merge(
        lagged,
        on=["stay_date", "booking_date", "hotel_id", "room_type"],
        how="inner",
        suffixes=("", "_lag"),
    )
    return merged.sort_values(
        ["stay_date", "hotel_id", "room_type", "booking_date"]
    ).reset_index(drop=True)


def persistence_frame(panel: Sequence[PriceObservation]) -> pd.DataFrame:
    """Lagged dispersion records merged with hotel covariates and the
    last-three-days dummy; the input table for the persistence battery."""
    records = compute_dispersion(panel)
    lagged = build_lag(records)
    hotels = (
        panel_frame(panel)
        .groupby("hotel_id", as_index=False)
        .agg(
            page_number=("page_number", "first"),
            num_reviews=("num_reviews", "first"),
            star_rating=("star_rating", "first"),
            review_rating=("review_rating", "first"),
        )
    )
    merged = lagged.merge(hotels, on="hotel_id", how="left")
    merged["last3_dummy"] = (merged["lead_time"] <= 3).astype(float)
    # Reviews in thousands keeps the coefficient on a readable scale.
    merged["num_reviews_k"] = merged["num_reviews"] / 1000.0
    merged["quality"] = merged["review_rating"].map(quality_category)
    merged["hotel_stay_room"] = (
        merged["hotel_id"].astype(str)
        + "|"
        + merged["stay_date"].astype(str)
        + "|"
        + merged["room_type"].astype(str)
    )
    return merged


def run_eq1_battery(
    panel: Sequence[PriceObservation], min_obs: int = 3
) -> tuple[list[Eq1Cell], list[tuple[date, date, str]]]:
    """Per-(stay, booking) regressions of price on hotel-room and website
    dummies. Returns the R-squared per pair plus the skipped pairs with
    reasons."""
    df = panel_frame(panel)
    if df.empty:
        raise ValueError("empty panel")
    df["hotel_room"] = df["hotel_id"] + "|" + df["room_type"]
    cells: list[Eq1Cell] = []
    skipped: list[tuple[date, date, str]] = []
    for (stay, booking), cell in df.groupby(["stay_date", "booking_date"], sort=True):
        if len(cell) < min_obs:
            skipped.append((stay, booking, f"only {len(cell)} observations"))
            continue
        hr_dummies, hr_names = dummy_columns(cell["hotel_room"].to_numpy(), "hotel_room")
        web_dummies, web_names = dummy_columns(cell["website_id"].to_numpy(), "website")
        X = np.column_stack([np.ones(len(cell)), hr_dummies, web_dummies])
        names = ["const"] + hr_names + web_names
        try:
            result = ols(cell["price"].to_numpy(), X, names=names)
        except ValueError as exc:
            skipped.append((stay, booking, str(exc)))
            continue
        cells.append(
            Eq1Cell(
                stay_date=stay,
                booking_date=booking,
                n_obs=len(cell),
                r_squared=result.r_squared,
            )
        )
    return cells, skipped


def r_squared_histogram(
    cells: Sequence[Eq1Cell], bin_width: float = 0.1
) -> list[tuple[float, float, int]]:
    """(bin lower edge, bin upper edge, count) rows over [0, 1]."""
    edges = np.arange(0.0, 1.0 + bin_width / 2, bin_width)
    values = np.clip([c.r_squared for c in cells], 0.0, 1.0)
    counts, _ = np.histogram(values, bins=edges)
    return [
        (float(edges[i]), float(edges[i + 1]), int(counts[i]))
        for i in range(len(counts))
    ]


def _variant_columns(df: pd.DataFrame, variant: str) -> tuple[pd.DataFrame, str, str, int]:
    """Apply the robustness variant; returns (frame, y column, lag column,
    rows dropped because the log transform is undefined)."""
    if variant == "baseline":
        return df, "cv", "cv_lag", 0
    if variant == "drop-single":
        kept = df[(df["n_websites"] > 1) & (df["n_websites_lag"] > 1)]
        return kept, "cv", "cv_lag", 0
    if variant in ("log-cv", "log-range"):
        base = "cv" if variant == "log-cv" else "range"
        positive = df[(df[base] > 0) & (df[f"{base}_lag"] > 0)].copy()
        dropped = len(df) - len(positive)
        positive[f"log_{base}"] = np.log(positive[base])
        positive[f"log_{base}_lag"] = np.log(positive[f"{base}_lag"])
        return positive, f"log_{base}", f"log_{base}_lag", dropped
    raise ValueError(f"variant must be one of {PERSISTENCE_VARIANTS}, got {variant!r}")


def run_cv_persistence(
    frame: pd.DataFrame, spec_id: int, variant: str = "baseline"
) -> PersistenceRun:
    """One of the seven persistence specifications on a lagged dispersion
    frame (see ``persistence_frame``).

    1: lag only; 2: + website-side controls; 3: + hotel characteristics;
    4: + quality dummies; 5: + stay-date dummies; 6: hotel fixed effects
    absorbed (stay and quality dummies retained); 7: hotel x stay x room
    fixed effects absorbed, website-side controls retained.
    """
    if spec_id not in range(1, 8):
        raise ValueError(f"spec_id must be 1..7, got {spec_id}")
    df, y_col, lag_col, n_dropped = _variant_columns(frame, variant)
    if df.empty:
        raise ValueError("no usable rows after applying the variant filter")
    y = df[y_col].to_numpy(dtype=float)

    regressor_cols = [lag_col]
    if spec_id >= 2:
        regressor_cols += _WEBSITE_CONTROLS
    if 3 <= spec_id <= 6:
        regressor_cols += _HOTEL_CONTROLS
    if spec_id == 7:
        regressor_cols = [lag_col] + _WEBSITE_CONTROLS
    columns = [df[c].to_numpy(dtype=float) for c in regressor_cols]
    names = list(regressor_cols)
    names[0] = "cv_lag" if not lag_col.startswith("log_") else lag_col

    dummy_sets = []
    if spec_id in (4, 5, 6):
        dummy_sets.append(("quality", df["quality"].to_numpy()))
    if spec_id in (5, 6):
        dummy_sets.append(("stay", df["stay_date"].astype(str).to_numpy()))

    if spec_id == 6:
        X = np.column_stack(columns + [
            dummy_columns(labels, prefix)[0] for prefix, labels in dummy_sets
        ]) if dummy_sets else np.column_stack(columns)
        all_names = list(names)
        for prefix, labels in dummy_sets:
            all_names += dummy_columns(labels, prefix)[1]
        result = ols_absorbed(y, X, all_names, [df["hotel_id"].to_numpy()])
    elif spec_id == 7:
        X = np.column_stack(columns)
        result = ols_absorbed(y, X, names, [df["hotel_stay_room"].to_numpy()])
    else:
        X, all_names = design_matrix(columns, names, intercept=True)
        for prefix, labels in dummy_sets:
            mat, dnames = dummy_columns(labels, prefix)
            X = np.column_stack([X, mat])
            all_names += dnames
        result = ols(y, X, names=all_names)
    return PersistenceRun(
        spec_id=spec_id, variant=variant, result=result, n_dropped_zero=n_dropped
    )


def run_lag_sweep(
    frame: pd.DataFrame, max_lag_days: int, min_pairs: int = 3
) -> list[LagSweepPoint]:
    """Per-lead-time persistence estimates.

    At each k the regression pairs a group's CV at k days before the stay with
    its CV at k+1 days before; leads with too few pairs are skipped.
    """
    if max_lag_days < 1:
        raise ValueError("max_lag_days must be >= 1")
    points = []
    for k in range(1, max_lag_days + 1):
        subset = frame[frame["lead_time"] == k]
        if len(subset) < min_pairs:
            continue
        x = subset["cv_lag"].to_numpy(dtype=float)
        if np.ptp(x) == 0.0:
            continue
        X, names = design_matrix([x], ["cv_lag"], intercept=True)
        result = ols(subset["cv"].to_numpy(dtype=float), X, names=names)
        lo, hi = result.ci("cv_lag")
        points.append(
            LagSweepPoint(
                lag_k=k,
                coefficient=result.coef("cv_lag"),
                ci_low=lo,
                ci_high=hi,
                n_pairs=len(subset),
            )
        )
    return points


def write_eq1_csv(cells: Sequence[Eq1Cell], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EQ1_HEADER)
        for cell in cells:
            writer.writerow(
                [
                    cell.stay_date.isoformat(),
                    cell.booking_date.isoformat(),
                    cell.n_obs,
                    repr(cell.r_squared),
                ]
            )


def write_terms_csv(result: RegressionResult, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TERMS_HEADER)
        for term, coef in result.coefficients.items():
            lo, hi = result.conf_intervals_95[term]
            writer.writerow([term, repr(coef), repr(result.std_errors[term]), repr(lo), repr(hi)])


def write_summary_csv(runs: Sequence[PersistenceRun], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for run in runs:
            writer.writerow(
                [
                    run.spec_id,
                    run.result.n_obs,
                    repr(run.result.r_squared),
                    ";".join(run.result.dropped_terms),
                ]
            )


def write_lag_sweep_csv(points: Sequence[LagSweepPoint], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LAG_SWEEP_HEADER)
        for pt in points:
            writer.writerow(
                [pt.lag_k, repr(pt.coefficient), repr(pt.ci_low), repr(pt.ci_high)]
            )
