"""Exploratory statistics over raw records, plus plot-ready CSV emitters.

All numbers here are computed directly from the raw file values (dollars,
months) with no dependence on fitted pipeline state, so each figure file
can be checked against a brute-force recomputation.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import EmptyDatasetError, MissingSegmentError
from .ingest import RawDataset
from .pipeline import CONTRACT_CODE, impute_total_charges

CLV_BINS = 30  # uniform bins per segment for the lifetime-value histogram


@dataclass(frozen=True)
class SegmentStats:
    segment: str  # "churned" or "retained"
    count: int
    mean: float
    median: float
    std: float
    min: float
    max: float


@dataclass(frozen=True)
class Histogram:
    field: str
    segment: str
    edges: np.ndarray  # strictly increasing, uniform width
    counts: np.ndarray


@dataclass(frozen=True)
class ChargeDifferential:
    churned: SegmentStats
    retained: SegmentStats
    premium_percent: float


@dataclass(frozen=True)
class ClvDistribution:
    churned: SegmentStats
    retained: SegmentStats
    churned_hist: Histogram
    retained_hist: Histogram


def _segment_stats(segment: str, values: np.ndarray) -> SegmentStats:
    # population std: these are full-segment descriptive statistics
    return SegmentStats(
        segment=segment,
        count=int(values.size),
        mean=float(values.mean()),
        median=float(np.median(values)),
        std=float(values.std()),
        min=float(values.min()),
        max=float(values.max()),
    )


def _split_segments(ds: RawDataset):
    if not ds.records:
        raise EmptyDatasetError("empty dataset")
    churned = [r for r in ds.records if r.churn == "Yes"]
    retained = [r for r in ds.records if r.churn == "No"]
    if not churned or not retained:
        missing = "churned" if not churned else "retained"
        raise MissingSegmentError(f"dataset has no {missing} customers")
    return churned, retained


def charge_differential(ds: RawDataset) -> ChargeDifferential:
    """Monthly-charge statistics per churn segment and the churn premium."""
    churned, retained = _split_segments(ds)
    c = _segment_stats("churned", np.array([r.monthly_charges for r in churned]))
    r = _segment_stats("retained", np.array([r.monthly_charges for r in retained]))
    premium = (c.mean - r.mean) / r.mean * 100.0
    return ChargeDifferential(churned=c, retained=r, premium_percent=premium)


def _lifetime_value(record) -> float:
    if record.total_charges is not None:
        return record.total_charges
    return impute_total_charges(
        CONTRACT_CODE[record.contract], record.tenure, record.monthly_charges
    )


def _uniform_histogram(field: str, segment: str, values: np.ndarray, bins: int) -> Histogram:
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        hi = lo + 1.0  # single-valued segment: one meaningful bin
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    return Histogram(field=field, segment=segment, edges=edges, counts=counts)


def clv_distribution(ds: RawDataset, bins: int = CLV_BINS) -> ClvDistribution:
    """Cumulative-revenue (TotalCharges) summary and histogram per segment."""
    churned, retained = _split_segments(ds)
    cv = np.array([_lifetime_value(r) for r in churned])
    rv = np.array([_lifetime_value(r) for r in retained])
    return ClvDistribution(
        churned=_segment_stats("churned", cv),
        retained=_segment_stats("retained", rv),
        churned_hist=_uniform_histogram("total_charges", "churned", cv, bins),
        retained_hist=_uniform_histogram("total_charges", "retained", rv, bins),
    )


def tenure_histogram(ds: RawDataset) -> Histogram:
    """Tenure counts in one-month bins from 0 to the maximum observed month."""
    if not ds.records:
        raise EmptyDatasetError("empty dataset")
    tenures = np.array([r.tenure for r in ds.records], dtype=np.int64)
    max_t = int(tenures.max())
    counts = np.bincount(tenures, minlength=max_t + 1)
    edges = np.arange(max_t + 2, dtype=np.float64)  # bin m covers [m, m+1)
    return Histogram(field="tenure", segment="all", edges=edges, counts=counts)


# --- figure CSV emitters ------------------------------------------------------

def charges_csv(diff: ChargeDifferential) -> str:
    buf = io.StringIO()
    buf.write("segment,count,mean,median,std,min,max\n")
    for s in (diff.churned, diff.retained):
        buf.write(
            f"{s.segment},{s.count},{s.mean!r},{s.median!r},{s.std!r},{s.min!r},{s.max!r}\n"
        )
    return buf.getvalue()


def clv_csv(clv: ClvDistribution) -> str:
    buf = io.StringIO()
    buf.write("segment,bin_lower,bin_upper,count\n")
    for hist in (clv.churned_hist, clv.retained_hist):
        for lo, hi, c in zip(hist.edges[:-1], hist.edges[1:], hist.counts):
            buf.write(f"{hist.segment},{lo!r},{hi!r},{int(c)}\n")
    return buf.getvalue()


def tenure_csv(hist: Histogram) -> str:
    buf = io.StringIO()
    buf.write("tenure_month,count\n")
    for month, count in enumerate(hist.counts):
        buf.write(f"{month},{int(count)}\n")
    return buf.getvalue()
