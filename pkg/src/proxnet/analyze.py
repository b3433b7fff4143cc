"""Scan-rate, edge-coverage, survey-severity and assortativity statistics."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from datetime import timedelta
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from ._validation import check_duration
from .backbone import BackboneNetwork
from .exceptions import RangeError, ValidationError
from .model import (
    COVERAGE_METHODS,
    ParticipantId,
    SeverityBandTable,
    SurveyResponse,
    band_score,
    score_survey,
)
from .proximity import ScanTally

logger = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# device scan rates


@dataclass(frozen=True)
class DeviceScanRate:
    participant: ParticipantId
    performed: int
    scheduled: int
    rate: float

    @property
    def over_scheduled(self) -> bool:
        return self.rate > 1.0


def device_scan_rates(tally: ScanTally, scan_interval) -> list[DeviceScanRate]:
    """Fraction of scheduled scans each device performed over the tally window.

    The schedule is ``floor(window / scan_interval)`` scans per device.
    Rates above 1 are reported as-is and logged.
    """
    scan_interval = check_duration(scan_interval, "scan_interval")
    scheduled = int(tally.duration // scan_interval)
    if scheduled == 0:
        raise RangeError("tally window is shorter than one scan interval")
    rates = []
    for pid in tally.participants:
        performed = tally.scans[pid]
        rate = DeviceScanRate(pid, performed, scheduled, performed / scheduled)
        if rate.over_scheduled:
            logger.warning("%s performed %d scans against %d scheduled", pid, performed, scheduled)
        rates.append(rate)
    return rates


def summarize_scan_rates(
    rates: Sequence[DeviceScanRate], groups: Optional[Mapping[ParticipantId, str]] = None
) -> dict:
    """Mean rate overall and, when ``groups`` (e.g. OS per participant) is given, per group."""
    out = {"n_devices": len(rates), "mean_rate": _mean(r.rate for r in rates), "by_group": {}}
    if groups:
        by: dict = {}
        for r in rates:
            by.setdefault(groups.get(r.participant, "unknown"), []).append(r.rate)
        out["by_group"] = {g: {"n_devices": len(v), "mean_rate": _mean(v)} for g, v in sorted(by.items())}
    return out


def _mean(values: Iterable[float]) -> Optional[float]:
    values = list(values)
    return sum(values) / len(values) if values else None


# --------------------------------------------------------------------------
# edge coverage


@dataclass(frozen=True)
class EdgeCoverage:
    pair: tuple[ParticipantId, ParticipantId]
    combined_scans: int
    mean_interscan_interval: float  # seconds; inf when the pair never scanned
    max_gap: Optional[float] = None  # seconds; only with scan times


def _max_gap(times_i: np.ndarray, times_j: np.ndarray, start: int, end: int) -> float:
    merged = np.union1d(times_i, times_j)
    if merged.size == 0:
        return math.inf
    edges = np.concatenate(([start], merged, [end]))
    return float(np.diff(edges).max())


def edge_coverage(tally: ScanTally) -> list[EdgeCoverage]:
    """Combined scanning statistics for every candidate pair of the tally."""
    window_s = tally.duration.total_seconds()
    start = int(tally.window[0].timestamp())
    end = int(tally.window[1].timestamp())
    times = None
    if tally.scan_times is not None:
        times = {pid: np.asarray(ts, dtype=np.int64) for pid, ts in tally.scan_times.items()}
    out = []
    for i, j in itertools.combinations(tally.participants, 2):
        combined = tally.scans[i] + tally.scans[j]
        mean_interval = window_s / combined if combined else math.inf
        gap = None if times is None else _max_gap(times[i], times[j], start, end)
        out.append(EdgeCoverage((i, j), combined, mean_interval, gap))
    return out


@dataclass(frozen=True)
class CoverageSummary:
    thresholds: tuple[timedelta, ...]
    fraction_covered: Mapping[timedelta, float]
    n_candidate_edges: int
    method: str = "mean"

    def to_mapping(self) -> dict:
        return {
            "method": self.method,
            "n_candidate_edges": self.n_candidate_edges,
            "fraction_covered": [
                {"threshold_minutes": t.total_seconds() / 60, "fraction": self.fraction_covered[t]}
                for t in self.thresholds
            ],
        }


def coverage_summary(tally: ScanTally, thresholds: Sequence, method: str = "mean") -> CoverageSummary:
    """Fraction of all candidate pairs scanned at least once per threshold.

    ``method="mean"`` compares the mean combined inter-scan interval
    (window length over ``N_i + N_j``) with each threshold; ``"max_gap"``
    compares the longest stretch without a scan by either device.
    Both comparisons are inclusive. Pairs that never scanned count as
    uncovered.
    """
    if method not in COVERAGE_METHODS:
        raise ValidationError(f"method must be one of {COVERAGE_METHODS}")
    thresholds = tuple(check_duration(t, "threshold") for t in thresholds)
    if list(thresholds) != sorted(thresholds):
        raise ValidationError("thresholds must be sorted ascending")
    n = len(tally.participants)
    if n < 2:
        raise ValidationError("coverage needs at least two participants")
    if method == "max_gap" and tally.scan_times is None:
        raise ValidationError("max_gap coverage needs a tally with scan times")

    window_s = tally.duration.total_seconds()
    coverage = edge_coverage(tally)
    fractions = {}
    for t in thresholds:
        t_s = t.total_seconds()
        if method == "mean":
            # window / combined <= t, rearranged to avoid division
            covered = sum(1 for e in coverage if e.combined_scans and window_s <= t_s * e.combined_scans)
        else:
            covered = sum(1 for e in coverage if e.max_gap <= t_s)
        fractions[t] = covered / len(coverage)
    return CoverageSummary(thresholds, fractions, len(coverage), method)


# --------------------------------------------------------------------------
# surveys


def latest_responses(responses: Iterable[SurveyResponse]) -> list[SurveyResponse]:
    """Most recent response per (participant, instrument)."""
    latest: dict = {}
    for r in responses:
        key = (r.participant, r.instrument)
        if key not in latest or r.completed_at >= latest[key].completed_at:
            latest[key] = r
    return [latest[k] for k in sorted(latest, key=lambda k: (k[0], k[1].value))]


def severity_histogram(responses: Iterable[SurveyResponse], table: SeverityBandTable) -> dict[str, int]:
    """Respondent count per band of ``table``'s instrument, every band present."""
    counts = Counter(
        band_score(score_survey(r), table)
        for r in latest_responses(responses)
        if r.instrument == table.instrument
    )
    return {label: counts.get(label, 0) for label in table.labels}


def survey_scores(responses: Iterable[SurveyResponse], instrument) -> dict[ParticipantId, int]:
    return {
        r.participant: score_survey(r)
        for r in latest_responses(responses)
        if r.instrument == instrument
    }


# --------------------------------------------------------------------------
# attribute assortativity


def attribute_assortativity(
    backbone: BackboneNetwork, scores: Mapping[ParticipantId, float]
) -> Optional[float]:
    """Pearson correlation of ``scores`` across backbone edge endpoints.

    Every edge contributes both orientations. Edges touching a node
    without a score are skipped with a warning. Returns ``None`` when
    fewer than two edges remain or the endpoint scores have no variance.
    """
    missing = sorted(n for n in backbone.nodes if n not in scores)
    if missing:
        logger.warning("%d backbone node(s) have no score and are excluded", len(missing))
    edges = [(i, j) for i, j in backbone.sorted_edges() if i in scores and j in scores]
    if len(edges) < 2:
        logger.warning("assortativity undefined: %d usable edge(s)", len(edges))
        return None
    xs = [float(scores[i]) for i, j in edges] + [float(scores[j]) for i, j in edges]
    ys = [float(scores[j]) for i, j in edges] + [float(scores[i]) for i, j in edges]
    if max(xs) == min(xs):
        logger.warning("assortativity undefined: scores have zero variance across edges")
        return None
    m = len(xs)
    mean = sum(xs) / m  # xs and ys hold the same multiset
    var = sum((x - mean) ** 2 for x in xs) / m
    cov = sum((x - mean) * (y - mean) for x, y in zip(xs, ys)) / m
    return max(-1.0, min(1.0, cov / var))
