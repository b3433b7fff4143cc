"""Scan tallies and the proximity-weighted network.

The weight of a pair is the number of scans in which either device saw
the other, divided by the number of scans the two devices performed::

    R_ij = (N_ij + N_ji) / (N_i + N_j)

so 1 means every scan by either device found the other one and 0 means
they never met.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Mapping, Optional, Sequence

from ._validation import check_duration, check_window, pair_key
from .exceptions import DomainError, RangeError, ValidationError
from .model import ParticipantId, ScanEvent, format_timestamp, parse_timestamp


@dataclass(frozen=True)
class ScanTally:
    """Per-device scan counts ``scans`` (N_i) and directed detection counts
    ``detections`` (N_ij, keyed ``(scanner, detected)``) over ``window``.

    ``scan_times`` optionally keeps the POSIX second of every scan per
    device; only the max-gap coverage statistic needs it.
    """

    window: tuple[datetime, datetime]
    scans: Mapping[ParticipantId, int]
    detections: Mapping[tuple[ParticipantId, ParticipantId], int] = field(default_factory=dict)
    scan_times: Optional[Mapping[ParticipantId, tuple[int, ...]]] = None

    def __post_init__(self):
        object.__setattr__(self, "window", check_window(*self.window))
        scans = dict(self.scans)
        for pid, n in scans.items():
            if int(n) != n or n < 0:
                raise ValidationError(f"scan count of {pid!r} must be a non-negative integer")
        detections = {}
        for (i, j), n in dict(self.detections).items():
            if i == j:
                raise ValidationError(f"self-detection count for {i!r}")
            if i not in scans or j not in scans:
                raise ValidationError(f"detection ({i!r}, {j!r}) involves a device with no scan entry")
            if int(n) != n or n < 0:
                raise ValidationError(f"detection count ({i!r}, {j!r}) must be a non-negative integer")
            if n > scans[i]:
                raise ValidationError(
                    f"N_ij={n} exceeds N_i={scans[i]} for ({i!r}, {j!r}): a device cannot "
                    "detect a peer more often than it scanned"
                )
            if n:
                detections[(i, j)] = int(n)
        object.__setattr__(self, "scans", scans)
        object.__setattr__(self, "detections", detections)
        if self.scan_times is not None:
            times = {pid: tuple(self.scan_times.get(pid, ())) for pid in scans}
            for pid, ts in times.items():
                if len(ts) != scans[pid]:
                    raise ValidationError(f"scan_times of {pid!r} disagree with its scan count")
            object.__setattr__(self, "scan_times", times)

    @property
    def participants(self) -> list[ParticipantId]:
        return sorted(self.scans)

    @property
    def duration(self) -> timedelta:
        return self.window[1] - self.window[0]

    def n_scans(self, i: ParticipantId) -> int:
        return self.scans[i]

    def n_detections(self, i: ParticipantId, j: ParticipantId) -> int:
        return self.detections.get((i, j), 0)

    @classmethod
    def pool(cls, tallies: Sequence["ScanTally"]) -> "ScanTally":
        """Sum the counts of several tallies over the span of their windows."""
        if not tallies:
            raise ValidationError("cannot pool an empty list of tallies")
        scans: dict = defaultdict(int)
        detections: dict = defaultdict(int)
        times: Optional[dict] = defaultdict(list)
        for t in tallies:
            for pid, n in t.scans.items():
                scans[pid] += n
            for key, n in t.detections.items():
                detections[key] += n
            if t.scan_times is None:
                times = None
            elif times is not None:
                for pid, ts in t.scan_times.items():
                    times[pid].extend(ts)
        window = (min(t.window[0] for t in tallies), max(t.window[1] for t in tallies))
        if times is not None:
            times = {pid: tuple(sorted(times.get(pid, ()))) for pid in scans}
        return cls(window, dict(scans), dict(detections), times)


def tally_scans(
    events: Iterable[ScanEvent],
    window: tuple[datetime, datetime],
    participants: Optional[Iterable[ParticipantId]] = None,
    study_window: Optional[tuple[datetime, datetime]] = None,
) -> ScanTally:
    """Count scans and detections that fall inside ``[start, end)``.

    A scan is one distinct ``(scanner, timestamp)``; several records at the
    same instant are one scan. ``N_ij`` counts scans of ``i`` in which
    ``j`` was detected (``event.peer``), so repeated records of the same
    peer in one scan count once.

    ``participants`` fixes the node set (so devices that never scanned
    still appear with zero counts); by default it is every scanner and
    detected peer seen in ``events``. Events involving anyone outside the
    set are ignored.
    """
    start, end = check_window(*window)
    if study_window is not None:
        s0, s1 = check_window(*study_window)
        if start < s0 or end > s1:
            raise RangeError(
                f"tally window {format_timestamp(start)}..{format_timestamp(end)} lies outside "
                f"the study period {format_timestamp(s0)}..{format_timestamp(s1)}"
            )
    events = list(events)
    if participants is None:
        pset = {e.scanner for e in events} | {e.peer for e in events if e.peer is not None}
    else:
        pset = set(participants)

    instants: dict[ParticipantId, set[int]] = {pid: set() for pid in pset}
    seen_pairs: set = set()
    for e in events:
        if e.scanner not in pset or not start <= e.timestamp < end:
            continue
        t = int(e.timestamp.timestamp())
        instants[e.scanner].add(t)
        if e.peer is not None and e.peer != e.scanner and e.peer in pset:
            seen_pairs.add((e.scanner, e.peer, t))

    detections: dict = defaultdict(int)
    for i, j, _ in seen_pairs:
        detections[(i, j)] += 1
    scan_times = {pid: tuple(sorted(ts)) for pid, ts in instants.items()}
    scans = {pid: len(ts) for pid, ts in scan_times.items()}
    return ScanTally((start, end), scans, dict(detections), scan_times)


def edge_weight(tally: ScanTally, i: ParticipantId, j: ParticipantId) -> float:
    """Proximity weight of the pair ``{i, j}``; 0 when neither device scanned."""
    if i == j:
        raise DomainError(f"edge weight undefined for a self-pair ({i!r})")
    if i not in tally.scans or j not in tally.scans:
        missing = i if i not in tally.scans else j
        raise DomainError(f"{missing!r} is not in the tally")
    denom = tally.scans[i] + tally.scans[j]
    if denom == 0:
        return 0.0
    return (tally.n_detections(i, j) + tally.n_detections(j, i)) / denom


@dataclass(frozen=True)
class WeightedNetwork:
    """Undirected weighted graph over participants.

    ``weights`` maps ordered pair keys ``(a, b)`` with ``a < b`` to positive
    weights; pairs with zero weight are simply absent. Weights built from a
    tally lie in [0, 1]; other non-negative weights are accepted so the
    backbone code can run on arbitrary weighted graphs.
    """

    nodes: tuple[ParticipantId, ...]
    weights: Mapping[tuple[ParticipantId, ParticipantId], float]
    window: Optional[tuple[datetime, datetime]] = None

    def __post_init__(self):
        nodes = tuple(sorted(set(self.nodes)))
        node_set = set(nodes)
        weights = {}
        for (i, j), w in dict(self.weights).items():
            if i == j:
                raise ValidationError(f"self-edge on {i!r}")
            if i not in node_set or j not in node_set:
                raise ValidationError(f"edge ({i!r}, {j!r}) references an unknown node")
            w = float(w)
            if not math.isfinite(w) or w < 0:
                raise ValidationError(f"edge ({i!r}, {j!r}) has invalid weight {w!r}")
            key = pair_key(i, j)
            if key in weights:
                raise ValidationError(f"edge {key} listed twice")
            if w > 0:
                weights[key] = w
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", dict(sorted(weights.items())))
        if self.window is not None:
            object.__setattr__(self, "window", check_window(*self.window))

    @property
    def n_candidate_edges(self) -> int:
        n = len(self.nodes)
        return n * (n - 1) // 2

    def candidate_pairs(self):
        return itertools.combinations(self.nodes, 2)

    def weight(self, i: ParticipantId, j: ParticipantId) -> float:
        return self.weights.get(pair_key(i, j), 0.0)

    def neighbors(self) -> dict[ParticipantId, dict[ParticipantId, float]]:
        adj: dict = {n: {} for n in self.nodes}
        for (i, j), w in self.weights.items():
            adj[i][j] = w
            adj[j][i] = w
        return adj

    def scaled(self, factor: float) -> "WeightedNetwork":
        return WeightedNetwork(self.nodes, {k: w * factor for k, w in self.weights.items()}, self.window)

    def to_mapping(self) -> dict:
        out = {
            "nodes": list(self.nodes),
            "edges": [{"i": i, "j": j, "w": w} for (i, j), w in self.weights.items()],
        }
        if self.window is not None:
            out["window"] = {"start": format_timestamp(self.window[0]), "end": format_timestamp(self.window[1])}
        return out

    @classmethod
    def from_mapping(cls, data: Mapping) -> "WeightedNetwork":
        try:
            window = None
            if data.get("window"):
                window = (parse_timestamp(data["window"]["start"]), parse_timestamp(data["window"]["end"]))
            return cls(
                tuple(data["nodes"]),
                {(e["i"], e["j"]): e["w"] for e in data["edges"]},
                window,
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed network document: {exc}") from None


def build_weighted_network(tally: ScanTally) -> WeightedNetwork:
    """One node per tallied participant, one edge per pair with positive weight."""
    weights = {}
    for i, j in itertools.combinations(tally.participants, 2):
        w = edge_weight(tally, i, j)
        if w > 0:
            weights[(i, j)] = w
    return WeightedNetwork(tuple(tally.participants), weights, tally.window)


def window_bounds(
    study_start: datetime,
    study_end: datetime,
    window_length,
    stride,
) -> list[tuple[datetime, datetime]]:
    """Windows of ``window_length`` starting at ``study_start + k * stride``
    that fit entirely inside the study period."""
    study_start, study_end = check_window(study_start, study_end)
    window_length = check_duration(window_length, "window_length")
    stride = check_duration(stride, "stride")
    if window_length < stride:
        raise ValidationError("window_length must be at least the stride")
    if window_length > study_end - study_start:
        raise ValidationError("window_length exceeds the study period")
    bounds = []
    start = study_start
    while start + window_length <= study_end:
        bounds.append((start, start + window_length))
        start += stride
    return bounds


def window_tallies(
    events: Sequence[ScanEvent],
    window_length,
    stride,
    study_window: tuple[datetime, datetime],
    participants: Optional[Iterable[ParticipantId]] = None,
) -> list[ScanTally]:
    events = list(events)
    if participants is None:
        participants = {e.scanner for e in events} | {e.peer for e in events if e.peer is not None}
    participants = sorted(participants)
    return [
        tally_scans(events, bounds, participants)
        for bounds in window_bounds(*study_window, window_length, stride)
    ]


def window_series(
    events: Sequence[ScanEvent],
    window_length,
    stride,
    study_window: tuple[datetime, datetime],
    participants: Optional[Iterable[ParticipantId]] = None,
) -> list[WeightedNetwork]:
    """One weighted network per sliding window, aligned to the study start."""
    return [
        build_weighted_network(t)
        for t in window_tallies(events, window_length, stride, study_window, participants)
    ]
