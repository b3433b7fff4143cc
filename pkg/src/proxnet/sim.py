"""Synthetic cohorts: contact schedules and duty-cycled scan logs with known ground truth.

Proximity is binary co-presence. Every device is scheduled to scan at
``study_start + n * scan_interval``; a scheduled scan actually runs with
the device's OS compliance probability, and a scan that runs sees each
co-present peer with ``detection_probability``. Scans that see nobody
emit an explicit empty-scan record.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from datetime import datetime, time, timedelta, timezone
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from ._validation import check_duration, check_probability, check_window, pair_key
from .exceptions import ConfigError, ValidationError
from .ingest import Roster, RosterEntry, pseudonymize_mac
from .model import OsName, ParticipantId, ScanEvent, format_timestamp, parse_timestamp

try:  # Python < 3.11
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib


@dataclass(frozen=True)
class OsProfile:
    name: OsName
    compliance: float

    def __post_init__(self):
        object.__setattr__(self, "name", OsName.parse(self.name))
        object.__setattr__(self, "compliance", check_probability(self.compliance, "compliance"))


IOS = OsProfile(OsName.IOS, 0.29)
ANDROID = OsProfile(OsName.ANDROID, 0.55)
DEFAULT_PROFILES = {OsName.IOS: IOS, OsName.ANDROID: ANDROID}


@dataclass(frozen=True)
class CohortSpec:
    participants: tuple[tuple[ParticipantId, OsProfile], ...]
    study_start: datetime
    study_end: datetime
    scan_interval: timedelta = timedelta(seconds=300)
    detection_probability: float = 1.0
    rng_seed: int = 0
    phase_offsets: bool = False
    salt: bytes = b"proxnet-sim"

    def __post_init__(self):
        participants = tuple((str(pid), prof) for pid, prof in self.participants)
        ids = [pid for pid, _ in participants]
        if len(ids) < 2:
            raise ValidationError("a cohort needs at least two participants")
        if len(set(ids)) != len(ids) or not all(ids):
            raise ValidationError("participant ids must be unique and non-empty")
        object.__setattr__(self, "participants", participants)
        start, end = check_window(self.study_start, self.study_end)
        object.__setattr__(self, "study_start", start)
        object.__setattr__(self, "study_end", end)
        object.__setattr__(self, "scan_interval", check_duration(self.scan_interval, "scan_interval"))
        object.__setattr__(
            self, "detection_probability", check_probability(self.detection_probability, "detection_probability")
        )
        if isinstance(self.salt, str):
            object.__setattr__(self, "salt", self.salt.encode("utf-8"))

    @property
    def ids(self) -> list[ParticipantId]:
        return [pid for pid, _ in self.participants]

    @property
    def window(self) -> tuple[datetime, datetime]:
        return self.study_start, self.study_end

    @property
    def n_scheduled(self) -> int:
        return int((self.study_end - self.study_start) // self.scan_interval)

    def profile_of(self, pid: ParticipantId) -> OsProfile:
        return dict(self.participants)[pid]


def os_cohort(
    n_ios: int,
    n_android: int,
    study_start: datetime,
    study_end: datetime,
    **kwargs,
) -> CohortSpec:
    """Cohort of ``n_ios`` iOS and ``n_android`` Android devices with default compliance."""
    width = len(str(n_ios + n_android))
    participants = [(f"p{k + 1:0{width}d}", IOS) for k in range(n_ios)]
    participants += [(f"p{n_ios + k + 1:0{width}d}", ANDROID) for k in range(n_android)]
    return CohortSpec(tuple(participants), study_start, study_end, **kwargs)


def _stable_int(*parts) -> int:
    h = hashlib.sha256(":".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(h[:8], "big")


def device_mac(spec: CohortSpec, pid: ParticipantId) -> str:
    """Synthetic, locally administered hardware address for ``pid``."""
    raw = hashlib.sha256(f"mac:{spec.rng_seed}:{pid}".encode("utf-8")).digest()[:6]
    octets = [(raw[0] & 0xFC) | 0x02, *raw[1:]]
    return ":".join(f"{b:02X}" for b in octets)


def cohort_roster(spec: CohortSpec) -> Roster:
    return Roster(
        {
            pseudonymize_mac(device_mac(spec, pid), spec.salt): RosterEntry(pid, prof.name)
            for pid, prof in spec.participants
        }
    )


# --------------------------------------------------------------------------
# contact schedules


@dataclass(frozen=True)
class ContactSchedule:
    """Co-presence intervals ``(pair, start, end)`` inside ``window``.

    Overlapping or touching intervals of the same pair are merged on
    construction, so per-pair intervals are disjoint and sorted.
    """

    window: tuple[datetime, datetime]
    intervals: tuple = ()

    def __post_init__(self):
        start, end = check_window(*self.window)
        object.__setattr__(self, "window", (start, end))
        per_pair: dict = {}
        for pair, s, e in self.intervals:
            i, j = pair
            if i == j:
                raise ValidationError(f"co-presence interval of {i!r} with itself")
            s = s.astimezone(timezone.utc)
            e = e.astimezone(timezone.utc)
            if not s < e:
                raise ValidationError(f"interval for {pair} must have start < end")
            if s < start or e > end:
                raise ValidationError(f"interval for {pair} lies outside the study window")
            per_pair.setdefault(pair_key(i, j), []).append((s, e))
        merged = []
        for key in sorted(per_pair):
            spans = sorted(per_pair[key])
            cur_s, cur_e = spans[0]
            for s, e in spans[1:]:
                if s <= cur_e:
                    cur_e = max(cur_e, e)
                else:
                    merged.append((key, cur_s, cur_e))
                    cur_s, cur_e = s, e
            merged.append((key, cur_s, cur_e))
        object.__setattr__(self, "intervals", tuple(merged))

    def pair_intervals(self) -> dict[tuple[ParticipantId, ParticipantId], list[tuple[datetime, datetime]]]:
        out: dict = {}
        for key, s, e in self.intervals:
            out.setdefault(key, []).append((s, e))
        return out

    def co_present(self, i: ParticipantId, j: ParticipantId, when: datetime) -> bool:
        key = pair_key(i, j)
        return any(k == key and s <= when < e for k, s, e in self.intervals)

    def to_mapping(self) -> dict:
        return {
            "window": {"start": format_timestamp(self.window[0]), "end": format_timestamp(self.window[1])},
            "intervals": [
                {"i": i, "j": j, "start": format_timestamp(s), "end": format_timestamp(e)}
                for (i, j), s, e in self.intervals
            ],
        }

    @classmethod
    def from_mapping(cls, data: Mapping) -> "ContactSchedule":
        window = (parse_timestamp(data["window"]["start"]), parse_timestamp(data["window"]["end"]))
        return cls(
            window,
            tuple(
                ((iv["i"], iv["j"]), parse_timestamp(iv["start"]), parse_timestamp(iv["end"]))
                for iv in data["intervals"]
            ),
        )


def generate_office_schedule(
    spec: CohortSpec,
    groups: Sequence[Sequence[ParticipantId]],
    workday: tuple[time, time] = (time(9, 0), time(17, 0)),
    overlap_fraction: float | Sequence[float] = 1.0,
) -> ContactSchedule:
    """Weekday co-presence for members of the same group.

    On every Monday-Friday, each within-group pair shares one contiguous
    block that starts at the workday start and lasts the group's
    ``overlap_fraction`` of the workday. Members of different groups never
    meet. ``groups`` must partition the cohort.
    """
    groups = [list(g) for g in groups]
    if any(not g for g in groups):
        raise ValidationError("office groups must be non-empty")
    members = [pid for g in groups for pid in g]
    if sorted(members) != sorted(spec.ids) or len(set(members)) != len(members):
        raise ValidationError("office groups must partition the cohort")
    if isinstance(overlap_fraction, (int, float)):
        fractions = [float(overlap_fraction)] * len(groups)
    else:
        fractions = [float(f) for f in overlap_fraction]
        if len(fractions) != len(groups):
            raise ValidationError("need one overlap_fraction per group")
    fractions = [check_probability(f, "overlap_fraction") for f in fractions]
    day_start, day_end = workday
    if not day_start < day_end:
        raise ValidationError("workday start must precede its end")

    start, end = spec.window
    intervals = []
    day = start.date()
    while day <= end.date():
        if day.weekday() < 5:
            block_start = datetime.combine(day, day_start, tzinfo=timezone.utc)
            block_len = datetime.combine(day, day_end, tzinfo=timezone.utc) - block_start
            for group, frac in zip(groups, fractions):
                s = max(block_start, start)
                e = min(block_start + timedelta(seconds=round(frac * block_len.total_seconds())), end)
                if s >= e:
                    continue
                for i, j in itertools.combinations(sorted(group), 2):
                    intervals.append(((i, j), s, e))
        day += timedelta(days=1)
    return ContactSchedule(spec.window, tuple(intervals))


def ground_truth_network(
    schedule: ContactSchedule, participants: Optional[Sequence[ParticipantId]] = None
) -> dict[tuple[ParticipantId, ParticipantId], float]:
    """Fraction of the study window each pair spends co-present.

    Covers the scheduled pairs, or every pair of ``participants`` if given.
    """
    total = (schedule.window[1] - schedule.window[0]).total_seconds()
    out: dict = {}
    if participants is not None:
        out = {pair_key(i, j): 0.0 for i, j in itertools.combinations(sorted(set(participants)), 2)}
    for key, spans in schedule.pair_intervals().items():
        out[key] = sum((e - s).total_seconds() for s, e in spans) / total
    return dict(sorted(out.items()))


# --------------------------------------------------------------------------
# scan simulation


def _device_rng(spec: CohortSpec, pid: ParticipantId) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([spec.rng_seed, _stable_int(pid)])))


def _mask_in(times: np.ndarray, spans: list[tuple[int, int]]) -> np.ndarray:
    starts = np.array([s for s, _ in spans], dtype=np.int64)
    ends = np.array([e for _, e in spans], dtype=np.int64)
    idx = np.searchsorted(starts, times, side="right") - 1
    valid = idx >= 0
    mask = np.zeros(times.shape, dtype=bool)
    mask[valid] = times[valid] < ends[idx[valid]]
    return mask


def simulate_scans(spec: CohortSpec, schedule: ContactSchedule) -> list[ScanEvent]:
    """Scan records for every device, sorted like ingested events.

    Each device draws from its own generator seeded from
    ``(rng_seed, participant id)``, so a device's stream does not depend
    on who else is in the cohort. Detection events carry both the peer's
    pseudonym and its participant id.
    """
    s0, s1 = spec.window
    w0, w1 = schedule.window
    if w0 < s0 or w1 > s1:
        raise ValidationError("schedule window lies outside the cohort's study window")
    interval_s = int(spec.scan_interval.total_seconds())
    base = int(s0.timestamp()) + interval_s * np.arange(spec.n_scheduled, dtype=np.int64)
    pseudonyms = {pid: pseudonymize_mac(device_mac(spec, pid), spec.salt) for pid in spec.ids}
    spans_by_pair = {
        key: [(int(s.timestamp()), int(e.timestamp())) for s, e in spans]
        for key, spans in schedule.pair_intervals().items()
    }
    partners: dict = {pid: [] for pid in spec.ids}
    for i, j in spans_by_pair:
        if i in partners and j in partners:
            partners[i].append(j)
            partners[j].append(i)

    events: list[ScanEvent] = []
    for pid, profile in spec.participants:
        rng = _device_rng(spec, pid)
        times = base
        if spec.phase_offsets:
            times = base + int(rng.integers(0, interval_s))
        fired = rng.random(times.shape[0]) < profile.compliance
        found = np.zeros(times.shape[0], dtype=bool)
        detections = []
        for peer in sorted(partners[pid]):
            present = _mask_in(times, spans_by_pair[pair_key(pid, peer)])
            seen = fired & present & (rng.random(times.shape[0]) < spec.detection_probability)
            found |= seen
            for t in times[seen]:
                detections.append((int(t), peer))
        for t in times[fired & ~found]:
            events.append(ScanEvent(pid, datetime.fromtimestamp(int(t), timezone.utc)))
        for t, peer in detections:
            events.append(
                ScanEvent(pid, datetime.fromtimestamp(t, timezone.utc), pseudonyms[peer], peer=peer)
            )
    events.sort(key=ScanEvent.sort_key)
    return events


# --------------------------------------------------------------------------
# scenario files


@dataclass(frozen=True)
class Scenario:
    spec: CohortSpec
    schedule: ContactSchedule
    extra: Mapping = field(default_factory=dict)

    def run(self) -> list[ScanEvent]:
        return simulate_scans(self.spec, self.schedule)


def _parse_clock(value: str, where: str) -> time:
    try:
        return time.fromisoformat(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected HH:MM, got {value!r}") from None


def scenario_from_mapping(data: Mapping) -> Scenario:
    """Build a scenario from a parsed TOML/JSON document.

    Top-level keys: ``start``, ``end`` (RFC 3339), ``seed``,
    ``scan_interval`` (s), ``detection_probability``, ``phase_offsets``,
    ``salt``. Participants come from ``[[participants]]`` (id, os,
    optional compliance) or from ``[cohort]`` (ios, android counts).
    ``[compliance]`` overrides per-OS defaults. Contacts come from
    ``[office]`` (workday_start, workday_end, ``[[office.groups]]`` with
    members and overlap_fraction) and/or ``[[contacts]]`` (i, j, optional
    start/end; omitted bounds mean the whole study).
    """
    def field_error(where: str, exc: Exception) -> ConfigError:
        return ConfigError(f"scenario field {where}: {exc}")

    try:
        start = parse_timestamp(data["start"])
        end = parse_timestamp(data["end"])
    except KeyError as exc:
        raise ConfigError(f"scenario is missing required field {exc.args[0]!r}") from None
    except ValidationError as exc:
        raise field_error("start/end", exc) from None

    profiles = dict(DEFAULT_PROFILES)
    for name, value in dict(data.get("compliance", {})).items():
        try:
            os_name = OsName.parse(name)
            profiles[os_name] = OsProfile(os_name, value)
        except ValidationError as exc:
            raise field_error(f"compliance.{name}", exc) from None

    participants = []
    for idx, row in enumerate(data.get("participants", [])):
        where = f"participants[{idx}]"
        try:
            os_name = OsName.parse(row.get("os", "IOS"))
            profile = profiles[os_name]
            if "compliance" in row:
                profile = OsProfile(os_name, row["compliance"])
            participants.append((str(row["id"]), profile))
        except KeyError as exc:
            raise ConfigError(f"scenario field {where}: missing {exc.args[0]!r}") from None
        except (ValidationError, AttributeError, TypeError) as exc:
            raise field_error(where, exc) from None
    if "cohort" in data:
        cohort = data["cohort"]
        try:
            n_ios, n_android = int(cohort.get("ios", 0)), int(cohort.get("android", 0))
        except (TypeError, ValueError, AttributeError) as exc:
            raise field_error("cohort", exc) from None
        width = len(str(n_ios + n_android + len(participants)))
        offset = len(participants)
        for k in range(n_ios + n_android):
            prof = profiles[OsName.IOS] if k < n_ios else profiles[OsName.ANDROID]
            participants.append((f"p{offset + k + 1:0{width}d}", prof))

    try:
        spec = CohortSpec(
            tuple(participants),
            start,
            end,
            scan_interval=data.get("scan_interval", 300),
            detection_probability=data.get("detection_probability", 1.0),
            rng_seed=int(data.get("seed", 0)),
            phase_offsets=bool(data.get("phase_offsets", False)),
            salt=data.get("salt", "proxnet-sim"),
        )
    except (ValidationError, TypeError, ValueError) as exc:
        raise field_error("cohort", exc) from None

    intervals: list = []
    if "office" in data:
        office = data["office"]
        try:
            workday = (
                _parse_clock(office.get("workday_start", "09:00"), "office.workday_start"),
                _parse_clock(office.get("workday_end", "17:00"), "office.workday_end"),
            )
            groups = [g["members"] for g in office["groups"]]
            fractions = [g.get("overlap_fraction", 1.0) for g in office["groups"]]
            intervals.extend(generate_office_schedule(spec, groups, workday, fractions).intervals)
        except KeyError as exc:
            raise ConfigError(f"scenario field office: missing {exc.args[0]!r}") from None
        except (ValidationError, TypeError) as exc:
            raise field_error("office", exc) from None
    ids = set(spec.ids)
    for idx, row in enumerate(data.get("contacts", [])):
        where = f"contacts[{idx}]"
        try:
            i, j = str(row["i"]), str(row["j"])
            if i not in ids or j not in ids:
                raise ValidationError(f"unknown participant in ({i!r}, {j!r})")
            s = parse_timestamp(row["start"]) if "start" in row else start
            e = parse_timestamp(row["end"]) if "end" in row else end
            intervals.append(((i, j), s, e))
        except KeyError as exc:
            raise ConfigError(f"scenario field {where}: missing {exc.args[0]!r}") from None
        except (ValidationError, TypeError) as exc:
            raise field_error(where, exc) from None
    try:
        schedule = ContactSchedule(spec.window, tuple(intervals))
    except ValidationError as exc:
        raise field_error("contacts", exc) from None
    return Scenario(spec, schedule)


def load_scenario(path: str | Path) -> Scenario:
    """Read a ``.toml`` or ``.json`` scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"scenario file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from None
    try:
        if path.suffix.lower() == ".json":
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: scenario must be a table/object")
    return scenario_from_mapping(data)
