"""Scan-log, roster and survey parsing.

Scan logs are JSON Lines, one object per scan record::

    {"scanner": "p01", "mac": "AA:BB:CC:DD:EE:FF", "ts": "2016-03-28T09:00:00Z",
     "name": "Pixel", "type": "phone"}

``mac`` is ``null`` for a scan that detected nothing. With
``StudyConfig.mac_prehashed`` set, ``mac`` is taken to already be the
salted pseudonym.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from .exceptions import EmptyInputError, ValidationError
from .model import (
    Instrument,
    OsName,
    ParticipantId,
    ScanEvent,
    StudyConfig,
    SurveyResponse,
    _salted_digest,
    canonicalize_mac,
    format_timestamp,
    parse_timestamp,
)

logger = logging.getLogger(__name__)

_HEX_RE = re.compile(r"[0-9a-f]+")


def pseudonymize_mac(raw: str, salt: bytes | str, digest: str = "sha256") -> str:
    """Salted hex digest of the canonicalized address."""
    if isinstance(salt, str):
        salt = salt.encode("utf-8")
    return _salted_digest(canonicalize_mac(raw), salt, digest)


def _check_pseudonym(value: str, digest: str) -> str:
    expected = hashlib.new(digest).digest_size * 2
    value = value.strip().lower()
    if len(value) != expected or not _HEX_RE.fullmatch(value):
        raise ValidationError(f"pre-hashed address must be {expected} hex digits")
    return value


# --------------------------------------------------------------------------
# roster


@dataclass(frozen=True)
class RosterEntry:
    participant: ParticipantId
    os: OsName


@dataclass(frozen=True)
class Roster:
    """Bijection between device pseudonyms and participants."""

    entries: Mapping[str, RosterEntry]

    def __post_init__(self):
        entries = {}
        seen: dict[ParticipantId, str] = {}
        for pseudonym, entry in dict(self.entries).items():
            if not isinstance(entry, RosterEntry):
                entry = RosterEntry(*entry)
            entry = RosterEntry(entry.participant, OsName.parse(entry.os))
            if not entry.participant:
                raise ValidationError("roster participant ids must be non-empty")
            if entry.participant in seen:
                raise ValidationError(
                    f"participant {entry.participant!r} has more than one address in the roster"
                )
            seen[entry.participant] = pseudonym
            entries[pseudonym] = entry
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_by_participant", seen)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, pseudonym: str) -> bool:
        return pseudonym in self.entries

    @property
    def participants(self) -> list[ParticipantId]:
        return sorted(self._by_participant)

    def participant_for(self, pseudonym: str) -> Optional[ParticipantId]:
        entry = self.entries.get(pseudonym)
        return entry.participant if entry else None

    def has_participant(self, participant: ParticipantId) -> bool:
        return participant in self._by_participant

    def pseudonym_of(self, participant: ParticipantId) -> str:
        return self._by_participant[participant]

    def os_of(self, participant: ParticipantId) -> OsName:
        return self.entries[self._by_participant[participant]].os

    def os_map(self) -> dict[ParticipantId, str]:
        return {p: self.os_of(p).value for p in self.participants}


def read_roster(path: str | Path) -> Roster:
    """Read a roster CSV with header ``participant_id,mac_pseudonym,os``."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"participant_id", "mac_pseudonym", "os"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValidationError(f"{path}: roster header must contain {sorted(required)}")
        entries = {}
        for lineno, row in enumerate(reader, start=2):
            pseudonym = row["mac_pseudonym"].strip().lower()
            if pseudonym in entries:
                raise ValidationError(f"{path}:{lineno}: duplicate address {pseudonym[:12]}...")
            entries[pseudonym] = RosterEntry(row["participant_id"].strip(), row["os"])
    return Roster(entries)


def write_roster(roster: Roster, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["participant_id", "mac_pseudonym", "os"])
        for pid in roster.participants:
            writer.writerow([pid, roster.pseudonym_of(pid), roster.os_of(pid).value])


# --------------------------------------------------------------------------
# scan logs


@dataclass
class IngestReport:
    total_lines: int = 0
    parsed: int = 0
    rejected_by_reason: Counter = field(default_factory=Counter)
    non_participant_detections: int = 0
    duplicate_events: int = 0

    @property
    def rejected(self) -> int:
        return sum(self.rejected_by_reason.values())

    def reject(self, reason: str) -> None:
        self.rejected_by_reason[reason] += 1

    def to_mapping(self) -> dict:
        return {
            "total_lines": self.total_lines,
            "parsed": self.parsed,
            "rejected": self.rejected,
            "rejected_by_reason": dict(sorted(self.rejected_by_reason.items())),
            "non_participant_detections": self.non_participant_detections,
            "duplicate_events": self.duplicate_events,
        }


def _optional_str(record: Mapping, key: str) -> Optional[str]:
    value = record.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValidationError(f"{key!r} must be a string")
    return value


def parse_scan_log(
    lines: Iterable[str],
    config: StudyConfig,
    roster: Optional[Roster] = None,
) -> tuple[list[ScanEvent], IngestReport]:
    """Parse JSON Lines scan records into sorted, de-duplicated events.

    Bad lines are tallied in the report by reason rather than raised.
    Blank lines are skipped and not counted. When ``roster`` is given,
    records from scanners that are not enrolled are rejected as
    ``unknown_scanner``.

    Raises :class:`EmptyInputError` when no line survives parsing.
    """
    report = IngestReport()
    start, end = config.window
    events: list[ScanEvent] = []
    for line in lines:
        if not line.strip():
            continue
        report.total_lines += 1
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            report.reject("malformed_json")
            continue
        if not isinstance(record, dict):
            report.reject("malformed_json")
            continue
        if "scanner" not in record or "ts" not in record or "mac" not in record:
            report.reject("missing_field")
            continue
        scanner = record["scanner"]
        if not isinstance(scanner, str) or not scanner:
            report.reject("bad_scanner")
            continue
        try:
            ts = parse_timestamp(record["ts"])
        except ValidationError:
            report.reject("bad_timestamp")
            continue
        mac = record["mac"]
        try:
            if mac is None:
                detected = None
            elif config.mac_prehashed:
                detected = _check_pseudonym(mac, config.digest)
            else:
                detected = pseudonymize_mac(mac, config.salt, config.digest)
        except (ValidationError, AttributeError):
            report.reject("bad_mac")
            continue
        try:
            name = _optional_str(record, "name")
            kind = _optional_str(record, "type")
        except ValidationError:
            report.reject("bad_field_type")
            continue
        if not start <= ts <= end:
            report.reject("out_of_window")
            continue
        if roster is not None and not roster.has_participant(scanner):
            report.reject("unknown_scanner")
            continue
        report.parsed += 1
        events.append(ScanEvent(scanner, ts, detected, name, kind))

    if report.parsed == 0:
        raise EmptyInputError(
            f"no parseable scan records among {report.total_lines} lines "
            f"(rejections: {dict(report.rejected_by_reason)})"
        )

    events.sort(key=ScanEvent.sort_key)
    unique: list[ScanEvent] = []
    seen: set = set()
    for event in events:
        key = (event.scanner, event.detected, event.timestamp)
        if key in seen:
            report.duplicate_events += 1
            continue
        seen.add(key)
        unique.append(event)
    if report.duplicate_events:
        logger.info("dropped %d duplicate scan records", report.duplicate_events)
    return unique, report


def read_scan_log(
    path: str | Path, config: StudyConfig, roster: Optional[Roster] = None
) -> tuple[list[ScanEvent], IngestReport]:
    with open(path, encoding="utf-8") as fh:
        return parse_scan_log(fh, config, roster)


def serialize_scan_log(events: Iterable[ScanEvent]) -> Iterator[str]:
    """Render events back to wire-format lines (addresses stay pseudonymized).

    The output must be read back with ``mac_prehashed`` enabled.
    """
    for event in events:
        record = {"scanner": event.scanner, "mac": event.detected, "ts": format_timestamp(event.timestamp)}
        if event.device_name is not None:
            record["name"] = event.device_name
        if event.device_type is not None:
            record["type"] = event.device_type
        yield json.dumps(record, separators=(",", ":"))


def write_scan_log(events: Iterable[ScanEvent], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in serialize_scan_log(events):
            fh.write(line + "\n")


def filter_to_participants(
    events: Sequence[ScanEvent],
    roster: Roster,
    report: Optional[IngestReport] = None,
    retain_scans: bool = False,
) -> list[ScanEvent]:
    """Keep only detections of enrolled devices and resolve them to participants.

    Empty-scan records from enrolled scanners are kept. A detection of a
    device outside the roster is dropped and counted in
    ``report.non_participant_detections``; with ``retain_scans`` it is
    instead turned into an empty-scan record so the scan still counts
    towards the scanner's scan total.
    """
    kept: list[ScanEvent] = []
    dropped = 0
    for event in events:
        if not roster.has_participant(event.scanner):
            dropped += 1
            continue
        if event.detected is None:
            kept.append(event)
            continue
        peer = roster.participant_for(event.detected)
        if peer is None:
            dropped += 1
            if retain_scans:
                kept.append(ScanEvent(event.scanner, event.timestamp))
            continue
        kept.append(event if event.peer == peer else replace(event, peer=peer))
    if retain_scans:
        # one marker per scan instant is enough
        seen = set()
        deduped = []
        for event in kept:
            key = (event.scanner, event.timestamp, event.detected)
            if event.detected is None and key in seen:
                continue
            seen.add(key)
            deduped.append(event)
        kept = deduped
    if report is not None:
        report.non_participant_detections += dropped
    if dropped:
        logger.info("dropped %d detections of non-participant devices", dropped)
    return kept


# --------------------------------------------------------------------------
# surveys


def read_surveys(path: str | Path) -> list[SurveyResponse]:
    """Read survey CSV rows: ``participant_id,instrument,completed_at,i1,...,iN``.

    PHQ-9 and GAD-7 rows may share one file; trailing empty item columns
    of the shorter instrument are ignored. Items are parsed but not range
    checked here; :func:`proxnet.model.score_survey` does that.
    """
    responses = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return []
        header = [h.strip() for h in header]
        if header[:3] != ["participant_id", "instrument", "completed_at"]:
            raise ValidationError(
                f"{path}: survey header must start with participant_id,instrument,completed_at"
            )
        for lineno, row in enumerate(reader, start=2):
            if not any(cell.strip() for cell in row):
                continue
            try:
                instrument = Instrument.parse(row[1])
                raw_items = [c.strip() for c in row[3:]]
                while raw_items and raw_items[-1] == "":
                    raw_items.pop()
                items = tuple(int(c) for c in raw_items)
                responses.append(
                    SurveyResponse(row[0].strip(), instrument, items, parse_timestamp(row[2]))
                )
            except (IndexError, ValueError) as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
    return responses


def write_surveys(responses: Iterable[SurveyResponse], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["participant_id", "instrument", "completed_at"] + [f"i{k}" for k in range(1, 10)])
        for r in responses:
            writer.writerow([r.participant, r.instrument.value, format_timestamp(r.completed_at), *r.items])
