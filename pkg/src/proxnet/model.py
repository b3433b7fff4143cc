"""Core domain types, survey scoring and severity banding."""

from __future__ import annotations

import enum
import hashlib
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Mapping, Optional

from ._validation import check_duration, check_open_unit, check_utc, check_window
from .exceptions import ConfigError, RangeError, ValidationError

ParticipantId = str

_MAC_RE = re.compile(r"^[0-9A-F]{2}(:[0-9A-F]{2}){5}$")
_MAC_SEPARATORS = re.compile(r"[:\-.]")


class Instrument(str, enum.Enum):
    PHQ9 = "PHQ9"
    GAD7 = "GAD7"

    @property
    def n_items(self) -> int:
        return 9 if self is Instrument.PHQ9 else 7

    @property
    def max_total(self) -> int:
        return 3 * self.n_items

    @classmethod
    def parse(cls, value) -> "Instrument":
        if isinstance(value, Instrument):
            return value
        key = str(value).strip().upper().replace("-", "")
        try:
            return cls(key)
        except ValueError:
            raise ValidationError(f"unknown instrument {value!r}") from None


class OsName(str, enum.Enum):
    IOS = "IOS"
    ANDROID = "ANDROID"

    @classmethod
    def parse(cls, value) -> "OsName":
        if isinstance(value, OsName):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValidationError(f"unknown OS profile {value!r}") from None


# --------------------------------------------------------------------------
# device addresses


def canonicalize_mac(raw: str) -> str:
    """Return ``raw`` as upper-case hex octets joined by colons.

    Colon, hyphen and dot separators are accepted, as is a bare 12-digit
    hex string.
    """
    if not isinstance(raw, str):
        raise ValidationError(f"MAC address must be a string, got {type(raw).__name__}")
    digits = _MAC_SEPARATORS.sub("", raw.strip()).upper()
    if len(digits) != 12 or not all(c in "0123456789ABCDEF" for c in digits):
        raise ValidationError(f"malformed MAC address {raw!r}")
    canonical = ":".join(digits[k:k + 2] for k in range(0, 12, 2))
    if not _MAC_RE.match(canonical):  # pragma: no cover - guarded above
        raise ValidationError(f"malformed MAC address {raw!r}")
    return canonical


def _salted_digest(canonical: str, salt: bytes, digest: str) -> str:
    h = hashlib.new(digest)
    h.update(canonical.encode("ascii"))
    h.update(salt)
    return h.hexdigest()


@dataclass(frozen=True)
class DeviceAddress:
    """A hardware address together with its salted pseudonym.

    ``raw`` is excluded from ``repr`` and from every serializer in the
    package; only the pseudonym is ever written out.
    """

    raw: str = field(repr=False)
    pseudonym: str

    @classmethod
    def from_raw(cls, raw: str, salt: bytes, digest: str = "sha256") -> "DeviceAddress":
        canonical = canonicalize_mac(raw)
        return cls(raw=canonical, pseudonym=_salted_digest(canonical, salt, digest))


# --------------------------------------------------------------------------
# scan events


@dataclass(frozen=True)
class ScanEvent:
    """One record of a discovery scan.

    ``detected`` is the pseudonymized address that answered the scan, or
    ``None`` for an empty-scan record (the scan ran but found nobody).
    ``peer`` is filled in by :func:`proxnet.ingest.filter_to_participants`
    once ``detected`` has been resolved against the roster.
    """

    scanner: ParticipantId
    timestamp: datetime
    detected: Optional[str] = None
    device_name: Optional[str] = None
    device_type: Optional[str] = None
    peer: Optional[ParticipantId] = None

    def __post_init__(self):
        if not self.scanner:
            raise ValidationError("scanner id must be non-empty")
        ts = check_utc(self.timestamp, "timestamp").replace(microsecond=0)
        object.__setattr__(self, "timestamp", ts)

    @property
    def is_empty_scan(self) -> bool:
        return self.detected is None

    def sort_key(self):
        return (self.timestamp, self.scanner, self.detected or "", self.device_name or "",
                self.device_type or "")


# --------------------------------------------------------------------------
# surveys


@dataclass(frozen=True)
class SurveyResponse:
    participant: ParticipantId
    instrument: Instrument
    items: tuple[int, ...]
    completed_at: datetime

    def __post_init__(self):
        object.__setattr__(self, "instrument", Instrument.parse(self.instrument))
        object.__setattr__(self, "items", tuple(self.items))


def score_survey(response: SurveyResponse) -> int:
    """Sum the item scores of a completed questionnaire.

    Raises :class:`ValidationError` for a wrong item count or an item
    outside 0..3; the message names the offending (0-based) index.
    """
    instrument = response.instrument
    items = response.items
    if len(items) != instrument.n_items:
        raise ValidationError(
            f"{instrument.value} expects {instrument.n_items} items, got {len(items)}"
        )
    for idx, value in enumerate(items):
        if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= 3:
            raise ValidationError(
                f"{instrument.value} item at index {idx} must be an integer in 0..3, got {value!r}"
            )
    return sum(items)


@dataclass(frozen=True)
class SeverityBand:
    label: str
    min_score: int
    max_score: int


@dataclass(frozen=True)
class SeverityBandTable:
    instrument: Instrument
    bands: tuple[SeverityBand, ...]

    def __post_init__(self):
        instrument = Instrument.parse(self.instrument)
        object.__setattr__(self, "instrument", instrument)
        bands = tuple(b if isinstance(b, SeverityBand) else SeverityBand(*b) for b in self.bands)
        object.__setattr__(self, "bands", bands)
        if not bands:
            raise ValidationError("band table must contain at least one band")
        expected = 0
        for band in bands:
            if band.min_score != expected or band.max_score < band.min_score:
                raise ValidationError(
                    f"band {band.label!r} [{band.min_score}, {band.max_score}] breaks contiguous "
                    f"coverage (expected to start at {expected})"
                )
            expected = band.max_score + 1
        if expected - 1 != instrument.max_total:
            raise ValidationError(
                f"{instrument.value} bands must end at {instrument.max_total}, end at {expected - 1}"
            )
        labels = [b.label for b in bands]
        if len(set(labels)) != len(labels):
            raise ValidationError("band labels must be unique")

    @property
    def labels(self) -> list[str]:
        return [b.label for b in self.bands]

    def to_mapping(self) -> list[dict]:
        return [{"label": b.label, "min": b.min_score, "max": b.max_score} for b in self.bands]


DEFAULT_PHQ9_BANDS = SeverityBandTable(
    Instrument.PHQ9,
    (
        SeverityBand("minimal", 0, 4),
        SeverityBand("mild", 5, 9),
        SeverityBand("moderate", 10, 14),
        SeverityBand("moderately-severe", 15, 19),
        SeverityBand("severe", 20, 27),
    ),
)

DEFAULT_GAD7_BANDS = SeverityBandTable(
    Instrument.GAD7,
    (
        SeverityBand("minimal", 0, 4),
        SeverityBand("mild", 5, 9),
        SeverityBand("moderate", 10, 14),
        SeverityBand("severe", 15, 21),
    ),
)

DEFAULT_BAND_TABLES = {Instrument.PHQ9: DEFAULT_PHQ9_BANDS, Instrument.GAD7: DEFAULT_GAD7_BANDS}


def band_score(total: int, table: SeverityBandTable) -> str:
    """Label of the band containing ``total``."""
    for band in table.bands:
        if band.min_score <= total <= band.max_score:
            return band.label
    raise RangeError(
        f"score {total} outside 0..{table.instrument.max_total} for {table.instrument.value}"
    )


# --------------------------------------------------------------------------
# study configuration


def parse_timestamp(value) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime (seconds kept)."""
    if isinstance(value, datetime):
        return check_utc(value, "timestamp")
    if not isinstance(value, str):
        raise ValidationError(f"timestamp must be a string, got {value!r}")
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        ts = datetime.fromisoformat(text)
    except ValueError:
        raise ValidationError(f"unparseable timestamp {value!r}") from None
    if ts.tzinfo is None:
        raise ValidationError(f"timestamp {value!r} lacks a UTC offset")
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).replace(microsecond=0).strftime("%Y-%m-%dT%H:%M:%SZ")


RETENTION_RULES = ("or", "and")
COVERAGE_METHODS = ("mean", "max_gap")


@dataclass(frozen=True)
class StudyConfig:
    study_start: datetime
    study_end: datetime
    scan_interval: timedelta = timedelta(seconds=300)
    salt: bytes = b""
    band_tables: Mapping[Instrument, SeverityBandTable] = field(
        default_factory=lambda: dict(DEFAULT_BAND_TABLES)
    )
    backbone_alpha: float = 0.05
    retention_rule: str = "or"
    digest: str = "sha256"
    mac_prehashed: bool = False
    retain_nonparticipant_scans: bool = False
    coverage_thresholds: tuple[timedelta, ...] = (timedelta(minutes=10), timedelta(minutes=30))
    coverage_method: str = "mean"
    seed: int = 0
    layout_iterations: int = 200

    def __post_init__(self):
        start, end = check_window(self.study_start, self.study_end)
        object.__setattr__(self, "study_start", start)
        object.__setattr__(self, "study_end", end)
        object.__setattr__(self, "scan_interval", check_duration(self.scan_interval, "scan_interval"))
        object.__setattr__(self, "backbone_alpha", check_open_unit(self.backbone_alpha, "backbone_alpha"))
        if isinstance(self.salt, str):
            object.__setattr__(self, "salt", self.salt.encode("utf-8"))
        if self.retention_rule not in RETENTION_RULES:
            raise ValidationError(f"retention_rule must be one of {RETENTION_RULES}")
        if self.coverage_method not in COVERAGE_METHODS:
            raise ValidationError(f"coverage_method must be one of {COVERAGE_METHODS}")
        if self.digest not in hashlib.algorithms_available:
            raise ValidationError(f"unknown digest algorithm {self.digest!r}")
        tables = {Instrument.parse(k): v for k, v in dict(self.band_tables).items()}
        for inst in Instrument:
            tables.setdefault(inst, DEFAULT_BAND_TABLES[inst])
        object.__setattr__(self, "band_tables", tables)
        thresholds = tuple(check_duration(t, "coverage threshold") for t in self.coverage_thresholds)
        object.__setattr__(self, "coverage_thresholds", tuple(sorted(thresholds)))

    @property
    def window(self) -> tuple[datetime, datetime]:
        return self.study_start, self.study_end

    @classmethod
    def from_mapping(cls, data: Mapping) -> "StudyConfig":
        """Build a config from the nested mapping read out of a TOML file.

        Expected sections: ``[study]`` (start, end, scan_interval seconds,
        salt, digest, mac_prehashed, retain_nonparticipant_scans, seed),
        ``[backbone]`` (alpha, rule), ``[coverage]`` (thresholds_minutes,
        method), ``[layout]`` (iterations) and ``[[bands.PHQ9]]`` /
        ``[[bands.GAD7]]`` tables with label/min/max keys.
        """
        try:
            study = dict(data["study"])
        except (KeyError, TypeError):
            raise ConfigError("config is missing the [study] section") from None
        kwargs: dict = {}
        try:
            kwargs["study_start"] = parse_timestamp(study.pop("start"))
            kwargs["study_end"] = parse_timestamp(study.pop("end"))
        except KeyError as exc:
            raise ConfigError(f"[study] is missing {exc.args[0]!r}") from None
        except ValidationError as exc:
            raise ConfigError(f"[study]: {exc}") from None
        simple = {
            "scan_interval": "scan_interval",
            "salt": "salt",
            "digest": "digest",
            "mac_prehashed": "mac_prehashed",
            "retain_nonparticipant_scans": "retain_nonparticipant_scans",
            "seed": "seed",
        }
        for key, target in simple.items():
            if key in study:
                kwargs[target] = study.pop(key)
        if study:
            raise ConfigError(f"[study] has unknown keys: {sorted(study)}")
        backbone = dict(data.get("backbone", {}))
        if "alpha" in backbone:
            kwargs["backbone_alpha"] = backbone.pop("alpha")
        if "rule" in backbone:
            kwargs["retention_rule"] = str(backbone.pop("rule")).lower()
        if backbone:
            raise ConfigError(f"[backbone] has unknown keys: {sorted(backbone)}")
        coverage = dict(data.get("coverage", {}))
        if "thresholds_minutes" in coverage:
            kwargs["coverage_thresholds"] = tuple(
                timedelta(minutes=float(m)) for m in coverage.pop("thresholds_minutes")
            )
        if "method" in coverage:
            kwargs["coverage_method"] = coverage.pop("method")
        if coverage:
            raise ConfigError(f"[coverage] has unknown keys: {sorted(coverage)}")
        layout = dict(data.get("layout", {}))
        if "iterations" in layout:
            kwargs["layout_iterations"] = int(layout.pop("iterations"))
        if layout:
            raise ConfigError(f"[layout] has unknown keys: {sorted(layout)}")
        tables = {}
        for name, rows in dict(data.get("bands", {})).items():
            try:
                tables[Instrument.parse(name)] = SeverityBandTable(
                    name, tuple(SeverityBand(r["label"], int(r["min"]), int(r["max"])) for r in rows)
                )
            except (KeyError, TypeError, ValidationError) as exc:
                raise ConfigError(f"[bands.{name}]: {exc}") from None
        if tables:
            kwargs["band_tables"] = tables
        unknown = set(data) - {"study", "backbone", "coverage", "layout", "bands"}
        if unknown:
            raise ConfigError(f"config has unknown sections: {sorted(unknown)}")
        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise ConfigError(str(exc)) from None

    def to_mapping(self) -> dict:
        """JSON-safe echo of the config; the salt is reported only as a digest."""
        return {
            "study": {
                "start": format_timestamp(self.study_start),
                "end": format_timestamp(self.study_end),
                "scan_interval": self.scan_interval.total_seconds(),
                "salt_sha256": hashlib.sha256(self.salt).hexdigest(),
                "digest": self.digest,
                "mac_prehashed": self.mac_prehashed,
                "retain_nonparticipant_scans": self.retain_nonparticipant_scans,
                "seed": self.seed,
            },
            "backbone": {"alpha": self.backbone_alpha, "rule": self.retention_rule},
            "coverage": {
                "thresholds_minutes": [t.total_seconds() / 60 for t in self.coverage_thresholds],
                "method": self.coverage_method,
            },
            "layout": {"iterations": self.layout_iterations},
            "bands": {inst.value: table.to_mapping() for inst, table in self.band_tables.items()},
        }

