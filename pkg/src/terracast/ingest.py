"""Parsing, validation, cleaning and year-splitting of conflict-event CSVs.

Canonical interchange format (for both real and synthetic events):
    header ``id,lat,lon,date,animal,victim,outcome,village``, UTF-8,
    comma-separated, date as ``YYYY-MM-DD``.

Cleaning is auditable: every dropped row carries an explicit reason, and
``input_count == accepted_count + len(rejected)`` always holds.
"""

from __future__ import annotations

import csv
import datetime as _dt
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .core import ANIMALS, OUTCOMES, VICTIMS, Aoi, ConflictEvent, GeoPoint, TimePeriod

CSV_HEADER = ["id", "lat", "lon", "date", "animal", "victim", "outcome", "village"]

# Rejection reasons, checked in this order per row.
BAD_COORDS = "bad_coords"
OUT_OF_AOI = "out_of_aoi"
BAD_DATE = "bad_date"
DUPLICATE = "duplicate"
MISSING_FIELD = "missing_field"

REASONS = (BAD_COORDS, OUT_OF_AOI, BAD_DATE, DUPLICATE, MISSING_FIELD)


@dataclass(frozen=True)
class RawRecord:
    """One CSV row, all columns as strings, pre-validation."""

    id: str
    lat: str
    lon: str
    date: str
    animal: str
    victim: str
    outcome: str
    village: str

    def fields(self) -> tuple[str, ...]:
        return (self.id, self.lat, self.lon, self.date, self.animal,
                self.victim, self.outcome, self.village)


@dataclass
class CleaningReport:
    input_count: int = 0
    accepted_count: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)

    def reject(self, row_index: int, reason: str) -> None:
        assert reason in REASONS
        self.rejected.append((row_index, reason))

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)

    def counts_by_reason(self) -> dict[str, int]:
        out = {r: 0 for r in REASONS}
        for _, reason in self.rejected:
            out[reason] += 1
        return out

    def check_conservation(self) -> None:
        if self.input_count != self.accepted_count + len(self.rejected):
            raise AssertionError("cleaning report does not conserve rows")

    def to_dict(self) -> dict:
        return {
            "input_count": self.input_count,
            "accepted_count": self.accepted_count,
            "rejected_count": self.rejected_count,
            "by_reason": self.counts_by_reason(),
            "rejected": [{"row": i, "reason": r} for i, r in self.rejected],
        }


def _parse_coords(raw: RawRecord) -> GeoPoint | None:
    try:
        lat = float(raw.lat)
        lon = float(raw.lon)
    except ValueError:
        return None
    try:
        return GeoPoint(lat, lon)
    except ValueError:
        return None


def _parse_date(text: str) -> TimePeriod | None:
    try:
        d = _dt.date.fromisoformat(text)
    except ValueError:
        return None
    return TimePeriod(d.year, d.month)


def clean_records(records: Sequence[RawRecord], aoi: Aoi) -> tuple[list[ConflictEvent], CleaningReport]:
    """Validate raw rows into ConflictEvents; every rejection gets a reason.

    Checks per row, first failure wins: coordinates (parseable, on-datum),
    AOI membership, date, required text fields, exact-duplicate collapse.
    Unknown animal strings map to ``other`` rather than rejecting; victim
    and outcome values outside their vocabulary make the row unusable and
    are rejected as ``missing_field``. Output preserves input order.
    """
    report = CleaningReport(input_count=len(records))
    events: list[ConflictEvent] = []
    seen: set[tuple[str, ...]] = set()
    for idx, raw in enumerate(records):
        loc = _parse_coords(raw)
        if loc is None:
            report.reject(idx, BAD_COORDS)
            continue
        if not aoi.contains(loc):
            report.reject(idx, OUT_OF_AOI)
            continue
        period = _parse_date(raw.date)
        if period is None:
            report.reject(idx, BAD_DATE)
            continue
        animal = raw.animal.strip().lower()
        victim = raw.victim.strip().lower()
        outcome = raw.outcome.strip().lower()
        if not raw.id or not raw.village or not animal or victim not in VICTIMS or outcome not in OUTCOMES:
            report.reject(idx, MISSING_FIELD)
            continue
        key = raw.fields()
        if key in seen:
            report.reject(idx, DUPLICATE)
            continue
        seen.add(key)
        if animal not in ANIMALS:
            animal = "other"
        events.append(
            ConflictEvent(
                id=raw.id,
                location=loc,
                period=period,
                animal=animal,
                victim=victim,
                outcome=outcome,
                village=raw.village,
            )
        )
    report.accepted_count = len(events)
    report.check_conservation()
    return events, report


def read_raw_csv(path: str | Path) -> list[RawRecord]:
    """Read the canonical events CSV. Unreadable file or bad header is fatal."""
    path = Path(path)
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file, expected header {','.join(CSV_HEADER)}")
        if [h.strip() for h in header] != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {header!r}")
        out = []
        for row in reader:
            row = list(row) + [""] * (len(CSV_HEADER) - len(row))
            out.append(RawRecord(*row[: len(CSV_HEADER)]))
    return out


def load_events(path: str | Path, aoi: Aoi) -> tuple[list[ConflictEvent], CleaningReport]:
    """Load and clean the events CSV at `path` against `aoi`."""
    return clean_records(read_raw_csv(path), aoi)


def write_events_csv(path: str | Path, events: Iterable[ConflictEvent], days: dict[str, int] | None = None) -> None:
    """Write events in the canonical CSV format.

    Periods are month-granular; the day written is taken from `days`
    (event id -> day of month) when provided, else 15.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for ev in events:
            day = (days or {}).get(ev.id, 15)
            writer.writerow(
                [
                    ev.id,
                    f"{ev.location.lat:.6f}",
                    f"{ev.location.lon:.6f}",
                    f"{ev.period.year:04d}-{ev.period.month:02d}-{day:02d}",
                    ev.animal,
                    ev.victim,
                    ev.outcome,
                    ev.village,
                ]
            )


@dataclass
class YearSplit:
    train: list[ConflictEvent]
    test: list[ConflictEvent]
    dropped_count: int


def split_by_years(
    events: Sequence[ConflictEvent],
    train_years: set[int],
    test_years: set[int],
) -> YearSplit:
    """Partition events by year; events in neither set are dropped (counted)."""
    overlap = train_years & test_years
    if overlap:
        raise ValueError(f"train/test years overlap: {sorted(overlap)}")
    train, test, dropped = [], [], 0
    for ev in events:
        if ev.period.year in train_years:
            train.append(ev)
        elif ev.period.year in test_years:
            test.append(ev)
        else:
            dropped += 1
    return YearSplit(train=train, test=test, dropped_count=dropped)
