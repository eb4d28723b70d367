"""Core domain model: geometry, time periods, events, regions, intensity classes.

Everything here is immutable after construction and all operations are pure,
so the types are safe to share across threads without coordination.

Coordinate conventions:
    * Geographic points are WGS84 degrees.
    * Planar points are kilometres east/north of a declared AOI origin,
      obtained with an equirectangular local projection (the AOI spans
      ~130 km, so planar error is negligible at that scale).
    * Region membership is half-open, [x, x+w) x [y, y+h), which makes one
      tiling pass at fixed offset a partition of the covered area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

KM_PER_DEG_LAT = 110.574
KM_PER_DEG_LON_EQUATOR = 111.320

ANIMALS = frozenset({"tiger", "leopard", "boar", "other"})
VICTIMS = frozenset({"human", "cattle"})
OUTCOMES = frozenset({"killed", "injured"})


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 location in degrees, with optional elevation in metres."""

    lat: float
    lon: float
    elev: Optional[float] = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError("latitude/longitude must be finite")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")
        if self.elev is not None and not math.isfinite(self.elev):
            raise ValueError("elevation must be finite")


@dataclass(frozen=True)
class PlanarPoint:
    """Kilometres east (x) and north (y) of the AOI origin."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("planar coordinates must be finite")


@dataclass(frozen=True, order=True)
class TimePeriod:
    """A calendar month: the temporal unit every count and label refers to."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @classmethod
    def parse(cls, text: str) -> "TimePeriod":
        """Parse 'YYYY-MM'."""
        y, m = text.split("-")
        return cls(year=int(y), month=int(m))


def month_span(start: TimePeriod, end: TimePeriod) -> list[TimePeriod]:
    """All months from start to end inclusive."""
    if (end.year, end.month) < (start.year, start.month):
        raise ValueError("end period precedes start period")
    out = []
    y, m = start.year, start.month
    while (y, m) <= (end.year, end.month):
        out.append(TimePeriod(y, m))
        m += 1
        if m > 12:
            m, y = 1, y + 1
    return out


@dataclass(frozen=True)
class ConflictEvent:
    """One cleaned conflict record."""

    id: str
    location: GeoPoint
    period: TimePeriod
    animal: str
    victim: str
    outcome: str
    village: str

    def __post_init__(self) -> None:
        if self.animal not in ANIMALS:
            raise ValueError(f"unknown animal: {self.animal!r}")
        if self.victim not in VICTIMS:
            raise ValueError(f"unknown victim: {self.victim!r}")
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome: {self.outcome!r}")


@dataclass(frozen=True)
class RegionRect:
    """Axis-aligned rectangle in the planar frame; origin is the SW corner."""

    origin: PlanarPoint
    width: float
    height: float

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.height > 0):
            raise ValueError("region width/height must be positive")

    def contains(self, p: PlanarPoint) -> bool:
        """Half-open membership: [x, x+w) x [y, y+h)."""
        return (
            self.origin.x <= p.x < self.origin.x + self.width
            and self.origin.y <= p.y < self.origin.y + self.height
        )

    @property
    def center(self) -> PlanarPoint:
        return PlanarPoint(self.origin.x + self.width / 2, self.origin.y + self.height / 2)

    def key(self) -> tuple[float, float, float, float]:
        """Stable identity for joins and dedup across passes/periods."""
        return (
            round(self.origin.x, 6),
            round(self.origin.y, 6),
            round(self.width, 6),
            round(self.height, 6),
        )


@dataclass(frozen=True)
class IntensityScheme:
    """Ordered partition of the non-negative integers into intensity classes.

    Each range is an inclusive (lo, hi) pair; hi=None means unbounded. The
    first range is always the singleton [0], so class 0 is the zero-conflict
    class in every scheme.
    """

    boundaries: tuple[tuple[int, Optional[int]], ...]

    def __post_init__(self) -> None:
        if not self.boundaries:
            raise ValueError("scheme needs at least one range")
        if self.boundaries[0] != (0, 0):
            raise ValueError("first range must be exactly [0, 0]")
        prev_hi = 0
        for lo, hi in self.boundaries[1:]:
            if lo != prev_hi + 1:
                raise ValueError("ranges must be contiguous and ordered")
            if hi is not None:
                if hi < lo:
                    raise ValueError(f"empty range ({lo}, {hi})")
                prev_hi = hi
            else:
                prev_hi = None
        if prev_hi is not None:
            raise ValueError("last range must be unbounded to cover all counts")

    @property
    def class_count(self) -> int:
        return len(self.boundaries)

    @classmethod
    def five_class(cls) -> "IntensityScheme":
        # The overlap at 6 in the published bucket list is resolved by
        # assigning 6 to the lower range.
        return cls(((0, 0), (1, 3), (4, 6), (7, 9), (10, None)))

    @classmethod
    def three_class(cls) -> "IntensityScheme":
        return cls(((0, 0), (1, 9), (10, None)))

    @classmethod
    def two_class(cls) -> "IntensityScheme":
        return cls(((0, 0), (1, None)))

    @classmethod
    def from_class_count(cls, n: int) -> "IntensityScheme":
        table = {2: cls.two_class, 3: cls.three_class, 5: cls.five_class}
        if n not in table:
            raise ValueError(f"no default scheme with {n} classes")
        return table[n]()


def bucket(count: int, scheme: IntensityScheme) -> int:
    """Map a conflict count to its intensity class index.

    Total on non-negative integers and monotone non-decreasing in count.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    for idx, (lo, hi) in enumerate(scheme.boundaries):
        if count >= lo and (hi is None or count <= hi):
            return idx
    raise AssertionError("scheme invariant violated: count not covered")


def project(p: GeoPoint, origin: GeoPoint) -> PlanarPoint:
    """Equirectangular local projection to km east/north of `origin`.

    Valid for small AOIs (span < 5 degrees); exact inverse is `unproject`.
    """
    x = (p.lon - origin.lon) * KM_PER_DEG_LON_EQUATOR * math.cos(math.radians(origin.lat))
    y = (p.lat - origin.lat) * KM_PER_DEG_LAT
    return PlanarPoint(x, y)


def unproject(p: PlanarPoint, origin: GeoPoint) -> GeoPoint:
    """Inverse of `project`; round-trips within 1e-9 km inside the AOI."""
    lon = p.x / (KM_PER_DEG_LON_EQUATOR * math.cos(math.radians(origin.lat))) + origin.lon
    lat = p.y / KM_PER_DEG_LAT + origin.lat
    return GeoPoint(lat=lat, lon=lon)


def count_in_region(
    events: Iterable[ConflictEvent],
    region: RegionRect,
    period: TimePeriod,
    origin: GeoPoint,
) -> int:
    """Count events of `period` whose projected location falls in `region`."""
    n = 0
    for ev in events:
        if ev.period == period and region.contains(project(ev.location, origin)):
            n += 1
    return n


@dataclass(frozen=True)
class Aoi:
    """Geographic bounding box (inclusive) used for cleaning and anchoring."""

    sw: GeoPoint
    ne: GeoPoint

    def __post_init__(self) -> None:
        if self.ne.lat < self.sw.lat or self.ne.lon < self.sw.lon:
            raise ValueError("AOI north-east corner must not precede south-west corner")

    def contains(self, p: GeoPoint) -> bool:
        return self.sw.lat <= p.lat <= self.ne.lat and self.sw.lon <= p.lon <= self.ne.lon

    @classmethod
    def parse(cls, text: str) -> "Aoi":
        """Parse 'lat0,lon0,lat1,lon1' (any corner order)."""
        vals = [float(v) for v in text.split(",")]
        if len(vals) != 4:
            raise ValueError("AOI must be lat0,lon0,lat1,lon1")
        lat0, lon0, lat1, lon1 = vals
        return cls(
            sw=GeoPoint(min(lat0, lat1), min(lon0, lon1)),
            ne=GeoPoint(max(lat0, lat1), max(lon0, lon1)),
        )
