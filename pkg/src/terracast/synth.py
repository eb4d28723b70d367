"""Deterministic synthetic landscape, planted risk surface, event sampling.

The generator plants a known spatial structure: a fractal-noise terrain,
a near-binary forest cover, one connected water course descending the
terrain, and settlement discs placed in open ground near the forest edge.
Conflict risk is then concentrated in a band around forest-settlement and
forest-water contact zones, so downstream models have a recoverable signal
and end-to-end tests have a ground-truth oracle.

Raster convention: arrays are indexed ``[iy, ix]`` with row 0 at the SOUTH
edge, i.e. ``y_km = iy * km_per_px`` increases northward and
``x_km = ix * km_per_px`` increases eastward, matching the planar frame.

Everything is a pure function of (seed, config): equal inputs give
bit-identical rasters, surfaces and events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ConflictEvent, GeoPoint, PlanarPoint, TimePeriod, unproject

DEFAULT_ORIGIN = GeoPoint(20.0, 79.0)

SEASONAL_AMPLITUDE = 0.3

# Fixed categorical distributions for event metadata.
_ANIMAL_DIST = (("tiger", 0.45), ("leopard", 0.25), ("boar", 0.20), ("other", 0.10))
_VICTIM_DIST = (("cattle", 0.70), ("human", 0.30))
_OUTCOME_DIST = (("killed", 0.55), ("injured", 0.45))


def _bilinear_resize(grid: np.ndarray, h: int, w: int) -> np.ndarray:
    """Upsample a coarse lattice to (h, w) with bilinear interpolation."""
    gh, gw = grid.shape
    ys = np.linspace(0.0, gh - 1.0, h)
    xs = np.linspace(0.0, gw - 1.0, w)
    y0 = np.minimum(ys.astype(int), gh - 2)
    x0 = np.minimum(xs.astype(int), gw - 2)
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    a = grid[np.ix_(y0, x0)]
    b = grid[np.ix_(y0, x0 + 1)]
    c = grid[np.ix_(y0 + 1, x0)]
    d = grid[np.ix_(y0 + 1, x0 + 1)]
    return a * (1 - fy) * (1 - fx) + b * (1 - fy) * fx + c * fy * (1 - fx) + d * fy * fx


def _fractal_noise(rng: np.random.Generator, h: int, w: int) -> np.ndarray:
    """Multi-octave value noise, normalized to [0, 1]."""
    out = np.zeros((h, w))
    for cells, amp in ((6, 1.0), (12, 0.5), (24, 0.25), (48, 0.125)):
        gh = max(2, round(h * cells / max(h, w)) + 1)
        gw = max(2, round(w * cells / max(h, w)) + 1)
        out += amp * _bilinear_resize(rng.standard_normal((gh, gw)), h, w)
    lo, hi = out.min(), out.max()
    return (out - lo) / (hi - lo) if hi > lo else np.zeros_like(out)


def _dilate_disc(mask: np.ndarray, radius_px: int) -> np.ndarray:
    """Euclidean disc dilation: p is set iff some set pixel lies within radius."""
    if radius_px <= 0 or not mask.any():
        return mask.copy()
    if radius_px <= 2:
        out = mask.copy()
        h, w = mask.shape
        for dy in range(-radius_px, radius_px + 1):
            for dx in range(-radius_px, radius_px + 1):
                if dy * dy + dx * dx > radius_px * radius_px or (dy == 0 and dx == 0):
                    continue
                src = mask[
                    max(0, -dy) : h - max(0, dy),
                    max(0, -dx) : w - max(0, dx),
                ]
                out[
                    max(0, dy) : h - max(0, -dy),
                    max(0, dx) : w - max(0, -dx),
                ] |= src
        return out
    # larger radii: exact counting convolution via FFT
    h, w = mask.shape
    k = 2 * radius_px + 1
    yy, xx = np.mgrid[-radius_px : radius_px + 1, -radius_px : radius_px + 1]
    disc = (yy * yy + xx * xx <= radius_px * radius_px).astype(float)
    fh, fw = h + k - 1, w + k - 1
    fm = np.fft.rfft2(mask.astype(float), (fh, fw))
    fk = np.fft.rfft2(disc, (fh, fw))
    conv = np.fft.irfft2(fm * fk, (fh, fw))
    return conv[radius_px : radius_px + h, radius_px : radius_px + w] > 0.5


@dataclass(frozen=True)
class LandscapeRaster:
    """Synthetic landscape channels on a common grid."""

    elevation: np.ndarray  # metres
    forest: np.ndarray  # density in [0, 1]
    water: np.ndarray  # mask {0, 1}
    settlement: np.ndarray  # mask {0, 1}
    km_per_px: float
    seed: int
    origin: GeoPoint = DEFAULT_ORIGIN
    settlement_centers: tuple[tuple[int, int], ...] = ()

    @property
    def height_px(self) -> int:
        return self.elevation.shape[0]

    @property
    def width_px(self) -> int:
        return self.elevation.shape[1]

    @property
    def extent_km(self) -> tuple[float, float]:
        """(width, height) of the AOI in km."""
        return (self.width_px * self.km_per_px, self.height_px * self.km_per_px)

    @property
    def area_km2(self) -> float:
        w, h = self.extent_km
        return w * h

    def grayscale(self) -> np.ndarray:
        """Single-channel model input in [0, 1].

        Weighted blend of the channels so that the boundaries driving the
        planted risk stay visible in one channel: 0.5*forest +
        0.2*(1 - settlement) + 0.2*water + 0.1*normalized elevation.
        """
        e = self.elevation
        lo, hi = e.min(), e.max()
        e_norm = (e - lo) / (hi - lo) if hi > lo else np.zeros_like(e)
        return (
            0.5 * self.forest
            + 0.2 * (1.0 - self.settlement)
            + 0.2 * self.water
            + 0.1 * e_norm
        ).astype(np.float32)

    def channels(self) -> np.ndarray:
        """(4, H, W) stack in the order elevation, forest, water, settlement."""
        return np.stack([self.elevation, self.forest, self.water, self.settlement]).astype(np.float32)


def _trace_watercourse(elevation: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Carve one connected course descending (greedily) from the highest point."""
    h, w = elevation.shape
    mask = np.zeros((h, w), dtype=bool)
    iy, ix = np.unravel_index(int(np.argmax(elevation)), elevation.shape)
    visited = set()
    steps = 0
    max_steps = 4 * (h + w)
    while steps < max_steps:
        mask[iy, ix] = True
        visited.add((iy, ix))
        if iy in (0, h - 1) or ix in (0, w - 1):
            break
        nbrs = [
            (iy + dy, ix + dx)
            for dy in (-1, 0, 1)
            for dx in (-1, 0, 1)
            if (dy or dx) and (iy + dy, ix + dx) not in visited
        ]
        if not nbrs:
            break
        elevs = np.array([elevation[p] for p in nbrs])
        iy, ix = nbrs[int(np.argmin(elevs))]
        steps += 1
    return _dilate_disc(mask, 1)


def gen_landscape(
    seed: int,
    width_px: int = 1320,
    height_px: int = 1210,
    km_per_px: float = 0.1,
    origin: GeoPoint = DEFAULT_ORIGIN,
) -> LandscapeRaster:
    """Generate the deterministic synthetic landscape for `seed`."""
    if width_px < 32 or height_px < 32:
        raise ValueError(f"raster too small: {width_px}x{height_px}, need at least 32x32")
    if km_per_px <= 0:
        raise ValueError("km_per_px must be positive")
    rng = np.random.default_rng(seed)

    elev_noise = _fractal_noise(rng, height_px, width_px)
    elevation = (180.0 + 420.0 * elev_noise).astype(np.float32)

    forest_noise = _fractal_noise(rng, height_px, width_px)
    threshold = float(np.median(forest_noise))
    forest = (1.0 / (1.0 + np.exp(-(forest_noise - threshold) / 0.02))).astype(np.float32)

    water = _trace_watercourse(elevation, rng)

    forest_mask = forest > 0.5
    near_forest = _dilate_disc(forest_mask, max(1, round(1.0 / km_per_px)))
    settlement = np.zeros((height_px, width_px), dtype=bool)
    centers: list[tuple[int, int]] = []
    n_settlements = max(3, round(width_px * height_px * km_per_px**2 / 200.0))
    yy, xx = np.mgrid[0:height_px, 0:width_px]
    for _ in range(n_settlements):
        placed = None
        for attempt in range(40):
            iy = int(rng.integers(2, height_px - 2))
            ix = int(rng.integers(2, width_px - 2))
            open_ground = not forest_mask[iy, ix] and not water[iy, ix]
            if open_ground and (near_forest[iy, ix] or attempt >= 20):
                placed = (iy, ix)
                break
        if placed is None:
            continue
        iy, ix = placed
        radius_px = max(2, round(float(rng.uniform(0.3, 0.9)) / km_per_px))
        disc = (yy - iy) ** 2 + (xx - ix) ** 2 <= radius_px**2
        settlement |= disc
        centers.append((iy, ix))

    return LandscapeRaster(
        elevation=elevation,
        forest=forest,
        water=water.astype(np.float32),
        settlement=settlement.astype(np.float32),
        km_per_px=km_per_px,
        seed=seed,
        origin=origin,
        settlement_centers=tuple(centers),
    )


@dataclass(frozen=True)
class RiskSurface:
    """Planted per-pixel conflict intensity, with a 12-month seasonal cycle.

    `base` holds the seasonal-mean expected event count per pixel per month;
    summing it over the grid gives the configured monthly rate times AOI
    area / 100.
    """

    base: np.ndarray
    band: np.ndarray  # bool mask: the 1-km risk band the mass concentrates in
    km_per_px: float
    landscape: LandscapeRaster
    seasonal_amplitude: float = SEASONAL_AMPLITUDE

    def month_multiplier(self, month: int) -> float:
        return 1.0 + self.seasonal_amplitude * math.sin(2.0 * math.pi * (month - 1) / 12.0)

    def monthly_field(self, month: int) -> np.ndarray:
        return self.base * self.month_multiplier(month)

    def monthly_expected(self, month: int) -> float:
        return float(self.base.sum()) * self.month_multiplier(month)

    @property
    def mean_monthly_expected(self) -> float:
        return float(self.base.sum())


def contact_zones(landscape: LandscapeRaster, contact_km: float = 0.5) -> np.ndarray:
    """Pixels within `contact_km` of both forest and settlement, or forest and water."""
    r = max(1, round(contact_km / landscape.km_per_px))
    forest = _dilate_disc(landscape.forest > 0.5, r)
    settlement = _dilate_disc(landscape.settlement > 0.5, r)
    water = _dilate_disc(landscape.water > 0.5, r)
    return (forest & settlement) | (forest & water)


def risk_surface(
    landscape: LandscapeRaster,
    monthly_rate_per_100km2: float,
    band_km: float = 1.0,
    band_mass_share: float = 0.8,
) -> RiskSurface:
    """Build the planted risk surface for a landscape.

    Risk mass concentrates in the band of pixels within `band_km` of the
    forest-settlement and forest-water contact zones (`band_mass_share` of
    the total, 80% by default), with a uniform ambient floor elsewhere. The
    field is normalized so the expected monthly event count equals
    ``monthly_rate_per_100km2 * area_km2 / 100``.
    """
    if monthly_rate_per_100km2 < 0:
        raise ValueError("rate must be non-negative")
    contact = contact_zones(landscape)
    band = _dilate_disc(contact, max(1, round(band_km / landscape.km_per_px)))
    raw = np.zeros(band.shape, dtype=np.float64)
    n_band = int(band.sum())
    n_off = band.size - n_band
    if n_band > 0:
        raw[band] = band_mass_share / n_band
        if n_off > 0:
            raw[~band] = (1.0 - band_mass_share) / n_off
    else:
        raw[:] = 1.0 / raw.size  # degenerate landscape: fall back to uniform
    total = monthly_rate_per_100km2 * landscape.area_km2 / 100.0
    base = raw * total
    return RiskSurface(base=base, band=band, km_per_px=landscape.km_per_px, landscape=landscape)


def _sample_categorical(rng: np.random.Generator, dist: tuple[tuple[str, float], ...], n: int) -> list[str]:
    labels = [d[0] for d in dist]
    probs = np.array([d[1] for d in dist])
    idx = rng.choice(len(labels), size=n, p=probs / probs.sum())
    return [labels[i] for i in idx]


def gen_events(surface: RiskSurface, months: Sequence[TimePeriod], seed: int) -> list[ConflictEvent]:
    """Sample events from the planted surface: Poisson counts per month,
    locations proportional to per-pixel risk with sub-pixel jitter."""
    rng = np.random.default_rng(seed)
    land = surface.landscape
    h, w = surface.base.shape
    events: list[ConflictEvent] = []
    flat_base = surface.base.ravel()
    base_total = flat_base.sum()
    if base_total > 0:
        probs = flat_base / base_total
    centers = land.settlement_centers
    seq = 0
    for period in months:
        mass = surface.monthly_expected(period.month)
        n = int(rng.poisson(mass)) if mass > 0 else 0
        if n == 0:
            continue
        pix = rng.choice(h * w, size=n, p=probs)
        jitter = rng.uniform(0.0, 1.0, size=(n, 2))
        animals = _sample_categorical(rng, _ANIMAL_DIST, n)
        victims = _sample_categorical(rng, _VICTIM_DIST, n)
        outcomes = _sample_categorical(rng, _OUTCOME_DIST, n)
        for j in range(n):
            iy, ix = divmod(int(pix[j]), w)
            x_km = (ix + jitter[j, 0]) * surface.km_per_px
            y_km = (iy + jitter[j, 1]) * surface.km_per_px
            geo = unproject(PlanarPoint(x_km, y_km), land.origin)
            if centers:
                dists = [(iy - cy) ** 2 + (ix - cx) ** 2 for cy, cx in centers]
                village = f"V{int(np.argmin(dists)):02d}"
            else:
                village = "V00"
            events.append(
                ConflictEvent(
                    id=f"S{seed}-{seq:06d}",
                    location=GeoPoint(geo.lat, geo.lon, elev=float(land.elevation[iy, ix])),
                    period=period,
                    animal=animals[j],
                    victim=victims[j],
                    outcome=outcomes[j],
                    village=village,
                )
            )
            seq += 1
    return events


def sample_days(events: Sequence[ConflictEvent], seed: int) -> dict[str, int]:
    """Deterministic day-of-month assignment for CSV emission."""
    rng = np.random.default_rng(seed)
    return {ev.id: int(rng.integers(1, 29)) for ev in events}
