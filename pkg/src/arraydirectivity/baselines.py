"""Reference geometries: steered linear and circular arrays, hexagonal lattice, spacing sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .directivity import OMNI, DirectivityReport, directivity_analytic
from .geometry import (
    ArrayLayout,
    DirectionSpec,
    _check_plane,
    convex_hull_area,
    pair_arrays,
    rotation_matrix,
)
from .oupa import UpaSpec, quasi_square_factors, upa_layout

GEOMETRIES = ("ula", "uca", "uhpa", "upa")
_AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class SteeredArray:
    layout: ArrayLayout
    geometry: str

    def directivity(self, direction: DirectionSpec, pattern=OMNI) -> DirectivityReport:
        return directivity_analytic(self.layout, pattern, direction)


def steering_phases(positions, direction: DirectionSpec) -> np.ndarray:
    """Phases ``-k p_n . a0`` that align every element toward ``direction``."""
    return -direction.k * (np.asarray(positions, dtype=float) @ direction.unit_vector)


def ula_steered(n: int, d: float, direction: DirectionSpec, axis: str = "x") -> SteeredArray:
    """``n`` elements at ``0, d, ..., (n-1) d`` along ``axis`` with steering phases."""
    if n < 1 or not d > 0:
        raise ValueError("ULA needs n >= 1 and d > 0")
    if axis not in _AXES:
        raise ValueError(f"axis must be one of {sorted(_AXES)}")
    pos = np.zeros((n, 3))
    pos[:, _AXES[axis]] = np.arange(n) * d
    return SteeredArray(ArrayLayout(pos, phases=steering_phases(pos, direction)), "ula")


def uca_radius(n: int, chord: float) -> float:
    return chord / (2.0 * math.sin(math.pi / n))


def uca_positions(n: int, radius: float) -> np.ndarray:
    gamma = np.arange(n) * 2.0 * math.pi / n
    return np.column_stack([radius * np.sin(gamma), radius * np.cos(gamma), np.zeros(n)])


def uca_steered(n: int, direction: DirectionSpec, chord: float | None = None) -> SteeredArray:
    """Circle in the xy-plane with adjacent chord ``chord`` (default half a wavelength)."""
    if n < 2:
        raise ValueError("UCA needs n >= 2")
    chord = 0.5 * direction.wavelength if chord is None else chord
    pos = uca_positions(n, uca_radius(n, chord))
    return SteeredArray(ArrayLayout(pos, phases=steering_phases(pos, direction)), "uca")


def hexagonal_sites(n: int) -> np.ndarray:
    """First ``n`` sites of the unit triangular lattice, nearest the origin first.

    Sites at equal distance are taken in order of increasing polar angle.
    """
    if n < 1:
        raise ValueError("need at least one site")
    rings = 1
    while 1 + 3 * rings * (rings + 1) < n:
        rings += 1
    # The n-th closest site lies within distance `rings`; this box contains that disc.
    m = 2 * rings + 1
    q, r = np.meshgrid(np.arange(-m, m + 1), np.arange(-m, m + 1), indexing="ij")
    x = (q + 0.5 * r).ravel()
    y = (r * math.sqrt(3.0) / 2.0).ravel()
    dist = np.round(np.hypot(x, y), 9)
    ang = np.round(np.mod(np.arctan2(y, x), 2.0 * math.pi), 9)
    order = np.lexsort((ang, dist))
    return np.column_stack([x[order][:n], y[order][:n]])


def uhpa_layout(n: int, d_min: float) -> ArrayLayout:
    xy = hexagonal_sites(n) * d_min
    return ArrayLayout(np.column_stack([xy, np.zeros(n)]))


def planar_baseline(geometry: str, n: int, d_min: float) -> ArrayLayout:
    """Unsteered layout in the xy-plane with minimum spacing ``d_min``."""
    if geometry == "upa":
        n1, n2 = quasi_square_factors(n)
        return upa_layout(UpaSpec(n1, n2, d_min))
    if geometry == "uhpa":
        return uhpa_layout(n, d_min)
    if geometry == "uca":
        if n == 1:
            return ArrayLayout(np.zeros((1, 3)))
        return ArrayLayout(uca_positions(n, uca_radius(n, d_min)))
    raise ValueError(f"no planar baseline named {geometry!r}")


@dataclass(frozen=True)
class SweepResult:
    geometry: str
    n: int
    d_min: np.ndarray
    directivity_dbi: np.ndarray
    area: np.ndarray

    @property
    def best_index(self) -> int:
        return int(np.argmax(self.directivity_dbi))

    @property
    def best_d_min(self) -> float:
        return float(self.d_min[self.best_index])

    @property
    def best_dbi(self) -> float:
        return float(self.directivity_dbi[self.best_index])


def sweep_grid(start: float, stop: float, step: float) -> np.ndarray:
    if not (start > 0 and step > 0 and stop >= start):
        raise ValueError("sweep needs 0 < start <= stop and step > 0")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def dmin_sweep(geometry: str, n: int, direction: DirectionSpec, d_range=(0.005, 15.0),
               step: float = 0.005) -> SweepResult:
    """Directivity against spacing for a planar layout placed on the element plane.

    Phases are zero; the layout is rotated onto the plane normal to the
    desired direction, where the peak term is constant and only the pair
    sum varies with spacing.
    """
    _check_plane(direction)
    ds = sweep_grid(d_range[0], d_range[1], step)
    unit = planar_baseline(geometry, n, 1.0)
    rotated = unit.positions @ rotation_matrix(direction)
    iu, ju, diff = pair_arrays(rotated)
    bunit = np.hypot(diff[:, 0], diff[:, 1])
    g = _kernels.upa_objective_curve(ds, bunit, diff[:, 2], np.ones(iu.size), direction.k)
    amps = unit.amplitudes
    denom = float(np.sum(amps**2)) / 6.0 + g
    lin = math.cos(direction.theta0) ** 2 * float(np.sum(amps)) ** 2 / 2.0 / denom
    area = convex_hull_area(unit.positions[:, :2]) * ds**2
    return SweepResult(geometry, n, ds, 10.0 * np.log10(lin), area)
