"""Positions, directions, the element plane, and hull areas.

Angles are radians throughout.  Layout coordinates are metric; the wave
number is applied only where a phase is formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateDirection

# |cos(theta0)| below this makes tan(theta0) unusable for the plane lift.
DEGENERATE_COS = 1e-9


@dataclass(frozen=True)
class DirectionSpec:
    """Desired direction (theta0, phi0) and wave number ``k`` in 1/m."""

    theta0: float
    phi0: float
    k: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.theta0) and math.isfinite(self.phi0)):
            raise ValueError("direction angles must be finite")
        if not 0.0 <= self.theta0 <= math.pi:
            raise ValueError(f"theta0 must lie in [0, pi], got {self.theta0}")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"wave number must be positive, got {self.k}")
        object.__setattr__(self, "phi0", self.phi0 % (2.0 * math.pi))

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi / self.k

    @property
    def unit_vector(self) -> np.ndarray:
        return unit_observation_vector(self.theta0, self.phi0)


@dataclass(frozen=True)
class ArrayLayout:
    """Element positions (N, 3), amplitudes and phases (radians)."""

    positions: np.ndarray
    amplitudes: np.ndarray = field(default=None)
    phases: np.ndarray = field(default=None)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float, copy=True)
        if pos.ndim == 1 and pos.size == 3:
            pos = pos.reshape(1, 3)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] < 1:
            raise ValueError(f"positions must have shape (N, 3) with N >= 1, got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        n = pos.shape[0]
        amps = np.ones(n) if self.amplitudes is None else np.array(self.amplitudes, dtype=float)
        phases = np.zeros(n) if self.phases is None else np.array(self.phases, dtype=float)
        if amps.shape != (n,) or phases.shape != (n,):
            raise ValueError("amplitudes and phases must have one entry per element")
        if np.any(amps < 0) or not np.any(amps > 0):
            raise ValueError("amplitudes must be nonnegative with at least one positive")
        if not (np.all(np.isfinite(amps)) and np.all(np.isfinite(phases))):
            raise ValueError("amplitudes and phases must be finite")
        for name, arr in (("positions", pos), ("amplitudes", amps), ("phases", phases)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def with_phases(self, phases) -> "ArrayLayout":
        return ArrayLayout(self.positions, self.amplitudes, phases)


def unit_observation_vector(theta, phi):
    """Unit vector (sin t cos p, sin t sin p, cos t); broadcasts over arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) + 0.0 * phi], axis=-1)


def _plane_azimuth(direction: DirectionSpec) -> float:
    # The rotation tilts toward +z; below the horizon the plane normal is the
    # mirrored azimuth.
    if math.cos(direction.theta0) < 0.0:
        return direction.phi0 + math.pi
    return direction.phi0


def plane_tilt(direction: DirectionSpec) -> float:
    """Angle between the element plane and the xy-plane, ``acos|cos theta0|``."""
    # Taken from theta0 directly: acos loses everything near 1.
    t = direction.theta0
    return t if math.cos(t) >= 0.0 else math.pi - t


def rotation_matrix(direction: DirectionSpec) -> np.ndarray:
    """Rotation that carries the xy-plane onto the element plane.

    Row vectors are rotated by right multiplication, ``P_hat = P @ R``.  The
    tilt angle is ``gamma = acos|cos theta0|`` about the horizontal axis
    perpendicular to ``phi0``.
    """
    gamma = plane_tilt(direction)
    phi = _plane_azimuth(direction)
    cg, sg = math.cos(gamma), math.sin(gamma)
    cp, sp = math.cos(phi), math.sin(phi)
    mu = 1.0 - cg
    return np.array(
        [
            [sp * sp * mu + cg, -cp * sp * mu, -cp * sg],
            [-sp * cp * mu, cp * cp * mu + cg, -sp * sg],
            [cp * sg, sp * sg, cg],
        ]
    )


def _check_plane(direction: DirectionSpec):
    if abs(math.cos(direction.theta0)) < DEGENERATE_COS:
        raise DegenerateDirection(
            f"theta0 = {direction.theta0!r} is too close to pi/2 for the element plane"
        )


def plane_constraint_z(x, y, direction: DirectionSpec):
    """Height difference that keeps a coordinate difference on the element plane.

    Solves ``sin t0 cos p0 x + sin t0 sin p0 y + cos t0 z = 0`` for ``z``.
    """
    _check_plane(direction)
    t = math.tan(direction.theta0)
    return -t * (math.cos(direction.phi0) * np.asarray(x, dtype=float)
                + math.sin(direction.phi0) * np.asarray(y, dtype=float))


def lift_to_plane(xy_points, direction: DirectionSpec) -> np.ndarray:
    """Append the plane height to each (x, y) point; returns an (N, 3) array."""
    xy = np.asarray(xy_points, dtype=float).reshape(-1, 2)
    z = plane_constraint_z(xy[:, 0], xy[:, 1], direction)
    return np.column_stack([xy, z])


def plane_residual(positions, direction: DirectionSpec) -> np.ndarray:
    """Signed distance of each position from the plane through the origin normal to the direction."""
    return np.asarray(positions, dtype=float) @ direction.unit_vector


def in_plane_coordinates(positions, direction: DirectionSpec) -> np.ndarray:
    """Undo the plane rotation and return 2-D coordinates inside the plane."""
    local = np.asarray(positions, dtype=float) @ rotation_matrix(direction).T
    return local[:, :2]


def pairwise_differences(layout: ArrayLayout, k: float = 1.0):
    """List of ``(m, n, x_mn, y_mn, z_mn, d_mn)`` for every pair ``n > m``.

    Differences are ``p_n - p_m``; ``d_mn`` is the Euclidean distance scaled by ``k``.
    """
    pos = layout.positions
    out = []
    for m in range(layout.n):
        for n in range(m + 1, layout.n):
            dx, dy, dz = (pos[n] - pos[m]).tolist()
            out.append((m, n, dx, dy, dz, k * math.sqrt(dx * dx + dy * dy + dz * dz)))
    return out


def pair_arrays(positions):
    """Vectorized pair differences ``p_n - p_m`` for ``n > m`` plus the index arrays."""
    pos = np.asarray(positions, dtype=float)
    iu, ju = np.triu_indices(pos.shape[0], 1)
    return iu, ju, pos[ju] - pos[iu]


def _orient(o, a, b) -> int:
    cross = (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    scale = (abs(a[0] - o[0]) + abs(a[1] - o[1])) * (abs(b[0] - o[0]) + abs(b[1] - o[1]))
    if abs(cross) > 1e-12 * scale:
        return 1 if cross > 0 else -1
    # Exact rational re-evaluation for near-collinear triples.
    fo = [Fraction(v) for v in o]
    fa = [Fraction(v) for v in a]
    fb = [Fraction(v) for v in b]
    exact = (fa[0] - fo[0]) * (fb[1] - fo[1]) - (fa[1] - fo[1]) * (fb[0] - fo[0])
    return (exact > 0) - (exact < 0)


def convex_hull(points_2d) -> list:
    """Counter-clockwise hull vertices by Andrew's monotone chain."""
    pts = sorted({(float(x), float(y)) for x, y in np.asarray(points_2d, dtype=float).reshape(-1, 2)})
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def convex_hull_area(points_2d) -> float:
    """Area of the 2-D convex hull; 0 for fewer than three non-collinear points."""
    hull = convex_hull(points_2d)
    if len(hull) < 3:
        return 0.0
    xs = np.array([p[0] for p in hull])
    ys = np.array([p[1] for p in hull])
    return 0.5 * abs(float(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))
