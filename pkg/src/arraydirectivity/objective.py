"""Plane-constrained objective for omnidirectional (cos theta) elements.

With every element on the plane through the origin normal to the desired
direction, the peak term is fixed and maximizing directivity reduces to
minimizing the pair sum

    G(x, y) = - sum_{n>m} A_n A_m F(x_mn, y_mn)

where ``F`` is the second phase-derivative of the sinc kernel evaluated at
the in-plane separation and the height implied by the plane.  ``f1_omni``
and ``f2_omni`` are the auxiliary sums on the ordered-pair scale used by
``G``; they satisfy ``f2_omni = sum A^2 / 6 + 2 G`` identically.  The
physical radiated power on the same scale is ``sum A^2 / 6 + G``; see
:func:`physical_bound`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .directivity import OMNI, DirectivityReport, directivity_analytic
from .errors import BoundsViolation, NonPositiveDenominator
from .geometry import (
    ArrayLayout,
    DirectionSpec,
    _check_plane,
    lift_to_plane,
    pair_arrays,
    plane_constraint_z,
    unit_observation_vector,
)


@dataclass(frozen=True, eq=False)
class PlanarSolution:
    """In-plane coordinates (x, y) of N elements; z follows from the plane."""

    xs: np.ndarray
    ys: np.ndarray
    direction: DirectionSpec
    amplitudes: np.ndarray = None

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float).ravel()
        ys = np.array(self.ys, dtype=float).ravel()
        if xs.shape != ys.shape or xs.size < 2:
            raise ValueError("xs and ys must have equal length N >= 2")
        amps = np.ones(xs.size) if self.amplitudes is None else np.array(self.amplitudes, dtype=float).ravel()
        if amps.shape != xs.shape:
            raise ValueError("one amplitude per element is required")
        for name, arr in (("xs", xs), ("ys", ys), ("amplitudes", amps)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __eq__(self, other):
        if not isinstance(other, PlanarSolution):
            return NotImplemented
        return (self.direction == other.direction
                and all(np.array_equal(getattr(self, f), getattr(other, f))
                        for f in ("xs", "ys", "amplitudes")))

    __hash__ = None

    @property
    def n(self) -> int:
        return self.xs.size

    @property
    def positions(self) -> np.ndarray:
        return lift_to_plane(np.column_stack([self.xs, self.ys]), self.direction)

    def layout(self) -> ArrayLayout:
        return ArrayLayout(self.positions, self.amplitudes, np.zeros(self.n))

    @classmethod
    def from_positions(cls, positions, direction: DirectionSpec, amplitudes=None) -> "PlanarSolution":
        pos = np.asarray(positions, dtype=float)
        return cls(pos[:, 0], pos[:, 1], direction, amplitudes)


@dataclass(frozen=True)
class ObjectiveValue:
    g: float
    bound: float
    gap: float


def objective_bound(amplitudes) -> float:
    """Lower bound ``-sum A^2 / 12`` implied by ``f2_omni > 0``."""
    return -float(np.sum(np.asarray(amplitudes, dtype=float) ** 2)) / 12.0


def physical_bound(amplitudes) -> float:
    """Lower bound ``-sum A^2 / 6`` implied by positive radiated power."""
    return -float(np.sum(np.asarray(amplitudes, dtype=float) ** 2)) / 6.0


def f1_omni(layout: ArrayLayout, direction: DirectionSpec) -> float:
    """Peak sum over ordered pairs with weight 1/2 on the diagonal."""
    amps = layout.amplitudes
    a0 = unit_observation_vector(direction.theta0, direction.phi0)
    iu, ju, diff = pair_arrays(layout.positions)
    omega = direction.k * (diff @ a0) + layout.phases[ju] - layout.phases[iu]
    total = 0.5 * float(np.sum(amps**2)) + 2.0 * float(np.dot(amps[iu] * amps[ju], np.cos(omega)))
    return math.cos(direction.theta0) ** 2 * total


def f2_omni(layout: ArrayLayout, k: float = 1.0) -> float:
    """``sum A^2 / 6 - 2 sum_{n>m} A_n A_m d2(beta_mn, z_mn)``; raises if not positive."""
    amps = layout.amplitudes
    iu, ju, diff = pair_arrays(layout.positions)
    beta = np.hypot(diff[:, 0], diff[:, 1])
    pair = _kernels.omni_pair_sum(k * beta, k * diff[:, 2], amps[iu] * amps[ju])
    value = float(np.sum(amps**2)) / 6.0 - 2.0 * pair
    if not value > 0:
        raise NonPositiveDenominator(f"f2_omni = {value!r} is not positive")
    return value


def pair_kernel_F(x_mn, y_mn, direction: DirectionSpec):
    """Pair kernel at in-plane separation (x_mn, y_mn); vectorized."""
    x = np.asarray(x_mn, dtype=float)
    y = np.asarray(y_mn, dtype=float)
    z = plane_constraint_z(x, y, direction)
    k = direction.k
    out = _kernels.omni_d2(k * np.hypot(x, y), k * z)
    return float(out) if np.ndim(out) == 0 else out


def _plane_slopes(direction: DirectionSpec):
    _check_plane(direction)
    t = -math.tan(direction.theta0)
    return t * math.cos(direction.phi0), t * math.sin(direction.phi0)


def objective_values(xy_population, amplitudes, direction: DirectionSpec) -> np.ndarray:
    """G for each row of an (P, 2N) array laid out as ``[x_1..x_N, y_1..y_N]``."""
    tx, ty = _plane_slopes(direction)
    return _kernels.omni_objective_population(xy_population, amplitudes, direction.k, tx, ty)


def _check_box(sol: PlanarSolution, box):
    x_max, y_max = box
    dx = np.ptp(sol.xs)
    dy = np.ptp(sol.ys)
    if dx > x_max or dy > y_max:
        raise BoundsViolation(
            f"pairwise spread ({dx:.6g}, {dy:.6g}) exceeds box ({x_max:.6g}, {y_max:.6g})"
        )


def objective_G(sol: PlanarSolution, box=None) -> ObjectiveValue:
    """Objective, its lower bound and the gap between them.

    ``box = (x_max, y_max)`` limits the absolute pairwise differences
    ``|x_n - x_m|`` and ``|y_n - y_m|``.  Coincident elements are evaluated
    through the series limit but trigger a ``RuntimeWarning``.
    """
    if box is not None:
        _check_box(sol, box)
    iu, ju = np.triu_indices(sol.n, 1)
    dx = sol.xs[ju] - sol.xs[iu]
    dy = sol.ys[ju] - sol.ys[iu]
    if np.any((dx == 0) & (dy == 0)):
        warnings.warn("coincident elements in planar solution", RuntimeWarning, stacklevel=2)
    tx, ty = _plane_slopes(sol.direction)
    k = sol.direction.k
    w = sol.amplitudes[iu] * sol.amplitudes[ju]
    g = -_kernels.omni_pair_sum(k * np.hypot(dx, dy), k * (tx * dx + ty * dy), w)
    bound = objective_bound(sol.amplitudes)
    return ObjectiveValue(g=g, bound=bound, gap=g - bound)


def directivity_from_g(g: float, amplitudes, direction: DirectionSpec) -> float:
    """Directivity (linear) of a zero-phase on-plane layout from its objective value."""
    amps = np.asarray(amplitudes, dtype=float)
    denom = float(np.sum(amps**2)) / 6.0 + g
    if not denom > 0:
        raise NonPositiveDenominator(f"radiated-power term {denom!r} is not positive")
    return math.cos(direction.theta0) ** 2 * float(np.sum(amps)) ** 2 / 2.0 / denom


def directivity_from_planar(sol: PlanarSolution) -> DirectivityReport:
    return directivity_analytic(sol.layout(), OMNI, sol.direction)
