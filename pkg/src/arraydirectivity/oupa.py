"""Optimal uniform planar array: grid spacing search and placement on the plane.

Elements of an ``n1 x n2`` grid are labeled 1..N running first along the
``n1`` direction (x), then along ``n2`` (y).  The spacing is chosen by a
forward line search that stops at the first grid point where the objective
increases, and the grid is then rotated onto the plane normal to the
desired direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .directivity import OMNI, DirectivityReport, directivity_analytic, directivity_quadrature
from .errors import NoLocalMinimum
from .geometry import (
    ArrayLayout,
    DirectionSpec,
    _check_plane,
    _plane_azimuth,
    plane_tilt,
    convex_hull_area,
    rotation_matrix,
)

_CHUNK = 2048


@dataclass(frozen=True)
class UpaSpec:
    n1: int
    n2: int
    d_min: float = 1.0

    def __post_init__(self):
        if int(self.n1) != self.n1 or int(self.n2) != self.n2 or self.n1 < 1 or self.n2 < 1:
            raise ValueError("n1 and n2 must be positive integers")
        if not self.d_min > 0:
            raise ValueError("d_min must be positive")
        object.__setattr__(self, "n1", int(self.n1))
        object.__setattr__(self, "n2", int(self.n2))

    @property
    def n(self) -> int:
        return self.n1 * self.n2


@dataclass(frozen=True)
class SevConfig:
    """Step ``c``; ``d_cap=None`` means ten wavelengths of the problem."""

    c: float = 1e-3
    d_cap: float | None = None
    max_iters: int = 10**8

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("step c must be positive")
        if self.d_cap is not None and not self.d_cap > self.c:
            raise ValueError("d_cap must exceed c")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")

    def cap_for(self, wavelength: float) -> float:
        return 10.0 * wavelength if self.d_cap is None else self.d_cap


@dataclass(frozen=True)
class OupaResult:
    d_min_star: float
    positions: np.ndarray
    directivity: DirectivityReport
    area: float
    g_at_optimum: float
    spec: UpaSpec
    direction: DirectionSpec
    quadrature: DirectivityReport | None = field(default=None)

    @property
    def layout(self) -> ArrayLayout:
        return ArrayLayout(self.positions)


def psi_indices(m: int, n: int, n1: int) -> tuple[int, int]:
    """Grid offsets between 1-based elements ``m`` and ``n``."""
    psi1 = (m - 1) % n1 - (n - 1) % n1
    psi2 = (m - 1) // n1 - (n - 1) // n1
    return psi1, psi2


def upa_pair_distance(m: int, n: int, spec: UpaSpec) -> float:
    if m == n:
        raise ValueError("distance requires distinct elements")
    psi1, psi2 = psi_indices(m, n, spec.n1)
    if psi2 == 0:
        return abs(m - n) * spec.d_min
    if psi1 == 0:
        return abs(m - n) * spec.d_min / spec.n1
    return spec.d_min * math.sqrt(psi1 * psi1 + psi2 * psi2)


def upa_layout(spec: UpaSpec) -> ArrayLayout:
    i = np.arange(spec.n)
    pos = np.column_stack([(i % spec.n1) * spec.d_min, (i // spec.n1) * spec.d_min, np.zeros(spec.n)])
    return ArrayLayout(pos)


def upa_z_mn(m: int, n: int, spec: UpaSpec, direction: DirectionSpec) -> float:
    """Height difference ``z_m - z_n`` of the rotated grid."""
    psi1, psi2 = psi_indices(m, n, spec.n1)
    gamma = plane_tilt(direction)
    phi = _plane_azimuth(direction)
    return -spec.d_min * (psi1 * math.cos(phi) + psi2 * math.sin(phi)) * math.sin(gamma)


def grid_offsets(n1: int, n2: int):
    """Distinct unit-spacing offsets (psi1, psi2), one per +/- pair, with pair counts."""
    p1, p2 = np.meshgrid(np.arange(-(n1 - 1), n1), np.arange(0, n2), indexing="ij")
    p1, p2 = p1.ravel(), p2.ravel()
    keep = (p2 > 0) | (p1 > 0)
    p1, p2 = p1[keep], p2[keep]
    mult = (n1 - np.abs(p1)) * (n2 - p2)
    return p1.astype(float), p2.astype(float), mult.astype(float)


def upa_objective(spec_or_shape, direction: DirectionSpec):
    """Vectorized ``G(d_min)`` for a grid on the plane; accepts scalars or arrays of d."""
    n1, n2 = (spec_or_shape.n1, spec_or_shape.n2) if isinstance(spec_or_shape, UpaSpec) else spec_or_shape
    _check_plane(direction)
    p1, p2, mult = grid_offsets(n1, n2)
    gamma = plane_tilt(direction)
    phi = _plane_azimuth(direction)
    zunit = -(p1 * math.cos(phi) + p2 * math.sin(phi)) * math.sin(gamma)
    # Rotation keeps the full separation, so the horizontal part shrinks by the height.
    bunit = np.sqrt(np.maximum(p1 * p1 + p2 * p2 - zunit * zunit, 0.0))

    def g_of_d(d):
        arr = np.atleast_1d(np.asarray(d, dtype=float))
        out = _kernels.upa_objective_curve(arr, bunit, zunit, mult, direction.k)
        return float(out[0]) if np.ndim(d) == 0 else out

    return g_of_d


def sev(g_of_d, cfg: SevConfig = SevConfig(), wavelength: float = 2.0 * math.pi,
        vectorized: bool = False) -> float:
    """First grid point ``d = i c`` (i >= 1) with ``g(d + c) > g(d)``.

    Ties continue the search.  Raises :class:`NoLocalMinimum` when the search
    passes the cap.  With ``vectorized=True`` the objective is evaluated a
    block of grid points at a time; the result is identical.
    """
    c = cfg.c
    last = min(cfg.max_iters, int(math.floor(cfg.cap_for(wavelength) / c)))
    if vectorized:
        lo = 1
        g_lo = float(np.asarray(g_of_d(np.array([c])))[0])
        while lo <= last:
            hi = min(last, lo + _CHUNK)
            g = np.concatenate([[g_lo], np.asarray(g_of_d(np.arange(lo + 1, hi + 2) * c), dtype=float)])
            rises = np.flatnonzero(np.diff(g) > 0)
            if rises.size:
                return (lo + int(rises[0])) * c
            lo, g_lo = hi + 1, g[-1]
        raise NoLocalMinimum(f"no increase of the objective up to d = {last * c:.6g}")
    i = 1
    g_cur = g_of_d(c)
    while i <= last:
        g_next = g_of_d((i + 1) * c)
        if g_next - g_cur > 0:
            return i * c
        i += 1
        g_cur = g_next
    raise NoLocalMinimum(f"no increase of the objective up to d = {last * c:.6g}")


def oupa(direction: DirectionSpec, n1: int, n2: int, cfg: SevConfig = SevConfig(),
         verify: bool = False) -> OupaResult:
    """Grid with the line-search spacing, rotated onto the plane normal to ``direction``.

    ``verify=True`` also integrates the radiation intensity numerically and
    stores the result in ``OupaResult.quadrature``.
    """
    g_of_d = upa_objective((n1, n2), direction)
    d_star = sev(g_of_d, cfg, wavelength=direction.wavelength, vectorized=True)
    spec = UpaSpec(n1, n2, d_star)
    grid = upa_layout(spec).positions
    positions = grid @ rotation_matrix(direction)
    layout = ArrayLayout(positions)
    report = directivity_analytic(layout, OMNI, direction)
    quad = directivity_quadrature(layout, OMNI, direction) if verify else None
    # Rotation is an isometry, so the flat grid gives the same area without rounding noise.
    area = convex_hull_area(grid[:, :2])
    positions.setflags(write=False)
    return OupaResult(
        d_min_star=d_star,
        positions=positions,
        directivity=report,
        area=area,
        g_at_optimum=float(g_of_d(d_star)),
        spec=spec,
        direction=direction,
        quadrature=quad,
    )


def quasi_square_factors(n: int) -> tuple[int, int]:
    """Factor pair ``n1 <= n2`` of ``n`` with the smallest difference."""
    best = (1, n)
    for a in range(1, int(math.isqrt(n)) + 1):
        if n % a == 0:
            best = (a, n // a)
    return best
