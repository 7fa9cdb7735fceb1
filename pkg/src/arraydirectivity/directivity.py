"""Array factor, radiation intensity and directivity.

Two independent routes to the directivity are provided:

* :func:`directivity_analytic` -- closed form built from pair terms of the
  element-pattern-weighted sinc kernel and its even z-derivatives;
* :func:`directivity_quadrature` -- adaptive numerical integration of the
  radiation intensity over the sphere.

Both report ``f1`` and ``f2`` on the same scale: ``f1`` is half the peak
intensity and ``f2`` half the sphere-averaged intensity, so a single
element has ``f1 = pattern(theta0) / 2`` and, for the ``cos`` pattern,
``f2 = 1/6``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import _kernels
from .errors import NonPositiveDenominator
from .geometry import ArrayLayout, DirectionSpec, pair_arrays, unit_observation_vector
from .quadrature import MAX_NODES, integrate_sphere

SERIES_RADIUS = _kernels.python.SERIES_RADIUS


@dataclass(frozen=True)
class ElementPattern:
    """Single-element field pattern ``sin(theta)**u * cos(theta)**v``."""

    u: int = 0
    v: int = 1

    def __post_init__(self):
        for name in ("u", "v"):
            val = getattr(self, name)
            if int(val) != val or val < 0:
                raise ValueError(f"pattern exponent {name} must be a nonnegative integer, got {val!r}")
            object.__setattr__(self, name, int(val))

    def power(self, theta):
        """Squared element pattern |sin^u cos^v|^2."""
        theta = np.asarray(theta, dtype=float)
        return np.sin(theta) ** (2 * self.u) * np.cos(theta) ** (2 * self.v)


ISOTROPIC = ElementPattern(0, 0)
OMNI = ElementPattern(0, 1)


@dataclass(frozen=True)
class DirectivityReport:
    linear: float
    dbi: float
    f1: float
    f2: float

    @classmethod
    def from_parts(cls, f1: float, f2: float) -> "DirectivityReport":
        if not f2 > 0:
            raise NonPositiveDenominator(f"radiated-power term f2 = {f2!r} is not positive")
        linear = f1 / f2
        dbi = 10.0 * math.log10(linear) if linear > 0 else -math.inf
        return cls(linear=linear, dbi=dbi, f1=f1, f2=f2)


def beta_fn(a: float, b: float) -> float:
    """Euler Beta function B(a, b) for positive arguments."""
    if not (a > 0 and b > 0):
        raise ValueError("beta_fn requires positive arguments")
    return float(special.beta(a, b))


def array_factor(layout: ArrayLayout, direction, k: float = 1.0) -> complex:
    """Complex array factor at ``direction = (theta, phi)``."""
    theta, phi = direction
    a = unit_observation_vector(theta, phi)
    arg = layout.phases + k * (layout.positions @ a)
    return complex(np.sum(layout.amplitudes * np.exp(1j * arg)))


def radiation_intensity(layout: ArrayLayout, pattern: ElementPattern, theta, phi, k: float = 1.0):
    """Element power pattern times |array factor|^2; broadcasts over angle arrays."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    shape = np.broadcast(theta, phi).shape
    dirs = unit_observation_vector(*np.broadcast_arrays(theta, phi)).reshape(-1, 3)
    af2 = _kernels.array_power(dirs, layout.positions, layout.amplitudes, layout.phases, k)
    out = pattern.power(theta) * af2.reshape(shape)
    return float(out) if out.ndim == 0 else out


# -- kernel derivatives -------------------------------------------------------

def _scaled_bessel(l: int, r):
    """``j_l(r) / r**l`` (finite at r = 0)."""
    r = np.asarray(r, dtype=float)
    out = np.empty(r.shape)
    small = r < SERIES_RADIUS
    if np.any(small):
        out[small] = _kernels.python._series_y(l, r[small] ** 2)
    if np.any(~small):
        rb = r[~small]
        out[~small] = special.spherical_jn(l, rb) / rb**l
    return out


def sinc_kernel_derivative(beta, z, k: float = 1.0, order: int = 2):
    """Even-order z-derivative of ``sin(k r) / (k r)``, ``r = sqrt(beta^2 + z^2)``.

    The derivative is taken with respect to the phase coordinate ``k z`` so
    that the value is dimensionless (identical to the plain z-derivative at
    ``k = 1``).  Writing ``g(s) = sin(sqrt s)/sqrt s`` with ``s = r^2``,

        d^n/dz^n g(b^2 + z^2) = sum_i n! / (i! (n-2i)!) (2z)^(n-2i) g^(n-i)(s)

    and ``g^(j)(s) = (-1/2)^j j_j(r) / r^j`` in spherical Bessel functions.
    """
    if order < 0 or order % 2:
        raise ValueError(f"order must be an even nonnegative integer, got {order}")
    b = k * np.asarray(beta, dtype=float)
    zz = k * np.asarray(z, dtype=float)
    b, zz = np.broadcast_arrays(b, zz)
    r = np.sqrt(b * b + zz * zz)
    if order == 2:
        out = _kernels.omni_d2(b, zz)
        return float(out) if np.ndim(out) == 0 else out
    total = np.zeros(r.shape)
    for i in range(order // 2 + 1):
        j = order - i
        coef = math.factorial(order) / (math.factorial(i) * math.factorial(order - 2 * i))
        total = total + coef * (2.0 * zz) ** (order - 2 * i) * (-0.5) ** j * _scaled_bessel(j, r)
    return float(total) if total.ndim == 0 else total


def pattern_pair_weight(beta, z, k: float, pattern: ElementPattern):
    """Sphere average of the element power pattern times cos(k p . a) for a pair.

    Expands ``sin^(2u) cos^(2v)`` into powers of ``cos^2`` so that each term is
    an even z-derivative of the isotropic sinc kernel.
    """
    u, v = pattern.u, pattern.v
    acc = 0.0
    for kappa in range(u + 1):
        acc = acc + math.comb(u, kappa) * sinc_kernel_derivative(beta, z, k, 2 * (v + u - kappa))
    return (-1) ** v * acc


def self_term(pattern: ElementPattern) -> float:
    """Half the sphere average of the element power pattern."""
    # The (1 + (-1)^(2v))/8 prefactor is 1/4 for integer v.
    return 0.25 * beta_fn(pattern.u + 1, pattern.v + 0.5)


def directivity_analytic(layout: ArrayLayout, pattern: ElementPattern,
                         direction: DirectionSpec) -> DirectivityReport:
    """Closed-form directivity at ``(theta0, phi0)``.

    Each unordered pair enters ``f1`` with ``A_n A_m cos(Omega_mn)`` and ``f2``
    with ``A_n A_m cos(alpha_mn)`` times the pattern-weighted kernel; the
    diagonal contributes ``A_n^2 / 2`` to the sum in ``f1``.  This weighting is
    the one the quadrature route reproduces.
    """
    k = direction.k
    amps = layout.amplitudes
    a0 = unit_observation_vector(direction.theta0, direction.phi0)
    peak = float(pattern.power(direction.theta0))
    iu, ju, diff = pair_arrays(layout.positions)
    w = amps[iu] * amps[ju]
    dalpha = layout.phases[ju] - layout.phases[iu]
    omega = k * (diff @ a0) + dalpha
    f1 = peak * (0.5 * float(np.sum(amps**2)) + float(np.dot(w, np.cos(omega))))
    f2 = self_term(pattern) * float(np.sum(amps**2))
    if iu.size:
        beta = np.hypot(diff[:, 0], diff[:, 1])
        pair = pattern_pair_weight(beta, diff[:, 2], k, pattern)
        f2 += float(np.dot(w * np.cos(dalpha), pair))
    return DirectivityReport.from_parts(f1, f2)


def directivity_quadrature(layout: ArrayLayout, pattern: ElementPattern, direction: DirectionSpec,
                           rel_tol: float = 1e-9, abs_floor: float = 1e-14,
                           max_nodes: int = MAX_NODES) -> DirectivityReport:
    """Directivity from numerical integration of the radiation intensity."""
    k = direction.k
    pos, amps, phases = layout.positions, layout.amplitudes, layout.phases

    def intensity(theta, phi):
        dirs = unit_observation_vector(theta, phi)
        return pattern.power(theta) * _kernels.array_power(dirs, pos, amps, phases, k)

    integral, _ = integrate_sphere(intensity, rel_tol=rel_tol, abs_floor=abs_floor,
                                   max_nodes=max_nodes)
    peak = radiation_intensity(layout, pattern, direction.theta0, direction.phi0, k)
    return DirectivityReport.from_parts(0.5 * peak, integral / (8.0 * math.pi))


def to_dbi(linear: float) -> float:
    return 10.0 * math.log10(linear)
