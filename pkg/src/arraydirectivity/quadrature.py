"""Adaptive tensor-product Gauss-Legendre integration over the sphere."""

from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureNotConverged

LOW_ORDER = 10
HIGH_ORDER = 20
MAX_NODES = 2**24
_CHUNK = 1 << 17


def _rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


_LO = _rule(LOW_ORDER)
_HI = _rule(HIGH_ORDER)


def _panel_sums(func, t0, t1, p0, p1, rule):
    """Tensor-product rule on each rectangle; integrand includes the sin(theta) weight."""
    x, w = rule
    n = x.size
    tm, th = 0.5 * (t0 + t1), 0.5 * (t1 - t0)
    pm, ph = 0.5 * (p0 + p1), 0.5 * (p1 - p0)
    theta = tm[:, None] + th[:, None] * x[None, :]
    phi = pm[:, None] + ph[:, None] * x[None, :]
    tt = np.repeat(theta[:, :, None], n, axis=2).reshape(-1)
    pp = np.repeat(phi[:, None, :], n, axis=1).reshape(-1)
    vals = np.empty(tt.size)
    for s in range(0, tt.size, _CHUNK):
        vals[s:s + _CHUNK] = func(tt[s:s + _CHUNK], pp[s:s + _CHUNK])
    vals = vals.reshape(-1, n, n) * np.sin(theta)[:, :, None]
    ww = w[:, None] * w[None, :]
    return np.einsum("pij,ij->p", vals, ww) * th * ph


def integrate_sphere(func, rel_tol=1e-9, abs_floor=1e-14, max_nodes=MAX_NODES,
                     initial=(4, 8)):
    """Integrate ``func(theta, phi) * sin(theta)`` over [0, pi] x [0, 2 pi].

    ``func`` is called with flat arrays of node angles.  Rectangles whose low-
    and high-order estimates disagree by more than their share of the
    tolerance are split in four.  Returns ``(value, nodes_used)``.
    """
    nt, nphi = initial
    tb = np.linspace(0.0, math.pi, nt + 1)
    pb = np.linspace(0.0, 2.0 * math.pi, nphi + 1)
    T0, P0 = np.meshgrid(tb[:-1], pb[:-1], indexing="ij")
    T1, P1 = np.meshgrid(tb[1:], pb[1:], indexing="ij")
    active = [a.ravel() for a in (T0, T1, P0, P1)]
    full_area = 2.0 * math.pi * math.pi
    per_panel = LOW_ORDER**2 + HIGH_ORDER**2

    accepted = 0.0
    nodes = 0
    while active[0].size:
        nodes += per_panel * active[0].size
        if nodes > max_nodes:
            raise QuadratureNotConverged(
                f"node budget {max_nodes} exhausted with {active[0].size} open panels"
            )
        hi = _panel_sums(func, *active, _HI)
        lo = _panel_sums(func, *active, _LO)
        err = np.abs(hi - lo)
        estimate = accepted + hi.sum()
        area = (active[1] - active[0]) * (active[3] - active[2]) / full_area
        tol = np.maximum(rel_tol * abs(estimate), abs_floor) * area
        done = err <= tol
        accepted += hi[done].sum()
        t0, t1, p0, p1 = (a[~done] for a in active)
        tm, pm = 0.5 * (t0 + t1), 0.5 * (p0 + p1)
        active = [
            np.concatenate([t0, t0, tm, tm]),
            np.concatenate([tm, tm, t1, t1]),
            np.concatenate([p0, pm, p0, pm]),
            np.concatenate([pm, p1, pm, p1]),
        ]
    return float(accepted), nodes
