"""Pure numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
The two must agree to rounding; ``tests/test_kernels.py`` checks this.
"""

import numpy as np

# Below this phase radius the closed form loses digits to cancellation and
# the Maclaurin series is used instead.
SERIES_RADIUS = 1.0
_SERIES_TERMS = 14


def _series_y(l, r2):
    # j_l(r) / r**l = sum_k (-r^2/2)^k / (k! (2l+2k+1)!!)
    dfact = 1.0
    for j in range(1, 2 * l + 2, 2):
        dfact *= j
    term = np.full_like(r2, 1.0 / dfact)
    total = term.copy()
    for kk in range(1, _SERIES_TERMS):
        term = term * (-0.5 * r2) / (kk * (2 * l + 2 * kk + 1))
        total += term
    return total


def omni_d2(b, z):
    """Second z-derivative of sin(r)/r, r = sqrt(b^2 + z^2), in phase units.

    Vectorized over ``b`` and ``z``; equals ``z^2 j2(r)/r^2 - j1(r)/r``.
    """
    b = np.asarray(b, dtype=float)
    z = np.asarray(z, dtype=float)
    r2 = b * b + z * z
    out = np.empty(np.broadcast(b, z).shape)
    r2 = np.broadcast_to(r2, out.shape)
    zz = np.broadcast_to(z * z, out.shape)
    small = r2 < SERIES_RADIUS * SERIES_RADIUS
    if np.any(small):
        rs = r2[small]
        out[small] = zz[small] * _series_y(2, rs) - _series_y(1, rs)
    big = ~small
    if np.any(big):
        rb2 = r2[big]
        r = np.sqrt(rb2)
        s, c = np.sin(r), np.cos(r)
        y1 = (s - r * c) / (rb2 * r)
        y2 = ((3.0 - rb2) * s - 3.0 * r * c) / (rb2 * rb2 * r)
        out[big] = zz[big] * y2 - y1
    return out


def omni_pair_sum(b, z, w):
    """``sum(w * omni_d2(b, z))`` over flat pair arrays."""
    return float(np.dot(np.asarray(w, dtype=float), omni_d2(b, z)))


def omni_objective_population(xy, amps, k, tx, ty):
    """Plane-constrained objective for a population of planar layouts.

    ``xy`` is (P, 2N) with x coordinates first.  Pair heights follow the
    plane, ``z_mn = tx * x_mn + ty * y_mn``.  Returns ``-sum_{n>m} A_n A_m
    omni_d2(k beta_mn, k z_mn)`` per row.
    """
    xy = np.ascontiguousarray(xy, dtype=float)
    amps = np.asarray(amps, dtype=float)
    n = amps.shape[0]
    iu, ju = np.triu_indices(n, 1)
    x = xy[:, :n]
    y = xy[:, n:]
    dx = x[:, ju] - x[:, iu]
    dy = y[:, ju] - y[:, iu]
    dz = tx * dx + ty * dy
    b = k * np.hypot(dx, dy)
    w = amps[iu] * amps[ju]
    return -(omni_d2(b, k * dz) @ w)


def upa_objective_curve(ds, bunit, zunit, mult, k):
    """Objective of a uniform grid for each spacing in ``ds``.

    ``bunit``/``zunit`` are per-offset horizontal and vertical separations
    at unit spacing, ``mult`` the number of element pairs sharing the offset.
    """
    ds = np.asarray(ds, dtype=float)
    scale = k * ds[:, None]
    vals = omni_d2(scale * np.asarray(bunit)[None, :], scale * np.asarray(zunit)[None, :])
    return -(vals @ np.asarray(mult, dtype=float))


def array_power(dirs, pos, amps, phases, k):
    """``|sum_n A_n exp(j(alpha_n + k p_n . a))|^2`` for each unit vector row of ``dirs``."""
    dirs = np.asarray(dirs, dtype=float)
    arg = k * (dirs @ np.asarray(pos, dtype=float).T) + np.asarray(phases)[None, :]
    amps = np.asarray(amps, dtype=float)
    re = np.cos(arg) @ amps
    im = np.sin(arg) @ amps
    return re * re + im * im
