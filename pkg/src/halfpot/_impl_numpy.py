"""Pure-numpy implementations of the hot kernel evaluations.

Every function here has a twin of identical signature and semantics in
``_impl_numba``; keep the two files in sync.  All take float64 arrays,
``y`` of shape (d,) and ``yp`` of shape (N, d), and return shape (N,).
Prefactors (which involve Gamma-function evaluations) are computed by the
caller and passed in as plain floats.
"""

import numpy as np

BACKEND_NAME = "numpy"


def gegenbauer_vals(lam, m, t):
    """C^lam_m evaluated on an array t via the three-term recurrence."""
    t = np.asarray(t, dtype=np.float64)
    if m == -1:
        return np.zeros_like(t)
    c_prev = np.zeros_like(t)          # C_{-1}
    c = np.ones_like(t)                # C_0
    if m == 0:
        return c
    c_next = 2.0 * lam * t             # C_1
    for mm in range(2, m + 1):
        c_prev, c = c, c_next
        c_next = (2.0 * t * (mm + lam - 1.0) * c - (mm + 2.0 * lam - 2.0) * c_prev) / mm
    return c_next


def smooth_step_vals(u):
    """C-infinity monotone step: 0 for u<=0, 1 for u>=1."""
    u = np.asarray(u, dtype=np.float64)
    out = np.empty_like(u)
    lo = u <= 0.0
    hi = u >= 1.0
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    um = u[mid]
    ea = np.exp(-1.0 / um)
    eb = np.exp(-1.0 / (1.0 - um))
    out[mid] = ea / (ea + eb)
    return out


def cutoff_vals(s, r_inner, r_outer):
    """Radial cutoff: 0 below r_inner, 1 above r_outer, smooth between."""
    return smooth_step_vals((np.asarray(s, dtype=np.float64) - r_inner)
                            / (r_outer - r_inner))


def single_layer_vals(x, y, yp, n, pref):
    """pref * (x^2 + |y - yp|^2)^((2-n)/2); pref = 1/((2-n) vol S^{n-1})."""
    d2 = x * x + np.sum((yp - y) ** 2, axis=1)
    return pref * d2 ** (0.5 * (2.0 - n))


def double_layer_vals(x, y, yp, n, pref):
    """pref * x * (x^2 + |y - yp|^2)^(-n/2); pref = 1/vol S^{n-1}."""
    d2 = x * x + np.sum((yp - y) ** 2, axis=1)
    return pref * x * d2 ** (-0.5 * n)


def _ladder_sums(lam, kmax, theta, weights):
    """sum_m weights[m] * C^lam_m(theta) for m = 0..kmax-1, vectorised.

    weights has shape (kmax, N); returns shape (N,).
    """
    acc = np.zeros(theta.shape, dtype=np.float64)
    c_prev = np.zeros_like(theta)
    c = np.ones_like(theta)
    for m in range(kmax):
        if m == 1:
            c_prev, c = c, 2.0 * lam * theta
        elif m >= 2:
            c_new = (2.0 * theta * (m + lam - 1.0) * c
                     - (m + 2.0 * lam - 2.0) * c_prev) / m
            c_prev, c = c, c_new
        acc += weights[m] * c
    return acc


def _geometry(x, y, yp):
    sp = np.sqrt(np.sum(yp ** 2, axis=1))
    zmod = np.sqrt(x * x + np.sum(y ** 2))
    dot = yp @ y
    denom = zmod * sp
    theta = np.where(denom > 0.0, dot / np.maximum(denom, 1e-300), 0.0)
    return sp, zmod, np.clip(theta, -1.0, 1.0)


def mod_correction_single(x, y, yp, n, k, r_inner, r_outer, pref):
    """Cutoff-weighted first-k far-field terms of the single layer kernel.

    pref = 1/((2-n) vol S^{n-1}).  The modified kernel is the plain kernel
    minus this correction.
    """
    sp, zmod, theta = _geometry(x, y, yp)
    psi = cutoff_vals(sp, r_inner, r_outer)
    spi = np.where(sp > 0.0, 1.0 / np.maximum(sp, 1e-300), 0.0)
    weights = np.empty((k, len(sp)))
    radial = spi ** (n - 2)
    for m in range(k):
        weights[m] = zmod ** m * radial
        radial = radial * spi
    return pref * psi * _ladder_sums(0.5 * (n - 2), k, theta, weights)


def mod_correction_double(x, y, yp, n, k, r_inner, r_outer, pref):
    """Cutoff-weighted first-k far-field terms of the double layer kernel.

    pref = 1/vol S^{n-1}; the modified kernel subtracts this correction.
    """
    sp, zmod, theta = _geometry(x, y, yp)
    psi = cutoff_vals(sp, r_inner, r_outer)
    spi = np.where(sp > 0.0, 1.0 / np.maximum(sp, 1e-300), 0.0)
    weights = np.empty((k, len(sp)))
    radial = spi ** n
    for m in range(k):
        weights[m] = x * zmod ** m * radial
        radial = radial * spi
    return pref * psi * _ladder_sums(0.5 * n, k, theta, weights)


def mod_correction_normal(x, y, yp, n, k, r_inner, r_outer, pref):
    """d/dx of the single-layer correction (terms m = 0,1 vanish exactly).

    d/dx [|z|^m C^l_m(T)] = x |z|^(m-2) (m C^l_m(T) - (n-2) T C^(l+1)_(m-1)(T))
    with l = (n-2)/2; pref = 1/((2-n) vol S^{n-1}).
    """
    sp, zmod, theta = _geometry(x, y, yp)
    psi = cutoff_vals(sp, r_inner, r_outer)
    spi = np.where(sp > 0.0, 1.0 / np.maximum(sp, 1e-300), 0.0)
    lam = 0.5 * (n - 2)
    acc = np.zeros(len(sp))
    radial = spi ** n  # (m + n - 2) with m = 2
    for m in range(2, k):
        cm = gegenbauer_vals(lam, m, theta)
        cm1 = gegenbauer_vals(lam + 1.0, m - 1, theta)
        bracket = m * cm - (n - 2.0) * theta * cm1
        acc += zmod ** (m - 2) * radial * bracket
        radial = radial * spi
    return pref * psi * x * acc


def boundary_single_vals(y, yp, n, k, r_inner, r_outer, pref_sl):
    """Single boundary layer kernel values: modified kernel at x = 0."""
    vals = single_layer_vals(0.0, y, yp, n, pref_sl)
    if k > 0:
        vals = vals - mod_correction_single(0.0, y, yp, n, k,
                                            r_inner, r_outer, pref_sl)
    return vals
