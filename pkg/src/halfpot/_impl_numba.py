"""Numba-compiled implementations of the hot kernel evaluations.

Signature-for-signature twin of ``_impl_numpy``; the per-point loops here
carry ``@njit``.  Keep the two files in sync.
"""

import math

import numpy as np
from numba import njit

BACKEND_NAME = "numba"

_JIT = dict(cache=True, fastmath=False)


@njit(**_JIT)
def _geg_scalar(lam, m, t):
    if m == -1:
        return 0.0
    c = 1.0
    if m == 0:
        return c
    c_next = 2.0 * lam * t
    c_prev = 0.0
    for mm in range(2, m + 1):
        c_prev, c = c, c_next
        c_next = (2.0 * t * (mm + lam - 1.0) * c - (mm + 2.0 * lam - 2.0) * c_prev) / mm
    return c_next


@njit(**_JIT)
def gegenbauer_vals(lam, m, t):
    out = np.empty(t.shape[0])
    for i in range(t.shape[0]):
        out[i] = _geg_scalar(lam, m, t[i])
    return out


@njit(**_JIT)
def _step_scalar(u):
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    ea = math.exp(-1.0 / u)
    eb = math.exp(-1.0 / (1.0 - u))
    return ea / (ea + eb)


@njit(**_JIT)
def smooth_step_vals(u):
    out = np.empty(u.shape[0])
    for i in range(u.shape[0]):
        out[i] = _step_scalar(u[i])
    return out


@njit(**_JIT)
def cutoff_vals(s, r_inner, r_outer):
    out = np.empty(s.shape[0])
    inv = 1.0 / (r_outer - r_inner)
    for i in range(s.shape[0]):
        out[i] = _step_scalar((s[i] - r_inner) * inv)
    return out


@njit(**_JIT)
def single_layer_vals(x, y, yp, n, pref):
    npts = yp.shape[0]
    d = yp.shape[1]
    out = np.empty(npts)
    ex = 0.5 * (2.0 - n)
    for i in range(npts):
        d2 = x * x
        for j in range(d):
            diff = yp[i, j] - y[j]
            d2 += diff * diff
        out[i] = pref * d2 ** ex
    return out


@njit(**_JIT)
def double_layer_vals(x, y, yp, n, pref):
    npts = yp.shape[0]
    d = yp.shape[1]
    out = np.empty(npts)
    ex = -0.5 * n
    for i in range(npts):
        d2 = x * x
        for j in range(d):
            diff = yp[i, j] - y[j]
            d2 += diff * diff
        out[i] = pref * x * d2 ** ex
    return out


@njit(**_JIT)
def _point_geometry(x, y, yp, i):
    d = yp.shape[1]
    sp2 = 0.0
    dot = 0.0
    for j in range(d):
        sp2 += yp[i, j] * yp[i, j]
        dot += yp[i, j] * y[j]
    sp = math.sqrt(sp2)
    ymod2 = 0.0
    for j in range(d):
        ymod2 += y[j] * y[j]
    zmod = math.sqrt(x * x + ymod2)
    denom = zmod * sp
    theta = dot / denom if denom > 0.0 else 0.0
    if theta > 1.0:
        theta = 1.0
    elif theta < -1.0:
        theta = -1.0
    return sp, zmod, theta


@njit(**_JIT)
def mod_correction_single(x, y, yp, n, k, r_inner, r_outer, pref):
    npts = yp.shape[0]
    out = np.zeros(npts)
    lam = 0.5 * (n - 2)
    inv = 1.0 / (r_outer - r_inner)
    for i in range(npts):
        sp, zmod, theta = _point_geometry(x, y, yp, i)
        psi = _step_scalar((sp - r_inner) * inv)
        if psi == 0.0 or sp <= 0.0:
            continue
        spi = 1.0 / sp
        radial = spi ** (n - 2)
        zpow = 1.0
        acc = 0.0
        c_prev = 0.0
        c = 1.0
        for m in range(k):
            if m == 1:
                c_prev, c = c, 2.0 * lam * theta
            elif m >= 2:
                c_new = (2.0 * theta * (m + lam - 1.0) * c
                         - (m + 2.0 * lam - 2.0) * c_prev) / m
                c_prev, c = c, c_new
            acc += zpow * radial * c
            zpow *= zmod
            radial *= spi
        out[i] = pref * psi * acc
    return out


@njit(**_JIT)
def mod_correction_double(x, y, yp, n, k, r_inner, r_outer, pref):
    npts = yp.shape[0]
    out = np.zeros(npts)
    lam = 0.5 * n
    inv = 1.0 / (r_outer - r_inner)
    for i in range(npts):
        sp, zmod, theta = _point_geometry(x, y, yp, i)
        psi = _step_scalar((sp - r_inner) * inv)
        if psi == 0.0 or sp <= 0.0:
            continue
        spi = 1.0 / sp
        radial = spi ** n
        zpow = 1.0
        acc = 0.0
        c_prev = 0.0
        c = 1.0
        for m in range(k):
            if m == 1:
                c_prev, c = c, 2.0 * lam * theta
            elif m >= 2:
                c_new = (2.0 * theta * (m + lam - 1.0) * c
                         - (m + 2.0 * lam - 2.0) * c_prev) / m
                c_prev, c = c, c_new
            acc += x * zpow * radial * c
            zpow *= zmod
            radial *= spi
        out[i] = pref * psi * acc
    return out


@njit(**_JIT)
def mod_correction_normal(x, y, yp, n, k, r_inner, r_outer, pref):
    npts = yp.shape[0]
    out = np.zeros(npts)
    lam = 0.5 * (n - 2)
    inv = 1.0 / (r_outer - r_inner)
    for i in range(npts):
        sp, zmod, theta = _point_geometry(x, y, yp, i)
        psi = _step_scalar((sp - r_inner) * inv)
        if psi == 0.0 or sp <= 0.0:
            continue
        spi = 1.0 / sp
        radial = spi ** n
        acc = 0.0
        for m in range(2, k):
            cm = _geg_scalar(lam, m, theta)
            cm1 = _geg_scalar(lam + 1.0, m - 1, theta)
            bracket = m * cm - (n - 2.0) * theta * cm1
            acc += zmod ** (m - 2) * radial * bracket
            radial *= spi
        out[i] = pref * psi * x * acc
    return out


@njit(**_JIT)
def boundary_single_vals(y, yp, n, k, r_inner, r_outer, pref_sl):
    vals = single_layer_vals(0.0, y, yp, n, pref_sl)
    if k > 0:
        corr = mod_correction_single(0.0, y, yp, n, k, r_inner, r_outer, pref_sl)
        for i in range(vals.shape[0]):
            vals[i] -= corr[i]
    return vals
