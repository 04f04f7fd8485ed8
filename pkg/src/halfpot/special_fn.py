"""Scalar special functions: Gegenbauer polynomials, Gamma, sphere volumes.

These are the ingredients of every kernel constant in the package.  The
Gegenbauer recurrence is also available in array form through the compiled
backend (`gegenbauer_array`); the scalar versions here are plain Python and
serve as the reference implementation.
"""

import math

import numpy as np

from . import _backend

#: Largest supported polynomial order.  Modification orders in practice stay
#: below ~10; the recurrence in float64 is comfortably accurate to here.
MAX_ORDER = 64

_T_SLACK = 1e-12

# Lanczos approximation, g = 7, 9 terms.  Valid for x > 0; relative error
# below 1e-13 on [0.5, 30].
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x):
    """Gamma function for x > 0 via the Lanczos rational approximation."""
    if x <= 0.0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    a = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        a += _LANCZOS_C[i] / (x - 1.0 + i)
    t = x + _LANCZOS_G - 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x - 0.5) * math.exp(-t) * a


def sphere_volume(d):
    """Surface volume of the unit sphere S^(d-1) in R^d: 2 pi^(d/2) / Gamma(d/2)."""
    if d < 1 or int(d) != d:
        raise ValueError(f"sphere_volume requires an integer d >= 1, got {d}")
    return 2.0 * math.pi ** (0.5 * d) / gamma_fn(0.5 * d)


def _clamp_t(t):
    if abs(t) > 1.0 + _T_SLACK:
        raise ValueError(f"Gegenbauer argument out of range: t = {t}")
    return min(1.0, max(-1.0, t))


def gegenbauer(lam, m, t):
    """C^lam_m(t) by the three-term recurrence; C_{-1} = 0, C_0 = 1, C_1 = 2 lam t.

    m may be -1 (as a convenience the value is 0).  Orders above MAX_ORDER
    are rejected rather than silently losing accuracy.
    """
    if lam <= 0.0:
        raise ValueError(f"Gegenbauer order lam must be positive, got {lam}")
    if m < -1:
        raise ValueError(f"Gegenbauer degree must be >= -1, got {m}")
    if m > MAX_ORDER:
        raise ValueError(f"Gegenbauer degree {m} exceeds supported cap {MAX_ORDER}")
    t = _clamp_t(t)
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


def gegenbauer_derivative(lam, m, t):
    """d/dt C^lam_m(t) = 2 lam C^(lam+1)_(m-1)(t)."""
    if m == 0 or m == -1:
        return 0.0
    return 2.0 * lam * gegenbauer(lam + 1.0, m - 1, _clamp_t(t))


def gegenbauer_array(lam, m, t):
    """Vectorised C^lam_m over an array of arguments (compiled backend)."""
    if m > MAX_ORDER:
        raise ValueError(f"Gegenbauer degree {m} exceeds supported cap {MAX_ORDER}")
    t = np.ascontiguousarray(np.clip(t, -1.0, 1.0), dtype=np.float64)
    return _backend.impl.gegenbauer_vals(float(lam), int(m), t)
