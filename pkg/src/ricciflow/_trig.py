"""Triangle angles in the constant-curvature model surfaces S_kappa.

All angles use the half-angle (tangent) form of the law of cosines,

    tan(A/2) = sqrt( f(s-b) f(s-c) / (f(s) f(s-a)) ),

with f = id, sin(sqrt(k) .) or sinh(sqrt(-k) .) and s the half perimeter.
It stays accurate for needle-like and nearly flat triangles, where the
arccos form loses half of the significant digits.
"""

import numpy as np


def _f(x, kappa):
    if kappa == 0:
        return x
    if kappa > 0:
        return np.sin(np.sqrt(kappa) * x)
    return np.sinh(np.sqrt(-kappa) * x)


def slack(a, b, c):
    """Half perimeter and the three triangle-inequality slacks ``s - a`` etc."""
    a, b, c = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, c)))
    s = 0.5 * (a + b + c)
    return s, 0.5 * (b + c - a), 0.5 * (a + c - b), 0.5 * (a + b - c)


def _log_sinh(x):
    big = x > 20.0
    with np.errstate(divide="ignore"):
        return np.where(big, x - _LOG2, np.log(np.sinh(np.minimum(x, 20.0))))


_LOG2 = np.log(2.0)


def model_angle(a, b, c, kappa=0.0):
    """Angle opposite side ``a`` of the triangle (a, b, c) drawn in S_kappa.

    Slightly negative slacks (rounding) are clamped to zero; callers are
    responsible for rejecting genuinely invalid triangles first.
    """
    s, sa, sb, sc = slack(a, b, c)
    sa, sb, sc = (np.maximum(x, 0.0) for x in (sa, sb, sc))
    if kappa < 0:
        # log form: sinh overflows long before the angle loses meaning
        k = np.sqrt(-kappa)
        with np.errstate(invalid="ignore"):
            lr = (_log_sinh(k * sb) + _log_sinh(k * sc)
                  - _log_sinh(k * s) - _log_sinh(k * sa))
        lr = np.where(np.isnan(lr), -np.inf, lr)  # degenerate 0/0 -> zero angle
        return 2.0 * np.arctan(np.exp(0.5 * lr))
    num = _f(sb, kappa) * _f(sc, kappa)
    den = _f(s, kappa) * _f(sa, kappa)
    return 2.0 * np.arctan2(np.sqrt(np.maximum(num, 0.0)),
                            np.sqrt(np.maximum(den, 0.0)))


def hyperbolic_cosh_length(r1, r2, cos_phi):
    """cosh of the hyperbolic distance between circle centres with intersection angle phi."""
    return np.cosh(r1) * np.cosh(r2) + np.sinh(r1) * np.sinh(r2) * cos_phi
