"""Embedded Dormand-Prince 5(4) stepping with stage-failure rejection.

The driver differs from an off-the-shelf solver in one respect: the
right-hand side may raise (for instance when a trial state leaves the
domain where it is defined). Such a step is rejected and the step size
halved, exactly as for an error-test failure. When the step size falls
below ``h_min`` the driver raises :class:`Underflow`, carrying the most
recent stage failure since the last accepted step (if any).
"""

import numpy as np

C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4

ORDER = 5


class StageFailure(Exception):
    """Wraps the exception raised by the right-hand side inside a trial step."""

    def __init__(self, cause, t, y):
        super().__init__(str(cause))
        self.cause = cause
        self.t = t
        self.y = y


class Underflow(Exception):
    def __init__(self, t, y, h, last_failure=None):
        super().__init__(f"step size {h:.3g} below minimum at t={t:.6g}")
        self.t = t
        self.y = y
        self.h = h
        self.last_failure = last_failure


def dopri_step(fun, t, y, h, k1, catch=()):
    """One Dormand-Prince step; returns ``(y_new, err, k7)``.

    ``k7`` is the derivative at ``y_new`` (first-same-as-last).
    """
    K = np.empty((7, len(y)))
    K[0] = k1
    for s in range(1, 7):
        ys = y + h * (np.asarray(A[s]) @ K[:s])
        try:
            K[s] = fun(t + C[s] * h, ys)
        except catch as exc:
            raise StageFailure(exc, t + C[s] * h, ys) from exc
    y_new = y + h * (B5 @ K)
    err = h * (E @ K)
    return y_new, err, K[6]


def error_norm(err, y, y_new, atol, rtol):
    scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def initial_step(fun, t0, y0, f0, atol, rtol):
    """Starting step size, following Hairer, Norsett & Wanner (II.4)."""
    scale = atol + rtol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    try:
        f1 = fun(t0 + h0, y0 + h0 * f0)
    except Exception:
        return h0
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / ORDER)
    return min(100 * h0, h1)


def steps(fun, t0, y0, t_end, *, atol=1e-9, rtol=1e-9, h0=None, h_min=1e-12,
          h_max=np.inf, fixed=None, catch=()):
    """Generate accepted steps ``(t, y)`` from ``t0`` to ``t_end``.

    With ``fixed`` set, every step has that size (the last one is shortened
    to land on ``t_end``) and the error test is skipped; stage failures
    still halve the step. ``catch`` lists the exception types from ``fun``
    that reject a step instead of propagating.
    """
    t = float(t0)
    y = np.array(y0, dtype=float)
    f = fun(t, y)
    if fixed is not None:
        h = float(fixed)
    elif h0 is not None:
        h = float(h0)
    else:
        h = initial_step(fun, t, y, f, atol, rtol)
    h = min(h, h_max)
    failure = None

    while t < t_end:
        h_try = min(h, t_end - t)
        last = h_try >= t_end - t
        if h_try < h_min and not last:
            raise Underflow(t, y, h_try, failure)
        try:
            y_new, err, f_new = dopri_step(fun, t, y, h_try, f, catch)
        except StageFailure as fail:
            failure = fail
            h = 0.5 * h_try
            if h < h_min:
                raise Underflow(t, y, h, failure)
            continue
        if fixed is None:
            en = error_norm(err, y, y_new, atol, rtol)
            if not np.isfinite(en) or en > 1.0:
                h = h_try * max(0.2, 0.9 * en ** (-1 / ORDER)) if np.isfinite(en) else 0.5 * h_try
                if h < h_min:
                    raise Underflow(t, y, h, failure)
                continue
            factor = 5.0 if en == 0 else min(5.0, max(0.2, 0.9 * en ** (-1 / ORDER)))
            h = min(h_try * factor, h_max)
        else:
            # regrow towards the nominal size after stage-failure halvings
            h = min(2 * h_try, float(fixed))
        t = t_end if last else t + h_try
        y, f = y_new, f_new
        failure = None
        yield t, y
