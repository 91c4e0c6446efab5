"""Principal branch of the Lambert W function on the nonnegative reals.

Two entry points are provided:

* :func:`lambert_w0` takes the argument ``x`` directly and solves
  ``w * exp(w) = x``.
* :func:`lambert_w0_of_exp` takes ``y = log(x)`` and solves
  ``w + log(w) = y``. It is what the diode transfer function uses, because
  the argument there is ``exp(y)`` with ``y`` in the thousands and cannot be
  formed in floating point.

Both run Halley's method elementwise and accept scalars or arrays. The inner
loops are compiled with numba; the solver calls them once per iteration on
short vectors, where numpy dispatch overhead would otherwise dominate.
"""

import math

import numba
import numpy as np

from .errors import ConvergenceError

__all__ = ["lambert_w0", "lambert_w0_of_exp"]

MAX_ITER = 100
# relative step size at which an iterate is considered converged
STEP_TOL = 4 * np.finfo(float).eps


@numba.njit(cache=True)
def _w0_scalar(x):
    # seed: log1p is an upper bound on W0 near the origin, the two-term
    # asymptotic expansion is accurate above e
    if x > math.e:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    else:
        w = math.log1p(x)
    for _ in range(MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= STEP_TOL * abs(w):
            return w, True
    return w, False


@numba.njit(cache=True)
def _w0_log_scalar(y):
    if y < 1.0:
        return _w0_scalar(math.exp(y))
    w = y - math.log(y)
    for _ in range(MAX_ITER):
        g = w + math.log(w) - y
        gp = 1.0 + 1.0 / w
        # g'' = -1/w**2
        dw = g / (gp + g / (2.0 * w * w * gp))
        w -= dw
        if abs(dw) <= STEP_TOL * w:
            return w, True
    return w, False


@numba.njit(cache=True)
def _map_direct(x, out):
    ok = True
    for i in range(x.size):
        out[i], conv = _w0_scalar(x[i])
        ok &= conv
    return ok


@numba.njit(cache=True)
def _map_log(y, out):
    ok = True
    for i in range(y.size):
        out[i], conv = _w0_log_scalar(y[i])
        ok &= conv
    return ok


def _as_float_array(a, name):
    arr = np.asarray(a, dtype=float)
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} must be finite")
    return arr


def _apply(kernel, arr, name):
    flat = np.ascontiguousarray(arr).ravel()
    out = np.empty_like(flat)
    if not kernel(flat, out):
        raise ConvergenceError(f"{name} did not converge in {MAX_ITER} iterations")
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


def lambert_w0(x):
    """Principal branch W0(x) for finite ``x >= 0``.

    Parameters
    ----------
    x : float or array_like
        Nonnegative, finite argument(s).

    Returns
    -------
    w : float or ndarray
        Solution of ``w * exp(w) = x`` with ``w >= 0``. Scalars in, scalars out.

    Raises
    ------
    ValueError
        If any element is negative or not finite.
    ConvergenceError
        If Halley's iteration does not settle within ``MAX_ITER`` steps.
    """
    xa = _as_float_array(x, "x")
    if (xa < 0).any():
        raise ValueError("lambert_w0 is only defined here for x >= 0")
    return _apply(_map_direct, xa, "lambert_w0")


def lambert_w0_of_exp(y):
    """W0(exp(y)) without ever forming ``exp(y)``.

    For ``y >= 1`` this solves ``w + log(w) = y`` by Halley iteration seeded at
    the asymptotic value ``y - log(y)``. Below that the argument ``exp(y)`` is
    at most ``e`` and the direct form is used.

    Parameters
    ----------
    y : float or array_like
        Finite log-argument(s). Large values (1e4 and beyond) are fine.

    Returns
    -------
    w : float or ndarray
        Positive solution(s); scalars in, scalars out.
    """
    ya = _as_float_array(y, "y")
    return _apply(_map_log, ya, "lambert_w0_of_exp")
