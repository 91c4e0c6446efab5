"""Ideal proximal operators for the l1 norm and the minimax concave penalty.

All operators act elementwise, so they take scalars or numpy arrays.
:func:`prox_oracle` is a brute-force grid argmin kept for cross-checking the
closed forms in tests.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "L1Params",
    "McpParams",
    "soft_threshold",
    "mcp_penalty",
    "mcp_prox",
    "prox_oracle",
]


def _out(v, arr):
    return float(arr) if np.ndim(v) == 0 else arr


@dataclass(frozen=True)
class L1Params:
    """Soft-threshold level ``t = epsilon * lam``."""

    threshold: float

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")


@dataclass(frozen=True)
class McpParams:
    """Parameters of the MCP penalty and its proximal operator.

    Attributes
    ----------
    lam : float
        Regularization weight.
    alpha : float
        Shape parameter; the penalty is flat for ``|x| > alpha * lam``.
    epsilon : float or None
        Step size the prox is taken with. Must be smaller than ``alpha``.
        Only the penalty can be evaluated when it is ``None``.
    """

    lam: float
    alpha: float
    epsilon: Optional[float] = 1.0

    def __post_init__(self):
        for name in ("lam", "alpha"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.epsilon is None:
            return
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.alpha > self.epsilon:
            raise ValueError(
                f"MCP prox needs alpha > epsilon (alpha={self.alpha}, epsilon={self.epsilon})"
            )


def soft_threshold(v, t):
    """Soft-thresholding: shrink ``v`` toward zero by ``t``, zero inside ``[-t, t]``."""
    if not t > 0:
        raise ValueError(f"threshold must be positive, got {t}")
    va = np.asarray(v, dtype=float)
    return _out(v, np.sign(va) * np.maximum(np.abs(va) - t, 0.0))


def mcp_penalty(x, p):
    """MCP penalty ``J(x)``: ``|x| - x**2 / (2 alpha lam)`` up to ``alpha lam``, then ``alpha lam / 2``.

    The step size in ``p`` is not used.
    """
    xa = np.abs(np.asarray(x, dtype=float))
    knee = p.alpha * p.lam
    val = np.where(xa <= knee, xa - xa * xa / (2.0 * knee), 0.5 * knee)
    return _out(x, val)


def mcp_prox(v, p):
    """Proximal operator of ``epsilon * lam * J_MCP``.

    Returns 0 for ``|v| < epsilon lam``, the rescaled shrinkage
    ``alpha / (alpha - epsilon) * (v - epsilon lam sgn(v))`` on
    ``epsilon lam <= |v| <= alpha lam``, and ``v`` itself beyond ``alpha lam``.
    """
    if p.epsilon is None:
        raise ValueError("mcp_prox needs a step size in McpParams.epsilon")
    va = np.asarray(v, dtype=float)
    av = np.abs(va)
    t = p.epsilon * p.lam
    gain = p.alpha / (p.alpha - p.epsilon)
    mid = gain * (va - t * np.sign(va))
    res = np.where(av < t, 0.0, np.where(av <= p.alpha * p.lam, mid, va))
    return _out(v, res)


def prox_oracle(penalty, v, epsilon, half_width=3.0, resolution=1e-6, coarse=1e-3):
    """Brute-force ``argmin_x penalty(x) + (x - v)**2 / (2 epsilon)`` on a grid.

    The search covers ``[v - half_width, v + half_width]``. To keep the cost
    manageable it scans a coarse grid first and then rescans a window of a few
    coarse cells around the best point, shrinking the spacing by 1000x per
    pass until ``resolution`` is reached. This is exact for objectives that
    are unimodal, which holds for both penalties here when the prox is
    well defined (``alpha > epsilon`` for MCP).

    Parameters
    ----------
    penalty : callable
        Vectorized scalar penalty, e.g. ``lambda x: lam * np.abs(x)``.
    v : float
        Point the prox is evaluated at.
    epsilon : float
        Prox step.
    half_width, resolution, coarse : float
        Grid extent, final spacing, and first-pass spacing.

    Returns
    -------
    float
        The minimizing grid point.
    """
    if not (half_width > 0 and resolution > 0 and epsilon > 0):
        raise ValueError("empty search grid: half_width, resolution and epsilon must be positive")

    def objective(x):
        return penalty(x) + (x - v) ** 2 / (2.0 * epsilon)

    step = max(coarse, resolution)
    lo, hi = v - half_width, v + half_width
    while True:
        n = int(np.floor((hi - lo) / step)) + 1
        grid = lo + step * np.arange(n)
        best = grid[np.argmin(objective(grid))]
        if step <= resolution:
            return float(best)
        lo, hi = best - 2 * step, best + 2 * step
        step = max(step / 1000.0, resolution)
