"""Proximal gradient (ISTA) iteration with a swappable shrinkage stage.

The same gradient step feeds one of four element-wise nonlinearities:

=============  ==========================================================
``ista-l1``    ideal soft-thresholding
``ista-mcp``   ideal MCP proximal operator
``diode-l1``   diode circuit calibrated for unit asymptotic slope
``diode-mcp``  diode circuit calibrated through the point ``(k, k)``
=============  ==========================================================

Noise, when enabled, enters as amplifier noise on every gradient-step output
and, for the diode kinds, as modulator noise on the circuit input and output.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .diode import CircuitParams, DiodeParams, v_out
from .errors import ConvergenceError, SolverRunError
from .noise import (
    NoiseConfig,
    NoiseParams,
    sample_additive_noise,
    shot_variance,
    thermal_variance,
)
from .proxops import McpParams, mcp_penalty, mcp_prox, soft_threshold

__all__ = [
    "PROX_KINDS",
    "SolverConfig",
    "Trajectory",
    "power_iteration_max_eig",
    "default_step_size",
    "gradient_step",
    "objective",
    "run",
]

PROX_KINDS = ("ista-l1", "ista-mcp", "diode-l1", "diode-mcp")


@dataclass(frozen=True)
class SolverConfig:
    """Settings for one solver run.

    Attributes
    ----------
    prox_kind : str
        One of :data:`PROX_KINDS`.
    lam : float
        Regularization weight.
    epsilon : float or None
        Step size. ``None`` means ``0.99 / lambda_max(A^T A)`` computed per problem.
    max_iterations : int
    mcp_alpha : float
        MCP shape, ``ista-mcp`` only.
    mcp_alpha_relative : bool
        If true (the default) ``mcp_alpha`` is measured in units of the step
        size, so the prox becomes identity above ``mcp_alpha * epsilon * lam``
        and the middle-band gain is ``alpha / (alpha - 1)``. If false it is
        used as-is, putting the knee at ``mcp_alpha * lam``.
    circuit : CircuitParams
        Required for the diode kinds.
    diode : DiodeParams
    noise : NoiseParams
    noise_config : NoiseConfig
    label : str or None
        Curve label; defaults to ``prox_kind``.
    early_stop_tol : float or None
        Stop once the max-norm change between iterates drops below this.
    keep_every : int
        Store every ``keep_every``-th iterate in the trajectory (0 keeps none).
    """

    prox_kind: str = "ista-l1"
    lam: float = 0.15
    epsilon: Optional[float] = None
    max_iterations: int = 2000
    mcp_alpha: float = 27.0
    mcp_alpha_relative: bool = True
    circuit: Optional[CircuitParams] = None
    diode: DiodeParams = field(default_factory=DiodeParams)
    noise: NoiseParams = field(default_factory=NoiseParams)
    noise_config: NoiseConfig = field(default_factory=NoiseConfig)
    label: Optional[str] = None
    early_stop_tol: Optional[float] = None
    keep_every: int = 0

    def __post_init__(self):
        if self.prox_kind not in PROX_KINDS:
            raise ValueError(f"prox_kind must be one of {PROX_KINDS}, got {self.prox_kind!r}")
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.prox_kind.startswith("diode") and self.circuit is None:
            raise ValueError(f"{self.prox_kind} needs circuit parameters")
        if self.prox_kind == "ista-mcp":
            if self.mcp_alpha_relative:
                if not self.mcp_alpha > 1:
                    raise ValueError(
                        f"step-relative MCP alpha must exceed 1 (alpha > epsilon), got {self.mcp_alpha}"
                    )
            elif self.epsilon is not None and not self.mcp_alpha > self.epsilon:
                raise ValueError(
                    f"MCP needs alpha > epsilon, got alpha={self.mcp_alpha}, epsilon={self.epsilon}"
                )

    @property
    def name(self):
        return self.label or self.prox_kind

    def mcp_params(self, epsilon):
        alpha = self.mcp_alpha * epsilon if self.mcp_alpha_relative else self.mcp_alpha
        return McpParams(lam=self.lam, alpha=alpha, epsilon=epsilon)


@dataclass
class Trajectory:
    """Result of a solver run.

    ``squared_errors[i]`` is ``||x[i] - x_true||^2 / N`` with ``x[0] = 0``.
    """

    squared_errors: np.ndarray
    final: np.ndarray
    epsilon: float
    iterations: int
    estimates: Optional[np.ndarray] = None


def power_iteration_max_eig(A, tol=1e-10, max_iter=10000, rng=None):
    """Largest eigenvalue of ``A^T A`` by power iteration.

    Iterates on whichever Gram matrix (``A^T A`` or ``A A^T``) is smaller;
    both share the same nonzero spectrum.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or not np.any(A):
        raise ValueError("A must be a nonzero 2-D matrix")
    gram = A.T @ A if A.shape[1] <= A.shape[0] else A @ A.T
    rng = np.random.default_rng(0) if rng is None else rng
    v = rng.standard_normal(gram.shape[0])
    v /= np.linalg.norm(v)
    theta = 0.0
    for _ in range(max_iter):
        u = gram @ v
        theta_new = float(v @ u)
        nu = np.linalg.norm(u)
        v = u / nu
        if abs(theta_new - theta) <= tol * abs(theta_new):
            return theta_new
        theta = theta_new
    raise ConvergenceError(f"power iteration did not reach tol={tol} in {max_iter} steps")


def default_step_size(A):
    """``0.99 / lambda_max(A^T A)``."""
    return 0.99 / power_iteration_max_eig(A)


def gradient_step(x, A, y, epsilon):
    """``x - epsilon * A^T (A x - y)``."""
    x = np.asarray(x, dtype=float)
    A = np.asarray(A, dtype=float)
    y = np.asarray(y, dtype=float)
    if A.ndim != 2 or x.shape != (A.shape[1],) or y.shape != (A.shape[0],):
        raise ValueError(
            f"shape mismatch: A {A.shape}, x {x.shape}, y {y.shape}"
        )
    return x - epsilon * (A.T @ (A @ x - y))


def objective(x, A, y, lam, regularizer="l1", alpha=None):
    """``lam * J(x) + 0.5 * ||A x - y||^2`` with ``J`` the l1 norm or summed MCP."""
    x = np.asarray(x, dtype=float)
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or x.shape != (A.shape[1],) or np.shape(y) != (A.shape[0],):
        raise ValueError(f"shape mismatch: A {A.shape}, x {x.shape}, y {np.shape(y)}")
    r = A @ x - y
    fit = 0.5 * float(r @ r)
    if regularizer == "l1":
        reg = float(np.sum(np.abs(x)))
    elif regularizer == "mcp":
        if alpha is None:
            raise ValueError("MCP objective needs alpha")
        reg = float(np.sum(mcp_penalty(x, McpParams(lam=lam, alpha=alpha, epsilon=None))))
    else:
        raise ValueError(f"unknown regularizer {regularizer!r}")
    return lam * reg + fit


def _shrinkage(cfg, epsilon):
    kind = cfg.prox_kind
    if kind == "ista-l1":
        t = epsilon * cfg.lam
        return lambda r: soft_threshold(r, t)
    if kind == "ista-mcp":
        p = cfg.mcp_params(epsilon)
        return lambda r: mcp_prox(r, p)
    return lambda r: v_out(r, cfg.diode, cfg.circuit)


def run(problem, cfg, amplifier_rng=None, circuit_rng=None):
    """Run ``cfg.max_iterations`` proximal-gradient updates from ``x = 0``.

    Parameters
    ----------
    problem : ProblemInstance
        Needs ``A``, ``y`` and ``x_true``.
    cfg : SolverConfig
    amplifier_rng, circuit_rng : numpy.random.Generator, optional
        Streams for amplifier noise and for OEM/EOM noise. When omitted both
        are derived from ``cfg.noise_config.seed``.

    Returns
    -------
    Trajectory
    """
    A = np.asarray(problem.A, dtype=float)
    y = np.asarray(problem.y, dtype=float)
    x_true = np.asarray(problem.x_true, dtype=float)
    m, n = A.shape
    eps = cfg.epsilon if cfg.epsilon is not None else default_step_size(A)
    if cfg.prox_kind == "ista-mcp" and not cfg.mcp_alpha_relative and not cfg.mcp_alpha > eps:
        raise ValueError(f"MCP needs alpha > epsilon, got alpha={cfg.mcp_alpha}, epsilon={eps}")

    amp_ss, circ_ss = np.random.SeedSequence(cfg.noise_config.seed).spawn(2)
    if amplifier_rng is None:
        amplifier_rng = np.random.default_rng(amp_ss)
    if circuit_rng is None:
        circuit_rng = np.random.default_rng(circ_ss)

    nc = cfg.noise_config
    diode_kind = cfg.prox_kind.startswith("diode")
    amp_var = cfg.noise.amplifier_variance
    if diode_kind:
        oem_thermal = thermal_variance(cfg.noise, cfg.circuit.series_resistance)
        eom_thermal = thermal_variance(cfg.noise, cfg.circuit.load_resistance)
    shrink = _shrinkage(cfg, eps)

    x = np.zeros(n)
    errs = np.empty(cfg.max_iterations + 1)
    errs[0] = float(x_true @ x_true) / n
    keep = []
    if cfg.keep_every:
        keep.append(x.copy())
    done = cfg.max_iterations
    for i in range(cfg.max_iterations):
        try:
            r = x - eps * (A.T @ (A @ x - y))
            if nc.use_amplifier:
                r = r + sample_additive_noise(amplifier_rng, amp_var, n)
            if diode_kind and nc.use_oem:
                r = r + sample_additive_noise(circuit_rng, shot_variance(r, cfg.noise) + oem_thermal, n)
            x_new = shrink(r)
            if diode_kind and nc.use_eom:
                x_new = x_new + sample_additive_noise(circuit_rng, eom_thermal, n)
        except (ValueError, ArithmeticError) as exc:
            raise SolverRunError(f"{cfg.name}: iteration {i + 1} failed: {exc}", iteration=i + 1) from exc
        d = x_new - x
        errs[i + 1] = float((x_new - x_true) @ (x_new - x_true)) / n
        x = x_new
        if cfg.keep_every and (i + 1) % cfg.keep_every == 0:
            keep.append(x.copy())
        if cfg.early_stop_tol is not None and np.max(np.abs(d)) < cfg.early_stop_tol:
            done = i + 1
            errs = errs[: done + 1]
            break

    return Trajectory(
        squared_errors=errs,
        final=x,
        epsilon=eps,
        iterations=done,
        estimates=np.array(keep) if cfg.keep_every else None,
    )
