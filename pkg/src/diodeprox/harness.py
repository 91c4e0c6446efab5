"""Monte Carlo MSE experiments over random compressed-sensing problems.

Every trial draws one problem and runs every solver configuration on it, so
curve differences within a trial come from the shrinkage stage alone. Trial
``t`` seeds everything it uses from ``SeedSequence(base_seed,
spawn_key=(t,))``. The outcome therefore does not depend on execution order
or on the number of worker processes.
"""

import csv
import hashlib
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .diode import CircuitParams, DiodeParams
from .errors import SolverRunError
from .noise import NoiseConfig, NoiseParams
from .solver import SolverConfig, run

__all__ = [
    "ProblemInstance",
    "EnsembleConfig",
    "MseCurve",
    "standard_solvers",
    "generate_problem",
    "mse",
    "trial_seed",
    "run_trial",
    "run_experiment",
    "steady_state",
    "iterations_to_steady_state",
    "write_curves",
    "read_curves",
]


@dataclass(frozen=True)
class ProblemInstance:
    """``y = A x_true + w`` with ``A`` of shape ``(M, N)``, ``N > M``."""

    A: np.ndarray
    x_true: np.ndarray
    w: np.ndarray
    y: np.ndarray
    noise_variance: float

    @property
    def M(self):
        return self.A.shape[0]

    @property
    def N(self):
        return self.A.shape[1]


@dataclass(frozen=True)
class EnsembleConfig:
    M: int = 32
    N: int = 64
    nonzero_probability: float = 0.1
    noise_variance: float = 1e-5
    trials: int = 200
    base_seed: int = 0

    def __post_init__(self):
        if not (self.M >= 1 and self.N > self.M):
            raise ValueError(f"need N > M >= 1, got M={self.M}, N={self.N}")
        if not 0 < self.nonzero_probability < 1:
            raise ValueError(f"nonzero probability must be in (0, 1), got {self.nonzero_probability}")
        if not self.noise_variance >= 0:
            raise ValueError("measurement noise variance must be >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass
class MseCurve:
    """Trial-averaged squared error per iteration for one algorithm.

    ``trial_curves`` keeps the per-trial values (shape ``(trials, iterations + 1)``)
    so spreads and paired differences can be computed afterwards.
    """

    label: str
    mse: np.ndarray
    trials: int
    fingerprint: str
    trial_curves: Optional[np.ndarray] = None


def standard_solvers(
    lam=0.15,
    max_iterations=2000,
    mcp_alpha=27.0,
    l1_series_resistance=35.0,
    mcp_load_resistance=1.04,
    mcp_fixed_point=1.5,
    diode=DiodeParams(),
    noise=NoiseParams(),
    noise_config=NoiseConfig(),
    epsilon=None,
    mcp_alpha_relative=True,
):
    """The four algorithms compared in the MSE experiment, in plotting order."""
    common = dict(
        lam=lam,
        epsilon=epsilon,
        max_iterations=max_iterations,
        diode=diode,
        noise=noise,
        noise_config=noise_config,
    )
    return [
        SolverConfig(prox_kind="ista-l1", **common),
        SolverConfig(
            prox_kind="ista-mcp", mcp_alpha=mcp_alpha, mcp_alpha_relative=mcp_alpha_relative, **common
        ),
        SolverConfig(prox_kind="diode-l1", circuit=CircuitParams.for_l1(l1_series_resistance), **common),
        SolverConfig(
            prox_kind="diode-mcp",
            circuit=CircuitParams.for_mcp(mcp_load_resistance, mcp_fixed_point, diode),
            **common,
        ),
    ]


def generate_problem(rng, cfg):
    """Draw a Gaussian sensing matrix, a Bernoulli-Gaussian signal and a noisy measurement.

    ``A`` has i.i.d. ``N(0, 1/M)`` entries; each entry of ``x_true`` is
    nonzero with probability ``p`` and then standard normal; ``w`` is
    i.i.d. ``N(0, sigma^2)``.
    """
    M, N = cfg.M, cfg.N
    A = rng.normal(0.0, np.sqrt(1.0 / M), size=(M, N))
    support = rng.random(N) < cfg.nonzero_probability
    x = np.where(support, rng.standard_normal(N), 0.0)
    w = rng.normal(0.0, np.sqrt(cfg.noise_variance), size=M)
    return ProblemInstance(A=A, x_true=x, w=w, y=A @ x + w, noise_variance=cfg.noise_variance)


def mse(x_hat, x_true):
    """``||x_hat - x_true||^2 / N``."""
    x_hat = np.asarray(x_hat, dtype=float)
    x_true = np.asarray(x_true, dtype=float)
    if x_hat.shape != x_true.shape:
        raise ValueError(f"shape mismatch: {x_hat.shape} vs {x_true.shape}")
    d = x_hat - x_true
    return float(d @ d) / d.size


def trial_seed(base_seed, trial):
    return np.random.SeedSequence(base_seed, spawn_key=(trial,))


def run_trial(ensemble, solver_cfgs, trial):
    """Run all solvers on trial ``trial``'s problem; returns ``(n_solvers, iterations + 1)``.

    Stream layout per trial: child 0 draws the problem, child 1 is the
    amplifier stream shared by all solvers, child ``2 + j`` is solver ``j``'s
    modulator stream.
    """
    children = trial_seed(ensemble.base_seed, trial).spawn(2 + len(solver_cfgs))
    problem = generate_problem(np.random.default_rng(children[0]), ensemble)
    rows = []
    for j, cfg in enumerate(solver_cfgs):
        try:
            traj = run(
                problem,
                cfg,
                amplifier_rng=np.random.default_rng(children[1]),
                circuit_rng=np.random.default_rng(children[2 + j]),
            )
        except SolverRunError as exc:
            raise SolverRunError(f"trial {trial}, {cfg.name}: {exc}", iteration=exc.iteration) from exc
        rows.append(traj.squared_errors)
    return np.array(rows)


def _run_trial_star(args):
    return run_trial(*args)


def _fingerprint(ensemble, cfg):
    blob = repr((asdict(ensemble), cfg)).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def run_experiment(ensemble, solver_cfgs, jobs=1):
    """Monte Carlo average of the per-iteration squared error for every solver.

    Parameters
    ----------
    ensemble : EnsembleConfig
    solver_cfgs : sequence of SolverConfig
        Must share ``max_iterations`` and have distinct labels.
    jobs : int
        Worker processes. Results are identical for any value.

    Returns
    -------
    list of MseCurve
    """
    solver_cfgs = list(solver_cfgs)
    if not solver_cfgs:
        raise ValueError("need at least one solver configuration")
    lengths = {c.max_iterations for c in solver_cfgs}
    if len(lengths) != 1:
        raise ValueError("all solver configurations must use the same max_iterations")
    if any(c.early_stop_tol is not None for c in solver_cfgs):
        raise ValueError("early stopping is not supported in experiments")
    labels = [c.name for c in solver_cfgs]
    if len(set(labels)) != len(labels):
        raise ValueError(f"solver labels must be unique, got {labels}")

    tasks = [(ensemble, solver_cfgs, t) for t in range(ensemble.trials)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_trial = list(pool.map(_run_trial_star, tasks))
    else:
        per_trial = [_run_trial_star(t) for t in tasks]

    # (trials, solvers, iterations + 1), stacked in trial order
    stack = np.stack(per_trial)
    curves = []
    for j, cfg in enumerate(solver_cfgs):
        tc = stack[:, j, :]
        curves.append(
            MseCurve(
                label=cfg.name,
                mse=tc.mean(axis=0),
                trials=ensemble.trials,
                fingerprint=_fingerprint(ensemble, cfg),
                trial_curves=tc,
            )
        )
    return curves


def steady_state(values, tail=200):
    """Mean over the last ``tail`` entries along the final axis."""
    values = np.asarray(values, dtype=float)
    return values[..., -tail:].mean(axis=-1)


def iterations_to_steady_state(curve, rel=0.1, tail=200):
    """First iteration whose value is within ``rel`` of the curve's steady state."""
    curve = np.asarray(curve, dtype=float)
    ss = steady_state(curve, tail)
    hits = np.flatnonzero(np.abs(curve - ss) <= rel * ss)
    return int(hits[0]) if hits.size else len(curve) - 1


def _format_rows(curves):
    n = len(curves[0].mse)
    if any(len(c.mse) != n for c in curves):
        raise ValueError("all curves must have the same length")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration"] + [c.label for c in curves])
    for i in range(n):
        writer.writerow([i] + [f"{c.mse[i]:.17e}" for c in curves])
    return buf.getvalue()


def write_curves(curves, destination):
    """Write curves as CSV: ``iteration,<label1>,<label2>,...``, one row per iteration.

    ``destination`` is a path or a writable text file object.
    """
    curves = list(curves)
    if not curves:
        raise ValueError("nothing to write")
    text = _format_rows(curves)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(os.fspath(destination), "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write curves to {destination}: {exc}") from exc


def read_curves(source):
    """Inverse of :func:`write_curves`; returns ``{label: ndarray}``."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(os.fspath(source), newline="") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    cols = list(zip(*body)) if body else [()] * len(header)
    return {label: np.array([float(v) for v in cols[k + 1]]) for k, label in enumerate(header[1:])}
