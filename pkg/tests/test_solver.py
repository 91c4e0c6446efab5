import numpy as np
import pytest

from diodeprox.diode import CircuitParams
from diodeprox.errors import ConvergenceError, SolverRunError
from diodeprox.harness import EnsembleConfig, ProblemInstance, generate_problem, standard_solvers
from diodeprox.noise import NoiseConfig
from diodeprox.proxops import McpParams, mcp_penalty, soft_threshold
from diodeprox.solver import (
    PROX_KINDS,
    SolverConfig,
    default_step_size,
    gradient_step,
    objective,
    power_iteration_max_eig,
    run,
)

QUIET = NoiseConfig(enabled=False)


@pytest.fixture
def problem():
    return generate_problem(np.random.default_rng(5), EnsembleConfig())


def test_power_iteration_identity():
    assert power_iteration_max_eig(np.eye(4)) == pytest.approx(1.0, rel=1e-10)


def test_power_iteration_diagonal():
    A = np.zeros((2, 3))
    A[0, 0], A[1, 1] = 3.0, 1.0
    assert power_iteration_max_eig(A) == pytest.approx(9.0, rel=1e-10)


def test_power_iteration_matches_dense_eigensolver(problem):
    ref = np.linalg.eigvalsh(problem.A.T @ problem.A).max()
    assert power_iteration_max_eig(problem.A) == pytest.approx(ref, rel=1e-8)


def test_power_iteration_errors():
    with pytest.raises(ValueError):
        power_iteration_max_eig(np.zeros((3, 3)))
    A = np.diag([1.0, 0.999999])
    with pytest.raises(ConvergenceError):
        power_iteration_max_eig(A, tol=1e-15, max_iter=3)


def test_default_step_size(problem):
    A = np.zeros((2, 3))
    A[0, 0], A[1, 1] = 3.0, 1.0
    assert default_step_size(A) == pytest.approx(0.11)
    assert default_step_size(np.eye(3)) == pytest.approx(0.99)
    eps = default_step_size(problem.A)
    assert eps * power_iteration_max_eig(problem.A) == pytest.approx(0.99, rel=1e-15)


def test_gradient_step_fixed_and_zero_step(problem):
    x = np.linalg.lstsq(problem.A, problem.y, rcond=None)[0]
    np.testing.assert_allclose(gradient_step(x, problem.A, problem.y, 0.2), x, atol=1e-12)
    x0 = np.arange(problem.N, dtype=float)
    np.testing.assert_array_equal(gradient_step(x0, problem.A, problem.y, 0.0), x0)


def test_gradient_step_two_paths(problem):
    rng = np.random.default_rng(8)
    x = rng.normal(size=problem.N)
    A, y = problem.A, problem.y
    loop = x.copy()
    r = [sum(A[i, j] * x[j] for j in range(problem.N)) - y[i] for i in range(problem.M)]
    for j in range(problem.N):
        loop[j] -= 0.17 * sum(A[i, j] * r[i] for i in range(problem.M))
    np.testing.assert_allclose(gradient_step(x, A, y, 0.17), loop, atol=1e-12)


def test_gradient_step_shapes(problem):
    with pytest.raises(ValueError):
        gradient_step(np.zeros(3), problem.A, problem.y, 0.1)


def test_objective(problem):
    A, y = problem.A, problem.y
    assert objective(np.zeros(problem.N), A, y, 0.15) == pytest.approx(0.5 * y @ y)
    rng = np.random.default_rng(2)
    x = rng.normal(size=problem.N)
    r = A @ x - y
    assert objective(x, A, y, 1e-300) == pytest.approx(0.5 * r @ r, rel=1e-12)
    loop = 0.15 * sum(abs(v) for v in x) + 0.5 * sum(v * v for v in r)
    assert objective(x, A, y, 0.15) == pytest.approx(loop, rel=1e-12)
    p = McpParams(lam=0.15, alpha=2.0, epsilon=None)
    mcp_loop = 0.15 * sum(mcp_penalty(float(v), p) for v in x) + 0.5 * r @ r
    assert objective(x, A, y, 0.15, "mcp", alpha=2.0) == pytest.approx(mcp_loop, rel=1e-12)
    with pytest.raises(ValueError):
        objective(x, A, y, 0.15, "scad")
    with pytest.raises(ValueError):
        objective(x[:3], A, y, 0.15)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(prox_kind="fista")
    with pytest.raises(ValueError):
        SolverConfig(lam=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iterations=0)
    with pytest.raises(ValueError):
        SolverConfig(prox_kind="diode-l1")
    with pytest.raises(ValueError):
        SolverConfig(prox_kind="ista-mcp", mcp_alpha=0.1)
    with pytest.raises(ValueError):
        SolverConfig(prox_kind="ista-mcp", mcp_alpha=0.1, mcp_alpha_relative=False, epsilon=0.17)


def test_absolute_alpha_checked_against_computed_step(problem):
    cfg = SolverConfig(prox_kind="ista-mcp", mcp_alpha=0.1, mcp_alpha_relative=False, noise_config=QUIET)
    with pytest.raises(ValueError):
        run(problem, cfg)


def test_mcp_alpha_scaling():
    rel = SolverConfig(prox_kind="ista-mcp", mcp_alpha=27.0).mcp_params(0.2)
    assert rel.alpha == pytest.approx(5.4)
    absolute = SolverConfig(prox_kind="ista-mcp", mcp_alpha=27.0, mcp_alpha_relative=False).mcp_params(0.2)
    assert absolute.alpha == 27.0


@pytest.mark.parametrize("cfg", standard_solvers(max_iterations=50, noise_config=QUIET), ids=PROX_KINDS)
def test_zero_measurement_stays_zero(cfg, problem):
    zero = ProblemInstance(A=problem.A, x_true=np.zeros(problem.N), w=np.zeros(problem.M),
                           y=np.zeros(problem.M), noise_variance=0.0)
    traj = run(zero, cfg)
    np.testing.assert_array_equal(traj.squared_errors, 0.0)
    np.testing.assert_array_equal(traj.final, 0.0)


def test_trajectory_shape(problem):
    cfg = SolverConfig(max_iterations=30, keep_every=10, noise_config=QUIET)
    traj = run(problem, cfg)
    assert traj.squared_errors.shape == (31,)
    assert traj.squared_errors[0] == pytest.approx(problem.x_true @ problem.x_true / problem.N)
    assert traj.estimates.shape == (4, problem.N)
    np.testing.assert_array_equal(traj.estimates[-1], traj.final)
    assert traj.iterations == 30


def test_ista_l1_objective_nonincreasing(problem):
    eps = default_step_size(problem.A)
    x = np.zeros(problem.N)
    vals = []
    for _ in range(300):
        x = soft_threshold(gradient_step(x, problem.A, problem.y, eps), eps * 0.15)
        vals.append(objective(x, problem.A, problem.y, 0.15))
    traj = run(problem, SolverConfig(max_iterations=300, noise_config=QUIET, keep_every=1))
    np.testing.assert_allclose(traj.final, x, rtol=0, atol=1e-14)
    run_vals = [objective(e, problem.A, problem.y, 0.15) for e in traj.estimates]
    assert np.all(np.diff(run_vals) <= 1e-15)
    assert np.all(np.diff(vals) <= 1e-15)


def test_ista_l1_fixed_point_residual(problem):
    cfg = SolverConfig(max_iterations=200_000, noise_config=QUIET, early_stop_tol=1e-13)
    traj = run(problem, cfg)
    x = traj.final
    resid = x - soft_threshold(gradient_step(x, problem.A, problem.y, traj.epsilon), traj.epsilon * 0.15)
    assert np.max(np.abs(resid)) <= 1e-8


def test_diode_l1_reaches_steady_state():
    cfgs = standard_solvers(max_iterations=2000, noise_config=QUIET)
    diode_l1 = next(c for c in cfgs if c.prox_kind == "diode-l1")
    for seed in range(5):
        prob = generate_problem(np.random.default_rng(100 + seed), EnsembleConfig())
        traj = run(prob, SolverConfig(**{**diode_l1.__dict__, "keep_every": 1}))
        steps = np.max(np.abs(np.diff(traj.estimates, axis=0)), axis=1)
        assert np.all(np.isfinite(traj.squared_errors))
        assert steps.min() < 1e-6
        assert np.flatnonzero(steps < 1e-6)[0] < 2000


def test_deterministic_with_seed(problem):
    for cfg in standard_solvers(max_iterations=100, noise_config=NoiseConfig(seed=4)):
        a = run(problem, cfg)
        b = run(problem, cfg)
        np.testing.assert_array_equal(a.squared_errors, b.squared_errors)
        np.testing.assert_array_equal(a.final, b.final)


def test_noise_changes_results(problem):
    noisy, quiet = (
        standard_solvers(max_iterations=20, noise_config=nc)[2] for nc in (NoiseConfig(), QUIET)
    )
    assert not np.array_equal(run(problem, noisy).final, run(problem, quiet).final)


def test_first_gradient_step_shared(problem, monkeypatch):
    """All four kinds feed the same first gradient-step output into their nonlinearity."""
    import diodeprox.solver as solver_mod

    seen = {}
    real = solver_mod._shrinkage

    def spy(cfg, epsilon):
        f = real(cfg, epsilon)

        def wrapped(r):
            seen.setdefault(cfg.prox_kind, r.copy())
            return f(r)

        return wrapped

    monkeypatch.setattr(solver_mod, "_shrinkage", spy)
    for cfg in standard_solvers(max_iterations=3, noise_config=NoiseConfig(oem=False)):
        run(problem, cfg, amplifier_rng=np.random.default_rng(1), circuit_rng=np.random.default_rng(2))
    ref = seen["ista-l1"]
    for kind in PROX_KINDS:
        np.testing.assert_array_equal(seen[kind], ref)


def test_all_kinds_finite_under_default_setup(problem):
    for cfg in standard_solvers(max_iterations=300):
        traj = run(problem, cfg)
        assert np.all(np.isfinite(traj.squared_errors))
        assert np.all(traj.squared_errors >= 0)


def test_run_error_carries_iteration(problem, monkeypatch):
    import diodeprox.solver as solver_mod

    calls = {"n": 0}

    def boom(cfg, epsilon):
        def f(r):
            calls["n"] += 1
            if calls["n"] == 4:
                raise ArithmeticError("overflow")
            return r

        return f

    monkeypatch.setattr(solver_mod, "_shrinkage", boom)
    with pytest.raises(SolverRunError) as info:
        run(problem, SolverConfig(max_iterations=10, noise_config=QUIET))
    assert info.value.iteration == 4


def test_circuit_required_only_for_diode():
    SolverConfig(prox_kind="diode-mcp", circuit=CircuitParams.for_mcp(1.04, 1.5))
