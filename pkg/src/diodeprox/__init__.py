"""Diode-circuit approximations of proximal operators for analog compressed sensing."""

from .diode import (
    CircuitParams,
    DiodeParams,
    calibrate_l1,
    calibrate_mcp,
    diode_current,
    v_out,
    v_out_vec,
)
from .errors import CalibrationError, ConvergenceError, SolverRunError
from .harness import (
    EnsembleConfig,
    MseCurve,
    ProblemInstance,
    generate_problem,
    mse,
    read_curves,
    run_experiment,
    standard_solvers,
    write_curves,
)
from .lambert import lambert_w0, lambert_w0_of_exp
from .noise import NoiseConfig, NoiseParams
from .proxops import McpParams, mcp_penalty, mcp_prox, prox_oracle, soft_threshold
from .solver import SolverConfig, Trajectory, default_step_size, run

__version__ = "0.1.0"
