"""Robust square-root unscented Kalman filtering for graph signals."""

from .bench import ExperimentConfig, RunResult, armse, emit_csv, rmse_series, run_experiment
from .filters import (
    FILTER_PRESETS,
    FilterConfig,
    FilterState,
    UtParams,
    preset_config,
    run_filter,
    step,
)
from .graph import (
    ErdosRenyi,
    GftBasis,
    GraphSignal,
    GraphTopology,
    RandomGeometric,
    Ring,
    SignalDomain,
    build_laplacian,
    eigendecompose,
    generate_topology,
    gft,
    gft_matrix,
    identity_basis,
    igft,
    load_topology,
    save_topology,
)
from .losses import (
    CauchyLoss,
    GeneralRobustLoss,
    HuberLoss,
    LossSpec,
    UnitLoss,
    WeightMatrix,
    build_weight_matrix,
    loss_value,
    weight,
)
from .models import (
    StateSpaceModel,
    Trajectory,
    benchmark_f,
    benchmark_f_jacobian,
    benchmark_h,
    benchmark_initial_state,
    benchmark_model,
    simulate_trajectory,
)
from .noise import (
    SCENARIOS,
    AlphaStable,
    Gaussian,
    Mixture,
    Rayleigh,
    sample_noise,
    stable_char_fn,
)
from .sqrt_kernels import SqrtFactor, qr_sqrt, rank1_update, reconstruct
from .stability import ErrorDynamics, error_dynamics, solve_lyapunov, spectral_radius

__version__ = "0.1.0"
