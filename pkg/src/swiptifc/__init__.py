"""Rate-energy tradeoffs for the two-user MIMO interference channel with
simultaneous information decoding and RF energy harvesting.

Receivers either decode or harvest; the library evaluates all four mode
assignments, traces the achievable rate-energy boundary of the mixed modes
under several rank-one transmit strategies, and checks every closed form
against independent brute-force oracles.
"""

__version__ = "0.1.0"

from .exceptions import (
    ChannelFormatError,
    DegenerateChannelError,
    DualInfeasibleError,
    InfeasibleTargetError,
    InvalidInputError,
    InvariantViolationError,
    RankDeficiencyError,
    SingularMatrixError,
    SwiptError,
)
from .linalg import Tolerances, TOL
from .channel import (
    ChannelSet,
    channel_digest,
    channel_document,
    draw_channel_set,
    load_channels,
    save_channels,
    stacked_channel,
    swap_roles,
)
from .metrics import (
    Beamformer,
    TxCovariance,
    achievable_rate,
    canonical_beam,
    harvested_energy,
    interference_cov,
    sler,
    slnr,
)
from .beamformers import (
    STRATEGIES,
    IwfResult,
    check_strategy,
    eh_eh_optimal,
    iterative_waterfilling,
    meb,
    meb_rank2,
    mlb,
    sler_beam,
    slnr_beam,
    waterfill,
)
from .boundary import (
    DualState,
    Lemma1Result,
    P3Diagnostics,
    REBoundary,
    REPoint,
    emax,
    inner_max,
    lemma1_transform,
    re_boundary_point,
    re_sweep,
    solve_p3,
    time_sharing_curve,
)
from .scheduling import (
    MODES,
    ModePair,
    ModeTable,
    evaluate_all_modes,
    scheduled_sweep,
    select_mode,
    sler_pair,
)
from .oracle import (
    P3Problem,
    generalized_eig_max,
    grid_kkt_check,
    random_psd_search,
)
from .experiments import (
    CSV_COLUMNS,
    ExperimentConfig,
    PRESETS,
    apply_overrides,
    emit_plot_data,
    preset_variants,
    read_plot_data,
    run_experiment,
)

__all__ = [
    "__version__",
    "SwiptError",
    "InvalidInputError",
    "ChannelFormatError",
    "RankDeficiencyError",
    "SingularMatrixError",
    "DegenerateChannelError",
    "InfeasibleTargetError",
    "DualInfeasibleError",
    "InvariantViolationError",
    "Tolerances",
    "TOL",
    "ChannelSet",
    "draw_channel_set",
    "stacked_channel",
    "swap_roles",
    "channel_document",
    "channel_digest",
    "save_channels",
    "load_channels",
    "TxCovariance",
    "Beamformer",
    "canonical_beam",
    "interference_cov",
    "achievable_rate",
    "harvested_energy",
    "sler",
    "slnr",
    "STRATEGIES",
    "IwfResult",
    "check_strategy",
    "waterfill",
    "iterative_waterfilling",
    "eh_eh_optimal",
    "meb",
    "mlb",
    "meb_rank2",
    "sler_beam",
    "slnr_beam",
    "DualState",
    "P3Diagnostics",
    "REPoint",
    "REBoundary",
    "Lemma1Result",
    "emax",
    "inner_max",
    "solve_p3",
    "re_boundary_point",
    "re_sweep",
    "time_sharing_curve",
    "lemma1_transform",
    "MODES",
    "ModePair",
    "ModeTable",
    "sler_pair",
    "select_mode",
    "scheduled_sweep",
    "evaluate_all_modes",
    "P3Problem",
    "random_psd_search",
    "generalized_eig_max",
    "grid_kkt_check",
    "CSV_COLUMNS",
    "ExperimentConfig",
    "PRESETS",
    "preset_variants",
    "apply_overrides",
    "emit_plot_data",
    "read_plot_data",
    "run_experiment",
]
