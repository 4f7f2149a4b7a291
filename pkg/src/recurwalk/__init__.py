"""Exact and simulated random walks on Z^2 with finite-n recurrence checks."""
from .engine import (
    DEFAULT_EXACT_CAP,
    ExactDist,
    FloatDist,
    SeriesRow,
    ball_points,
    distribution_at,
    mass_in_ball,
    return_prob,
    return_series,
    second_moment_of_dist,
    self_convolve,
    step,
)
from .errors import *  # noqa: F401,F403
from .lattice import (
    LatticePoint,
    StepLaw,
    convolve_laws,
    difference_law,
    is_symmetric,
    load_law,
    mean,
    reflect,
    second_moment,
    validate_law,
)
from .laws import bundled_laws, difference_of_simple, lazy_walk, long_step_walk, simple_walk
from .montecarlo import (
    MeetingStats,
    SimConfig,
    first_return_histogram,
    sample_step,
    simulate_meetings,
    simulate_returns,
)
from .verify import (
    VerificationRecord,
    ReductionReport,
    constant_audit,
    verify_cs_chain,
    verify_markov_mass,
    verify_moment_identity,
    verify_reduction,
    verify_symmetry_identity,
    verify_sweep,
)

__version__ = "0.1.0"
