"""Monte Carlo simulation of random reinforcement schedules and their feedback functions."""

from .errors import ConfigurationError, DegenerateFitError, InfeasibleError, ScheduleSimError
from .fitting import FitOptions, FitResult, compare, fit, format_ranking
from .models import Family, RFFModel, evaluate, rachlin_m_of_V, rdrl_predictions
from .responder import BurstSpec, ResponderSpec, ResponderState, response_probability, step_responder
from .schedules import ScheduleKind, ScheduleSpec, ScheduleState, StepOutcome, step_schedule
from .session import (
    SessionConfig,
    SessionRecord,
    SweepPoint,
    cell_rng,
    hdi,
    inter_arming_times,
    run_session,
    run_sweep,
)
from .solver import SolverResult, solve_cycle_params

__version__ = "0.1.0"
