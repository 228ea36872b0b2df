"""Mean-field population DTMCs, fast simulation and on-the-fly bounded PCTL."""
from .exact import exact_count_dtmc
from .model import PopulationModel, Trajectory, mf_step, mf_trajectory
from .naive import naive_check, pctl_check_naive
from .pctl import OnTheFlyChecker, check, expansion_audit, pctl_check, prob_until
from .simulate import RNG_ALGORITHM, fast_simulate

__all__ = [
    "PopulationModel", "Trajectory", "mf_step", "mf_trajectory", "fast_simulate",
    "RNG_ALGORITHM", "OnTheFlyChecker", "check", "pctl_check", "prob_until",
    "expansion_audit", "naive_check", "pctl_check_naive", "exact_count_dtmc",
]
