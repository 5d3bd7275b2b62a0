"""Labor supply in paid crowdsourcing: concave pay schedules, worker behaviour, wage imputation, calibration."""

from crowdlabor.agents import (
    OutputChoice,
    StopReason,
    WorkerKind,
    WorkerProfile,
    brute_force_output,
    optimal_output,
    quadratic_cost_output,
    rational_output,
    target_output,
)
from crowdlabor.calibration import (
    CalibrationResult,
    empirical_quantiles,
    fit_lognormal,
    point_elasticity,
    supply_curve,
    supply_fraction,
)
from crowdlabor.estimation import WageEstimate, dollars_per_hour, impute_wage
from crowdlabor.focal import (
    FocalTestResult,
    binom_upper_tail,
    divisible_fraction,
    focal_point_test,
    realizable_whole_cents,
)
from crowdlabor.schedule import (
    CentSplit,
    PaymentSchedule,
    make_schedule,
    scale,
    split_cents,
    stochastic_payout,
)

__version__ = "0.1.0"
