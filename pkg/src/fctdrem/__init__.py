"""Finite-convergence-time DREM parameter estimators and scenario simulations."""

from .baselines import (
    Alg1Estimator,
    Alg1Gains,
    Alg3Estimator,
    Alg3Gains,
    alg1_step,
    alg3_step,
    signed_power,
)
from .ct_estimators import (
    CtEstimator,
    CtGains,
    CtOutputs,
    clip,
    fct_reconstruct,
    ie_threshold,
)
from .drem import ExtendedRegressor, MixedScalarLres, adjugate_and_det, extend, mix
from .dt_estimators import DtEstimator, DtGains
from .lre import (
    MeasurementSignal,
    ScalarLreSample,
    VectorLreSample,
    make_scalar_sample,
    make_vector_sample,
)
from .metrics import ConvergenceReport, build_report, convergence_time, interval_rms
from .scenario import (
    Scenario,
    ScenarioError,
    parse_scenario,
    run_scenario,
    summarize,
)
from .signals import (
    Constant,
    InverseSqrt,
    ParameterProfile,
    Segment,
    Signal,
    Sine,
    SumSignal,
    Zero,
    eval_profile,
    eval_signal,
)
from .trajectory import TrajectoryTable

__version__ = "0.1.0"
