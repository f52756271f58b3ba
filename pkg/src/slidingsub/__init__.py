"""Monotone submodular maximization over sliding windows."""

from .baselines import OracleResult, brute_force_opt, offline_greedy, random_k
from .bidirectional import Bidirectional, backward_pass
from .functions import (
    CoverageOracle,
    Element,
    LogDetOracle,
    SolutionSet,
    SubmodularOracle,
    coverage_value,
    logdet_value,
    make_oracle,
    marginal_gain,
    singleton_value,
)
from .histogram import SmoothHistogram
from .runner import RunConfig, emit_reports, run_stream
from .streams import SyntheticSpec, gen_synthetic, load_coverage_stream, load_vector_stream
from .threshold import ThresholdStream
from .window import ActiveWindow, StepReport, WindowSpec, active_window

__version__ = "0.1.0"
