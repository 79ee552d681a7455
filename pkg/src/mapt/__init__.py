"""Adaptive multi-resolution density estimation with exact posterior inference.

Fits a fully Bayesian nonparametric density model on a truncated dyadic
partition of a bounded interval.  Each node's split fraction carries a
latent shrinkage state; states evolve down the tree under an
upper-triangular Markov transition law, letting the estimated density be
spiky in some regions and smooth in others.  Because the state chain is
Markov on a tree, all posterior quantities (marginal likelihood, posterior
state law, predictive density, joint samples) are computed exactly by
dynamic programming; no Monte Carlo approximation is involved.

A classical conjugate tree prior with fixed per-level precision is
included as a baseline, along with simulation scenarios and an L1
benchmark harness.
"""

from ._kernels import BACKEND
from .benchmark import BenchResult, LossRecord, l1_loss, run_benchmark
from .engine import (
    DensityEstimate,
    ForwardTable,
    PosteriorDraw,
    PosteriorTree,
    backward,
    fit,
    forward,
    log_marginal,
    ppd,
    sample_posterior,
)
from .likelihood import (
    INFINITY,
    SplitCounts,
    StateComponent,
    log_M,
    log_M_component,
    log_gamma_fn,
    posterior_nu_weights,
)
from .partition import Domain, NodeId, ROOT, CountedTree, build_tree, locate, node_interval
from .polya_tree import PTPosterior, PTSpec, pt_fit, pt_ppd
from .priors import (
    BaseMeasure,
    HyperParams,
    TransitionSpec,
    config_from_dict,
    load_config,
    make_components,
    make_transition,
    theta0_for,
)
from .scenarios import SCENARIOS, scenario_pdf, scenario_sample
from .tuning import EBResult, empirical_bayes

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BaseMeasure",
    "BenchResult",
    "CountedTree",
    "DensityEstimate",
    "Domain",
    "EBResult",
    "ForwardTable",
    "HyperParams",
    "INFINITY",
    "LossRecord",
    "NodeId",
    "PTPosterior",
    "PTSpec",
    "PosteriorDraw",
    "PosteriorTree",
    "ROOT",
    "SCENARIOS",
    "SplitCounts",
    "StateComponent",
    "TransitionSpec",
    "backward",
    "build_tree",
    "config_from_dict",
    "empirical_bayes",
    "fit",
    "forward",
    "l1_loss",
    "load_config",
    "locate",
    "log_M",
    "log_M_component",
    "log_gamma_fn",
    "log_marginal",
    "make_components",
    "make_transition",
    "node_interval",
    "posterior_nu_weights",
    "ppd",
    "pt_fit",
    "pt_ppd",
    "run_benchmark",
    "sample_posterior",
    "scenario_pdf",
    "scenario_sample",
    "theta0_for",
]
