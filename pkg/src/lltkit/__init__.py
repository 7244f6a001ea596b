"""Effective local limit theorem bounds for sums of lattice random variables.

The package computes two-sided, explicit-constant envelopes for point
probabilities ``P{S_n = kappa}`` of sums of independent lattice variables by
extracting a Bernoulli component from every summand, and ships the exact
brute-force machinery (convolutions, Poisson-binomial laws, Kolmogorov
distances) that every envelope is validated against.
"""

from .bounds import (
    BoundReport,
    ConstantsRegistry,
    DEFAULT_C0,
    DEFAULT_CE,
    DEFAULT_CONSTANTS,
    PlugIns,
    bounded_plug_ins,
    calibrate_c0,
    calibrate_c0_scan,
    calibrated_registry,
    central_envelope,
    chernoff_rho,
    de_moivre_envelope,
    exact_plug_ins,
    exp_moment_gaussian,
    h_default,
    psi_envelope,
    refined_bernoulli_comparison,
    sandwich_envelope,
)
from .convolve import (
    PoissonBinomialLaw,
    SumLaw,
    convolve_all,
    iid_sum,
    kolmogorov_distance,
    llt_discrepancy,
    poisson_binomial,
    standard_normal_cdf,
)
from .errors import LatticeError, NumericsError, PreconditionError
from .extraction import BernoulliSplit, HalfLatticePmf, reconstruct, split, xi_law
from .gamkrelidze import (
    ExtractionSmoothnessBound,
    PointwiseCheck,
    SmoothnessReport,
    effective_pointwise_bound,
    interval_discrepancy,
    smoothness_stat,
    smoothness_via_extraction,
)
from .lattice import (
    Characteristics,
    LatticePmf,
    characteristics,
    delta_smoothness,
    make_pmf,
    moments,
    pmf_from_json,
    psi_moment,
    span_multiple,
    theta,
)
from .partition import (
    PartitionInstance,
    count_partitions,
    count_via_enumeration,
    count_via_model,
    solve_sigma,
)
from .scenery import (
    CovarianceFactorization,
    MonteCarloEstimate,
    SceneryModel,
    SceneryMoments,
    beta_functional,
    c_hk,
    monte_carlo_point_prob,
    scenery_envelope,
    scenery_from_json,
    second_moment_check,
    theta_n_scenery,
    y_covariance_factorization,
)

__version__ = "0.1.0"
