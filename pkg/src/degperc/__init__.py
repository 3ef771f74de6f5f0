"""Bond and site percolation on random graphs with a given degree sequence.

The pipeline: realize a degree sequence from a limiting distribution,
draw a uniformly random configuration-model matching, percolate edges
(bond) or vertices (site), and measure the largest component.  The
analysis module carries the closed-form thinned-degree laws and the shared
critical probability ``L'(1)/L''(1)``, and the oracle module certifies the
combinatorial uniformity facts exactly on tiny instances.
"""

from .analysis import (
    BracketNotEstablishedError,
    DegreeLawComparison,
    NoPhaseTransitionError,
    PowerLawThreshold,
    SweepResult,
    ThresholdEstimate,
    ThresholdPrediction,
    critical_probability,
    empirical_vs_analytic,
    estimate_threshold,
    lambda_bond,
    lambda_site,
    powerlaw_gamma0,
    powerlaw_threshold,
    q_prime,
    sweep,
    threshold_prediction,
)
from .components import ComponentSummary, components
from .configuration import (
    HalfEdgeGraph,
    SimplicityExhaustedError,
    SimplicityReport,
    SparseRegimeWarning,
    predicted_simplicity,
    project,
    simplicity,
    uniform_matching,
    uniform_simple_graph,
    write_edge_list,
)
from .degrees import (
    DegreeDistribution,
    DegreeSequence,
    DivergentMomentError,
    GeneratingDerivatives,
    PowerLawSpec,
    TruncationWarning,
    dist_from_config,
    from_distribution,
    generating_derivatives,
    offspring_mean,
    q_value,
)
from .percolation import (
    PercolationOutcome,
    SurvivorStats,
    bond_percolate,
    induced_degree_counts,
    outcome_record,
    site_percolate,
    survivor_statistics,
)
from .rng import derive_seed
from .zeta import zeta_tail

__version__ = "0.1.0"

__all__ = [
    "BracketNotEstablishedError",
    "ComponentSummary",
    "DegreeDistribution",
    "DegreeLawComparison",
    "DegreeSequence",
    "DivergentMomentError",
    "GeneratingDerivatives",
    "HalfEdgeGraph",
    "NoPhaseTransitionError",
    "PercolationOutcome",
    "PowerLawSpec",
    "PowerLawThreshold",
    "SimplicityExhaustedError",
    "SimplicityReport",
    "SparseRegimeWarning",
    "SurvivorStats",
    "SweepResult",
    "ThresholdEstimate",
    "ThresholdPrediction",
    "TruncationWarning",
    "bond_percolate",
    "components",
    "critical_probability",
    "derive_seed",
    "dist_from_config",
    "empirical_vs_analytic",
    "estimate_threshold",
    "from_distribution",
    "generating_derivatives",
    "induced_degree_counts",
    "lambda_bond",
    "lambda_site",
    "offspring_mean",
    "outcome_record",
    "powerlaw_gamma0",
    "powerlaw_threshold",
    "predicted_simplicity",
    "project",
    "q_prime",
    "q_value",
    "simplicity",
    "site_percolate",
    "survivor_statistics",
    "sweep",
    "threshold_prediction",
    "uniform_matching",
    "uniform_simple_graph",
    "write_edge_list",
]
