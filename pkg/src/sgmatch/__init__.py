"""Seeded graph matching on correlated random graph pairs.

Library surface:

* :mod:`sgmatch.graphs` -- graph containers, the correlated pair generator,
  and exact disagreement counters;
* :mod:`sgmatch.lap` -- exact linear assignment (compiled kernel with a
  pure-numpy fallback);
* :mod:`sgmatch.matchers` -- restricted-focus matching (``rgm_match``) and
  Frank-Wolfe matching (``sgm_match``; zero seeds gives the seedless
  variant);
* :mod:`sgmatch.theory` -- brute-force oracles and analytic tail bounds;
* :mod:`sgmatch.harness` -- Monte Carlo experiment grids and result files.
"""

__version__ = "0.1.0"

from .graphs import (
    CorrelatedPairSpec,
    DisagreementBreakdown,
    Graph,
    Seeding,
    accuracy,
    count_disagreements,
    count_restricted_disagreements,
    generate_correlated_pair,
    permute_vertices,
)
from .lap import solve_max_trace, solve_min_cost
from .matchers import MatchResult, SgmConfig, rgm_match, sgm_match
from .theory import (
    OracleReport,
    binomial_tail_lower_bound,
    brute_force_gm,
    brute_force_rgm,
    kl_divergence_bernoulli,
    seed_threshold_constants,
)

__all__ = [
    "CorrelatedPairSpec",
    "DisagreementBreakdown",
    "Graph",
    "MatchResult",
    "OracleReport",
    "Seeding",
    "SgmConfig",
    "__version__",
    "accuracy",
    "binomial_tail_lower_bound",
    "brute_force_gm",
    "brute_force_rgm",
    "count_disagreements",
    "count_restricted_disagreements",
    "generate_correlated_pair",
    "kl_divergence_bernoulli",
    "permute_vertices",
    "rgm_match",
    "seed_threshold_constants",
    "sgm_match",
    "solve_max_trace",
    "solve_min_cost",
]
