"""Exact and Monte Carlo edge statistics of random k-vertex subsets of graphs."""

from .census import SubgraphCensus, census
from .distribution import (
    EdgeDistribution,
    McEstimate,
    exact_distribution,
    mc_distribution,
    probability_at,
)
from .errors import BudgetExceeded, EdgeStatError, Graph6Error, RecordsError
from .graph import (
    Graph,
    clique_union,
    complement,
    complete_bipartite,
    construct,
    gnp,
    parse_graph6,
    symm_diff_sum,
    two_cliques,
    write_graph6,
)
from .moments import (
    MomentSet,
    anti_concentration_check,
    binomial_moment_closed_form,
    brun_check,
    central_moment_closed_form,
    closed_form_moments,
    distribution_moments,
    expected_edges,
    fourth_central_closed_form,
    poisson_pmf,
    shift_inequality_check,
    variance_closed_form,
)
from .search import (
    RecordsStore,
    SearchRecord,
    brute_force_extremal,
    conditional_vertex_density,
    construction_bound,
    local_search,
    symmetrization_step,
)

__version__ = "0.1.0"
