"""Query engine and simulation harness for graphical time series models."""

from .errors import EstimationError, GraphFormatError, GrangerGraphError, ModelError, QueryError
from .graph import (
    MixedGraph,
    ancestors,
    children,
    induced_subgraph,
    marginal_ancestral_graph,
    neighbours,
    parents,
    parse_mg,
    random_graph,
    read_mg,
    to_dot,
    to_mg,
    undirected_skeleton,
)
from .markov import (
    MarkovLevel,
    MarkovStatement,
    StatementKind,
    enumerate_statements,
    ga_condindep,
    gc_contemp,
    gc_noncausal,
    psep_granger_bundle,
)
from .separation import (
    Mark,
    PathKind,
    b_pointing_blocked,
    collider_status,
    ext_bipointing_blocked,
    extend_separation,
    oracle_path_exists,
    p_connecting_exists,
    p_separated,
    pure_collider_check,
    trail_p_active_exists,
)

__version__ = "0.1.0"
