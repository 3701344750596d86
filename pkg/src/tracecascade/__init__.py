"""Traces, asynchronous automata, cascade products and their logic.

Most users start from :mod:`tracecascade.traces` (alphabets and traces),
:mod:`tracecascade.automata` (asynchronous automata) and :mod:`tracecascade.loctl`
(local past temporal logic and its compiler into cascades).
"""

from .automata import AsynchronousAutomaton, Transducer, accepts, from_local_maps, from_morphism, from_tables, run
from .cascade import (
    CascadeChain,
    GlobalCascadeSequence,
    gcs_accepts,
    gcs_from_chain,
    gcs_run,
    gossip_compose,
    local_cascade,
    restricted_cascade,
    wpp_accepts,
    wpp_decompose,
)
from .errors import TraceCascadeError
from .gossip import theta_oracle, vector_clock_gossip
from .krohn_rhodes import acyclic_decompose, communication_graph, is_acyclic, split
from .monoids import TraceMorphism, TransformationMonoid, check_simulation, is_aperiodic, morphism
from .traces import (
    Alphabet,
    DistributedAlphabet,
    Trace,
    enumerate_traces,
    from_word,
    i_view,
    linearizations,
    parse_alphabet,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "AsynchronousAutomaton", "CascadeChain", "DistributedAlphabet", "GlobalCascadeSequence",
    "Trace", "TraceCascadeError", "TraceMorphism", "Transducer", "TransformationMonoid", "accepts",
    "acyclic_decompose", "check_simulation", "communication_graph", "enumerate_traces", "from_local_maps",
    "from_morphism", "from_tables", "from_word", "gcs_accepts", "gcs_from_chain", "gcs_run", "gossip_compose",
    "i_view", "is_acyclic", "is_aperiodic", "linearizations", "local_cascade", "morphism", "parse_alphabet",
    "restricted_cascade", "run", "split", "theta_oracle", "vector_clock_gossip", "wpp_accepts", "wpp_decompose",
]
