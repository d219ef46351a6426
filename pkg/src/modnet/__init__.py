"""Modular analysis of Boolean interaction networks under asynchronous dynamics.

Typical use::

    from modnet import parse_network, attractors, is_modular_organisation, parse_partition

    net = parse_network("a1 = a1; a2 = a1 | a3; a3 = !a2; a4 = a3")
    attractors(net)
    is_modular_organisation(net, parse_partition(net, "a1|a2,a3|a4")).holds
"""

from .dynamics import (
    Attractor,
    AttractorKind,
    QuotientGraph,
    attractors,
    equilibria,
    lift_evolution,
    orbit,
    quotient,
    successors,
)
from .errors import *  # noqa: F401,F403
from .modularity import (
    ModularityReport,
    MRelation,
    Witness,
    all_splits,
    compose_step,
    elementary_decomposition,
    elementary_organisation,
    is_modular_organisation,
    m_relation,
    modular_equilibria,
    separable,
)
from .network import (
    INPUT,
    MAX_AGENTS,
    Agent,
    And,
    Const,
    InteractionNetwork,
    Not,
    Or,
    Var,
    build_network,
    decode_state,
    encode_state,
    evaluate_local,
    format_state,
)
from .parser import load_network, parse_network, render_network
from .partition import OrderedPartition, fold, parse_partition
from .regulation import (
    CondensationDag,
    RegulationGraph,
    all_topological_orderings,
    regulates,
    regulation_graph,
    scc_condensation,
    set_regulates,
    topological_ordering,
)
from .stateset import StateSet

__version__ = "0.1.0"
