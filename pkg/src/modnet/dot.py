"""Graphviz DOT output for state graphs, regulation graphs and condensations."""

from __future__ import annotations

from .dynamics import attractors, state_graph_edges
from .network import InteractionNetwork
from .regulation import CondensationDag, RegulationGraph
from .stateset import textual_sort

import numpy as np

STABLE_STYLE = 'style=filled, fillcolor="gray80"'
LIMIT_STYLE = 'style=filled, fillcolor="gray35", fontcolor="white"'


def _q(s: str) -> str:
    return '"' + s.replace('"', r'\"') + '"'


def state_graph_dot(net: InteractionNetwork, X=None) -> str:
    """State graph with agent-labelled edges; self-loops are left out.

    Stable states are filled light grey and limit-set states dark grey.
    """
    shade = {}
    for att in attractors(net, X):
        style = STABLE_STYLE if att.is_stable else LIMIT_STYLE
        for s in att.states:
            shade[s] = style
    lines = ["digraph state_graph {", "  node [shape=box];"]
    if net.n == 0:
        return "digraph state_graph {\n}\n"
    for s in textual_sort(np.arange(net.n_states), net.n):
        s = int(s)
        label = _q(net.format_state(s))
        lines.append(f"  {label} [{shade[s]}];" if s in shade else f"  {label};")
    for src, agent, dst in state_graph_edges(net, X):
        lines.append(f"  {_q(net.format_state(src))} -> {_q(net.format_state(dst))}"
                     f" [label={_q(agent)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def regulation_dot(g: RegulationGraph) -> str:
    lines = ["digraph regulation {"]
    for a in g.net.agents:
        lines.append(f"  {_q(a.name)};")
    for src, dst in g.named_edges():
        lines.append(f"  {_q(src)} -> {_q(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def condensation_dot(d: CondensationDag) -> str:
    lines = ["digraph condensation {", "  node [shape=box];"]
    for c, m in enumerate(d.components):
        lines.append(f"  c{c} [label={_q('{' + ', '.join(d.net.member_names(m)) + '}')}];")
    for s, t in d.edges:
        lines.append(f"  c{s} -> c{t};")
    lines.append("}")
    return "\n".join(lines) + "\n"
