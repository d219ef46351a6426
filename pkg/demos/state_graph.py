"""
Asynchronous state graph of a four-agent network
================================================

One agent updates at a time.  We walk the state graph, pull out its
attractors and write a DOT file that Graphviz can render.
"""

from pathlib import Path

from modnet import attractors, equilibria, load_network, orbit
from modnet.dot import state_graph_dot

here = Path(__file__).resolve().parent
net = load_network(here.parent / "fixtures" / "cycle4.bnet")
print("agents:", net.names)

# %%
# Everything reachable from 1111 when all agents may move.
print("orbit(1111):", orbit(net, net.full_mask, ["1111"]).to_strings())

# %%
# Equilibria are the states that stay reachable forever.  From 0000 the
# first agent is frozen at 0 and the other three cycle through every value.
print("equilibria from 0000:", equilibria(net, net.full_mask, ["0000"]).to_strings())

# %%
# Attractors over the whole state space: a fixed point and a cyclic set.
for att in attractors(net):
    print(f"{att.kind.value:>6}  {' '.join(att.states.to_strings())}")

# %%
# Stable states are light grey and limit sets dark grey in the DOT output.
out = here / "state_graph.dot"
out.write_text(state_graph_dot(net))
print("wrote", out.name)
