"""
Which interactions are real regulations?
========================================

An agent can appear in another agent's formula without ever changing its
next value.  Regulation is therefore decided by flipping one bit at a time
and watching the target's update.
"""

from modnet import parse_network, regulates, regulation_graph, scc_condensation, topological_ordering

net = parse_network("""
a1 = a1 & a2
a2 = a1 | 1
""")

# a2's update is constant, so a1 has no influence on it
print("a1 regulates a2:", regulates(net, "a1", "a2"))
print("edges:", regulation_graph(net).named_edges())

# %%
# Strongly connected components of the regulation graph, listed in a
# topological order, give a first modular organisation for free.
four = parse_network("a1 = a1; a2 = a1 | a3; a3 = !a2; a4 = a3")
dag = scc_condensation(regulation_graph(four))
print("components:", [four.member_names(c) for c in dag.components])
print("ordering:", topological_ordering(dag).format(four))
