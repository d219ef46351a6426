"""
Composing module equilibria
===========================

Split the agents into modules, compute equilibria module by module, and
compare with the global answer.  The order in which modules are chained
matters.
"""

from pathlib import Path

from modnet import equilibria, is_modular_organisation, modular_equilibria, parse_partition
from modnet import load_network

fixtures = Path(__file__).resolve().parent.parent / "fixtures"
net = load_network(fixtures / "order3.bnet")

ab = equilibria(net, ["a1", "a2"])
c = equilibria(net, ["a3"])
print("module {a1,a2}:", ab.to_strings())
print("module {a3}:   ", c.to_strings())
print("global:        ", equilibria(net, net.full_mask).to_strings())

# %%
# Feeding {a1,a2}'s equilibria into a3 lands on the global answer;
# the other way round stops too early.
print("a3 after a1,a2:", equilibria(net, ["a3"], ab).to_strings())
print("a1,a2 after a3:", equilibria(net, ["a1", "a2"], c).to_strings())

# %%
# Along a validated ordered partition the quotient-based pipeline gives
# exactly the global equilibria, here for the four-agent network.
net = load_network(fixtures / "cycle4.bnet")
pi = parse_partition(net, "a1|a2,a3|a4")
report = is_modular_organisation(net, pi)
print(pi.format(net), "valid:", report.holds)
got = modular_equilibria(net, pi)
print("modular == global:", got == equilibria(net, net.full_mask))
