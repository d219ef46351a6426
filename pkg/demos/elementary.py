"""
Searching for elementary modules
================================

A strongly connected regulation graph offers no ordering to start from,
yet the dynamics may still split.  The search tries every bipartition of a
part and keeps the first one that passes both relation checks.
"""

from pathlib import Path

from modnet import OrderedPartition, all_splits, elementary_organisation, is_modular_organisation
from modnet import load_network, parse_partition, separable

fixtures = Path(__file__).resolve().parent.parent / "fixtures"

net = load_network(fixtures / "sep3.bnet")
whole = OrderedPartition([net.full_mask])
print("first split:", [net.member_names(p) for p in separable(net, 0, net.full_mask)])
print("every split:", [(net.member_names(a), net.member_names(b))
                       for a, b in all_splits(net, 0, net.full_mask)])
print("elementary:", elementary_organisation(net, whole).format(net))

# %%
# Here {a2,a3} cannot be split after {a1}.  The singleton ordering fails at
# the third part and the report says which transition escapes.
net = load_network(fixtures / "nonsep3.bnet")
print("elementary:", elementary_organisation(net, parse_partition(net, "a1|a2,a3")).format(net))
report = is_modular_organisation(net, parse_partition(net, "a1|a2|a3"))
bad = report.first_failure()
print(f"fails at part {bad.index}:", bad.witness.to_dict(net))
