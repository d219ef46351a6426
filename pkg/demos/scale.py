"""
Attractors of a 20-agent network
================================

About a million states.  Successors are generated from a per-state move
mask and strongly connected components are found without building the
edge list.
"""

import resource
import time

import numpy as np

from modnet import attractors
from modnet.harness import random_network

net = random_network(np.random.default_rng(20), 20)
t0 = time.perf_counter()
atts = attractors(net)
elapsed = time.perf_counter() - t0
rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024

print(f"{net.n_states} states, {len(atts)} attractors in {elapsed:.2f}s, peak {rss:.0f} MiB")
for att in atts[:5]:
    print(f"  {att.kind.value:>6}  size {len(att)}  first {att.states.to_strings()[0]}")
