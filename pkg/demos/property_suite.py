"""
Random networks as a test oracle
================================

The property suite draws seeded random networks and checks operator laws
and the modular composition results on each.  A deliberately broken equilibria
operator shows the suite can catch a bug.
"""

import time

from modnet.harness import corrupted_equilibria, run_property_suite

t0 = time.perf_counter()
res = run_property_suite(seed=42, samples=50)
print(res.summary())
print(f"ok={res.ok} in {time.perf_counter() - t0:.1f}s")

# %%
bad = run_property_suite(seed=42, samples=5, equilibria=corrupted_equilibria)
name, detail, text = bad.counterexamples[0]
print("mutant caught by", name, detail)
print(text)
