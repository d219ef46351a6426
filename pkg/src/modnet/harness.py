"""Seeded random networks and the property suite behind ``modnet verify``.

The suite checks, on random networks, that the equilibria operator is
idempotent, upper-continuous and monotone; that absence of regulation
implies the modularity relation; that topological orderings of the SCC
condensation are modular organisations; and that the modular pipeline
reproduces the global equilibria.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import dynamics
from .modularity import is_modular_organisation, m_relation, modular_equilibria
from .network import And, Const, Expr, InteractionNetwork, Not, Or, Var, build_network
from .parser import render_network
from .regulation import (
    all_topological_orderings,
    regulation_graph,
    scc_condensation,
    set_regulates,
    topological_ordering,
)
from .stateset import StateSet


def random_expr(rng: np.random.Generator, names: list[str], depth: int) -> Expr:
    """Random expression over ``names`` with nesting depth at most ``depth``."""
    if depth <= 1 or rng.random() < 0.3:
        if not names or rng.random() < 0.08:
            return Const(bool(rng.integers(2)))
        return Var(names[rng.integers(len(names))])
    kind = rng.integers(3)
    if kind == 0:
        return Not(random_expr(rng, names, depth - 1))
    args = tuple(random_expr(rng, names, depth - 1) for _ in range(rng.integers(2, 4)))
    return And(args) if kind == 1 else Or(args)


def random_network(rng: np.random.Generator, n: int, max_regulators: int = 3,
                   depth: int = 3, inputs: int = 0) -> InteractionNetwork:
    """``n`` defined agents ``x0..`` each reading up to ``max_regulators``
    agents, plus ``inputs`` undefined input agents ``u0..``."""
    names = [f"x{i}" for i in range(n)]
    pool = names + [f"u{i}" for i in range(inputs)]
    defs = []
    for name in names:
        k = int(rng.integers(1, max_regulators + 1))
        regs = list(rng.choice(pool, size=min(k, len(pool)), replace=False))
        defs.append((name, random_expr(rng, [str(r) for r in regs], depth)))
    return build_network(defs)


def random_mask(rng: np.random.Generator, n: int, nonempty: bool = False) -> int:
    while True:
        m = int(rng.integers(0, 1 << n)) if n else 0
        if m or not nonempty or n == 0:
            return m


def random_state_set(rng: np.random.Generator, n: int, density: Optional[float] = None) -> StateSet:
    if density is None:
        density = float(rng.choice([0.02, 0.1, 0.3]))
    bits = rng.random(1 << n) < density
    if not bits.any():
        bits[rng.integers(1 << n)] = True
    return StateSet(n, bits)


@dataclass
class SuiteResult:
    passed: dict = field(default_factory=dict)
    failed: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    def record(self, name: str, ok: bool, net: InteractionNetwork, detail: str = ""):
        bucket = self.passed if ok else self.failed
        bucket[name] = bucket.get(name, 0) + 1
        if not ok and len(self.counterexamples) < 5:
            self.counterexamples.append((name, detail, render_network(net)))

    @property
    def ok(self) -> bool:
        return not self.failed

    def summary(self) -> str:
        names = sorted(set(self.passed) | set(self.failed))
        lines = [f"{name}: {self.passed.get(name, 0)} passed, {self.failed.get(name, 0)} failed"
                 for name in names]
        return "\n".join(lines)


def run_property_suite(seed: int, samples: int, n: Optional[int] = None,
                       n_range=(3, 7), operator_samples: int = 20,
                       relation_samples: int = 20, pipeline_samples: int = 5,
                       max_orderings: int = 100,
                       equilibria: Callable = dynamics.equilibria) -> SuiteResult:
    """Run every property on ``samples`` random networks drawn from ``seed``.

    ``equilibria`` is the operator under test; passing a corrupted one is how
    the suite's own sensitivity is checked.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult()
    for _ in range(samples):
        size = n if n is not None else int(rng.integers(n_range[0], n_range[1] + 1))
        net = random_network(rng, size)
        _check_network(net, rng, res, equilibria, operator_samples, relation_samples,
                       pipeline_samples, max_orderings)
    return res


def _check_network(net, rng, res, psi, operator_samples, relation_samples,
                   pipeline_samples, max_orderings):
    n = net.n
    for _ in range(operator_samples):
        X = random_mask(rng, n)
        S1 = random_state_set(rng, n)
        S2 = random_state_set(rng, n)
        e1 = psi(net, X, S1)
        res.record("psi-idempotency", psi(net, X, e1) == e1, net, f"X={X:#x}")
        res.record("psi-upper-continuity", psi(net, X, S1 | S2) == e1 | psi(net, X, S2),
                   net, f"X={X:#x}")
        res.record("psi-monotony", e1 <= psi(net, X, S1 | S2), net, f"X={X:#x}")

    for _ in range(relation_samples):
        # random disjoint pair: each agent to Xi, Xj or neither
        labels = rng.integers(0, 3, size=n)
        xi = sum(1 << i for i in range(n) if labels[i] == 1)
        xj = sum(1 << i for i in range(n) if labels[i] == 2)
        if not set_regulates(net, xj, xi):
            res.record("no-regulation-implies-m-relation", bool(m_relation(net, xi, xj)),
                       net, f"Xi={xi:#x} Xj={xj:#x}")

    dag = scc_condensation(regulation_graph(net))
    pi = topological_ordering(dag)
    res.record("topological-ordering-is-modular", is_modular_organisation(net, pi).holds,
               net, pi.format(net))
    orderings = list(all_topological_orderings(dag, limit=max_orderings + 1))
    if len(orderings) <= max_orderings:
        for other in orderings:
            res.record("every-topological-ordering-is-modular",
                       is_modular_organisation(net, other).holds, net, other.format(net))

    for _ in range(pipeline_samples):
        S0 = random_state_set(rng, n)
        got = modular_equilibria(net, pi, S0, strict=False)
        res.record("modular-equals-global", got == psi(net, net.full_mask, S0),
                   net, pi.format(net))


def corrupted_equilibria(net, X, S0=None) -> StateSet:
    """Deliberately wrong equilibria operator: drops the largest state."""
    good = dynamics.equilibria(net, X, S0)
    states = good.states()
    if states.size == 0:
        return good
    return good - StateSet.from_states(net.n, [int(states[-1])])

