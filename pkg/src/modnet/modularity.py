"""Modularity relation, modular organisations and modular equilibria.

``Xi ~> Xj`` (the modularity relation) holds when the ``Xi``-equilibria taken
inside the joint ``Xi | Xj`` equilibria are closed under the transitions of
``Xj``.  A modular organisation is an ordered partition in which every part
is in that relation with the union of the parts before it; along such a
partition the global equilibria can be assembled stage by stage on quotient
graphs (:func:`modular_equilibria`).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .dynamics import (
    QuotientGraph,
    _moving_agents,
    as_stateset,
    canonical_quotient,
    equilibria,
    lift_evolution,
    orbit,
    quotient,
)
from .errors import BudgetExceeded, OverlappingAgentSets, PartitionNotValidated
from .network import InteractionNetwork
from .partition import OrderedPartition
from .stateset import StateSet, textual_keys

log = logging.getLogger(__name__)

#: Largest part :func:`separable` will brute-force.
MAX_SEPARABLE = 15


@dataclass(frozen=True)
class Witness:
    """A transition ``state -agent-> target`` escaping the equilibria set."""

    state: int
    agent: int
    target: int

    def to_dict(self, net: InteractionNetwork) -> dict:
        return {"state": net.format_state(self.state),
                "agent": net.agents[self.agent].name,
                "to": net.format_state(self.target)}


@dataclass(frozen=True)
class MRelation:
    holds: bool
    witness: Optional[Witness] = None

    def __bool__(self):
        return self.holds


def _first_escape(net, E: StateSet, agents: list[int]) -> Optional[Witness]:
    states = E.states()
    if states.size == 0:
        return None
    order = np.argsort(textual_keys(states, net.n), kind="stable")
    states = states[order]
    mv = net.moves[states]
    best = None
    for a in agents:
        moving = np.flatnonzero((mv >> np.uint32(a)) & np.uint32(1))
        if moving.size == 0:
            continue
        dst = states[moving] ^ (1 << a)
        out = np.flatnonzero(~E.bitmap[dst])
        if out.size:
            pos = int(moving[out[0]])
            if best is None or pos < best[0]:
                best = (pos, a, int(dst[out[0]]))
    if best is None:
        return None
    pos, a, target = best
    return Witness(int(states[pos]), a, target)


def m_relation(net: InteractionNetwork, Xi, Xj, S0=None) -> MRelation:
    """Decide ``Xi ~> Xj``.

    The check runs on ``S0`` (default: the whole state space, which decides
    the relation for every subset at once).  On failure the witness is the
    textually first escaping transition.
    """
    xi, xj = net.mask(Xi), net.mask(Xj)
    joint = equilibria(net, xi | xj, S0)
    E = equilibria(net, xi, joint)
    w = _first_escape(net, E, _moving_agents(net, xj))
    return MRelation(w is None, w)


@dataclass(frozen=True)
class PrefixVerdict:
    index: int  # 1-based part index
    holds: bool
    witness: Optional[Witness] = None


@dataclass(frozen=True)
class ModularityReport:
    partition: OrderedPartition
    verdicts: tuple[PrefixVerdict, ...]

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def __bool__(self):
        return self.holds

    def first_failure(self) -> Optional[PrefixVerdict]:
        return next((v for v in self.verdicts if not v.holds), None)

    def to_dict(self, net: InteractionNetwork) -> dict:
        verdicts = []
        for v in self.verdicts:
            d = {"prefix": v.index, "holds": v.holds}
            if v.witness is not None:
                d["witness"] = v.witness.to_dict(net)
            verdicts.append(d)
        return {"agents": net.names,
                "partition": self.partition.names(net),
                "holds": self.holds,
                "verdicts": verdicts}


def is_modular_organisation(net: InteractionNetwork, pi: OrderedPartition) -> ModularityReport:
    verdicts = []
    for i, part in enumerate(pi.parts, 1):
        r = m_relation(net, pi.prefix(i - 1), part)
        verdicts.append(PrefixVerdict(i, r.holds, r.witness))
    return ModularityReport(pi, tuple(verdicts))


# -- composition on quotient graphs -------------------------------------------


def _restrict_to_terminal(q: QuotientGraph) -> QuotientGraph:
    if q.terminal.all():
        return q
    keep = np.flatnonzero(q.terminal)
    relabel = np.full(q.n_classes, -1, dtype=np.int32)
    relabel[keep] = np.arange(keep.size, dtype=np.int32)
    comp = np.where(q.comp >= 0, relabel[np.maximum(q.comp, 0)], -1).astype(np.int32)
    comp.flags.writeable = False
    carrier = StateSet(q.net.n, comp >= 0)
    return QuotientGraph(q.net, q.agents, carrier, comp,
                         np.ones(keep.size, dtype=bool), q.representatives[keep])


def compose_step(net: InteractionNetwork, q: QuotientGraph, Xj) -> tuple[StateSet, QuotientGraph]:
    """One composition stage on the quotient ``q`` of some agent set ``Xi``.

    Candidates are the terminal classes of ``q``.  The transitions of ``Xj``
    are lifted onto them; a candidate survives when it sits in a terminal SCC
    of the lifted graph from which no transition leads to a non-candidate.
    Returns the union of the surviving classes and the quotient of that set
    for ``Xi | Xj``, whose classes are the surviving lifted SCCs.
    """
    xj = net.mask(Xj)
    if xj & q.agents:
        raise OverlappingAgentSets(
            f"{net.member_names(xj & q.agents)} already belong to the quotient's agents")
    cand = _restrict_to_terminal(q)
    k = cand.n_classes
    joint = q.agents | xj
    if k == 0:
        empty = StateSet.empty(net.n)
        return empty, canonical_quotient(net, joint, empty, cand.comp, 0, [])
    edges = lift_evolution(cand, net, xj)
    escaping = edges[:, 1] < 0
    inner = edges[~escaping]
    graph = csr_matrix((np.ones(len(inner), dtype=np.int8), (inner[:, 0], inner[:, 1])),
                       shape=(k, k))
    _, labels = connected_components(graph, directed=True, connection="strong")
    open_ = np.zeros(labels.max() + 1, dtype=bool)
    cross = labels[inner[:, 0]] != labels[inner[:, 1]]
    open_[labels[inner[cross, 0]]] = True
    open_[labels[edges[escaping, 0]]] = True
    surviving = ~open_[labels]

    states = cand.carrier.states()
    cls = cand.comp[states]
    keep = surviving[cls]
    kept_states = states[keep]
    used, merged = np.unique(labels[cls[keep]], return_inverse=True)
    comp = np.full(net.n_states, -1, dtype=np.int32)
    comp[kept_states] = merged
    carrier = StateSet(net.n, comp >= 0)
    refined = canonical_quotient(net, joint, carrier, comp, used.size,
                                 np.ones(used.size, dtype=bool))
    return carrier, refined


def modular_equilibria(net: InteractionNetwork, pi: OrderedPartition, S0=None,
                       strict: bool = True) -> StateSet:
    """Equilibria of the partition's agents reached from ``S0``, computed
    module by module.

    With ``strict`` the partition is first checked to be a modular
    organisation; otherwise the pipeline runs unchecked and its result is
    only guaranteed to be a subset of the true equilibria.
    """
    if strict:
        report = is_modular_organisation(net, pi)
        if not report.holds:
            bad = report.first_failure()
            raise PartitionNotValidated(
                f"{pi.format(net)} is not a modular organisation (fails at part {bad.index})")
    start = as_stateset(net, S0)
    if len(pi) == 0:
        return start
    reach = orbit(net, pi.carrier, start)
    q = quotient(net, pi.parts[0], reach)
    result = q.flatten()
    for part in pi.parts[1:]:
        result, q = compose_step(net, q, part)
    return result


# -- elementary organisations -------------------------------------------------


def _bipartitions(mask: int):
    """Ordered splits ``(first, second)`` of ``mask``.

    Unordered splits are visited by size of the smaller half, then by the
    sorted member indices of that half; each is tried smaller-half first.
    """
    members = [i for i in range(mask.bit_length()) if mask >> i & 1]
    size = len(members)
    for r in range(1, size // 2 + 1):
        for combo in itertools.combinations(members, r):
            small = sum(1 << i for i in combo)
            large = mask & ~small
            if r * 2 == size and members[0] not in combo:
                continue  # each equal-size split once, from the half holding the lowest index
            yield small, large
            yield large, small


def _check_budget(mask: int, max_size: int):
    if bin(mask).count("1") > max_size:
        raise BudgetExceeded(
            f"part of {bin(mask).count('1')} agents exceeds the brute-force limit of {max_size}")


def all_splits(net: InteractionNetwork, prefix, Xi, max_size: int = MAX_SEPARABLE
               ) -> list[tuple[int, int]]:
    """Every ordered split of ``Xi`` satisfying both separation conditions."""
    p, xi = net.mask(prefix), net.mask(Xi)
    _check_budget(xi, max_size)
    return [(a, b) for a, b in _bipartitions(xi)
            if m_relation(net, p, a) and m_relation(net, p | a, b)]


def separable(net: InteractionNetwork, prefix, Xi, max_size: int = MAX_SEPARABLE
              ) -> Optional[tuple[int, int]]:
    """First split ``(Xi1, Xi2)`` with ``prefix ~> Xi1`` and ``prefix|Xi1 ~> Xi2``.

    Returns ``None`` when ``Xi`` has fewer than two agents or cannot be split.
    Raises :class:`BudgetExceeded` above ``max_size`` agents.
    """
    p, xi = net.mask(prefix), net.mask(Xi)
    if p & xi:
        raise OverlappingAgentSets("prefix and part overlap")
    if bin(xi).count("1") < 2:
        return None
    _check_budget(xi, max_size)
    for a, b in _bipartitions(xi):
        if m_relation(net, p, a) and m_relation(net, p | a, b):
            return a, b
    return None


@dataclass
class Decomposition:
    partition: OrderedPartition
    skipped: list[int] = field(default_factory=list)  # parts over budget, left intact


def elementary_decomposition(net: InteractionNetwork, pi: OrderedPartition,
                             max_size: int = MAX_SEPARABLE, check: bool = True) -> Decomposition:
    """Split the leftmost separable part until no part can be split."""
    if check and not is_modular_organisation(net, pi):
        raise PartitionNotValidated(f"{pi.format(net)} is not a modular organisation")
    parts = list(pi.parts)
    skipped = []
    i = 0
    while i < len(parts):
        part = parts[i]
        if bin(part).count("1") > max_size:
            log.warning("part %s skipped: over the brute-force limit",
                        ",".join(net.member_names(part)))
            skipped.append(part)
            i += 1
            continue
        split = separable(net, OrderedPartition(parts).prefix(i), part, max_size)
        if split is None:
            i += 1
        else:
            parts[i:i + 1] = list(split)
    return Decomposition(OrderedPartition(parts), skipped)


def elementary_organisation(net: InteractionNetwork, pi: OrderedPartition,
                            max_size: int = MAX_SEPARABLE) -> OrderedPartition:
    return elementary_decomposition(net, pi, max_size).partition
