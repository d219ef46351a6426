"""Asynchronous dynamics: orbits, equilibria, attractors and SCC quotients.

Agent sets are accepted as iterables of names/indices or as bitmasks; state
sets as :class:`StateSet`, iterables of packed states or state strings, or
``None`` for the whole state space.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._scc import packed_sccs
from .errors import CarrierNotClosed
from .network import Agent, InteractionNetwork
from .stateset import StateSet, textual_keys


def _moving_agents(net: InteractionNetwork, mask: int) -> list[int]:
    mask &= ~net.input_mask
    return [i for i in range(net.n) if mask >> i & 1]


def as_stateset(net: InteractionNetwork, states) -> StateSet:
    if states is None:
        return StateSet.full(net.n)
    if isinstance(states, StateSet):
        if states.n != net.n:
            raise ValueError("state set belongs to a network of different size")
        return states
    if isinstance(states, (str, int, np.integer)):
        states = [states]
    return StateSet.from_states(net.n, states)


def successors(net: InteractionNetwork, X, s: int | str) -> list[tuple[Agent, int]]:
    """One-step successors of ``s`` under agents ``X``, self-loops included.

    Input agents contribute nothing.
    """
    if isinstance(s, str):
        s = net.parse_state(s)
    mask = net.mask(X)
    mv = int(net.moves[s])
    return [(net.agents[a], s ^ (1 << a) if mv >> a & 1 else s)
            for a in _moving_agents(net, mask)]


def orbit(net: InteractionNetwork, X, S0=None) -> StateSet:
    """Forward closure of ``S0`` under the transitions of agents ``X``."""
    start = as_stateset(net, S0)
    agents = _moving_agents(net, net.mask(X))
    if len(start) == net.n_states or not agents or not start:
        return start
    visited = start.bitmap.copy()
    frontier = start.states()
    moves = net.moves
    while frontier.size:
        mv = moves[frontier]
        found = []
        for a in agents:
            nxt = frontier[(mv >> np.uint32(a)) & np.uint32(1) == 1] ^ (1 << a)
            nxt = nxt[~visited[nxt]]
            visited[nxt] = True
            found.append(nxt)
        frontier = np.concatenate(found)
    return StateSet(net.n, visited)


def _terminal_bitmap(net, agents, carrier_bits):
    comp, _, terminal = packed_sccs(net.moves, agents, carrier_bits)
    out = np.zeros(net.n_states, dtype=bool)
    inside = comp >= 0
    out[inside] = terminal[comp[inside]]
    return out


def equilibria(net: InteractionNetwork, X, S0=None) -> StateSet:
    """States of terminal SCCs of the ``X``-restricted graph reachable from ``S0``."""
    orb = orbit(net, X, S0)
    agents = _moving_agents(net, net.mask(X))
    if not agents or not orb:
        return orb
    return StateSet(net.n, _terminal_bitmap(net, agents, orb.bitmap))


class AttractorKind(enum.Enum):
    STABLE = "stable"
    LIMIT = "limit"


@dataclass(frozen=True)
class Attractor:
    states: StateSet
    kind: AttractorKind

    @property
    def is_stable(self) -> bool:
        return self.kind is AttractorKind.STABLE

    def __len__(self):
        return len(self.states)


def _group_by_component(comp, chosen, n):
    """Group states with ``chosen[comp[s]]`` into lists ordered textually."""
    states = np.flatnonzero((comp >= 0) & chosen[np.maximum(comp, 0)])
    if states.size == 0:
        return []
    keys = textual_keys(states, n)
    order = np.argsort(keys, kind="stable")
    states, keys = states[order], keys[order]
    cs = comp[states]
    # components in order of their textually smallest member
    uniq, first = np.unique(cs, return_index=True)
    by_rep = uniq[np.argsort(first, kind="stable")]
    groups = []
    order2 = np.argsort(cs, kind="stable")
    sorted_cs = cs[order2]
    bounds = np.searchsorted(sorted_cs, by_rep, side="left")
    ends = np.searchsorted(sorted_cs, by_rep, side="right")
    for lo, hi in zip(bounds, ends):
        groups.append(states[order2[lo:hi]])
    return groups


def attractors(net: InteractionNetwork, X=None, S0=None) -> list[Attractor]:
    """Terminal SCCs of the ``X``-restricted graph reachable from ``S0``.

    ``X=None`` means all agents.  Attractors are listed by their textually
    smallest state.
    """
    mask = net.full_mask if X is None else net.mask(X)
    orb = orbit(net, mask, S0)
    agents = _moving_agents(net, mask)
    if not orb:
        return []
    if agents:
        comp, _, terminal = packed_sccs(net.moves, agents, orb.bitmap)
    else:
        comp = np.full(net.n_states, -1, dtype=np.int32)
        states = orb.states()
        comp[states] = np.arange(states.size, dtype=np.int32)
        terminal = np.ones(states.size, dtype=bool)
    out = []
    for members in _group_by_component(comp, terminal, net.n):
        bits = np.zeros(net.n_states, dtype=bool)
        bits[members] = True
        kind = AttractorKind.STABLE if members.size == 1 else AttractorKind.LIMIT
        out.append(Attractor(StateSet(net.n, bits), kind))
    return out


@dataclass
class QuotientGraph:
    """Mutual-reachability classes of the ``agents``-restricted graph on a carrier.

    ``comp[s]`` is the class id of state ``s`` (``-1`` outside the carrier).
    Class ids are ordered by the textually smallest member, which is also the
    class's canonical representative.  ``lifted`` caches the class edges
    computed by :func:`lift_evolution`, keyed by agent mask.
    """

    net: InteractionNetwork
    agents: int
    carrier: StateSet
    comp: np.ndarray
    terminal: np.ndarray
    representatives: np.ndarray
    lifted: dict = field(default_factory=dict, repr=False)

    @property
    def n_classes(self) -> int:
        return len(self.representatives)

    def class_of(self, s: int | str) -> int:
        if isinstance(s, str):
            s = self.net.parse_state(s)
        return int(self.comp[s])

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.comp == c)

    def class_states(self, c: int) -> StateSet:
        return StateSet(self.net.n, self.comp == c)

    def classes(self) -> list[StateSet]:
        return [self.class_states(c) for c in range(self.n_classes)]

    def terminal_classes(self) -> list[int]:
        return [int(c) for c in np.flatnonzero(self.terminal)]

    def flatten(self, class_ids=None) -> StateSet:
        """Union of the member states of the given classes (default: terminal ones)."""
        chosen = self.terminal if class_ids is None else np.isin(
            np.arange(self.n_classes), np.asarray(list(class_ids), dtype=np.int64))
        bits = (self.comp >= 0) & chosen[np.maximum(self.comp, 0)]
        return StateSet(self.net.n, bits)


def canonical_quotient(net, agents_mask, carrier, comp, ncomp, terminal) -> QuotientGraph:
    """Renumber raw component ids so class order follows the smallest member."""
    states = carrier.states()
    if states.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return QuotientGraph(net, agents_mask, carrier, comp, np.zeros(0, dtype=bool), empty)
    keys = textual_keys(states, net.n)
    raw = comp[states]
    best = np.full(ncomp, np.iinfo(np.int64).max, dtype=np.int64)
    np.minimum.at(best, raw, keys)
    rep_state = np.zeros(ncomp, dtype=np.int64)
    is_rep = keys == best[raw]
    rep_state[raw[is_rep]] = states[is_rep]
    order = np.argsort(best, kind="stable")
    relabel = np.empty(ncomp, dtype=np.int32)
    relabel[order] = np.arange(ncomp, dtype=np.int32)
    new = np.full(net.n_states, -1, dtype=np.int32)
    new[states] = relabel[raw]
    new.flags.writeable = False
    return QuotientGraph(net, agents_mask, carrier, new,
                         np.asarray(terminal, dtype=bool)[order], rep_state[order])


def check_closed(net: InteractionNetwork, X, carrier) -> None:
    """Raise :class:`CarrierNotClosed` if some ``X`` step leaves ``carrier``."""
    carrier = as_stateset(net, carrier)
    states = carrier.states()
    mv = net.moves[states]
    for a in _moving_agents(net, net.mask(X)):
        src = states[(mv >> np.uint32(a)) & np.uint32(1) == 1]
        dst = src ^ (1 << a)
        out = ~carrier.bitmap[dst]
        if out.any():
            i = int(np.argmax(out))
            raise CarrierNotClosed(
                f"{net.format_state(int(src[i]))} -{net.agents[a].name}-> "
                f"{net.format_state(int(dst[i]))} leaves the carrier")


def quotient(net: InteractionNetwork, Xi, carrier=None) -> QuotientGraph:
    """SCC quotient of the ``Xi``-restricted graph on a closed carrier."""
    carrier = as_stateset(net, carrier)
    mask = net.mask(Xi)
    check_closed(net, mask, carrier)
    agents = _moving_agents(net, mask)
    if agents:
        comp, ncomp, terminal = packed_sccs(net.moves, agents, carrier.bitmap)
    else:
        states = carrier.states()
        comp = np.full(net.n_states, -1, dtype=np.int32)
        comp[states] = np.arange(states.size, dtype=np.int32)
        ncomp = states.size
        terminal = np.ones(ncomp, dtype=bool)
    return canonical_quotient(net, mask, carrier, comp, ncomp, terminal)


def lift_evolution(q: QuotientGraph, net: InteractionNetwork, Xj) -> np.ndarray:
    """Class edges induced by the transitions of agents ``Xj``.

    Returns a sorted ``(k, 2)`` array of distinct ``(source, target)`` class
    pairs, self-loops included.  A target of ``-1`` marks a transition out of
    the carrier.
    """
    mask = net.mask(Xj)
    if mask in q.lifted:
        return q.lifted[mask]
    states = q.carrier.states()
    cs = q.comp[states].astype(np.int64)
    mv = net.moves[states]
    pairs = []
    for a in _moving_agents(net, mask):
        moving = (mv >> np.uint32(a)) & np.uint32(1) == 1
        dst = states[moving] ^ (1 << a)
        pairs.append(np.stack([cs[moving], q.comp[dst].astype(np.int64)], axis=1))
        # non-moving updates are self-loops s -> s
        stay = cs[~moving]
        pairs.append(np.stack([stay, stay], axis=1))
    if pairs:
        edges = np.unique(np.concatenate(pairs), axis=0)
    else:
        edges = np.zeros((0, 2), dtype=np.int64)
    edges.flags.writeable = False
    q.lifted[mask] = edges
    return edges


def state_graph_edges(net: InteractionNetwork, X=None) -> list[tuple[int, str, int]]:
    """Non-loop transitions ``(source, agent name, target)`` in textual order."""
    mask = net.full_mask if X is None else net.mask(X)
    states = np.arange(net.n_states, dtype=np.int64)
    out = []
    for s in states[np.argsort(textual_keys(states, net.n), kind="stable")]:
        mv = int(net.moves[s])
        for a in _moving_agents(net, mask):
            if mv >> a & 1:
                out.append((int(s), net.agents[a].name, int(s) ^ (1 << a)))
    return out
