import numpy as np
import pytest

import oracles
from conftest import strings
from modnet import (
    StateSet,
    attractors,
    equilibria,
    lift_evolution,
    orbit,
    parse_network,
    quotient,
    successors,
)
from modnet.dynamics import AttractorKind, state_graph_edges
from modnet.errors import CarrierNotClosed
from modnet.harness import random_mask, random_network, random_state_set

ALL = None


def named(net, pairs):
    return {(a.name, net.format_state(s)) for a, s in pairs}


# -- successors ----------------------------------------------------------------

def test_successors_cycle4_1111(cycle4):
    got = named(cycle4, successors(cycle4, cycle4.full_mask, "1111"))
    assert got == {("a2", "1111"), ("a3", "1101"), ("a1", "1111"), ("a4", "1111")}


def test_successors_empty_agent_set(cycle4):
    assert successors(cycle4, [], "1111") == []


def test_successors_nonsep3_a3(nonsep3):
    assert named(nonsep3, successors(nonsep3, ["a3"], "110")) == {("a3", "111")}


def test_input_agent_contributes_nothing():
    net = parse_network("b = a & b")
    assert [a.name for a, _ in successors(net, ["a", "b"], 0)] == ["b"]


# -- orbit ---------------------------------------------------------------------

def test_orbit_cycle4(cycle4):
    assert strings(orbit(cycle4, cycle4.full_mask, ["1111"])) == {"1111", "1101", "1100"}


def test_orbit_empty(cycle4):
    assert len(orbit(cycle4, cycle4.full_mask, [])) == 0


def test_orbit_sep3(sep3):
    assert strings(orbit(sep3, sep3.full_mask, ["000"])) == {"000", "100", "101", "001"}


# -- equilibria ----------------------------------------------------------------

def test_equilibria_cycle4_from_0000(cycle4):
    want = {"0" + "".join(t) for t in
            [(x, y, z) for x in "01" for y in "01" for z in "01"]}
    assert strings(equilibria(cycle4, cycle4.full_mask, ["0000"])) == want


def test_equilibria_order3_modules(order3):
    assert strings(equilibria(order3, ["a1", "a2"], ALL)) == {"110", "111"}
    assert strings(equilibria(order3, ["a3"], ALL)) == {"000", "001", "100", "101", "011", "111"}


def test_equilibria_identity_dynamics():
    net = parse_network("a = a")
    assert equilibria(net, ["a"], ALL) == StateSet.full(1)


def test_equilibria_nonsep3_is_whole_space(nonsep3):
    # the asynchronous graph of this network is strongly connected
    assert len(equilibria(nonsep3, nonsep3.full_mask, ALL)) == 8


# -- attractors ----------------------------------------------------------------

def test_attractors_cycle4(cycle4):
    atts = attractors(cycle4)
    assert {(a.kind, frozenset(a.states.to_strings())) for a in atts} == {
        (AttractorKind.STABLE, frozenset({"1100"})),
        (AttractorKind.LIMIT, frozenset(f"0{x}{y}{z}" for x in "01" for y in "01" for z in "01")),
    }


def test_attractors_sep3_order(sep3):
    atts = attractors(sep3)
    assert [a.kind for a in atts] == [AttractorKind.LIMIT, AttractorKind.STABLE]
    assert strings(atts[0].states) == {"000", "100", "101", "001"}
    assert strings(atts[1].states) == {"111"}


def test_attractors_empty_start(sep3):
    assert attractors(sep3, None, []) == []


def test_attractors_of_empty_agent_set(sep3):
    atts = attractors(sep3, [], ["000", "111"])
    assert [a.states.to_strings() for a in atts] == [["000"], ["111"]]


# -- quotient and lifting --------------------------------------------------------

def _terminal_sets(q):
    return {frozenset(q.class_states(c).to_strings()) for c in q.terminal_classes()}


def test_quotient_nonsep3(nonsep3):
    q = quotient(nonsep3, ["a1", "a2"], ALL)
    assert _terminal_sets(q) == {frozenset({"010", "110"}), frozenset({"001", "101"})}


def test_quotient_empty_agents(nonsep3):
    q = quotient(nonsep3, [], ALL)
    assert q.n_classes == 8 and all(len(c) == 1 for c in q.classes())


def test_quotient_order3(order3):
    q = quotient(order3, ["a1", "a2"], ALL)
    assert _terminal_sets(q) == {frozenset({"110"}), frozenset({"111"})}


def test_quotient_rejects_open_carrier(cycle4):
    with pytest.raises(CarrierNotClosed):
        quotient(cycle4, cycle4.full_mask, ["1111"])


def test_quotient_canonical_representatives(nonsep3):
    q = quotient(nonsep3, ["a1", "a2"], ALL)
    reps = [nonsep3.format_state(int(r)) for r in q.representatives]
    assert reps == sorted(reps)
    for c in range(q.n_classes):
        assert reps[c] == q.class_states(c).to_strings()[0]


def test_lift_nonsep3_a3(nonsep3):
    q = quotient(nonsep3, ["a1", "a2"], ALL)
    edges = {tuple(e) for e in lift_evolution(q, nonsep3, ["a3"])}
    src = q.class_of("110")
    assert q.class_states(src).to_strings() == ["010", "110"]
    assert (src, q.class_of("111")) in edges


def test_lift_empty(nonsep3):
    q = quotient(nonsep3, ["a1", "a2"], ALL)
    assert len(lift_evolution(q, nonsep3, [])) == 0


def test_lift_order3(order3):
    q = quotient(order3, ["a1", "a2"], ALL)
    edges = {tuple(e) for e in lift_evolution(q, order3, ["a3"])}
    c110, c111 = q.class_of("110"), q.class_of("111")
    assert (c110, c111) in edges
    assert {t for s, t in edges if s == c111} == {c111}


def test_lift_matches_definition(sep3):
    q = quotient(sep3, ["a2"], ALL)
    edges = {tuple(e) for e in lift_evolution(q, sep3, ["a1", "a3"])}
    want = set()
    for s in range(8):
        for t in oracles.step(sep3, ["a1", "a3"], s):
            want.add((q.class_of(s), q.class_of(t)))
    assert edges == want


# -- properties on random networks --------------------------------------------------

def _cases(seed, count, nmax=6):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, nmax + 1))
        net = random_network(rng, n, inputs=int(rng.integers(0, 2)))
        yield rng, net


def test_against_brute_force_oracles():
    for rng, net in _cases(11, 60):
        X = random_mask(rng, net.n)
        S0 = random_state_set(rng, net.n)
        s0 = set(S0)
        assert set(orbit(net, X, S0)) == oracles.orbit(net, X, s0)
        assert set(equilibria(net, X, S0)) == oracles.equilibria(net, X, s0)
        assert {frozenset(a.states) for a in attractors(net, X, S0)} == oracles.attractors(net, X, s0)
        for s in range(net.n_states):
            got = {t for _, t in successors(net, X, s)}
            assert got == oracles.step(net, X, s)


def test_operator_laws():
    for rng, net in _cases(12, 80, nmax=8):
        X = random_mask(rng, net.n)
        Y = random_mask(rng, net.n)
        S1 = random_state_set(rng, net.n)
        S2 = random_state_set(rng, net.n)
        psi = equilibria(net, X, S1)
        om = orbit(net, X, S1)
        assert psi == equilibria(net, X, psi)                                   # idempotent
        assert equilibria(net, X, S1 | S2) == psi | equilibria(net, X, S2)      # upper-continuous
        assert psi <= equilibria(net, X, S1 | S2)                               # monotone
        assert S1 <= om and orbit(net, X, om) == om                             # extensive, idempotent
        assert psi <= om and orbit(net, X, psi) == psi                          # closed
        xy = X | Y
        assert equilibria(net, xy, S1) == orbit(net, xy, equilibria(net, xy, S1))


def test_attractors_partition_equilibria_and_are_sccs():
    for rng, net in _cases(13, 50):
        X = random_mask(rng, net.n)
        S0 = random_state_set(rng, net.n)
        atts = attractors(net, X, S0)
        union = StateSet.empty(net.n)
        for a in atts:
            assert union.isdisjoint(a.states)
            union = union | a.states
            assert (len(a) == 1) == a.is_stable
            members = set(a.states)
            for s in members:
                assert oracles.reach(net, X, s) == members
        assert union == equilibria(net, X, S0)


def test_quotient_covers_carrier():
    for rng, net in _cases(14, 40):
        X = random_mask(rng, net.n)
        carrier = orbit(net, X, random_state_set(rng, net.n))
        q = quotient(net, X, carrier)
        seen = StateSet.empty(net.n)
        for c in q.classes():
            assert seen.isdisjoint(c)
            seen = seen | c
            members = set(c)
            s = next(iter(members))
            assert members <= oracles.reach(net, X, s)
            assert all(s in oracles.reach(net, X, t) for t in members)
        assert seen == carrier
        assert q.flatten() == equilibria(net, X, carrier)


def test_state_graph_edges_cycle4(cycle4):
    assert len(state_graph_edges(cycle4)) == 24


def test_twenty_agent_attractors_are_closed_sccs():
    rng = np.random.default_rng(3)
    net = random_network(rng, 16)
    atts = attractors(net)
    assert atts
    for a in atts[:5]:
        states = a.states.states()
        for s in states[:50]:
            assert {t for _, t in successors(net, net.full_mask, int(s))} <= set(a.states)
