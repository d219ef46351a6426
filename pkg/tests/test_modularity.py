import numpy as np
import pytest

import oracles
from conftest import strings
from modnet import (
    OrderedPartition,
    StateSet,
    all_splits,
    all_topological_orderings,
    compose_step,
    elementary_decomposition,
    elementary_organisation,
    equilibria,
    fold,
    is_modular_organisation,
    m_relation,
    modular_equilibria,
    orbit,
    parse_network,
    parse_partition,
    quotient,
    regulation_graph,
    scc_condensation,
    separable,
    set_regulates,
    topological_ordering,
)
from modnet.errors import (
    BudgetExceeded,
    IndexOutOfRange,
    NotAPartition,
    OverlappingAgentSets,
    PartitionNotValidated,
)
from modnet.harness import random_mask, random_network, random_state_set


def P(net, spec):
    return parse_partition(net, spec)


def disjoint_pair(rng, n):
    labels = rng.integers(0, 3, size=n)
    xi = sum(1 << i for i in range(n) if labels[i] == 1)
    xj = sum(1 << i for i in range(n) if labels[i] == 2)
    return xi, xj


def nets(seed, count, lo=2, hi=6, **kw):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield rng, random_network(rng, int(rng.integers(lo, hi + 1)), **kw)


# -- M-relation ------------------------------------------------------------------

def test_m_relation_sep3(sep3):
    assert m_relation(sep3, ["a2"], ["a1", "a3"]).holds


def test_m_relation_reflexive():
    for rng, net in nets(31, 30):
        x = random_mask(rng, net.n)
        assert m_relation(net, x, x)


def test_m_relation_nonsep3_witness(nonsep3):
    r = m_relation(nonsep3, ["a1", "a2"], ["a3"])
    assert not r.holds
    w = r.witness.to_dict(nonsep3)
    assert w["agent"] == "a3"
    E = equilibria(nonsep3, ["a1", "a2"], equilibria(nonsep3, nonsep3.full_mask))
    assert w["state"] in set(E.to_strings()) and w["to"] not in set(E.to_strings())


def test_m_relation_order3_both_directions(order3):
    assert m_relation(order3, ["a1", "a2"], ["a3"]).holds
    # the joint equilibria are {111}, which is also an a3-equilibrium, so the
    # relation holds in this direction too
    assert m_relation(order3, ["a3"], ["a1", "a2"]).holds


def test_m_relation_matches_oracle():
    for rng, net in nets(32, 60):
        xi, xj = disjoint_pair(rng, net.n)
        S0 = set(range(net.n_states))
        assert m_relation(net, xi, xj).holds == oracles.m_relation(net, xi, xj, S0)


def test_m_relation_at_s_covers_every_subset():
    for rng, net in nets(33, 40, hi=5):
        xi, xj = disjoint_pair(rng, net.n)
        if not m_relation(net, xi, xj):
            continue
        for _ in range(10):
            sub = set(random_state_set(rng, net.n))
            assert oracles.m_relation(net, xi, xj, sub)


def test_relation_iff_joint_equilibria_are_fixed():
    for rng, net in nets(34, 60):
        xi, xj = disjoint_pair(rng, net.n)
        joint = xi | xj
        holds = m_relation(net, xi, xj).holds
        full = equilibria(net, joint)
        assert holds == (equilibria(net, xi, full) == full)
        if holds:
            for _ in range(5):
                S = random_state_set(rng, net.n)
                e = equilibria(net, joint, S)
                assert equilibria(net, xi, e) == e


def test_no_regulation_implies_relation():
    for rng, net in nets(35, 80, hi=7):
        xi, xj = disjoint_pair(rng, net.n)
        if not set_regulates(net, xj, xi):
            assert m_relation(net, xi, xj)


# -- organisations -------------------------------------------------------------

def test_cycle4_organisation(cycle4):
    r = is_modular_organisation(cycle4, P(cycle4, "a1|a2,a3|a4"))
    assert r.holds and [v.index for v in r.verdicts] == [1, 2, 3]


def test_single_part_is_organisation():
    for _, net in nets(36, 10):
        assert is_modular_organisation(net, OrderedPartition([net.full_mask]))


def test_nonsep3_fails_at_third_part(nonsep3):
    r = is_modular_organisation(nonsep3, P(nonsep3, "a1|a2|a3"))
    assert not r.holds
    assert [v.holds for v in r.verdicts] == [True, True, False]
    assert r.first_failure().index == 3
    d = r.to_dict(nonsep3)
    assert d["verdicts"][2]["witness"] == {"state": "101", "agent": "a3", "to": "100"}
    assert "witness" not in d["verdicts"][0]


def test_partition_validation(cycle4):
    with pytest.raises(NotAPartition):
        P(cycle4, "a1|a1,a2")
    with pytest.raises(NotAPartition):
        OrderedPartition([1, 0])


def test_fold(cycle4):
    pi = P(cycle4, "a1|a2,a3|a4")
    assert fold(pi, 2, 3).format(cycle4) == "a1|a2,a3,a4"
    assert fold(pi, 2, 2) == pi
    assert fold(pi, 1, 3).format(cycle4) == "a1,a2,a3,a4"
    for i, j in [(0, 1), (2, 1), (1, 4)]:
        with pytest.raises(IndexOutOfRange):
            fold(pi, i, j)


def test_scc_orderings_and_foldings_are_organisations():
    for _, net in nets(37, 40, hi=7, max_regulators=2):
        d = scc_condensation(regulation_graph(net))
        orders = list(all_topological_orderings(d, limit=101))
        if len(orders) > 100:
            orders = [topological_ordering(d)]
        for pi in orders:
            assert is_modular_organisation(net, pi)
        pi = orders[0]
        for i in range(1, len(pi) + 1):
            for j in range(i, len(pi) + 1):
                assert is_modular_organisation(net, fold(pi, i, j))


# -- composition ---------------------------------------------------------------

def test_compose_order3(order3):
    q = quotient(order3, ["a1", "a2"], None)
    got, refined = compose_step(order3, q, ["a3"])
    assert strings(got) == {"111"}
    assert [c.to_strings() for c in refined.classes()] == [["111"]]


def test_compose_empty_xj(order3):
    q = quotient(order3, ["a1", "a2"], None)
    got, _ = compose_step(order3, q, [])
    assert got == q.flatten() == equilibria(order3, ["a1", "a2"])


def test_compose_rejects_overlap(order3):
    q = quotient(order3, ["a1", "a2"], None)
    with pytest.raises(OverlappingAgentSets):
        compose_step(order3, q, ["a2", "a3"])


def test_compose_nonsep3_is_sound_but_incomplete(nonsep3):
    # {a1,a2} ~> {a3} fails here, so the two-stage pipeline may lose states
    pi = P(nonsep3, "a1,a2|a3")
    with pytest.raises(PartitionNotValidated):
        modular_equilibria(nonsep3, pi)
    got = modular_equilibria(nonsep3, pi, strict=False)
    full = equilibria(nonsep3, nonsep3.full_mask)
    assert len(full) == 8
    assert got <= full and got != full


def test_modular_equilibria_cycle4(cycle4):
    want = {"1100"} | {f"0{x}{y}{z}" for x in "01" for y in "01" for z in "01"}
    assert strings(modular_equilibria(cycle4, P(cycle4, "a1|a2,a3|a4"))) == want


def test_modular_equilibria_sep3(sep3):
    got = modular_equilibria(sep3, P(sep3, "a2|a1,a3"))
    assert strings(got) == {"111", "000", "100", "101", "001"}


def test_modular_equilibria_nonsep3(nonsep3):
    assert len(modular_equilibria(nonsep3, P(nonsep3, "a1|a2,a3"))) == 8


def test_single_stage_is_plain_equilibria():
    for rng, net in nets(38, 20):
        S0 = random_state_set(rng, net.n)
        pi = OrderedPartition([net.full_mask])
        assert modular_equilibria(net, pi, S0) == equilibria(net, net.full_mask, S0)


def test_partial_carrier():
    net = parse_network("a = !b; b = a; c = c & a")
    pi = P(net, "a,b")
    S0 = StateSet.from_states(3, ["001"])
    assert modular_equilibria(net, pi, S0) == equilibria(net, ["a", "b"], S0)


def test_two_stage_compose_against_literal_operator():
    for rng, net in nets(39, 60, hi=5):
        xi, xj = disjoint_pair(rng, net.n)
        if not m_relation(net, xi, xj):
            continue
        joint = xi | xj
        S = random_state_set(rng, net.n)
        reach = orbit(net, joint, S)
        got, _ = compose_step(net, quotient(net, xi, reach), xj)
        assert set(got) == oracles.quotient_compose(net, xi, xj, set(reach))
        assert got == equilibria(net, joint, S)


def test_unchecked_compose_is_sound():
    for rng, net in nets(40, 60, hi=5):
        xi, xj = disjoint_pair(rng, net.n)
        reach = orbit(net, xi | xj, random_state_set(rng, net.n))
        got, _ = compose_step(net, quotient(net, xi, reach), xj)
        assert set(got) == oracles.quotient_compose(net, xi, xj, set(reach))
        assert got <= equilibria(net, xi | xj, reach)


def test_pipeline_equals_global():
    for rng, net in nets(41, 60, hi=7):
        pi = topological_ordering(scc_condensation(regulation_graph(net)))
        for _ in range(3):
            S0 = random_state_set(rng, net.n)
            assert modular_equilibria(net, pi, S0) == equilibria(net, net.full_mask, S0)


def test_refined_quotient_classes_are_joint_classes():
    for rng, net in nets(42, 40, hi=5):
        pi = topological_ordering(scc_condensation(regulation_graph(net)))
        reach = orbit(net, pi.carrier, random_state_set(rng, net.n))
        q = quotient(net, pi.parts[0], reach)
        for part in pi.parts[1:]:
            _, q = compose_step(net, q, part)
        want = oracles.attractors(net, pi.carrier, set(reach))
        got = {frozenset(q.class_states(c)) for c in q.terminal_classes()}
        assert got == want


# -- elementary organisations ----------------------------------------------------

def test_separable_sep3(sep3):
    a, b = separable(sep3, 0, sep3.full_mask)
    assert (sep3.member_names(a), sep3.member_names(b)) == (["a2"], ["a1", "a3"])
    splits = {(tuple(sep3.member_names(a)), tuple(sep3.member_names(b)))
              for a, b in all_splits(sep3, 0, sep3.full_mask)}
    assert (("a2",), ("a1", "a3")) in splits and (("a1", "a3"), ("a2",)) in splits


def test_separable_trivial_and_nonsep3(sep3, nonsep3):
    assert separable(sep3, 0, ["a1"]) is None
    assert separable(nonsep3, ["a1"], ["a2", "a3"]) is None
    with pytest.raises(OverlappingAgentSets):
        separable(nonsep3, ["a1"], ["a1", "a2"])


def test_elementary_sep3(sep3):
    pi = elementary_organisation(sep3, OrderedPartition([sep3.full_mask]))
    assert pi.format(sep3) == "a2|a1,a3"
    assert separable(sep3, pi.prefix(1), pi[1]) is None


def test_elementary_nonsep3_unchanged(nonsep3):
    start = P(nonsep3, "a1|a2,a3")
    assert elementary_organisation(nonsep3, start) == start


def test_elementary_singletons_unchanged(cycle4):
    pi = P(cycle4, "a1|a2|a3|a4")
    if is_modular_organisation(cycle4, pi):
        assert elementary_organisation(cycle4, pi) == pi


def test_elementary_rejects_invalid_start(nonsep3):
    with pytest.raises(PartitionNotValidated):
        elementary_organisation(nonsep3, P(nonsep3, "a1|a2|a3"))


def test_elementary_output_has_no_separable_part():
    for _, net in nets(43, 30, hi=6):
        pi = elementary_organisation(net, OrderedPartition([net.full_mask]))
        assert is_modular_organisation(net, pi)
        for i, part in enumerate(pi.parts):
            assert separable(net, pi.prefix(i), part) is None


def test_budget():
    net = parse_network("; ".join(f"x{i} = x{i}" for i in range(6)))
    with pytest.raises(BudgetExceeded):
        separable(net, 0, net.full_mask, max_size=5)
    dec = elementary_decomposition(net, OrderedPartition([net.full_mask]), max_size=5)
    assert dec.skipped == [net.full_mask] and len(dec.partition) == 1
