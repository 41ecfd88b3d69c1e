"""Order-triviality, the counted ladder, and the union form."""

import itertools
import random

import pytest

from ponfa.core import Automaton, accepts, classify, depth
from ponfa.decision import equivalent
from ponfa.extremal import build_a, build_w
from ponfa.triviality import (RExpression, is_k_r_trivial,
                              is_k_r_trivial_oracle, is_r_trivial,
                              r_expression_to_automaton,
                              rponfa_to_r_expressions)


def loop_plus():
    # words ending in a after stripping trailing b-blocks: b*a(b*a)*
    return Automaton(
        ("a", "b"),
        ("p", "q"),
        ["p"],
        ["q"],
        {("p", "b"): ["p"], ("p", "a"): ["q"],
         ("q", "b"): ["p"], ("q", "a"): ["q"]},
    )


def random_rponfa(rng, n_states, alphabet):
    states = [f"s{i}" for i in range(n_states)]
    transitions = {}
    for i, q in enumerate(states):
        for symbol in alphabet:
            choice = rng.random()
            if choice < 0.3:
                transitions[(q, symbol)] = {q}
            elif choice < 0.85 and i + 1 < n_states:
                rest = states[i + 1:]
                transitions[(q, symbol)] = set(
                    rng.sample(rest, min(len(rest), rng.randint(1, 2))))
    initial = rng.sample(states, min(len(states), rng.randint(1, 2)))
    accepting = rng.sample(states, rng.randint(1, n_states))
    return Automaton(alphabet, states, initial, accepting, transitions)


def test_partially_ordered_languages_qualify():
    a = build_a(2, 2)
    assert is_r_trivial(a).holds
    single = Automaton(("a",), ("p",), ["p"], ["p"], {("p", "a"): ["p"]})
    assert is_r_trivial(single).holds


def test_cycle_witness_on_failure():
    verdict = is_r_trivial(loop_plus())
    assert not verdict.holds
    assert verdict.split_class is None
    shorter, longer = verdict.cycle_words
    assert len(longer) > len(shorter)
    # both reach the same minimal state: equal acceptance under any tail
    a = loop_plus()
    for tail in itertools.product(("a", "b"), repeat=3):
        assert accepts(a, shorter + tail) == accepts(a, longer + tail)


def test_random_rponfas_are_r_trivial():
    rng = random.Random(31)
    count = 0
    while count < 60:
        a = random_rponfa(rng, rng.randint(2, 5), ("a", "b"))
        flags = classify(a)
        if not (flags.is_partially_ordered and flags.is_self_loop_deterministic):
            continue
        assert is_r_trivial(a).holds
        count += 1


def test_counted_ladder_on_the_extremal_automaton():
    a = build_a(2, 2)
    w = build_w(2, 2)
    for k in (0, 1, 2):
        verdict = is_k_r_trivial(a, k)
        assert not verdict.holds and verdict.k_used == k
        representative, accepted, rejected = verdict.split_class
        assert accepts(a, accepted)
        assert not accepts(a, rejected)
        assert rejected == w
    verdict = is_k_r_trivial(a, 3)
    assert verdict.holds and verdict.k_used == 3
    # monotone: anything past the threshold also succeeds
    assert is_k_r_trivial(a, 4).k_used == 3


def test_counted_ladder_matches_depth_bound():
    # a self-loop-deterministic ordered automaton of depth d is
    # always a union of classes at bound d + 1
    rng = random.Random(47)
    count = 0
    while count < 40:
        a = random_rponfa(rng, rng.randint(2, 5), ("a", "b"))
        flags = classify(a)
        if not (flags.is_partially_ordered and flags.is_self_loop_deterministic):
            continue
        bound = depth(a) + 1
        assert is_k_r_trivial(a, bound).holds
        count += 1


def test_both_routes_agree():
    rng = random.Random(53)
    machines = [build_a(1, 2), loop_plus()]
    while len(machines) < 14:
        machines.append(random_rponfa(rng, rng.randint(2, 4), ("a", "b")))
    for a in machines:
        for k in (0, 1, 2, 3):
            fast = is_k_r_trivial(a, k)
            slow = is_k_r_trivial_oracle(a, k)
            assert fast.holds == slow.holds, (a.transitions, k)
            if not fast.holds:
                for verdict in (fast, slow):
                    representative, good, bad = verdict.split_class
                    assert accepts(a, good) and not accepts(a, bad)


def test_k_must_be_nonnegative():
    a = build_a(1, 1)
    with pytest.raises(ValueError):
        is_k_r_trivial(a, -1)
    with pytest.raises(ValueError):
        is_k_r_trivial_oracle(a, -1)


def test_union_form_round_trip():
    rng = random.Random(61)
    machines = [build_a(1, 2), build_a(2, 2)]
    while len(machines) < 12:
        a = random_rponfa(rng, rng.randint(2, 5), ("a", "b"))
        flags = classify(a)
        if flags.is_partially_ordered and flags.is_self_loop_deterministic:
            machines.append(a)
    for a in machines:
        branches = rponfa_to_r_expressions(a)
        rebuilt = [r_expression_to_automaton(e, a.alphabet) for e in branches]
        for machine in rebuilt:
            flags = classify(machine)
            assert flags.is_deterministic and flags.is_partially_ordered
        for size in range(6):
            for word in itertools.product(a.alphabet, repeat=size):
                expect = accepts(a, word)
                got = any(accepts(machine, word) for machine in rebuilt)
                assert got == expect, (a.transitions, word)


def test_union_form_rejects_unordered_input():
    with pytest.raises(ValueError):
        rponfa_to_r_expressions(loop_plus())


def test_expression_validation():
    with pytest.raises(ValueError):
        RExpression((frozenset({"a"}),), ("a",))
    with pytest.raises(ValueError):
        RExpression((frozenset({"a"}), frozenset()), ("a",))
    good = RExpression((frozenset({"b"}), frozenset({"a", "b"})), ("a",))
    machine = r_expression_to_automaton(good)
    assert accepts(machine, ("b", "a", "b"))
    assert not accepts(machine, ("b",))


def test_branch_languages_stay_inside():
    a = build_a(2, 2)
    for e in rponfa_to_r_expressions(a):
        branch = r_expression_to_automaton(e, a.alphabet)
        verdict = equivalent(branch, a)
        if not verdict.holds:
            assert verdict.direction == "second-only"
