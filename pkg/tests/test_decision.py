"""Universality, inclusion and equivalence under all four engines."""

import itertools
import logging
import random

import pytest

from ponfa.core import Automaton, CapacityError, accepts, classify
from ponfa.decision import Strategy, equivalent, includes, is_universal
from ponfa.extremal import build_a, build_w


def all_words(alphabet, max_len):
    for size in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=size)


def brute_shortest_rejected(a, max_len):
    for word in all_words(a.alphabet, max_len):
        if not accepts(a, word):
            return word
    return None


def random_nfa(rng, n_states, alphabet):
    states = [f"s{i}" for i in range(n_states)]
    transitions = {}
    for q in states:
        for symbol in alphabet:
            if rng.random() < 0.9:
                targets = rng.sample(states, min(len(states),
                                                 rng.randint(1, 2)))
                transitions[(q, symbol)] = targets
    initial = rng.sample(states, min(len(states), rng.randint(1, 2)))
    accepting = rng.sample(states, rng.randint(0, n_states))
    return Automaton(alphabet, states, initial, accepting, transitions)


def random_rponfa(rng, n_states, alphabet):
    states = [f"s{i}" for i in range(n_states)]
    transitions = {}
    for i, q in enumerate(states):
        for symbol in alphabet:
            choice = rng.random()
            if choice < 0.35:
                transitions[(q, symbol)] = {q}
            elif choice < 0.9 and i + 1 < n_states:
                rest = states[i + 1:]
                transitions[(q, symbol)] = set(
                    rng.sample(rest, min(len(rest), rng.randint(1, 2))))
    initial = rng.sample(states, min(len(states), rng.randint(1, 2)))
    accepting = rng.sample(states, rng.randint(1, n_states))
    return Automaton(alphabet, states, initial, accepting, transitions)


def sigma_star(alphabet):
    return Automaton(alphabet, ("u",), ["u"], ["u"],
                     {("u", sym): ["u"] for sym in alphabet})


def test_universal_positive():
    assert is_universal(sigma_star(("a", "b"))).holds
    for strategy in (Strategy.GENERIC, Strategy.RPONFA_BOUNDED):
        verdict = is_universal(sigma_star(("a", "b")), strategy=strategy)
        assert verdict.holds and verdict.witness is None


def test_generic_witness_is_shortest_and_lex_least():
    rng = random.Random(5)
    for _ in range(60):
        a = random_nfa(rng, rng.randint(1, 4), ("a", "b"))
        verdict = is_universal(a, strategy=Strategy.GENERIC)
        expected = brute_shortest_rejected(a, 6)
        if verdict.holds:
            assert expected is None
        else:
            assert not accepts(a, verdict.witness)
            if expected is not None and len(expected) <= 6:
                assert verdict.witness == expected


def test_no_initial_state_rejects_the_empty_word():
    hopeless = Automaton(("a",), ("p",), [], ["p"], {("p", "a"): ["p"]})
    verdict = is_universal(hopeless)
    assert not verdict.holds and verdict.witness == ()


def test_extremal_automaton_witness():
    verdict = is_universal(build_a(2, 2))
    assert not verdict.holds
    assert verdict.witness == build_w(2, 2)


def test_strategies_agree_on_rponfas():
    rng = random.Random(13)
    count = 0
    while count < 60:
        a = random_rponfa(rng, rng.randint(2, 5), ("a", "b"))
        flags = classify(a)
        if not (flags.is_partially_ordered and flags.is_self_loop_deterministic):
            continue
        generic = is_universal(a, strategy=Strategy.GENERIC)
        bounded = is_universal(a, strategy=Strategy.RPONFA_BOUNDED)
        auto = is_universal(a)
        assert generic.holds == bounded.holds == auto.holds
        if not bounded.holds:
            assert not accepts(a, bounded.witness)
        count += 1


def test_unary_engine_matches_generic():
    rng = random.Random(19)
    count = 0
    while count < 40:
        a = random_rponfa(rng, rng.randint(1, 5), ("a",))
        if not classify(a).is_partially_ordered:
            continue
        unary = is_universal(a, strategy=Strategy.UNARY_PO)
        generic = is_universal(a, strategy=Strategy.GENERIC)
        assert unary.holds == generic.holds
        if not unary.holds:
            assert unary.witness == generic.witness
        count += 1


def test_strategy_accepts_plain_strings():
    a = sigma_star(("a",))
    assert is_universal(a, strategy="generic").holds
    assert is_universal(a, strategy="unary").holds
    assert is_universal(a, strategy="bounded").holds
    with pytest.raises(ValueError):
        is_universal(a, strategy="zigzag")


def test_explicit_engine_requirements():
    binary = sigma_star(("a", "b"))
    with pytest.raises(ValueError):
        is_universal(binary, strategy=Strategy.UNARY_PO)
    cyclic = Automaton(("a",), ("p", "q"), ["p"], ["q"],
                       {("p", "a"): ["q"], ("q", "a"): ["p"]})
    with pytest.raises(ValueError):
        is_universal(cyclic, strategy=Strategy.RPONFA_BOUNDED)


def test_auto_falls_back_when_the_bound_is_large(caplog):
    states = [f"s{i}" for i in range(6)]
    transitions = {}
    for i in range(5):
        transitions[(states[i], "a")] = [states[i + 1]]
        transitions[(states[i], "b")] = [states[i + 1]]
    chain = Automaton(("a", "b"), states, [states[0]], states, transitions)
    with caplog.at_level(logging.WARNING, logger="ponfa.decision"):
        verdict = is_universal(chain)
    assert not verdict.holds and verdict.witness == ("a",) * 6
    assert any("falling back to the generic engine" in record.message
               for record in caplog.records)
    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="ponfa.decision"):
        bigger = is_universal(chain, bound_budget=27)
    assert not bigger.holds
    assert not caplog.records
    # an explicit engine choice never consults the budget
    explicit = is_universal(chain, strategy=Strategy.RPONFA_BOUNDED,
                            bound_budget=1)
    assert explicit.holds == verdict.holds


def test_capacity_limits_raise():
    a = build_a(2, 2)
    with pytest.raises(CapacityError):
        is_universal(a, strategy=Strategy.GENERIC, max_nodes=2)
    with pytest.raises(CapacityError):
        is_universal(a, strategy=Strategy.RPONFA_BOUNDED,
                     max_representatives=3)


def test_includes_and_direction():
    a = build_a(2, 2)
    everything = sigma_star(("a1", "a2"))
    forward = includes(a, everything)
    assert forward.holds and forward.witness is None
    backward = includes(everything, a)
    assert not backward.holds
    assert backward.witness == build_w(2, 2)

    verdict = equivalent(a, everything)
    assert not verdict.holds
    assert verdict.direction == "second-only"
    assert verdict.witness == build_w(2, 2)
    flipped = equivalent(everything, a)
    assert flipped.direction == "first-only"
    assert equivalent(a, build_a(2, 2)).holds


def test_includes_requires_identical_alphabets():
    with pytest.raises(ValueError):
        includes(sigma_star(("a",)), sigma_star(("a", "b")))


def test_includes_engines_agree():
    rng = random.Random(29)
    count = 0
    while count < 40:
        a = random_rponfa(rng, rng.randint(2, 4), ("a", "b"))
        b = random_rponfa(rng, rng.randint(2, 4), ("a", "b"))
        flags = classify(b)
        if not (flags.is_partially_ordered and flags.is_self_loop_deterministic):
            continue
        generic = includes(a, b, strategy=Strategy.GENERIC)
        bounded = includes(a, b, strategy=Strategy.RPONFA_BOUNDED)
        assert generic.holds == bounded.holds
        if not bounded.holds:
            assert accepts(a, bounded.witness)
            assert not accepts(b, bounded.witness)
        count += 1


def test_unary_inclusion():
    finite = Automaton(("a",), ("p", "q"), ["p"], ["q"], {("p", "a"): ["q"]})
    infinite = Automaton(("a",), ("p",), ["p"], ["p"], {("p", "a"): ["p"]})
    assert includes(finite, infinite, strategy=Strategy.UNARY_PO).holds
    verdict = includes(infinite, finite, strategy=Strategy.UNARY_PO)
    assert not verdict.holds
    assert verdict.witness == ()
    with pytest.raises(ValueError):
        includes(sigma_star(("a", "b")), sigma_star(("a", "b")),
                 strategy=Strategy.UNARY_PO)
