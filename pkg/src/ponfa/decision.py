"""Universality, inclusion and equivalence with pluggable strategies.

Three engines are available:

* ``GENERIC``         on-the-fly subset construction with breadth-first
                      search; witnesses are shortest, ties broken by
                      alphabet order.
* ``UNARY_PO``        for single-letter partially ordered automata the
                      only information in a word is its length, and a
                      short prefix of lengths decides everything.
* ``RPONFA_BOUNDED``  for self-loop-deterministic partially ordered
                      automata the language is a union of
                      prefix-k-equivalence classes for k equal to the
                      completed automaton's depth, so it suffices to
                      inspect the finitely many shortest class
                      representatives.

``AUTO`` picks the most specific engine that applies, falling back to
``GENERIC`` (with a logged warning) when the representative bound of
the specialised engine exceeds the configured budget.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import Optional

from .core import (Automaton, CapacityError, Decision, Word, classify,
                   complete_automaton, depth)
from .ops import DEFAULT_SUBSET_LIMIT, is_empty, product_intersection
from .subseq import (class_dfa, enumerate_minimal_representatives,
                     max_representative_length)
from .core import accepts

logger = logging.getLogger(__name__)

DEFAULT_BOUND_BUDGET = 16
DEFAULT_REPRESENTATIVE_LIMIT = 10**6


class Strategy(Enum):
    AUTO = "auto"
    GENERIC = "generic"
    UNARY_PO = "unary"
    RPONFA_BOUNDED = "bounded"


def _as_strategy(value: "Strategy | str") -> Strategy:
    if isinstance(value, Strategy):
        return value
    return Strategy(value)


def _absorbing_accepting(a: Automaton) -> frozenset[str]:
    """Accepting states that persist under every symbol.  A subset
    containing one can never lead to a rejected word, which prunes the
    universality search without affecting shortest witnesses."""
    return frozenset(q for q in a.accepting
                     if all(q in a.step(q, sym) for sym in a.alphabet))


def _bounded_bound(a: Automaton) -> int:
    """Representative length bound for the class-based engine."""
    completed = complete_automaton(a)
    k = depth(completed)
    if math.comb(k + len(a.alphabet), k) - 1 > 2**63 - 1:
        raise CapacityError("representative bound exceeds the machine word")
    return k


def _is_rponfa(a: Automaton) -> bool:
    flags = classify(a)
    return flags.is_partially_ordered and flags.is_self_loop_deterministic


def _is_unary_po(a: Automaton) -> bool:
    return len(a.alphabet) == 1 and classify(a).is_partially_ordered


def is_universal(a: Automaton, strategy: "Strategy | str" = Strategy.AUTO,
                 max_nodes: int = DEFAULT_SUBSET_LIMIT,
                 bound_budget: int = DEFAULT_BOUND_BUDGET,
                 max_representatives: int = DEFAULT_REPRESENTATIVE_LIMIT
                 ) -> Decision:
    """Does the automaton accept every word over its alphabet?

    The witness of a negative answer is a shortest rejected word under
    the generic and unary engines; under the bounded engine it is the
    first rejected class representative, which is also shortest
    because representatives are the shortest members of their classes.
    """
    strategy = _as_strategy(strategy)
    if strategy is Strategy.AUTO:
        if _is_unary_po(a):
            strategy = Strategy.UNARY_PO
        elif _is_rponfa(a):
            k = _bounded_bound(a)
            if max_representative_length(k, len(a.alphabet)) <= bound_budget:
                strategy = Strategy.RPONFA_BOUNDED
            else:
                logger.warning(
                    "representative bound %d exceeds budget %d; "
                    "falling back to the generic engine",
                    max_representative_length(k, len(a.alphabet)), bound_budget)
                strategy = Strategy.GENERIC
        else:
            strategy = Strategy.GENERIC
    if strategy is Strategy.UNARY_PO:
        return _universal_unary(a)
    if strategy is Strategy.RPONFA_BOUNDED:
        return _universal_bounded(a, max_representatives)
    return _universal_generic(a, max_nodes)


def _universal_generic(a: Automaton, max_nodes: int) -> Decision:
    absorbing = _absorbing_accepting(a)
    start = a.initial
    parents: dict[frozenset[str], Optional[tuple[frozenset[str], str]]] = {
        start: None}

    def word_of(subset: frozenset[str]) -> Word:
        parts: list[str] = []
        node = subset
        while parents[node] is not None:
            node, sym = parents[node]
            parts.append(sym)
        return tuple(reversed(parts))

    if not (start & a.accepting):
        return Decision(False, ())
    frontier = [start]
    while frontier:
        nxt: list[frozenset[str]] = []
        for subset in frontier:
            if subset & absorbing:
                continue
            for sym in a.alphabet:
                target = a.move(subset, sym)
                if target in parents:
                    continue
                if len(parents) >= max_nodes:
                    raise CapacityError(
                        f"universality search exceeded {max_nodes} subsets")
                parents[target] = (subset, sym)
                if not (target & a.accepting):
                    return Decision(False, word_of(target))
                nxt.append(target)
        frontier = nxt
    return Decision(True)


def _universal_unary(a: Automaton) -> Decision:
    if not _is_unary_po(a):
        raise ValueError("the unary engine requires a unary partially "
                         "ordered automaton")
    symbol = a.alphabet[0]
    for length in range(len(a.states) + 1):
        if not accepts(a, (symbol,) * length):
            return Decision(False, (symbol,) * length)
    # a word as long as the state count pumps through a self-loop, so
    # all longer words are accepted as well
    return Decision(True)


def _universal_bounded(a: Automaton, max_representatives: int) -> Decision:
    if not _is_rponfa(a):
        raise ValueError("the bounded engine requires a partially ordered "
                         "automaton with deterministic self-loops")
    k = _bounded_bound(a)
    bound = max_representative_length(k, len(a.alphabet))
    count = 0
    for representative in enumerate_minimal_representatives(a.alphabet, k, bound):
        count += 1
        if count > max_representatives:
            raise CapacityError(
                f"more than {max_representatives} class representatives")
        if not accepts(a, representative):
            # the language is a union of classes, so a rejected
            # representative certifies a rejected class
            return Decision(False, representative)
    return Decision(True)


def includes(a: Automaton, b: Automaton,
             strategy: "Strategy | str" = Strategy.AUTO,
             max_nodes: int = DEFAULT_SUBSET_LIMIT,
             bound_budget: int = DEFAULT_BOUND_BUDGET,
             max_representatives: int = DEFAULT_REPRESENTATIVE_LIMIT
             ) -> Decision:
    """Language inclusion: is every word of ``a`` accepted by ``b``?

    A negative witness is accepted by ``a`` and rejected by ``b``.
    The bounded engine requires the right-hand automaton to be
    partially ordered with deterministic self-loops; the unary engine
    requires both sides unary and partially ordered.
    """
    if tuple(a.alphabet) != tuple(b.alphabet):
        raise ValueError("inclusion requires identical alphabets")
    strategy = _as_strategy(strategy)
    if strategy is Strategy.AUTO:
        if _is_unary_po(a) and _is_unary_po(b):
            strategy = Strategy.UNARY_PO
        elif _is_rponfa(b):
            k = _bounded_bound(b)
            if max_representative_length(k, len(b.alphabet)) <= bound_budget:
                strategy = Strategy.RPONFA_BOUNDED
            else:
                logger.warning(
                    "representative bound %d exceeds budget %d; "
                    "falling back to the generic engine",
                    max_representative_length(k, len(b.alphabet)), bound_budget)
                strategy = Strategy.GENERIC
        else:
            strategy = Strategy.GENERIC
    if strategy is Strategy.UNARY_PO:
        return _includes_unary(a, b)
    if strategy is Strategy.RPONFA_BOUNDED:
        return _includes_bounded(a, b, max_representatives)
    return _includes_generic(a, b, max_nodes)


def _includes_generic(a: Automaton, b: Automaton, max_nodes: int) -> Decision:
    absorbing_b = _absorbing_accepting(b)
    Node = tuple[frozenset[str], frozenset[str]]
    start: Node = (a.initial, b.initial)
    parents: dict[Node, Optional[tuple[Node, str]]] = {start: None}

    def word_of(node: Node) -> Word:
        parts: list[str] = []
        while parents[node] is not None:
            node, sym = parents[node]
            parts.append(sym)
        return tuple(reversed(parts))

    def is_counterexample(node: Node) -> bool:
        sa, sb = node
        return bool(sa & a.accepting) and not (sb & b.accepting)

    if is_counterexample(start):
        return Decision(False, ())
    frontier = [start]
    while frontier:
        nxt: list[Node] = []
        for node in frontier:
            sa, sb = node
            if not sa or (sb & absorbing_b):
                continue
            for sym in a.alphabet:
                target = (a.move(sa, sym), b.move(sb, sym))
                if target in parents:
                    continue
                if len(parents) >= max_nodes:
                    raise CapacityError(
                        f"inclusion search exceeded {max_nodes} subset pairs")
                parents[target] = (node, sym)
                if is_counterexample(target):
                    return Decision(False, word_of(target))
                nxt.append(target)
        frontier = nxt
    return Decision(True)


def _unary_loop_threshold(a: Automaton) -> Optional[int]:
    """Smallest length of an accepting path through a self-looping
    state, or None when the language is finite.  Every length at or
    beyond the threshold is accepted."""
    symbol = a.alphabet[0]
    looping = [q for q in a.states if q in a.step(q, symbol)]
    if not looping:
        return None
    dist_from_initial: dict[str, int] = {q: 0 for q in a.initial}
    frontier = list(dist_from_initial)
    while frontier:
        nxt = []
        for q in frontier:
            for t in a.step(q, symbol):
                if t not in dist_from_initial:
                    dist_from_initial[t] = dist_from_initial[q] + 1
                    nxt.append(t)
        frontier = nxt
    dist_to_accepting: dict[str, int] = {q: 0 for q in a.accepting}
    predecessors: dict[str, set[str]] = {q: set() for q in a.states}
    for q in a.states:
        for t in a.step(q, symbol):
            predecessors[t].add(q)
    frontier = list(dist_to_accepting)
    while frontier:
        nxt = []
        for q in frontier:
            for p in predecessors[q]:
                if p not in dist_to_accepting:
                    dist_to_accepting[p] = dist_to_accepting[q] + 1
                    nxt.append(p)
        frontier = nxt
    best = None
    for q in looping:
        if q in dist_from_initial and q in dist_to_accepting:
            total = dist_from_initial[q] + dist_to_accepting[q]
            if best is None or total < best:
                best = total
    return best


def _includes_unary(a: Automaton, b: Automaton) -> Decision:
    if not (_is_unary_po(a) and _is_unary_po(b)):
        raise ValueError("the unary engine requires unary partially ordered "
                         "automata on both sides")
    symbol = a.alphabet[0]
    threshold_a = _unary_loop_threshold(a)
    threshold_b = _unary_loop_threshold(b)
    if threshold_a is None:
        # finite left language: every accepted word fits under the depth
        limit = depth(a)
    elif threshold_b is None:
        # infinite left language against a finite right one always
        # leaves a gap beyond the right depth
        limit = max(threshold_a, depth(b) + 1)
        for length in range(limit + 1):
            word = (symbol,) * length
            if accepts(a, word) and not accepts(b, word):
                return Decision(False, word)
        raise AssertionError("unreachable: an infinite language must exceed "
                             "a finite one")
    else:
        limit = max(threshold_a, threshold_b)
    for length in range(limit + 1):
        word = (symbol,) * length
        if accepts(a, word) and not accepts(b, word):
            return Decision(False, word)
    return Decision(True)


def _includes_bounded(a: Automaton, b: Automaton,
                      max_representatives: int) -> Decision:
    if not _is_rponfa(b):
        raise ValueError("the bounded engine requires the right-hand "
                         "automaton to be partially ordered with "
                         "deterministic self-loops")
    k = _bounded_bound(b)
    bound = max_representative_length(k, len(b.alphabet))
    count = 0
    for representative in enumerate_minimal_representatives(b.alphabet, k, bound):
        count += 1
        if count > max_representatives:
            raise CapacityError(
                f"more than {max_representatives} class representatives")
        if accepts(b, representative):
            continue
        # the right language is a union of classes, so this whole class
        # is rejected by b; any member accepted by a separates them
        cls = class_dfa(representative, k, b.alphabet)
        meet = is_empty(product_intersection(cls, a))
        if not meet.holds:
            return Decision(False, meet.witness)
    return Decision(True)


def equivalent(a: Automaton, b: Automaton,
               strategy: "Strategy | str" = Strategy.AUTO,
               max_nodes: int = DEFAULT_SUBSET_LIMIT,
               bound_budget: int = DEFAULT_BOUND_BUDGET,
               max_representatives: int = DEFAULT_REPRESENTATIVE_LIMIT
               ) -> Decision:
    """Language equality via inclusion both ways.

    The witness of a negative answer belongs to exactly one language;
    ``direction`` records which ("first-only" or "second-only").
    """
    forward = includes(a, b, strategy, max_nodes, bound_budget,
                       max_representatives)
    if not forward.holds:
        return Decision(False, forward.witness, direction="first-only")
    backward = includes(b, a, strategy, max_nodes, bound_budget,
                        max_representatives)
    if not backward.holds:
        return Decision(False, backward.witness, direction="second-only")
    return Decision(True)
