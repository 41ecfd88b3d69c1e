"""Deciders for the ordered-language hierarchy.

A language is order-trivial (historically: R-trivial) exactly when its
minimal deterministic automaton is partially ordered, equivalently
when it is a finite union of languages of the form

    S1* x1 S2* x2 ... xm Sm+1*

where each letter xi is not in the preceding loop set Si.  The finer,
counted variant asks whether the language is a union of
prefix-k-equivalence classes; every language accepted by a complete
self-loop-deterministic partially ordered automaton has this property
with k equal to the automaton's depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (Automaton, CapacityError, Word, classify)
from .ops import complement, determinize, is_empty, minimize, product_intersection
from .subseq import (SubseqSet, class_dfa, enumerate_minimal_representatives,
                     max_representative_length, sub_k)

MACHINE_WORD_MAX = 2**63 - 1
DEFAULT_PATH_LIMIT = 10**6
DEFAULT_SIGNATURE_LIMIT = 10**6


@dataclass(frozen=True)
class TrivialityVerdict:
    """Outcome of a triviality check.

    For the counted variant, ``split_class`` on failure carries the
    class representative together with an accepted and a rejected
    member of the same class.  For the uncounted variant, failure
    means the minimal automaton has a proper cycle; ``cycle_words``
    holds two words reaching the same state whose lengths differ by
    the cycle length.  ``k_used`` reports the smallest bound at which
    the counted property was established.
    """

    holds: bool
    k_used: Optional[int] = None
    split_class: Optional[tuple[Word, Word, Word]] = None
    cycle_words: Optional[tuple[Word, Word]] = None


@dataclass(frozen=True)
class RExpression:
    """One branch of the union form: loop sets alternating with
    letters, with one more loop set than letters.  Each letter must
    not occur in the loop set it leaves."""

    loops: tuple[frozenset[str], ...]
    letters: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.loops) != len(self.letters) + 1:
            raise ValueError("need exactly one more loop set than letters")
        for loop, letter in zip(self.loops, self.letters):
            if letter in loop:
                raise ValueError(f"letter {letter!r} occurs in its loop set")


def _shortest_word_to(d: Automaton, target: str) -> Word:
    """Shortest word from the initial states to ``target``, ties by
    alphabet order."""
    frontier: list[tuple[str, Word]] = [
        (q, ()) for q in sorted(d.initial, key=d.state_index)]
    seen = {q for q, _ in frontier}
    while frontier:
        for q, word in frontier:
            if q == target:
                return word
        nxt: list[tuple[str, Word]] = []
        for q, word in frontier:
            for sym in d.alphabet:
                for t in sorted(d.step(q, sym), key=d.state_index):
                    if t not in seen:
                        seen.add(t)
                        nxt.append((t, word + (sym,)))
        frontier = nxt
    raise ValueError(f"state {target!r} is unreachable")


def _shortest_cycle_through(d: Automaton, state: str,
                            component: frozenset[str]) -> Word:
    """Shortest word labelling a cycle from ``state`` back to itself
    that leaves the state at least once, staying inside ``component``."""
    frontier: list[tuple[str, Word]] = []
    seen: set[str] = set()
    for sym in d.alphabet:
        for t in sorted(d.step(state, sym), key=d.state_index):
            if t != state and t in component and t not in seen:
                seen.add(t)
                frontier.append((t, (sym,)))
    while frontier:
        nxt: list[tuple[str, Word]] = []
        for q, word in frontier:
            for sym in d.alphabet:
                for t in sorted(d.step(q, sym), key=d.state_index):
                    if t == state:
                        return word + (sym,)
                    if t in component and t not in seen:
                        seen.add(t)
                        nxt.append((t, word + (sym,)))
        frontier = nxt
    raise ValueError("no cycle found inside the component")


def is_r_trivial(a: Automaton) -> TrivialityVerdict:
    """Order-triviality of the language.

    Decided on the minimal deterministic automaton: the language
    qualifies exactly when that automaton is partially ordered.  On
    failure the verdict exhibits a state on a proper cycle through two
    access words, one of which traverses the cycle once.
    """
    minimal = minimize(determinize(a))
    if classify(minimal).is_partially_ordered:
        return TrivialityVerdict(True)
    from .core import _edges_ignoring_self_loops, _strongly_connected_components
    edges = _edges_ignoring_self_loops(minimal)
    components = _strongly_connected_components(minimal.states, edges)
    cyclic = [c for c in components if len(c) > 1]
    component = frozenset(min(cyclic,
                              key=lambda c: min(minimal.state_index(q) for q in c)))
    anchor = min(component, key=minimal.state_index)
    access = _shortest_word_to(minimal, anchor)
    loop = _shortest_cycle_through(minimal, anchor, component)
    return TrivialityVerdict(False, cycle_words=(access, access + loop))


def _split_for_bound(minimal: Automaton, rejecting: Automaton, k: int
                     ) -> Optional[tuple[Word, Word, Word]]:
    """First class under the bound ``k`` containing both an accepted
    and a rejected word, or None when the language is a union of
    classes."""
    alphabet = minimal.alphabet
    bound = max_representative_length(k, len(alphabet))
    for representative in enumerate_minimal_representatives(alphabet, k, bound):
        cls = class_dfa(representative, k, alphabet)
        inside = is_empty(product_intersection(cls, minimal))
        outside = is_empty(product_intersection(cls, rejecting))
        if not inside.holds and not outside.holds:
            return (representative, inside.witness, outside.witness)
    return None


def is_k_r_trivial(a: Automaton, k: int) -> TrivialityVerdict:
    """Is the language a union of prefix-k-equivalence classes?

    Checked through the unique shortest class representatives: the
    property fails exactly when some class with a representative of
    length at most C(k+n, k) - 1 meets both the language and its
    complement.  Membership of classes in either side goes through the
    class automaton intersected with the minimal automaton or its
    complement.  Since the property is monotone in ``k``, smaller
    bounds are tried first and ``k_used`` reports the first success.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    n = len(a.alphabet)
    if math.comb(k + n, k) > MACHINE_WORD_MAX:
        raise CapacityError(f"representative bound C({k + n},{k}) exceeds "
                            "the machine word")
    minimal = minimize(determinize(a))
    rejecting = complement(minimal)
    split = None
    for smaller in range(k + 1):
        split = _split_for_bound(minimal, rejecting, smaller)
        if split is None:
            return TrivialityVerdict(True, k_used=smaller)
    return TrivialityVerdict(False, k_used=k, split_class=split)


def is_k_r_trivial_oracle(a: Automaton, k: int,
                          max_signatures: int = DEFAULT_SIGNATURE_LIMIT
                          ) -> TrivialityVerdict:
    """Independent route to the same property.

    Runs the deterministic signature machine, whose states are the
    chains of distinct subsequence sets along prefixes, in lockstep
    with the minimal automaton.  The language is a union of classes
    exactly when no chain value co-occurs with both an accepting and a
    rejecting state of the minimal automaton.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    minimal = minimize(determinize(a))
    (start_state,) = minimal.initial
    empty = sub_k((), k)
    start = ((empty,), start_state)
    first_word: dict[tuple[tuple[SubseqSet, ...], str], Word] = {start: ()}
    chain_accepting: dict[tuple[SubseqSet, ...], Word] = {}
    chain_rejecting: dict[tuple[SubseqSet, ...], Word] = {}
    chain_minimum: dict[tuple[SubseqSet, ...], Word] = {}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            chain, state = node
            word = first_word[node]
            chain_minimum.setdefault(chain, word)
            if state in minimal.accepting:
                chain_accepting.setdefault(chain, word)
            else:
                chain_rejecting.setdefault(chain, word)
            if chain in chain_accepting and chain in chain_rejecting:
                return TrivialityVerdict(
                    False, k_used=k,
                    split_class=(chain_minimum[chain], chain_accepting[chain],
                                 chain_rejecting[chain]))
            for sym in minimal.alphabet:
                grown = chain[-1].extend(sym)
                next_chain = chain if grown == chain[-1] else chain + (grown,)
                (next_state,) = minimal.step(state, sym)
                next_node = (next_chain, next_state)
                if next_node not in first_word:
                    if len(first_word) >= max_signatures:
                        raise CapacityError(
                            f"signature machine exceeded {max_signatures} nodes")
                    first_word[next_node] = word + (sym,)
                    nxt.append(next_node)
        frontier = nxt
    return TrivialityVerdict(True, k_used=k)


def rponfa_to_r_expressions(a: Automaton,
                            max_paths: int = DEFAULT_PATH_LIMIT
                            ) -> list[RExpression]:
    """Union form for the language of a self-loop-deterministic
    partially ordered automaton.

    Every simple path from an initial to an accepting state yields one
    branch: the loop sets are the self-loop symbols of the visited
    states, the letters are the path labels.  Self-loop determinism
    guarantees each path letter is missing from the loop set it
    leaves.  Paths are enumerated depth first in declaration order;
    duplicates are removed structurally.
    """
    flags = classify(a)
    if not (flags.is_partially_ordered and flags.is_self_loop_deterministic):
        raise ValueError("union form requires a partially ordered automaton "
                         "with deterministic self-loops")
    loops = {q: a.self_loop_symbols(q) for q in a.states}
    seen: set[RExpression] = set()
    out: list[RExpression] = []
    counter = 0

    def emit(path_states: list[str], path_letters: list[str]) -> None:
        nonlocal counter
        counter += 1
        if counter > max_paths:
            raise CapacityError(f"more than {max_paths} accepting paths")
        expr = RExpression(tuple(loops[q] for q in path_states),
                           tuple(path_letters))
        if expr not in seen:
            seen.add(expr)
            out.append(expr)

    def explore(path_states: list[str], path_letters: list[str]) -> None:
        q = path_states[-1]
        if q in a.accepting:
            emit(path_states, path_letters)
        for sym in a.alphabet:
            for t in sorted(a.step(q, sym), key=a.state_index):
                if t != q and t not in path_states:
                    explore(path_states + [t], path_letters + [sym])

    for q in sorted(a.initial, key=a.state_index):
        explore([q], [])
    return out


def r_expression_to_automaton(e: RExpression,
                              alphabet: Sequence[str] | None = None
                              ) -> Automaton:
    """Chain automaton for one union branch.

    One state per loop set, self-loops for the loop symbols, one
    advancing edge per letter.  The result is deterministic and
    partially ordered, though not complete in general.
    """
    if alphabet is None:
        ordered: list[str] = []
        for i, loop in enumerate(e.loops):
            for sym in sorted(loop):
                if sym not in ordered:
                    ordered.append(sym)
            if i < len(e.letters) and e.letters[i] not in ordered:
                ordered.append(e.letters[i])
        alphabet = ordered or ["a"]
    states = [f"x{i}" for i in range(len(e.loops))]
    transitions: dict[tuple[str, str], frozenset[str]] = {}
    for i, loop in enumerate(e.loops):
        for sym in loop:
            transitions[(states[i], sym)] = frozenset((states[i],))
        if i < len(e.letters):
            transitions[(states[i], e.letters[i])] = frozenset((states[i + 1],))
    return Automaton(alphabet, states, [states[0]], [states[-1]], transitions)
