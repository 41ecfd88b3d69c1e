"""Orbit analysis and definability by deterministic regular expressions.

A deterministic (one-unambiguous) regular expression is one where,
while reading a word left to right, each symbol matches a unique
position of the expression.  Whether a language has such an expression
is decided on its minimal DFA through the orbit criterion: strongly
connected components must present a uniform face to the rest of the
automaton, and the languages looping inside each component must be
definable in turn.

The recursion needs care on strongly connected automata, where the
component is the whole machine and restricting to it makes no
progress.  There the decision proceeds by cutting, at the accepting
states, the symbols on which all accepting states agree; if cutting
cannot break the component the language is not definable.  The cut is
where this implementation goes beyond the plain restatement of the
criterion, and the no-progress verdict is logged when it decides.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .core import (Automaton, _strongly_connected_components,
                   _edges_ignoring_self_loops, classify)
from .ops import DEFAULT_SUBSET_LIMIT, determinize, minimize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitDecomposition:
    """Partition of a DFA's states into maximal strongly connected
    components, with the gate states of each.  A gate is a state that
    is accepting or has a transition leaving its component."""

    orbits: tuple[frozenset[str], ...]
    gates: tuple[frozenset[str], ...]

    def orbit_of(self, state: str) -> frozenset[str]:
        for orbit in self.orbits:
            if state in orbit:
                return orbit
        raise KeyError(state)


def orbits(d: Automaton) -> OrbitDecomposition:
    """Orbit decomposition of a deterministic automaton.  A state with
    only a self-loop is its own orbit; so is a state with no cycle at
    all, the two differing only in their orbit language."""
    if not classify(d).is_deterministic:
        raise ValueError("orbit analysis requires a deterministic automaton")
    components = _strongly_connected_components(
        d.states, _edges_ignoring_self_loops(d))
    orbit_list = tuple(frozenset(component) for component in components)
    gate_list = []
    for orbit in orbit_list:
        gate_list.append(frozenset(
            q for q in orbit
            if q in d.accepting
            or any(t not in orbit
                   for symbol in d.alphabet for t in d.step(q, symbol))))
    return OrbitDecomposition(orbit_list, tuple(gate_list))


def has_orbit_property(d: Automaton) -> bool:
    """True when, in every orbit, all gates agree: same acceptance
    status, and on each symbol the same targets outside the orbit."""
    decomposition = orbits(d)
    for orbit, gates in zip(decomposition.orbits, decomposition.gates):
        ordered = sorted(gates, key=d.state_index)
        if len(ordered) < 2:
            continue
        first = ordered[0]
        for other in ordered[1:]:
            if (first in d.accepting) != (other in d.accepting):
                return False
            for symbol in d.alphabet:
                outside_first = d.step(first, symbol) - orbit
                outside_other = d.step(other, symbol) - orbit
                if outside_first != outside_other:
                    return False
    return True


def _trim(d: Automaton) -> Automaton | None:
    """Drop states that cannot reach an accepting state, or None when
    none remains reachable (the empty language)."""
    inverse: dict[str, set[str]] = {q: set() for q in d.states}
    for (source, _symbol), targets in d.transitions.items():
        for target in targets:
            inverse[target].add(source)
    useful = set(d.accepting)
    frontier = list(d.accepting)
    while frontier:
        state = frontier.pop()
        for source in inverse[state]:
            if source not in useful:
                useful.add(source)
                frontier.append(source)
    initial = [q for q in d.initial if q in useful]
    if not initial:
        return None
    states = [q for q in d.states if q in useful]
    transitions = {
        (source, symbol): targets & useful
        for (source, symbol), targets in d.transitions.items()
        if source in useful
    }
    return Automaton(d.alphabet, states, initial,
                     d.accepting & useful, transitions)


def _minimal_trimmed(a: Automaton, max_subsets: int) -> Automaton | None:
    return _trim(minimize(determinize(a, max_subsets)))


def _canonical_key(d: Automaton) -> tuple:
    """Isomorphism-invariant form of a trimmed DFA: states renumbered
    in breadth-first order from the initial state."""
    (start,) = d.initial
    numbering = {start: 0}
    queue = [start]
    while queue:
        state = queue.pop(0)
        for symbol in d.alphabet:
            for target in sorted(d.step(state, symbol), key=d.state_index):
                if target not in numbering:
                    numbering[target] = len(numbering)
                    queue.append(target)
    edges = tuple(sorted(
        (numbering[source], symbol, numbering[target])
        for (source, symbol), targets in d.transitions.items()
        for target in targets
        if source in numbering and target in numbering))
    accepting = tuple(sorted(numbering[q] for q in d.accepting
                             if q in numbering))
    return (d.alphabet, len(numbering), accepting, edges)


def _orbit_automaton(d: Automaton, orbit: frozenset[str],
                     gates: frozenset[str], start: str) -> Automaton:
    states = [q for q in d.states if q in orbit]
    transitions = {
        (source, symbol): targets & orbit
        for (source, symbol), targets in d.transitions.items()
        if source in orbit
    }
    return Automaton(d.alphabet, states, [start], gates, transitions)


def _consistent_symbols(d: Automaton) -> dict[str, str]:
    """Symbols on which every accepting state moves to one shared
    target, mapped to that target."""
    consistent: dict[str, str] = {}
    for symbol in d.alphabet:
        targets = {d.step(q, symbol) for q in sorted(d.accepting,
                                                     key=d.state_index)}
        if len(targets) == 1:
            (target_set,) = targets
            if len(target_set) == 1:
                (target,) = target_set
                consistent[symbol] = target
    return consistent


def _cut_at_accepting(d: Automaton, symbols: dict[str, str]) -> Automaton:
    transitions = {
        (source, symbol): targets
        for (source, symbol), targets in d.transitions.items()
        if not (source in d.accepting and symbol in symbols)
    }
    return Automaton(d.alphabet, d.states, d.initial, d.accepting,
                     transitions)


def _definable(d: Automaton | None, depth: int, limit: int,
               max_subsets: int, cache: dict) -> bool:
    if d is None or len(d.states) <= 1:
        return True
    if depth > limit:
        raise RuntimeError("orbit recursion exceeded its depth guard")
    key = _canonical_key(d)
    if key in cache:
        return cache[key]
    cache[key] = verdict = _definable_uncached(d, depth, limit, max_subsets,
                                               cache)
    return verdict


def _orbit_languages_definable(d: Automaton,
                               decomposition: OrbitDecomposition, depth: int,
                               limit: int, max_subsets: int,
                               cache: dict) -> bool:
    for orbit, gates in zip(decomposition.orbits, decomposition.gates):
        for start in sorted(orbit, key=d.state_index):
            restricted = _orbit_automaton(d, orbit, gates, start)
            reduced = _minimal_trimmed(restricted, max_subsets)
            if not _definable(reduced, depth + 1, limit, max_subsets, cache):
                return False
    return True


def _definable_uncached(d: Automaton, depth: int, limit: int,
                        max_subsets: int, cache: dict) -> bool:
    decomposition = orbits(d)
    if not has_orbit_property(d):
        return False
    if len(decomposition.orbits) > 1:
        return _orbit_languages_definable(d, decomposition, depth, limit,
                                          max_subsets, cache)
    # the whole automaton is one strongly connected component; cut the
    # symbols all accepting states agree on, to break the component
    consistent = _consistent_symbols(d)
    cut = _cut_at_accepting(d, consistent)
    cut_decomposition = orbits(cut)
    whole = frozenset(d.states)
    if any(orbit == whole for orbit in cut_decomposition.orbits):
        logger.warning(
            "strongly connected automaton with %d states survives its cut; "
            "deciding not definable", len(d.states))
        return False
    if not has_orbit_property(cut):
        return False
    return _orbit_languages_definable(cut, cut_decomposition, depth, limit,
                                      max_subsets, cache)


def is_dre_definable(a: Automaton,
                     max_subsets: int = DEFAULT_SUBSET_LIMIT) -> bool:
    """Whether the language of the automaton is definable by a
    deterministic regular expression.  The input may be any automaton;
    the decision runs on its minimal DFA."""
    d = _minimal_trimmed(a, max_subsets)
    limit = (len(d.states) if d is not None else 0) + 8
    return _definable(d, 0, limit, max_subsets, {})
