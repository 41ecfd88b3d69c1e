"""Core automaton model.

A nondeterministic finite automaton over string symbols.  Symbols and
states keep the order in which they were declared; every tie-break in
the toolkit (witness search, canonical serialization, enumeration) is
resolved through that order, so identical inputs always produce
identical outputs.

The automaton classes recognised by ``classify`` form a small lattice:

* ``DFA``          single initial state, at most one move per symbol
* ``PO_DFA``       deterministic and partially ordered
* ``RPO_NFA``      partially ordered, self-loops are the only
                   nondeterminism-free cycles: whenever a state loops
                   on a symbol it has no other move on that symbol
* ``PO_NFA``       cycles only through self-loops
* ``NFA``          everything else

"Partially ordered" means the reachability relation on states is a
partial order, equivalently that every cycle in the transition graph
is a self-loop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

Word = tuple[str, ...]

EMPTY: frozenset[str] = frozenset()


class FormatError(ValueError):
    """Raised for malformed automaton files or invalid components."""


class CapacityError(RuntimeError):
    """Raised when a construction exceeds a configured size budget."""


class AutomatonKind(str, Enum):
    DFA = "DFA"
    PO_DFA = "PO_DFA"
    RPO_NFA = "RPO_NFA"
    PO_NFA = "PO_NFA"
    NFA = "NFA"


@dataclass(frozen=True)
class AutomatonClass:
    """Classification flags plus the most specific matching label."""

    label: AutomatonKind
    is_complete: bool
    is_deterministic: bool
    is_partially_ordered: bool
    is_self_loop_deterministic: bool


@dataclass(frozen=True)
class Decision:
    """Outcome of a yes/no language question.

    ``witness`` is present exactly when ``holds`` is false and the
    failure can be demonstrated by a word.  ``direction`` is only set
    by the equivalence check, where it records which input accepts the
    witness ("first-only" or "second-only").
    """

    holds: bool
    witness: Word | None = None
    direction: str | None = None


class Automaton:
    """Finite automaton with ordered alphabet and state list.

    ``transitions`` maps ``(state, symbol)`` to a frozenset of target
    states; pairs without an entry have no move.  Instances are treated
    as immutable once constructed.
    """

    __slots__ = ("alphabet", "states", "initial", "accepting", "transitions",
                 "_state_index", "_symbol_index")

    def __init__(self, alphabet: Sequence[str], states: Sequence[str],
                 initial: Iterable[str], accepting: Iterable[str],
                 transitions: Mapping[tuple[str, str], Iterable[str]]):
        self.alphabet: tuple[str, ...] = tuple(alphabet)
        self.states: tuple[str, ...] = tuple(states)
        self.initial: frozenset[str] = frozenset(initial)
        self.accepting: frozenset[str] = frozenset(accepting)
        self.transitions: dict[tuple[str, str], frozenset[str]] = {
            key: frozenset(targets) for key, targets in transitions.items()
            if targets
        }
        self._state_index = {q: i for i, q in enumerate(self.states)}
        self._symbol_index = {a: i for i, a in enumerate(self.alphabet)}
        self._validate()

    def _validate(self) -> None:
        if not self.alphabet:
            raise FormatError("alphabet must not be empty")
        if not self.states:
            raise FormatError("state list must not be empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise FormatError("duplicate symbol in alphabet")
        if len(set(self.states)) != len(self.states):
            raise FormatError("duplicate state name")
        for q in self.initial:
            if q not in self._state_index:
                raise FormatError(f"initial state {q!r} is not declared")
        for q in self.accepting:
            if q not in self._state_index:
                raise FormatError(f"accepting state {q!r} is not declared")
        for (q, a), targets in self.transitions.items():
            if q not in self._state_index:
                raise FormatError(f"transition source {q!r} is not declared")
            if a not in self._symbol_index:
                raise FormatError(f"transition symbol {a!r} is not declared")
            for t in targets:
                if t not in self._state_index:
                    raise FormatError(f"transition target {t!r} is not declared")

    def state_index(self, q: str) -> int:
        return self._state_index[q]

    def symbol_index(self, a: str) -> int:
        return self._symbol_index[a]

    def step(self, state: str, symbol: str) -> frozenset[str]:
        return self.transitions.get((state, symbol), EMPTY)

    def move(self, subset: Iterable[str], symbol: str) -> frozenset[str]:
        out: set[str] = set()
        for q in subset:
            out |= self.step(q, symbol)
        return frozenset(out)

    def self_loop_symbols(self, state: str) -> frozenset[str]:
        return frozenset(a for a in self.alphabet if state in self.step(state, a))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Automaton):
            return NotImplemented
        return (self.alphabet == other.alphabet and self.states == other.states
                and self.initial == other.initial
                and self.accepting == other.accepting
                and self.transitions == other.transitions)

    def __repr__(self) -> str:
        return (f"Automaton({len(self.states)} states, "
                f"alphabet {list(self.alphabet)})")


def parse_automaton(text: str) -> Automaton:
    """Parse the JSON automaton format.

    The object needs the fields ``alphabet``, ``states``, ``initial``,
    ``accepting`` and ``transitions`` (a list of ``[src, symbol, dst]``
    triples).  Symbol and state order is the declaration order.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise FormatError("top-level value must be a JSON object")
    for field in ("alphabet", "states", "initial", "accepting", "transitions"):
        if field not in raw:
            raise FormatError(f"missing field {field!r}")
        if not isinstance(raw[field], list):
            raise FormatError(f"field {field!r} must be a list")
    for field in ("alphabet", "states", "initial", "accepting"):
        for item in raw[field]:
            if not isinstance(item, str):
                raise FormatError(f"field {field!r} contains non-string {item!r}")
    transitions: dict[tuple[str, str], set[str]] = {}
    for entry in raw["transitions"]:
        if (not isinstance(entry, list) or len(entry) != 3
                or not all(isinstance(part, str) for part in entry)):
            raise FormatError(f"transition {entry!r} is not a [src, symbol, dst] "
                              "triple of strings")
        src, symbol, dst = entry
        transitions.setdefault((src, symbol), set()).add(dst)
    return Automaton(raw["alphabet"], raw["states"], raw["initial"],
                     raw["accepting"], transitions)


def serialize_automaton(a: Automaton) -> str:
    """Serialize to the JSON format in canonical order.

    Transitions are sorted by source state, then symbol, then target,
    all in declaration order, so serializing a parsed file is a fixed
    point after one round trip.
    """
    triples = []
    for (q, sym), targets in a.transitions.items():
        for t in targets:
            triples.append((a.state_index(q), a.symbol_index(sym),
                            a.state_index(t)))
    triples.sort()
    doc = {
        "alphabet": list(a.alphabet),
        "states": list(a.states),
        "initial": sorted(a.initial, key=a.state_index),
        "accepting": sorted(a.accepting, key=a.state_index),
        "transitions": [[a.states[qi], a.alphabet[si], a.states[ti]]
                        for qi, si, ti in triples],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_word(tokens: Sequence[str] | str, alphabet: Sequence[str]) -> Word:
    """Interpret a word given either as symbol tokens or as a plain string.

    A plain string is split into characters, which is only allowed when
    every alphabet symbol is a single character.
    """
    if isinstance(tokens, str):
        if any(len(sym) != 1 for sym in alphabet):
            raise FormatError("string form requires single-character symbols")
        tokens = list(tokens)
    word = tuple(tokens)
    known = set(alphabet)
    for sym in word:
        if sym not in known:
            raise FormatError(f"symbol {sym!r} is not in the alphabet")
    return word


def accepts(a: Automaton, word: Iterable[str]) -> bool:
    """Subset simulation; true when the word reaches an accepting state."""
    current = a.initial
    for symbol in word:
        if symbol not in a._symbol_index:
            raise ValueError(f"symbol {symbol!r} is not in the alphabet")
        if not current:
            return False
        current = a.move(current, symbol)
    return bool(current & a.accepting)


def _edges_ignoring_self_loops(a: Automaton) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {q: [] for q in a.states}
    seen: set[tuple[str, str]] = set()
    for sym in a.alphabet:
        for q in a.states:
            for t in a.step(q, sym):
                if t != q and (q, t) not in seen:
                    seen.add((q, t))
                    out[q].append(t)
    return out


def _strongly_connected_components(vertices: Sequence[str],
                                   edges: Mapping[str, list[str]]
                                   ) -> list[list[str]]:
    """Iterative Tarjan; components come out in reverse topological order."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, ei = work.pop()
            if ei == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            targets = edges.get(v, [])
            while ei < len(targets):
                w = targets[ei]
                ei += 1
                if w not in index:
                    work.append((v, ei))
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    component.append(w)
                    if w == v:
                        break
                components.append(component)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return components


def is_partially_ordered(a: Automaton) -> bool:
    """True when every cycle is a self-loop.

    Self-loops are dropped before the strongly connected component
    check, so a state looping on itself still counts as ordered.
    """
    edges = _edges_ignoring_self_loops(a)
    return all(len(c) == 1 for c in
               _strongly_connected_components(a.states, edges))


def classify(a: Automaton) -> AutomatonClass:
    """Compute structural flags and the most specific class label."""
    complete = all(a.step(q, sym) for q in a.states for sym in a.alphabet)
    deterministic = len(a.initial) == 1 and all(
        len(a.step(q, sym)) <= 1 for q in a.states for sym in a.alphabet)
    ordered = is_partially_ordered(a)
    loop_det = all(a.step(q, sym) == frozenset((q,))
                   for q in a.states for sym in a.alphabet
                   if q in a.step(q, sym))
    if deterministic and ordered:
        label = AutomatonKind.PO_DFA
    elif deterministic:
        label = AutomatonKind.DFA
    elif ordered and loop_det:
        label = AutomatonKind.RPO_NFA
    elif ordered:
        label = AutomatonKind.PO_NFA
    else:
        label = AutomatonKind.NFA
    return AutomatonClass(label, complete, deterministic, ordered, loop_det)


def complete_automaton(a: Automaton, sink_name: str = "sink") -> Automaton:
    """Add a nonaccepting sink state for all missing moves.

    Returns the automaton unchanged when it is already complete.  The
    sink only carries self-loops, so partial order and self-loop
    determinism survive completion.
    """
    missing = [(q, sym) for q in a.states for sym in a.alphabet
               if not a.step(q, sym)]
    if not missing:
        return a
    sink = sink_name
    while sink in a._state_index:
        sink = sink + "'"
    transitions: dict[tuple[str, str], frozenset[str]] = dict(a.transitions)
    for q, sym in missing:
        transitions[(q, sym)] = frozenset((sink,))
    for sym in a.alphabet:
        transitions[(sink, sym)] = frozenset((sink,))
    return Automaton(a.alphabet, (*a.states, sink), a.initial, a.accepting,
                     transitions)


def depth(a: Automaton) -> int:
    """Length of the longest self-loop-free path from an initial state.

    Only defined for partially ordered automata; the length counts
    transitions, not states.
    """
    if not is_partially_ordered(a):
        raise ValueError("depth requires a partially ordered automaton")
    edges = _edges_ignoring_self_loops(a)
    memo: dict[str, int] = {}

    def longest(q: str) -> int:
        if q in memo:
            return memo[q]
        memo[q] = 0  # placeholder, cycles are impossible here
        best = 0
        for t in edges[q]:
            best = max(best, 1 + longest(t))
        memo[q] = best
        return best

    order = []
    for component in _strongly_connected_components(a.states, edges):
        order.extend(component)
    # reverse topological order lets the memo fill bottom-up without
    # hitting Python's recursion limit on long chains
    for q in order:
        longest(q)
    return max((longest(q) for q in a.initial), default=0)
