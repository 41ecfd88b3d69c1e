"""Hardness constructions that tie universality to other problems.

Satisfiability of a CNF formula becomes non-universality of a small
self-loop-deterministic automaton over {0, 1}: the automaton accepts
every word except the length-n bit strings that encode satisfying
assignments.

Acceptance of a word by a space-bounded deterministic Turing machine
becomes non-universality of a binary partially ordered automaton: the
machine's computation is spelled out as a sequence of tape snapshots,
each cell encoded as a fixed-length bit block, and the automaton
accepts exactly the words that fail to be that one encoding.  The
detector families cover malformed block structure, a wrong starting
snapshot, a cell that contradicts the transition table, and runs that
stop too early or keep going after acceptance.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .core import (Automaton, AutomatonKind, CapacityError, FormatError,
                   Word, classify)

DEFAULT_STATE_LIMIT = 200_000
SEPARATOR = "#"
MOVES = ("L", "R", "S")


@dataclass(frozen=True)
class CnfFormula:
    """Conjunction of clauses over variables 1..variable_count.

    A clause is a set of nonzero integer literals; positive k stands
    for variable k, negative k for its negation.  A clause containing
    both k and -k is rejected, and so is a formula without clauses.
    """

    variable_count: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses",
                           tuple(frozenset(clause) for clause in self.clauses))
        if self.variable_count < 1:
            raise FormatError("a formula needs at least one variable")
        if not self.clauses:
            raise FormatError("a formula needs at least one clause")
        for i, clause in enumerate(self.clauses, start=1):
            for literal in clause:
                if not isinstance(literal, int) or isinstance(literal, bool) \
                        or literal == 0:
                    raise FormatError(
                        f"clause {i}: literals must be nonzero integers")
                if abs(literal) > self.variable_count:
                    raise FormatError(
                        f"clause {i}: variable {abs(literal)} out of range")
                if -literal in clause:
                    raise FormatError(
                        f"clause {i} contains a variable and its negation")

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        if len(assignment) != self.variable_count:
            raise ValueError("assignment length must match the variable count")
        return all(
            any(assignment[abs(literal) - 1] == (literal > 0)
                for literal in clause)
            for clause in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse the DIMACS CNF format: a 'p cnf <vars> <clauses>' header
    followed by whitespace-separated literals, clauses ending in 0."""
    header = None
    literals: list[int] = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise FormatError(f"line {number}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(
                    f"line {number}: expected 'p cnf <variables> <clauses>'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(
                    f"line {number}: header counts must be integers") from None
            continue
        if header is None:
            raise FormatError(f"line {number}: clause before the header")
        for token in line.split():
            try:
                literals.append(int(token))
            except ValueError:
                raise FormatError(
                    f"line {number}: bad literal {token!r}") from None
    if header is None:
        raise FormatError("missing 'p cnf' header")
    clauses: list[frozenset[int]] = []
    current: list[int] = []
    for literal in literals:
        if literal == 0:
            clauses.append(frozenset(current))
            current = []
        else:
            current.append(literal)
    if current:
        raise FormatError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise FormatError(
            f"header announces {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def cnf_to_rponfa(formula: CnfFormula) -> Automaton:
    """Automaton over {0, 1} accepting every word except the length-n
    encodings of satisfying assignments, where bit j gives the value
    of variable j.  Universal exactly when the formula is
    unsatisfiable.

    Each clause contributes a path that reads precisely the bit
    patterns falsifying it, and a shared chain accepts every word
    whose length differs from the variable count.
    """
    n = formula.variable_count
    states = ["start"]
    transitions: dict[tuple[str, str], set[str]] = {}

    def add(source: str, symbol: str, target: str) -> None:
        transitions.setdefault((source, symbol), set()).add(target)

    for i in range(1, len(formula.clauses) + 1):
        states.extend(f"c{i}.{j}" for j in range(1, n + 1))
    chain = [f"len{j}" for j in range(1, n + 2)]
    states.extend(chain)
    for symbol in ("0", "1"):
        add("start", symbol, chain[0])
        add(chain[-1], symbol, chain[-1])
    for j in range(n):
        for symbol in ("0", "1"):
            add(chain[j], symbol, chain[j + 1])
    for i, clause in enumerate(formula.clauses, start=1):
        previous = "start"
        for j in range(1, n + 1):
            if j in clause:
                falsifying = ("0",)
            elif -j in clause:
                falsifying = ("1",)
            else:
                falsifying = ("0", "1")
            for symbol in falsifying:
                add(previous, symbol, f"c{i}.{j}")
            previous = f"c{i}.{j}"
    accepting = {"start", chain[-1]}
    accepting.update(f"c{i}.{n}" for i in range(1, len(formula.clauses) + 1))
    accepting.update(chain[j] for j in range(n) if j + 1 != n)
    result = Automaton(("0", "1"), states, ["start"], accepting, transitions)
    assert classify(result).label is AutomatonKind.RPO_NFA
    return result


def sat_brute_force(formula: CnfFormula) -> bool:
    """Satisfiability by assignment enumeration, for use as an oracle."""
    if formula.variable_count > 20:
        raise ValueError("brute force is limited to 20 variables")
    return any(formula.evaluate(assignment)
               for assignment in itertools.product(
                   (False, True), repeat=formula.variable_count))


class Dtm:
    """Deterministic Turing machine confined to a fixed tape window.

    ``space_bound`` is the number of usable cells; the head starts on
    cell 1 and must stay within 1..space_bound throughout the run.
    The transition table maps (state, tape symbol) to (state, written
    symbol, move) with move one of "L", "R", "S", and must cover every
    pair except those of the accepting state, where the machine halts.
    """

    __slots__ = ("states", "tape_alphabet", "input_alphabet", "blank",
                 "initial", "accepting", "transitions", "space_bound")

    def __init__(self, states: Sequence[str], tape_alphabet: Sequence[str],
                 input_alphabet: Sequence[str], blank: str, initial: str,
                 accepting: str,
                 transitions: Mapping[tuple[str, str], Iterable[str]],
                 space_bound: int):
        self.states = tuple(states)
        self.tape_alphabet = tuple(tape_alphabet)
        self.input_alphabet = tuple(input_alphabet)
        self.blank = blank
        self.initial = initial
        self.accepting = accepting
        self.transitions = {key: tuple(value)
                            for key, value in dict(transitions).items()}
        self.space_bound = int(space_bound)
        self._validate()

    def _validate(self) -> None:
        if len(set(self.states)) != len(self.states) or not self.states:
            raise FormatError("states must be distinct and nonempty")
        if len(set(self.tape_alphabet)) != len(self.tape_alphabet) \
                or not self.tape_alphabet:
            raise FormatError("tape alphabet must be distinct and nonempty")
        unknown = set(self.input_alphabet) - set(self.tape_alphabet)
        if unknown:
            raise FormatError(
                f"input symbols missing from the tape alphabet: {sorted(unknown)}")
        if self.blank not in self.tape_alphabet:
            raise FormatError("the blank must be a tape symbol")
        if self.blank in self.input_alphabet:
            raise FormatError("the blank must not be an input symbol")
        for state in (self.initial, self.accepting):
            if state not in self.states:
                raise FormatError(f"unknown state {state!r}")
        if self.initial == self.accepting:
            raise FormatError("initial and accepting states must differ")
        if self.space_bound < 1:
            raise FormatError("space bound must be positive")
        for (state, symbol), value in self.transitions.items():
            if state not in self.states:
                raise FormatError(f"transition from unknown state {state!r}")
            if symbol not in self.tape_alphabet:
                raise FormatError(f"transition on unknown symbol {symbol!r}")
            if len(value) != 3:
                raise FormatError(
                    f"transition for ({state!r}, {symbol!r}) must be "
                    "(state, symbol, move)")
            target, written, move = value
            if target not in self.states:
                raise FormatError(f"transition to unknown state {target!r}")
            if written not in self.tape_alphabet:
                raise FormatError(f"transition writes unknown symbol {written!r}")
            if move not in MOVES:
                raise FormatError(f"move must be one of {MOVES}, got {move!r}")
        for state in self.states:
            if state == self.accepting:
                continue
            for symbol in self.tape_alphabet:
                if (state, symbol) not in self.transitions:
                    raise FormatError(
                        f"missing transition for ({state!r}, {symbol!r})")


def parse_dtm(text: str) -> Dtm:
    """Parse a machine from JSON with fields states, tape_alphabet,
    input_alphabet, blank, initial, accepting, space_bound and
    transitions (a list of [state, symbol, state, symbol, move])."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise FormatError(f"invalid JSON: {error}") from None
    if not isinstance(data, dict):
        raise FormatError("machine description must be a JSON object")
    required = ("states", "tape_alphabet", "input_alphabet", "blank",
                "initial", "accepting", "space_bound", "transitions")
    missing = [field for field in required if field not in data]
    if missing:
        raise FormatError(f"missing fields: {', '.join(missing)}")
    for field in ("states", "tape_alphabet", "input_alphabet", "transitions"):
        if not isinstance(data[field], list):
            raise FormatError(f"field {field!r} must be a list")
    for field in ("blank", "initial", "accepting"):
        if not isinstance(data[field], str):
            raise FormatError(f"field {field!r} must be a string")
    if not isinstance(data["space_bound"], int) \
            or isinstance(data["space_bound"], bool):
        raise FormatError("field 'space_bound' must be an integer")
    transitions: dict[tuple[str, str], tuple[str, str, str]] = {}
    for i, entry in enumerate(data["transitions"]):
        if not isinstance(entry, list) or len(entry) != 5 \
                or not all(isinstance(part, str) for part in entry):
            raise FormatError(
                f"transition {i}: expected [state, symbol, state, symbol, move]")
        key = (entry[0], entry[1])
        if key in transitions:
            raise FormatError(
                f"transition {i}: duplicate rule for ({entry[0]!r}, {entry[1]!r})")
        transitions[key] = (entry[2], entry[3], entry[4])
    return Dtm(data["states"], data["tape_alphabet"], data["input_alphabet"],
               data["blank"], data["initial"], data["accepting"],
               transitions, data["space_bound"])


class SimulationStatus(Enum):
    ACCEPTED = "accepted"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class Configuration:
    """Tape snapshot: the control state, the 1-based head position and
    the full contents of the space window."""

    state: str
    head: int
    tape: tuple[str, ...]


@dataclass(frozen=True)
class SimulationResult:
    status: SimulationStatus
    configurations: tuple[Configuration, ...]

    @property
    def steps(self) -> int:
        return len(self.configurations) - 1


def step_budget(machine: Dtm) -> int:
    """Number of distinct tape snapshots with cell-local state marks;
    a deterministic run longer than this has repeated a snapshot and
    will never accept."""
    cell_values = len(machine.tape_alphabet) * (len(machine.states) + 1)
    return cell_values ** machine.space_bound \
        * machine.space_bound * len(machine.states)


def _check_input(machine: Dtm, word: Word) -> None:
    for symbol in word:
        if symbol not in machine.input_alphabet:
            raise ValueError(f"input symbol {symbol!r} is not in the "
                             "machine's input alphabet")
    if len(word) > machine.space_bound:
        raise ValueError("input longer than the space bound")


def simulate(machine: Dtm, word: Word,
             budget: Optional[int] = None) -> SimulationResult:
    """Run the machine on the word until it accepts or the step budget
    runs out.  A head move outside the space window raises ValueError.
    """
    _check_input(machine, word)
    if budget is None:
        budget = step_budget(machine)
    tape = list(word) + [machine.blank] * (machine.space_bound - len(word))
    state, head = machine.initial, 1
    trace = [Configuration(state, head, tuple(tape))]
    while state != machine.accepting:
        if len(trace) - 1 >= budget:
            return SimulationResult(SimulationStatus.BUDGET_EXCEEDED,
                                    tuple(trace))
        state, written, move = machine.transitions[(state, tape[head - 1])]
        tape[head - 1] = written
        if move == "L":
            head -= 1
        elif move == "R":
            head += 1
        if not 1 <= head <= machine.space_bound:
            raise ValueError(
                f"head left the tape window after step {len(trace)}")
        trace.append(Configuration(state, head, tuple(tape)))
    return SimulationResult(SimulationStatus.ACCEPTED, tuple(trace))


class _Encoding:
    """Fixed-length binary blocks for tape cells and the separator.

    A cell is a pair (tape symbol, state or None); the separator keeps
    snapshots apart.  Symbols are numbered in a fixed order (cells
    grouped by tape symbol, plain cell first, separator last) and each
    becomes the block 0 0 1 b1 1 b2 1 ... bK 1, so that 00 occurs only
    at block starts in any concatenation of blocks.
    """

    def __init__(self, machine: Dtm):
        symbols: list[object] = []
        for tape_symbol in machine.tape_alphabet:
            symbols.append((tape_symbol, None))
            for state in machine.states:
                symbols.append((tape_symbol, state))
        symbols.append(SEPARATOR)
        self.symbols: tuple[object, ...] = tuple(symbols)
        self.index = {symbol: i for i, symbol in enumerate(symbols)}
        self.code_length = max(1, (len(symbols) - 1).bit_length())
        self.block_length = 2 * self.code_length + 3

    def block(self, index: int) -> tuple[str, ...]:
        bits = ["0", "0", "1"]
        for bit in format(index, f"0{self.code_length}b"):
            bits.append(bit)
            bits.append("1")
        return tuple(bits)


def _snapshot_cells(machine: Dtm, config: Configuration) -> list[object]:
    return [(config.tape[j], config.state if config.head == j + 1 else None)
            for j in range(machine.space_bound)]


def encode_run(machine: Dtm, word: Word) -> Optional[Word]:
    """Binary encoding of the accepting computation on the word, or
    None when the machine does not accept within the step budget.  The
    encoding is separator, first snapshot, separator, next snapshot,
    and so on, closing with a separator; every symbol is one block."""
    outcome = simulate(machine, word)
    if outcome.status is not SimulationStatus.ACCEPTED:
        return None
    encoding = _Encoding(machine)
    sequence: list[object] = [SEPARATOR]
    for config in outcome.configurations:
        sequence.extend(_snapshot_cells(machine, config))
        sequence.append(SEPARATOR)
    bits: list[str] = []
    for symbol in sequence:
        bits.extend(encoding.block(encoding.index[symbol]))
    return tuple(bits)


class _Sketch:
    """Mutable scratchpad for assembling a reduction automaton."""

    def __init__(self, max_states: int):
        self.max_states = max_states
        self.states: list[str] = []
        self.initial: list[str] = []
        self.accepting: list[str] = []
        self.transitions: dict[tuple[str, str], set[str]] = {}
        self.counters: dict[str, int] = {}

    def state(self, name: str, accepting: bool = False,
              initial: bool = False) -> str:
        if len(self.states) >= self.max_states:
            raise CapacityError(
                f"construction exceeded {self.max_states} states")
        self.states.append(name)
        if accepting:
            self.accepting.append(name)
        if initial:
            self.initial.append(name)
        return name

    def fresh(self, prefix: str, accepting: bool = False) -> str:
        count = self.counters.get(prefix, 0)
        self.counters[prefix] = count + 1
        return self.state(f"{prefix}{count}", accepting)

    def edge(self, source: str, symbol: str, target: str) -> None:
        self.transitions.setdefault((source, symbol), set()).add(target)

    def any_edge(self, source: str, target: str) -> None:
        self.edge(source, "0", target)
        self.edge(source, "1", target)

    def build(self) -> Automaton:
        return Automaton(("0", "1"), self.states, self.initial,
                         self.accepting, self.transitions)


def _positions(code_length: int) -> list[tuple[str, Optional[int]]]:
    """Block structure after the leading 00: a fixed 1, then for each
    code bit a data position followed by a fixed 1."""
    layout: list[tuple[str, Optional[int]]] = [("fixed", None)]
    for i in range(code_length):
        layout.append(("data", i))
        layout.append(("fixed", None))
    return layout


def _add_malformed_detectors(sk: _Sketch, code_length: int,
                             symbol_count: int) -> tuple[dict[int, str],
                                                         dict[str, str]]:
    """Fragments accepting every word that is not a concatenation of
    valid blocks: wrong start, trailing 0, a broken or unassigned
    block body, a block followed by 1 or 01, or ending inside a block.

    Returns the per-symbol states reached after a complete valid block
    (so continuations can hang off them) and the shared anchor states.
    """
    all_state = sk.state("all", accepting=True)
    sk.any_edge(all_state, all_state)
    watch = sk.state("watch", initial=True)
    sk.any_edge(watch, watch)
    lead = sk.state("lead", initial=True)
    lead0 = sk.state("lead0")
    sk.edge(lead, "1", all_state)
    sk.edge(lead, "0", lead0)
    sk.edge(lead0, "1", all_state)
    tail0 = sk.state("tail0", accepting=True)
    sk.edge(watch, "0", tail0)
    mark = sk.state("mark")
    sk.edge(watch, "0", mark)
    blockzero = sk.state("blk0", accepting=True)
    sk.edge(blockzero, "1", all_state)
    # trie over the block body; None tracks bodies whose code cannot
    # name a symbol any more, which must still be followed to the end
    current: dict[Optional[int], str] = {0: sk.fresh("fmt", accepting=True)}
    sk.edge(mark, "0", current[0])
    leaves: dict[int, str] = {}
    layout = _positions(code_length)
    for position, (kind, data_index) in enumerate(layout):
        last = position == len(layout) - 1
        nxt: dict[Optional[int], str] = {}

        def child(key: Optional[int]) -> str:
            if key not in nxt:
                nxt[key] = sk.fresh("fmt", accepting=True)
            return nxt[key]

        for key, state in current.items():
            if kind == "fixed":
                sk.edge(state, "0", all_state)
                if last:
                    if key is None:
                        sk.edge(state, "1", all_state)
                    else:
                        leaves[key] = sk.state(f"sym{key}")
                        sk.edge(state, "1", leaves[key])
                else:
                    sk.edge(state, "1", child(key))
            else:
                for bit in (0, 1):
                    if key is None:
                        sk.edge(state, str(bit), child(None))
                    else:
                        value = key * 2 + bit
                        shifted = value << (code_length - data_index - 1)
                        sk.edge(state, str(bit),
                                child(None if shifted >= symbol_count
                                      else value))
        current = nxt
    for leaf in leaves.values():
        sk.edge(leaf, "1", all_state)
        sk.edge(leaf, "0", blockzero)
    return leaves, {"all": all_state, "watch": watch, "mark": mark}


def format_checker_ponfa(symbol_count: int,
                         max_states: int = DEFAULT_STATE_LIMIT) -> Automaton:
    """Standalone automaton over {0, 1} accepting exactly the words
    that are not concatenations of valid blocks for a code table of
    the given size.  Exposed as a validation oracle."""
    if symbol_count < 2:
        raise ValueError("the code table needs at least two symbols")
    code_length = max(1, (symbol_count - 1).bit_length())
    sk = _Sketch(max_states)
    _add_malformed_detectors(sk, code_length, symbol_count)
    result = sk.build()
    assert classify(result).is_partially_ordered
    return result


def _add_prefix_checks(sk: _Sketch, expected: Word, all_state: str) -> None:
    """Fragments accepting words shorter than the mandatory starting
    snapshot and words deviating from it within that prefix."""
    previous = None
    for i in range(len(expected)):
        state = sk.state(f"short{i}", accepting=True, initial=(i == 0))
        if previous is not None:
            sk.any_edge(previous, state)
        previous = state
    previous = None
    for i, bit in enumerate(expected):
        state = sk.state(f"init{i}", initial=(i == 0))
        if previous is not None:
            sk.edge(previous, expected[i - 1], state)
        sk.edge(state, "1" if bit == "0" else "0", all_state)
        previous = state


def _walk_block(sk: _Sketch, encoding: _Encoding, label: str,
                finish) -> str:
    """States following one block after its 00 prefix; paths that stop
    being a valid encoding simply end.  ``finish(symbol_index)``
    supplies the state receiving the block's final bit, or None for no
    edge.  Returns the root state."""
    count = len(encoding.symbols)
    code_length = encoding.code_length
    current: dict[int, str] = {0: sk.fresh(label)}
    root = current[0]
    layout = _positions(code_length)
    for position, (kind, data_index) in enumerate(layout):
        last = position == len(layout) - 1
        nxt: dict[int, str] = {}

        def child(value: int) -> str:
            if value not in nxt:
                nxt[value] = sk.fresh(label)
            return nxt[value]

        for value, state in current.items():
            if kind == "fixed":
                if last:
                    target = finish(value)
                    if target is not None:
                        sk.edge(state, "1", target)
                else:
                    sk.edge(state, "1", child(value))
            else:
                for bit in (0, 1):
                    grown = value * 2 + bit
                    if (grown << (code_length - data_index - 1)) < count:
                        sk.edge(state, str(bit), child(grown))
        current = nxt
    return root


def _successor_table(machine: Dtm,
                     encoding: _Encoding) -> dict[tuple[int, int, int],
                                                  Optional[int]]:
    """For every three adjacent symbols, the symbol forced at the same
    cell in the next snapshot, or None when any continuation there is
    acceptable as a violation (the accepting state was reached, or the
    head would leave the window, so no next snapshot may exist)."""
    separator = encoding.index[SEPARATOR]
    table: dict[tuple[int, int, int], Optional[int]] = {}

    def has_accepting_mark(symbol: object) -> bool:
        return symbol != SEPARATOR and symbol[1] == machine.accepting

    for (i, left), (j, mid), (k, right) in itertools.product(
            enumerate(encoding.symbols), repeat=3):
        key = (i, j, k)
        if mid == SEPARATOR:
            table[key] = separator
            continue
        if any(has_accepting_mark(s) for s in (left, mid, right)):
            table[key] = None
            continue
        tape_symbol, state = mid
        if state is not None:
            target, written, move = machine.transitions[(state, tape_symbol)]
            if move == "S":
                table[key] = encoding.index[(written, target)]
            elif move == "L":
                table[key] = None if left == SEPARATOR \
                    else encoding.index[(written, None)]
            else:
                table[key] = None if right == SEPARATOR \
                    else encoding.index[(written, None)]
            continue
        arriving = None
        if left != SEPARATOR and left[1] is not None:
            target, _, move = machine.transitions[(left[1], left[0])]
            if move == "R":
                arriving = target
        if arriving is None and right != SEPARATOR and right[1] is not None:
            target, _, move = machine.transitions[(right[1], right[0])]
            if move == "L":
                arriving = target
        table[key] = encoding.index[(tape_symbol, arriving)]
    return table


def _add_transition_checks(sk: _Sketch, encoding: _Encoding, mark: str,
                           all_state: str,
                           successor: dict[tuple[int, int, int],
                                           Optional[int]],
                           space: int) -> None:
    """Fragments accepting words where three adjacent blocks are
    followed, one snapshot later, by anything other than the symbol
    the transition table forces there."""
    block_length = encoding.block_length
    entries: dict[Optional[int], str] = {}

    def entry_for(forced: Optional[int]) -> str:
        if forced not in entries:
            def finish(value: int) -> Optional[str]:
                if forced is not None and value == forced:
                    return None
                return all_state

            first = sk.fresh("tgt")
            second = sk.fresh("tgt")
            root = _walk_block(sk, encoding, "tgt", finish)
            sk.edge(first, "0", second)
            sk.edge(second, "0", root)
            head = first
            for _ in range((space - 1) * block_length):
                gap = sk.fresh("gap")
                sk.any_edge(gap, head)
                head = gap
            entries[forced] = head
        return entries[forced]

    def finish_third(first: int, second: int, third: int) -> str:
        return entry_for(successor[(first, second, third)])

    def finish_second(first: int, second: int) -> str:
        connector = sk.fresh("chk")
        connector2 = sk.fresh("chk")
        root = _walk_block(sk, encoding, "chk",
                           lambda third: finish_third(first, second, third))
        sk.edge(connector, "0", connector2)
        sk.edge(connector2, "0", root)
        return connector

    def finish_first(first: int) -> str:
        connector = sk.fresh("chk")
        connector2 = sk.fresh("chk")
        root = _walk_block(sk, encoding, "chk",
                           lambda second: finish_second(first, second))
        sk.edge(connector, "0", connector2)
        sk.edge(connector2, "0", root)
        return connector

    root = _walk_block(sk, encoding, "chk", finish_first)
    sk.edge(mark, "0", root)


def _add_ending_checks(sk: _Sketch, encoding: _Encoding, machine: Dtm,
                       leaves: dict[int, str], all_state: str) -> None:
    """Fragments accepting words that end inside a snapshot and words
    whose final snapshot still carries a non-accepting head."""
    block_length = encoding.block_length
    space = machine.space_bound
    separator_block = encoding.block(encoding.index[SEPARATOR])
    # ending 1..space blocks after a separator means the final
    # snapshot is incomplete
    previous = leaves[encoding.index[SEPARATOR]]
    for i in range(1, space * block_length + 1):
        state = sk.fresh("cut", accepting=(i % block_length == 0))
        sk.any_edge(previous, state)
        previous = state
    # a non-accepting head whose snapshot closes at the end of the
    # word means the run stopped without accepting
    head_leaves = [leaves[i] for i, symbol in enumerate(encoding.symbols)
                   if symbol != SEPARATOR and symbol[1] is not None
                   and symbol[1] != machine.accepting]
    if not head_leaves:
        return
    closing = [sk.fresh("halt") for _ in range(block_length - 1)]
    closing.append(sk.state("haltend", accepting=True))
    for i in range(block_length - 1):
        sk.edge(closing[i], separator_block[i + 1], closing[i + 1])
    for leaf in head_leaves:
        sk.edge(leaf, separator_block[0], closing[0])
    if space > 1:
        previous = None
        for i in range(1, (space - 1) * block_length + 1):
            state = sk.fresh("live")
            if previous is None:
                for leaf in head_leaves:
                    sk.any_edge(leaf, state)
            else:
                sk.any_edge(previous, state)
            if i % block_length == 0:
                sk.edge(state, separator_block[0], closing[0])
            previous = state


def _initial_snapshot_bits(machine: Dtm, word: Word,
                           encoding: _Encoding) -> Word:
    tape = list(word) + [machine.blank] * (machine.space_bound - len(word))
    cells: list[object] = [SEPARATOR]
    cells.extend((tape[j], machine.initial if j == 0 else None)
                 for j in range(machine.space_bound))
    cells.append(SEPARATOR)
    bits: list[str] = []
    for cell in cells:
        bits.extend(encoding.block(encoding.index[cell]))
    return tuple(bits)


def dtm_to_ponfa(machine: Dtm, word: Word,
                 max_states: int = DEFAULT_STATE_LIMIT) -> Automaton:
    """Binary partially ordered automaton accepting every word except
    the encoding of an accepting computation of the machine on the
    given input.  Universal exactly when the machine does not accept
    within its space window."""
    _check_input(machine, word)
    encoding = _Encoding(machine)
    sk = _Sketch(max_states)
    leaves, anchors = _add_malformed_detectors(sk, encoding.code_length,
                                               len(encoding.symbols))
    _add_prefix_checks(sk, _initial_snapshot_bits(machine, word, encoding),
                       anchors["all"])
    _add_transition_checks(sk, encoding, anchors["mark"], anchors["all"],
                           _successor_table(machine, encoding),
                           machine.space_bound)
    _add_ending_checks(sk, encoding, machine, leaves, anchors["all"])
    result = sk.build()
    assert classify(result).label is AutomatonKind.PO_NFA
    return result
