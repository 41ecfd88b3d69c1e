"""Bounded-length subsequence machinery.

``sub_k(w)`` is the set of all subsequences (scattered subwords) of
``w`` of length at most ``k``.  Two words are k-equivalent when these
sets agree, and prefix-k-equivalent when additionally every prefix of
one is k-equivalent to some prefix of the other.  The second relation
is the finer one; its classes are regular and each class contains a
unique shortest word, obtained by dropping letters that do not grow
the subsequence set.

Everything here is driven by the one-letter update

    sub_k(wa) = sub_k(w) united with { ua : u in sub_k(w), |u| < k }

which makes the subsequence set of each prefix cheap to maintain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import Automaton, Word


def _canonical(members: Iterable[Word]) -> tuple[Word, ...]:
    return tuple(sorted(set(members), key=lambda u: (len(u), u)))


@dataclass(frozen=True)
class SubseqSet:
    """Set of subsequences up to length ``k``, stored in a canonical
    length-then-lexicographic order so that equality is structural."""

    k: int
    members: tuple[Word, ...]

    def __contains__(self, word: Word) -> bool:
        return word in set(self.members)

    def extend(self, symbol: str) -> "SubseqSet":
        """Subsequence set after appending one letter."""
        grown = set(self.members)
        for u in self.members:
            if len(u) < self.k:
                grown.add(u + (symbol,))
        if len(grown) == len(self.members):
            return self
        return SubseqSet(self.k, _canonical(grown))


@dataclass(frozen=True)
class RChainSignature:
    """The distinct subsequence sets seen along the prefixes of a word,
    in order of first appearance.  The sets only ever grow, so the
    chain is strictly increasing."""

    k: int
    chain: tuple[SubseqSet, ...]


def sub_k(word: Sequence[str], k: int) -> SubseqSet:
    """Subsequence set of a word, built with the one-letter update."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    current = SubseqSet(k, ((),))
    for symbol in word:
        current = current.extend(symbol)
    return current


def sim_k(x: Sequence[str], y: Sequence[str], k: int) -> bool:
    """k-equivalence: equal subsequence sets up to length ``k``."""
    return sub_k(x, k) == sub_k(y, k)


def rk_signature(word: Sequence[str], k: int) -> RChainSignature:
    current = sub_k((), k)
    chain = [current]
    for symbol in word:
        grown = current.extend(symbol)
        if grown is not current and grown != current:
            chain.append(grown)
            current = grown
    return RChainSignature(k, tuple(chain))


def sim_rk(x: Sequence[str], y: Sequence[str], k: int) -> bool:
    """Prefix-k-equivalence, checked directly from the definition:
    every prefix of ``x`` is k-equivalent to some prefix of ``y`` and
    the other way round.  Equivalent to equality of signatures."""
    def prefix_sets(w: Sequence[str]) -> set[SubseqSet]:
        current = sub_k((), k)
        out = {current}
        for symbol in w:
            current = current.extend(symbol)
            out.add(current)
        return out

    return prefix_sets(x) == prefix_sets(y)


def is_minimal_representative(word: Sequence[str], k: int) -> bool:
    """True when every letter strictly grows the subsequence set.

    Such words are the unique shortest members of their
    prefix-k-equivalence classes.
    """
    current = sub_k((), k)
    for symbol in word:
        grown = current.extend(symbol)
        if grown == current:
            return False
        current = grown
    return True


def max_representative_length(k: int, alphabet_size: int) -> int:
    """Largest possible length of a minimal representative."""
    return math.comb(k + alphabet_size, k) - 1


def enumerate_minimal_representatives(alphabet: Sequence[str], k: int,
                                      max_len: int) -> Iterator[Word]:
    """Yield all minimal representatives up to ``max_len`` in
    length-then-lexicographic order (lexicographic by alphabet order).

    Minimal representatives are closed under prefixes, so the
    enumeration extends shorter ones letter by letter.
    """
    if len(set(alphabet)) != len(alphabet):
        raise ValueError("alphabet contains duplicate symbols")
    level: list[tuple[Word, SubseqSet]] = [((), sub_k((), k))]
    yield ()
    length = 0
    while level and length < max_len:
        nxt: list[tuple[Word, SubseqSet]] = []
        for word, current in level:
            for symbol in alphabet:
                grown = current.extend(symbol)
                if grown != current:
                    extended = word + (symbol,)
                    yield extended
                    nxt.append((extended, grown))
        level = nxt
        length += 1


def _prefix_name(prefix: Word) -> str:
    return "[" + " ".join(prefix) + "]"


def class_dfa(word: Sequence[str], k: int, alphabet: Sequence[str]) -> Automaton:
    """Deterministic automaton for the prefix-k-equivalence class of a
    minimal representative.

    States are the prefixes of the word.  The next letter of the word
    advances; letters that leave the subsequence set unchanged loop;
    everything else falls into a rejecting sink.  Minimality of the
    input makes the advancing letter and the looping letters disjoint,
    so the automaton is deterministic.
    """
    w = tuple(word)
    if not is_minimal_representative(w, k):
        raise ValueError("class_dfa requires a minimal representative")
    for symbol in w:
        if symbol not in set(alphabet):
            raise ValueError(f"word symbol {symbol!r} outside the alphabet")
    prefix_sets = [sub_k((), k)]
    for symbol in w:
        prefix_sets.append(prefix_sets[-1].extend(symbol))
    states = [_prefix_name(w[:i]) for i in range(len(w) + 1)]
    transitions: dict[tuple[str, str], frozenset[str]] = {}
    sink_needed = False
    sink = "sink"
    for i in range(len(w) + 1):
        for symbol in alphabet:
            if i < len(w) and symbol == w[i]:
                target = states[i + 1]
            elif prefix_sets[i].extend(symbol) == prefix_sets[i]:
                target = states[i]
            else:
                target = sink
                sink_needed = True
            transitions[(states[i], symbol)] = frozenset((target,))
    if sink_needed:
        states.append(sink)
        for symbol in alphabet:
            transitions[(sink, symbol)] = frozenset((sink,))
    return Automaton(alphabet, states, [states[0]],
                     [_prefix_name(w)], transitions)
