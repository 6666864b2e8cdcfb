# Copyright 2026 The straightline authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""A small global-pairing compressor producing test grammars.

The compressor keeps the sequence as a doubly linked list over positions and
indexes every adjacent pair by the positions where it starts. Pairs sit in
buckets keyed by their number of occurrences, so the most frequent pair is
found without rescanning, and a replacement only touches the pairs on either
side of it. Every replacement shortens the sequence, which bounds the total
work by a constant times the input length.
"""

import logging

from straightline.exceptions import EmptyInput
from straightline.grammar import Sslp, Terminal, Variable


logger = logging.getLogger(__name__)

BYTE_ALPHABET = 256

_NONE = -1


class _PairQueue:
    """Occurrences of adjacent pairs, bucketed by their count.

    Positions of a pair are kept in insertion order, which is left to right:
    a pair only gains occurrences in the round that creates its newest
    symbol, and rounds scan from left to right.
    """

    def __init__(self):
        self.positions = {}
        self._buckets = {}
        self._top = 0

    def _move(self, pair, old, new):
        if old:
            del self._buckets[old][pair]
        if new:
            self._buckets.setdefault(new, {})[pair] = None
            self._top = max(self._top, new)

    def add(self, pair, position):
        positions = self.positions.setdefault(pair, {})
        count = len(positions)
        positions[position] = None
        self._move(pair, count, count + 1)

    def discard(self, pair, position):
        positions = self.positions.get(pair)
        if positions is None or position not in positions:
            return
        count = len(positions)
        del positions[position]
        if not positions:
            del self.positions[pair]
        self._move(pair, count, count - 1)

    def peek(self, minimum=1):
        """Return the most frequent pair and its count, or ``(None, 0)``.

        Ties go to the pair that reached the count first.
        """
        while self._top >= minimum and not self._buckets.get(self._top):
            self._top -= 1
        if self._top < max(minimum, 1):
            return None, 0
        return next(iter(self._buckets[self._top])), self._top

    def pop(self, minimum=2):
        """Remove the most frequent pair, returning it and its positions."""
        pair, count = self.peek(minimum)
        if pair is None:
            return None, []
        self._move(pair, count, 0)
        return pair, list(self.positions.pop(pair))


class _PairSequence:
    def __init__(self, codes):
        self.symbols = list(codes)
        size = len(self.symbols)
        self.following = list(range(1, size + 1))
        self.preceding = list(range(-1, size - 1))
        if size:
            self.following[-1] = _NONE
        self.length = size
        self.queue = _PairQueue()
        for position in range(size - 1):
            self._record(position)

    def _pair_at(self, position):
        after = self.following[position]
        if after == _NONE:
            return None
        return self.symbols[position], self.symbols[after]

    def _record(self, position):
        # inside runs such as ``aaa`` only every other pair is counted
        pair = self._pair_at(position)
        if pair is None:
            return
        before = self.preceding[position]
        if (
            pair[0] == pair[1]
            and before != _NONE
            and before in self.queue.positions.get(pair, ())
        ):
            return
        self.queue.add(pair, position)

    def _forget(self, position):
        if position == _NONE:
            return
        pair = self._pair_at(position)
        if pair is not None:
            self.queue.discard(pair, position)

    def replace(self, pair, positions, symbol):
        """Replace the occurrences of ``pair`` starting at ``positions``.

        Occurrences that an earlier replacement in the same round consumed
        are skipped. Returns the number of replacements made.
        """
        replaced = 0
        symbols = self.symbols
        for position in positions:
            second = self.following[position]
            if (
                symbols[position] != pair[0]
                or second == _NONE
                or symbols[second] != pair[1]
            ):
                continue
            before = self.preceding[position]
            after = self.following[second]
            self._forget(before)
            self._forget(second)
            symbols[position] = symbol
            symbols[second] = None
            self.following[position] = after
            if after != _NONE:
                self.preceding[after] = position
            replaced += 1
            if before != _NONE:
                self._record(before)
            self._record(position)
        self.length -= replaced
        return replaced

    def codes(self):
        position = 0 if self.symbols else _NONE
        while position != _NONE:
            yield self.symbols[position]
            position = self.following[position]


def most_frequent_pair(sequence):
    """Return the most frequent adjacent pair and its count.

    Overlapping occurrences inside runs such as ``aaa`` count once. Ties go
    to the pair that reached the count first.
    """
    return _PairSequence(sequence).queue.peek()


def compress(codes, alphabet_size=BYTE_ALPHABET):
    """Build a grammar for ``codes`` by repeatedly replacing the most
    frequent adjacent pair with a fresh variable until no pair repeats.

    Raises
    ------
    EmptyInput
        If ``codes`` is empty.
    """
    codes = list(codes)
    if not codes:
        raise EmptyInput("Cannot compress an empty input")
    for code in codes:
        if not 0 <= code < alphabet_size:
            raise ValueError(
                "Code {} is outside the alphabet of size {}".format(
                    code, alphabet_size
                )
            )
    # symbols below alphabet_size are terminals, the rest variables
    sequence = _PairSequence(codes)
    pairs = []
    while True:
        pair, positions = sequence.queue.pop()
        if pair is None:
            break
        symbol = alphabet_size + len(pairs)
        pairs.append(pair)
        sequence.replace(pair, positions, symbol)
        logger.debug(
            "Round %d: replaced pair %s seen %d times, %d symbols left",
            len(pairs),
            pair,
            len(positions),
            sequence.length,
        )

    def to_symbol(value):
        if value < alphabet_size:
            return Terminal(value)
        return Variable(value - alphabet_size)

    rules = [tuple(to_symbol(v) for v in pair) for pair in pairs]
    rules.append(tuple(to_symbol(v) for v in sequence.codes()))
    return Sslp(alphabet_size, rules, len(rules) - 1)


def compress_bytes(data):
    return compress(bytes(data), BYTE_ALPHABET)
