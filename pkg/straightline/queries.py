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

"""Query structures over grammar-compressed strings.

Every index works on a grammar in Chomsky normal form and answers its
queries by descending from the start variable, guided by the lengths of
the variables. On a balanced grammar each query therefore takes time
proportional to the depth of the grammar. Positions are 1-based.
"""

import numpy as np

from straightline.exceptions import (
    EmptyInput,
    NotFound,
    OutOfRange,
    UnknownTerminal,
)
from straightline.grammar import (
    Terminal,
    Variable,
    bottom_up_order,
    is_cnf,
    lengths,
    to_cnf,
)


MERSENNE_61 = 2 ** 61 - 1
DEFAULT_BASE = 1000003


class VisitCounter:
    """Counts the grammar nodes a query visits."""

    def __init__(self):
        self.visits = 0

    def visit(self):
        self.visits += 1


class _NullCounter:
    def visit(self):
        pass


_NULL_COUNTER = _NullCounter()


class AccessIndex:
    """Random access into the string derived by a grammar.

    Parameters
    ----------
    grammar : Sslp
        A validated grammar; it is converted to Chomsky normal form first
        if necessary.
    """

    def __init__(self, grammar):
        if not is_cnf(grammar):
            grammar = to_cnf(grammar)
        self.grammar = grammar
        self.lengths = lengths(grammar)
        self.order = bottom_up_order(grammar)

        count = grammar.var_count
        self.left = [-1] * count
        self.right = [-1] * count
        self.leaf = [-1] * count
        for variable, rhs in enumerate(grammar.rules):
            if isinstance(rhs[0], Terminal):
                self.leaf[variable] = rhs[0].code
            else:
                self.left[variable] = rhs[0].id
                self.right[variable] = rhs[1].id

    @property
    def start(self):
        return self.grammar.start

    @property
    def alphabet_size(self):
        return self.grammar.alphabet_size

    def __len__(self):
        return self.lengths[self.start]

    def _check_position(self, position, low=1, high=None):
        high = len(self) if high is None else high
        if not low <= position <= high:
            raise OutOfRange(position, low, high)

    def _check_terminal(self, code):
        if not 0 <= code < self.alphabet_size:
            raise UnknownTerminal(
                "Terminal {} is not in the alphabet of size {}".format(
                    code, self.alphabet_size
                )
            )

    def _path_to(self, position, counter=_NULL_COUNTER):
        """Yield ``(node, offset, went_left)`` down to ``position``.

        ``offset`` is the number of positions before the node's string.
        The last item is the leaf, with ``went_left`` set to None.
        """
        node = self.start
        offset = 0
        while True:
            counter.visit()
            if self.leaf[node] >= 0:
                yield node, offset, None
                return
            left = self.left[node]
            if position - offset <= self.lengths[left]:
                yield node, offset, True
                node = left
            else:
                yield node, offset, False
                offset += self.lengths[left]
                node = self.right[node]

    def access(self, position, counter=_NULL_COUNTER):
        """Return the terminal code at ``position``.

        Raises
        ------
        OutOfRange
            Unless ``1 <= position <= len(self)``.
        """
        self._check_position(position)
        for node, _, _ in self._path_to(position, counter):
            pass
        return self.leaf[node]


class OccIndex(AccessIndex):
    """Rank, select and labelled successor queries.

    Every variable stores the set of terminals occurring in its string as
    an integer bitset. With ``with_counts`` it also stores the number of
    occurrences of every terminal, which rank and select need.
    """

    def __init__(self, grammar, with_counts=True):
        super().__init__(grammar)
        count = self.grammar.var_count
        self.presence = [0] * count
        self.counts = None
        if with_counts:
            self.counts = np.zeros((count, self.alphabet_size), np.int64)
        for node in self.order:
            if self.leaf[node] >= 0:
                self.presence[node] = 1 << self.leaf[node]
                if with_counts:
                    self.counts[node, self.leaf[node]] = 1
            else:
                left, right = self.left[node], self.right[node]
                presence = self.presence
                presence[node] = presence[left] | presence[right]
                if with_counts:
                    self.counts[node] = self.counts[left] + self.counts[right]

    def _require_counts(self):
        if self.counts is None:
            raise ValueError("Index was built without occurrence counts")

    def contains(self, node, code):
        return bool(self.presence[node] >> code & 1)

    def rank(self, code, position, counter=_NULL_COUNTER):
        """Count the occurrences of ``code`` in the first ``position``
        letters."""
        self._require_counts()
        self._check_terminal(code)
        self._check_position(position, low=0)
        if position == 0:
            return 0
        total = 0
        for node, _, went_left in self._path_to(position, counter):
            if went_left is False:
                total += int(self.counts[self.left[node], code])
            elif went_left is None and self.leaf[node] == code:
                total += 1
        return total

    def select(self, code, occurrence, counter=_NULL_COUNTER):
        """Return the position of the ``occurrence``-th ``code``.

        Raises
        ------
        NotFound
            If ``code`` occurs fewer than ``occurrence`` times.
        """
        self._require_counts()
        self._check_terminal(code)
        if occurrence < 1:
            raise ValueError(
                "Occurrence must be positive, got {}".format(occurrence)
            )
        available = int(self.counts[self.start, code])
        if occurrence > available:
            raise NotFound(
                "Terminal {} occurs {} times, not {}".format(
                    code, available, occurrence
                ),
                occurrence,
            )
        node = self.start
        offset = 0
        remaining = occurrence
        while self.leaf[node] < 0:
            counter.visit()
            left = self.left[node]
            here = int(self.counts[left, code])
            if remaining <= here:
                node = left
            else:
                remaining -= here
                offset += self.lengths[left]
                node = self.right[node]
        counter.visit()
        return offset + 1

    def _leftmost(self, node, offset, code, counter):
        while self.leaf[node] < 0:
            counter.visit()
            left = self.left[node]
            if self.contains(left, code):
                node = left
            else:
                offset += self.lengths[left]
                node = self.right[node]
        counter.visit()
        return offset + 1

    def _rightmost(self, node, offset, code, counter):
        while self.leaf[node] < 0:
            counter.visit()
            right = self.right[node]
            if self.contains(right, code):
                offset += self.lengths[self.left[node]]
                node = right
            else:
                node = self.left[node]
        counter.visit()
        return offset + 1

    def successor(self, position, code, counter=_NULL_COUNTER):
        """Return the smallest ``j > position`` holding ``code``.

        Raises
        ------
        NotFound
            If ``code`` does not occur after ``position``.
        """
        self._check_terminal(code)
        self._check_position(position, low=0)
        target = position + 1
        if target > len(self) or not self.contains(self.start, code):
            raise NotFound(
                "Terminal {} does not occur after {}".format(code, position),
                position,
            )
        path = list(self._path_to(target, counter))
        leaf, _, _ = path[-1]
        if self.leaf[leaf] == code:
            return target
        for node, offset, went_left in reversed(path[:-1]):
            right = self.right[node]
            if went_left and self.contains(right, code):
                shifted = offset + self.lengths[self.left[node]]
                return self._leftmost(right, shifted, code, counter)
        raise NotFound(
            "Terminal {} does not occur after {}".format(code, position),
            position,
        )

    def predecessor(self, position, code, counter=_NULL_COUNTER):
        """Return the largest ``j < position`` holding ``code``.

        ``position`` may be ``len(self) + 1`` to search the whole string.

        Raises
        ------
        NotFound
            If ``code`` does not occur before ``position``.
        """
        self._check_terminal(code)
        self._check_position(position, low=1, high=len(self) + 1)
        target = position - 1
        if target < 1 or not self.contains(self.start, code):
            raise NotFound(
                "Terminal {} does not occur before {}".format(code, position),
                position,
            )
        path = list(self._path_to(target, counter))
        leaf, _, _ = path[-1]
        if self.leaf[leaf] == code:
            return target
        for node, offset, went_left in reversed(path[:-1]):
            left = self.left[node]
            if went_left is False and self.contains(left, code):
                return self._rightmost(left, offset, code, counter)
        raise NotFound(
            "Terminal {} does not occur before {}".format(code, position),
            position,
        )

    def minimal_subsequence_occurrences(self, pattern):
        """Find all minimal windows containing ``pattern`` as a subsequence.

        A window ``(i, j)`` is minimal when the pattern is a subsequence of
        the letters ``i..j`` but neither of ``i+1..j`` nor of ``i..j-1``.
        Windows are returned in increasing order of ``i``.
        """
        pattern = list(pattern)
        if not pattern:
            raise EmptyInput("Pattern must not be empty")
        for code in pattern:
            self._check_terminal(code)

        windows = []
        try:
            start = self.successor(0, pattern[0])
            while True:
                end = start
                for code in pattern[1:]:
                    end = self.successor(end, code)
                begin = end
                for code in reversed(pattern[:-1]):
                    begin = self.predecessor(begin, code)
                windows.append((begin, end))
                start = self.successor(begin, pattern[0])
        except NotFound:
            pass
        return windows


def fingerprint_of(codes, base=DEFAULT_BASE, modulus=MERSENNE_61):
    """Karp-Rabin fingerprint of a sequence of terminal codes.

    Letters are hashed as ``code + 1`` so that no letter hashes like the
    empty string.
    """
    value = 0
    for code in codes:
        value = (value * base + code + 1) % modulus
    return value


def grammar_fingerprint(grammar, base=DEFAULT_BASE, modulus=MERSENNE_61):
    """Fingerprint of the string derived by any grammar, without expanding
    it."""
    fingerprints = [0] * grammar.var_count
    powers = [1] * grammar.var_count
    for variable in bottom_up_order(grammar):
        value, power = 0, 1
        for symbol in grammar.rules[variable]:
            if isinstance(symbol, Variable):
                value = (
                    value * powers[symbol.id] + fingerprints[symbol.id]
                ) % modulus
                power = power * powers[symbol.id] % modulus
            else:
                value = (value * base + symbol.code + 1) % modulus
                power = power * base % modulus
        fingerprints[variable], powers[variable] = value, power
    return fingerprints[grammar.start]


class FingerprintIndex(AccessIndex):
    """Karp-Rabin fingerprints of arbitrary factors.

    Each variable stores the fingerprint of its string and ``base`` raised
    to its length, both modulo ``modulus``.
    """

    def __init__(self, grammar, base=DEFAULT_BASE, modulus=MERSENNE_61):
        super().__init__(grammar)
        if not 1 < base < modulus:
            raise ValueError(
                "Base must lie strictly between 1 and the modulus, "
                "got {}".format(base)
            )
        self.base = base
        self.modulus = modulus
        count = self.grammar.var_count
        self.fingerprints = [0] * count
        self.powers = [1] * count
        for node in self.order:
            if self.leaf[node] >= 0:
                self.fingerprints[node] = (self.leaf[node] + 1) % modulus
                self.powers[node] = base % modulus
            else:
                left, right = self.left[node], self.right[node]
                self.fingerprints[node] = (
                    self.fingerprints[left] * self.powers[right]
                    + self.fingerprints[right]
                ) % modulus
                self.powers[node] = (
                    self.powers[left] * self.powers[right] % modulus
                )

    def prefix_fingerprint(self, position, counter=_NULL_COUNTER):
        """Fingerprint of the first ``position`` letters."""
        self._check_position(position, low=0)
        if position == 0:
            return 0
        value = 0
        for node, _, went_left in self._path_to(position, counter):
            if went_left is False:
                left = self.left[node]
                value = (
                    value * self.powers[left] + self.fingerprints[left]
                ) % self.modulus
            elif went_left is None:
                value = (
                    value * self.base + self.fingerprints[node]
                ) % self.modulus
        return value

    def fingerprint(self, i, j, counter=_NULL_COUNTER):
        """Fingerprint of the letters ``i..j``."""
        self._check_position(i)
        self._check_position(j, low=i)
        upto_j = self.prefix_fingerprint(j, counter)
        before_i = self.prefix_fingerprint(i - 1, counter)
        shift = pow(self.base, j - i + 1, self.modulus)
        return (upto_j - before_i * shift) % self.modulus


class RmqIndex(AccessIndex):
    """Range minimum queries.

    Every variable stores the minimum value in its string and the offset
    of its leftmost occurrence. Terminal values default to the terminal
    codes; ``values[code]`` overrides them.
    """

    def __init__(self, grammar, values=None):
        super().__init__(grammar)
        if values is None:
            values = range(self.alphabet_size)
        self.values = list(values)
        if len(self.values) < self.alphabet_size:
            raise ValueError(
                "Expected {} terminal values, got {}".format(
                    self.alphabet_size, len(self.values)
                )
            )
        count = self.grammar.var_count
        self.minimum = [None] * count
        self.argmin = [0] * count
        for node in self.order:
            if self.leaf[node] >= 0:
                self.minimum[node] = self.values[self.leaf[node]]
                self.argmin[node] = 1
            else:
                left, right = self.left[node], self.right[node]
                if self.minimum[left] <= self.minimum[right]:
                    self.minimum[node] = self.minimum[left]
                    self.argmin[node] = self.argmin[left]
                else:
                    self.minimum[node] = self.minimum[right]
                    self.argmin[node] = (
                        self.lengths[left] + self.argmin[right]
                    )

    def _whole(self, node, offset):
        return self.minimum[node], offset + self.argmin[node]

    def _suffix_min(self, node, offset, i, counter):
        # minimum of the node's letters from i to its end
        best = None
        while i != 1:
            counter.visit()
            left = self.left[node]
            if i > self.lengths[left]:
                i -= self.lengths[left]
                offset += self.lengths[left]
                node = self.right[node]
            else:
                right = self.right[node]
                candidate = self._whole(
                    right, offset + self.lengths[left]
                )
                best = candidate if best is None else min(best, candidate)
                node = left
        candidate = self._whole(node, offset)
        return candidate if best is None else min(candidate, best)

    def _prefix_min(self, node, offset, j, counter):
        # minimum of the node's letters from 1 to j
        best = None
        while j != self.lengths[node]:
            counter.visit()
            left = self.left[node]
            if j <= self.lengths[left]:
                node = left
            else:
                candidate = self._whole(left, offset)
                best = candidate if best is None else min(best, candidate)
                j -= self.lengths[left]
                offset += self.lengths[left]
                node = self.right[node]
        candidate = self._whole(node, offset)
        return candidate if best is None else min(best, candidate)

    def rmq(self, i, j, counter=_NULL_COUNTER):
        """Return ``(position, value)`` of the leftmost minimum in ``i..j``.

        The query follows the four cases of the recursive range minimum
        algorithm: a range covering the whole variable uses the stored
        minimum, a range inside one child moves to that child, and a range
        straddling both children splits into a suffix query on the left
        child and a prefix query on the right child.
        """
        self._check_position(i)
        self._check_position(j, low=i)
        node = self.start
        offset = 0
        while True:
            counter.visit()
            if i == 1 and j == self.lengths[node]:
                value, position = self._whole(node, offset)
                return position, value
            left = self.left[node]
            left_length = self.lengths[left]
            if j <= left_length:
                node = left
            elif i > left_length:
                i -= left_length
                j -= left_length
                offset += left_length
                node = self.right[node]
            else:
                best = min(
                    self._suffix_min(left, offset, i, counter),
                    self._prefix_min(
                        self.right[node],
                        offset + left_length,
                        j - left_length,
                        counter,
                    ),
                )
                return best[1], best[0]
