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

"""Weight-balanced grammars deriving every suffix or prefix of a string."""

from dataclasses import dataclass
from typing import Any, Tuple

from straightline.exceptions import EmptyInput, WeightOverflow
from straightline.grammar import (
    MAX_LENGTH,
    Sslp,
    Terminal,
    Variable,
    ceil_log2,
)


NEG_INF = float("-inf")


def _clog(weight):
    return ceil_log2(weight) if weight > 0 else NEG_INF


@dataclass(frozen=True)
class SuffixSslp:
    """A grammar deriving all suffixes (or prefixes) of a weighted string.

    Terminals of ``grammar`` are positions in ``letters``, so repeated
    letters are distinct terminals. ``variables[i]`` derives the suffix
    starting at position ``i`` or, for prefix grammars, the prefix ending
    at position ``i``.
    """

    grammar: Sslp
    letters: Tuple[Any, ...]
    weights: Tuple[int, ...]
    variables: Tuple[int, ...]

    def letter_of(self, terminal):
        return self.letters[terminal.code]


class _SuffixBuilder:
    def __init__(self):
        self.rules = []

    def new_var(self, rhs):
        self.rules.append(tuple(rhs))
        return Variable(len(self.rules) - 1)

    def suffixes(self, symbols, weights, lo, hi, total):
        """Return variables deriving ``symbols[j:hi]`` for ``lo <= j < hi``.

        ``total`` is the weight of ``symbols[lo:hi]``.
        """
        if hi - lo == 1:
            return [self.new_var((symbols[lo],))]

        # c is the first symbol whose removal drops the ceiling log weight
        target = _clog(total)
        prefix = 0
        i = lo
        while True:
            prefix += weights[i]
            if _clog(total - prefix) < target:
                break
            i += 1

        c = symbols[i]
        tail = []
        if i + 1 < hi:
            tail = self.suffixes(symbols, weights, i + 1, hi, total - prefix)
        c_tail = (c, tail[0]) if tail else (c,)
        v0 = self.new_var(c_tail)

        k = i - lo
        heads = []
        if k:
            blocks = []
            block_weights = []
            for j in range(lo, i - 1, 2):
                blocks.append(self.new_var((symbols[j], symbols[j + 1])))
                block_weights.append(weights[j] + weights[j + 1])
            if k % 2:
                blocks.append(symbols[i - 1])
                block_weights.append(weights[i - 1])
            us = self.suffixes(
                blocks,
                block_weights,
                0,
                len(blocks),
                prefix - weights[i],
            )
            for j in range(k):
                if j % 2 == 0:
                    rhs = (us[j // 2],) + c_tail
                elif j + 1 < k:
                    rhs = (symbols[lo + j], us[(j + 1) // 2]) + c_tail
                else:
                    rhs = (symbols[lo + j],) + c_tail
                heads.append(self.new_var(rhs))

        return heads + [v0] + tail


def _check_weights(letters, weights):
    if len(letters) == 0:
        raise EmptyInput("Cannot build a grammar for an empty string")
    if len(letters) != len(weights):
        raise ValueError(
            "Got {} letters but {} weights".format(len(letters), len(weights))
        )
    for position, weight in enumerate(weights):
        if weight < 1:
            raise ValueError(
                "Weight at position {} must be positive, got {}".format(
                    position, weight
                )
            )
    total = sum(weights)
    if total >= MAX_LENGTH:
        raise WeightOverflow(
            "Total weight {} does not fit in 63 bits".format(total)
        )
    return total


def build_suffix_sslp(letters, weights):
    """Build a grammar with a variable for every suffix of a string.

    For every suffix variable and every letter occurrence below it, the
    derivation path is at most ``3 + 2 log2(w(suffix)) - 2 log2(w(letter))``
    long, every right-hand side has at most four symbols and there are at
    most ``3n`` variables.

    Parameters
    ----------
    letters : sequence
        The letters; repeats are allowed.
    weights : sequence of int
        A positive weight for every letter.

    Raises
    ------
    EmptyInput
        If there are no letters.
    WeightOverflow
        If the total weight is 2**63 or more.
    """
    letters = tuple(letters)
    weights = tuple(weights)
    total = _check_weights(letters, weights)
    builder = _SuffixBuilder()
    symbols = [Terminal(position) for position in range(len(letters))]
    variables = builder.suffixes(symbols, weights, 0, len(symbols), total)
    grammar = Sslp(len(letters), builder.rules, variables[0].id)
    return SuffixSslp(
        grammar=grammar,
        letters=letters,
        weights=weights,
        variables=tuple(v.id for v in variables),
    )


def build_prefix_sslp(letters, weights):
    """Build a grammar with a variable for every prefix of a string.

    This is the suffix grammar of the reversed string with every
    right-hand side reversed; ``variables[i]`` derives the first
    ``i + 1`` letters. The start variable derives the whole string.
    """
    letters = tuple(letters)
    weights = tuple(weights)
    reversed_suffixes = build_suffix_sslp(letters[::-1], weights[::-1])
    last = len(letters) - 1

    def mirror(symbol):
        if isinstance(symbol, Terminal):
            return Terminal(last - symbol.code)
        return symbol

    rules = [
        tuple(mirror(s) for s in reversed(rhs))
        for rhs in reversed_suffixes.grammar.rules
    ]
    grammar = Sslp(len(letters), rules, reversed_suffixes.grammar.start)
    return SuffixSslp(
        grammar=grammar,
        letters=letters,
        weights=weights,
        variables=tuple(reversed(reversed_suffixes.variables)),
    )
