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

import math
import random

import pytest

from straightline.exceptions import EmptyInput, WeightOverflow
from straightline.grammar import Terminal, ceil_log2, expand, validate
from straightline.suffix import build_prefix_sslp, build_suffix_sslp
from tests.fixtures import WEIGHT_SEEDS


def leaf_depths(grammar, variable):
    """Yield ``(position, depth)`` for every leaf below ``variable``."""
    stack = [(variable, 1)]
    while stack:
        node, depth = stack.pop()
        for symbol in grammar.rules[node]:
            if isinstance(symbol, Terminal):
                yield symbol.code, depth
            else:
                stack.append((symbol.id, depth + 1))


def random_weights(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 60)
    top = rng.choice([1, 10, 2 ** 20, 2 ** 40])
    return [rng.randint(1, top) for _ in range(n)]


def check_structure(result):
    n = len(result.letters)
    validate(result.grammar)
    assert result.grammar.var_count <= 3 * n
    assert all(1 <= len(rhs) <= 4 for rhs in result.grammar.rules)
    assert len(result.variables) == n


def check_path_bound(result, covered):
    weights = result.weights
    for i, variable in enumerate(result.variables):
        total = sum(weights[j] for j in covered(i))
        for position, depth in leaf_depths(result.grammar, variable):
            letter = math.log2(weights[position])
            assert depth <= 3 + 2 * (math.log2(total) - letter) + 1e-9
            assert depth <= 1 + 2 * (ceil_log2(total) - letter) + 1e-9


def test_single_letter():
    result = build_suffix_sslp(["a"], [1])
    assert result.grammar.rules == ((Terminal(0),),)
    assert result.variables == (0,)
    assert result.letter_of(Terminal(0)) == "a"


def test_uniform_seven():
    letters = list("abcdefg")
    result = build_suffix_sslp(letters, [1] * 7)
    check_structure(result)
    for i, variable in enumerate(result.variables):
        positions = expand(result.grammar, 100, variable)
        assert positions == list(range(i, 7))
        assert "".join(result.letters[p] for p in positions) == "abcdefg"[i:]


def test_heavy_last_letter():
    weights = [1] * 8 + [55]
    result = build_suffix_sslp(list("aaaaaaaab"), weights)
    check_structure(result)
    check_path_bound(result, lambda i: range(i, 9))


def test_repeated_letters_are_distinct_terminals():
    result = build_suffix_sslp(["x", "x", "x"], [1, 2, 3])
    assert result.grammar.alphabet_size == 3
    assert expand(result.grammar, 10) == [0, 1, 2]


@pytest.mark.parametrize("seed", WEIGHT_SEEDS)
def test_random_suffixes(seed):
    weights = random_weights(seed)
    n = len(weights)
    result = build_suffix_sslp(range(n), weights)
    check_structure(result)
    for i, variable in enumerate(result.variables):
        assert expand(result.grammar, 1000, variable) == list(range(i, n))
    check_path_bound(result, lambda i: range(i, n))


@pytest.mark.parametrize("seed", WEIGHT_SEEDS)
def test_random_prefixes(seed):
    weights = random_weights(seed)
    n = len(weights)
    result = build_prefix_sslp(range(n), weights)
    check_structure(result)
    for i, variable in enumerate(result.variables):
        assert expand(result.grammar, 1000, variable) == list(range(i + 1))
    assert result.grammar.start == result.variables[-1]
    check_path_bound(result, lambda i: range(i + 1))


def test_prefix_single_letter():
    result = build_prefix_sslp(["a"], [4])
    assert result.grammar.rules == ((Terminal(0),),)
    assert result.variables == (0,)


def test_empty_input():
    with pytest.raises(EmptyInput):
        build_suffix_sslp([], [])


def test_weight_count_mismatch():
    with pytest.raises(ValueError, match="2 letters but 1 weights"):
        build_suffix_sslp("ab", [1])


@pytest.mark.parametrize("weight", [0, -3])
def test_non_positive_weight(weight):
    with pytest.raises(ValueError, match="must be positive"):
        build_suffix_sslp("ab", [1, weight])


def test_weight_overflow():
    with pytest.raises(WeightOverflow):
        build_suffix_sslp("ab", [2 ** 62, 2 ** 62])
