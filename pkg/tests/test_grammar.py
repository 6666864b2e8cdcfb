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

import pytest

from straightline.exceptions import (
    CapExceeded,
    CyclicGrammar,
    DanglingReference,
    EmptyString,
    LengthOverflow,
)
from straightline.grammar import (
    Sslp,
    Terminal,
    Variable,
    ceil_log2,
    expand,
    floor_log2,
    is_cnf,
    lengths,
    max_paths,
    reachable,
    stats,
    strip_unreachable,
    to_cnf,
    validate,
)
from tests.fixtures import (
    ABAB,
    EXAMPLE_GRAMMAR,
    EXAMPLE_LENGTHS,
    SEEDS,
    comb_grammar,
    doubling_grammar,
    random_grammar,
)


@pytest.mark.parametrize(
    "value, floor, ceil",
    [(1, 0, 0), (2, 1, 1), (3, 1, 2), (4, 2, 2), (62, 5, 6), (64, 6, 6)],
)
def test_log2(value, floor, ceil):
    assert floor_log2(value) == floor
    assert ceil_log2(value) == ceil


def test_validate_accepts_example():
    validate(EXAMPLE_GRAMMAR)


def test_validate_cycle():
    grammar = Sslp(1, [(Variable(1),), (Variable(0), Terminal(0))], 0)
    with pytest.raises(CyclicGrammar) as excinfo:
        validate(grammar)
    assert set(excinfo.value.cycle) == {0, 1}


def test_validate_self_loop():
    grammar = Sslp(1, [(Variable(0),)], 0)
    with pytest.raises(CyclicGrammar):
        validate(grammar)


@pytest.mark.parametrize(
    "grammar, message",
    [
        (Sslp(1, [(Terminal(0),)], 3), "Start variable 3"),
        (Sslp(1, [(Variable(4),)], 0), "undefined variable X4"),
        (Sslp(2, [(Terminal(2),)], 0), "outside the alphabet"),
        (Sslp(0, [(Terminal(0),)], 0), "Alphabet size must be positive"),
    ],
)
def test_validate_dangling(grammar, message):
    with pytest.raises(DanglingReference, match=message):
        validate(grammar)


def test_lengths_example():
    result = lengths(EXAMPLE_GRAMMAR)
    for variable, length in EXAMPLE_LENGTHS.items():
        assert result[variable] == length


def test_lengths_overflow():
    with pytest.raises(LengthOverflow):
        lengths(doubling_grammar(63))


def test_lengths_just_below_overflow():
    assert lengths(doubling_grammar(62))[0] == 2 ** 62


def test_expand_abab():
    assert expand(ABAB, cap=10) == [0, 1, 0, 1]


def test_expand_variable():
    assert expand(ABAB, cap=10, variable=1) == [0, 1]


def test_expand_cap_exceeded():
    with pytest.raises(CapExceeded) as excinfo:
        expand(doubling_grammar(10), cap=1000)
    assert excinfo.value.size == 1024
    assert excinfo.value.cap == 1000


def test_expand_invalid_cap():
    with pytest.raises(ValueError, match="cap must be positive"):
        expand(ABAB, cap=0)


def test_expand_empty_rhs():
    grammar = Sslp(1, [(Variable(1), Terminal(0)), ()], 0)
    assert expand(grammar, cap=5) == [0]


def test_reachable():
    grammar = Sslp(1, [(Variable(2),), (Terminal(0),), (Terminal(0),)], 0)
    assert reachable(grammar) == {0, 2}


def test_strip_unreachable_renumbers():
    grammar = Sslp(
        2,
        [(Terminal(1),), (Variable(3), Variable(0)), (), (Terminal(0),)],
        1,
    )
    stripped = strip_unreachable(grammar)
    assert stripped.rules == (
        (Terminal(1),),
        (Variable(2), Variable(0)),
        (Terminal(0),),
    )
    assert stripped.start == 1
    assert expand(stripped, 10) == expand(grammar, 10)


def test_is_cnf():
    assert is_cnf(EXAMPLE_GRAMMAR)
    assert is_cnf(ABAB)
    assert not is_cnf(comb_grammar(4))


def test_to_cnf_empty_string():
    grammar = Sslp(1, [(Variable(1), Variable(1)), ()], 0)
    with pytest.raises(EmptyString):
        to_cnf(grammar)


@pytest.mark.parametrize("seed", SEEDS)
def test_to_cnf_preserves_string(seed):
    grammar = random_grammar(seed)
    cnf = to_cnf(grammar)
    assert is_cnf(cnf)
    assert expand(cnf, 10 ** 6) == expand(grammar, 10 ** 6)


def test_to_cnf_shares_terminal_variables():
    grammar = Sslp(1, [(Terminal(0), Terminal(0), Terminal(0))], 0)
    cnf = to_cnf(grammar)
    terminal_rules = [rhs for rhs in cnf.rules if len(rhs) == 1]
    assert terminal_rules == [(Terminal(0),)]
    assert expand(cnf, 10) == [0, 0, 0]


def test_max_paths():
    assert max_paths(doubling_grammar(5))[0] == 6
    assert max_paths(comb_grammar(7))[0] == 7


def test_stats_example():
    result = stats(EXAMPLE_GRAMMAR)
    assert result.size == 2 * 13 + 2
    assert result.length == 62
    assert result.max_path == 14
    assert result.depth == 14


def test_stats_wide_rule():
    grammar = Sslp(1, [(Terminal(0),) * 5], 0)
    result = stats(grammar)
    assert result.size == 5
    assert result.max_path == 1
    assert result.depth == 3
    assert result.length == 5
