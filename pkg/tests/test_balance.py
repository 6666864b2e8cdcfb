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

import straightline.balance as balance_module
from straightline.balance import (
    MODULUS_BITS,
    balance,
    is_prime,
    path_siblings,
    random_prime,
    verify_equivalence,
)
from straightline.centroid import decompose, multidag_from_sslp
from straightline.exceptions import EmptyString
from straightline.grammar import (
    Sslp,
    Terminal,
    Variable,
    expand,
    max_paths,
    validate,
)
from tests.fixtures import (
    ABAB,
    EXAMPLE_GRAMMAR,
    EXAMPLE_LEFT_SIBLINGS,
    EXAMPLE_RIGHT_SIBLINGS,
    GRAMMAR_SEEDS,
    SEEDS,
    comb_grammar,
    deep_random_grammar,
    doubling_grammar,
    random_grammar,
    right_comb_grammar,
)


def check_balanced(grammar, balanced, report):
    validate(balanced)
    n = report.n
    assert expand(balanced, n) == expand(grammar, n)
    assert all(len(rhs) <= 4 for rhs in balanced.rules)
    assert report.output_max_path == max_paths(balanced)[balanced.start]
    assert report.output_max_path <= 6 * math.log2(n) + 12
    assert report.output_size <= 32 * report.cnf_size


def test_path_siblings_example():
    result = decompose(multidag_from_sslp(EXAMPLE_GRAMMAR))
    path = next(path for path in result.paths if len(path))
    left, right = path_siblings(EXAMPLE_GRAMMAR, path)
    assert left == EXAMPLE_LEFT_SIBLINGS
    assert right == EXAMPLE_RIGHT_SIBLINGS


def test_balance_example():
    balanced, report = balance(EXAMPLE_GRAMMAR)
    check_balanced(EXAMPLE_GRAMMAR, balanced, report)
    assert report.n == 62
    assert report.input_size == 28
    assert report.cnf_size == 28
    assert report.input_max_path == 14
    assert report.size_ratio == report.output_size / 28


def test_balance_keeps_path_bottom():
    balanced, _ = balance(EXAMPLE_GRAMMAR)
    # the bottom of the centroid path keeps its rule
    assert balanced.rules[8] == (Variable(9), Variable(9))
    assert Variable(8) in balanced.rules[0]


def test_balance_single_terminal():
    grammar = Sslp(1, [(Terminal(0),)], 0)
    balanced, report = balance(grammar)
    assert expand(balanced, 1) == [0]
    assert report.n == 1
    assert report.output_max_path == 1


def test_balance_abab():
    balanced, report = balance(ABAB)
    check_balanced(ABAB, balanced, report)


@pytest.mark.parametrize("length", [2, 10, 100, 1000])
def test_balance_comb(length):
    grammar = comb_grammar(length)
    balanced, report = balance(grammar)
    check_balanced(grammar, balanced, report)
    assert report.input_max_path == length
    if length == 1000:
        assert report.output_max_path < length // 4


def test_balance_doubling():
    grammar = doubling_grammar(12)
    balanced, report = balance(grammar)
    check_balanced(grammar, balanced, report)
    assert report.n == 4096


@pytest.mark.parametrize("seed", SEEDS)
def test_balance_random(seed):
    grammar = random_grammar(seed, variables=12)
    balanced, report = balance(grammar)
    check_balanced(grammar, balanced, report)
    assert report.input_size == sum(len(rhs) for rhs in grammar.rules)


@pytest.mark.parametrize("comb", [comb_grammar, right_comb_grammar])
@pytest.mark.parametrize("length", [10 ** 5, 10 ** 6])
def test_balance_long_combs(comb, length):
    grammar = comb(length)
    balanced, report = balance(grammar)
    check_balanced(grammar, balanced, report)
    assert report.n == length
    assert report.input_max_path == length


@pytest.mark.parametrize("seed", GRAMMAR_SEEDS)
def test_balance_deep_random(seed):
    grammar = deep_random_grammar(seed, length=1000 * (1 + seed % 10))
    balanced, report = balance(grammar)
    check_balanced(grammar, balanced, report)
    assert report.input_max_path >= grammar.var_count // 2


@pytest.mark.parametrize("seed", range(5))
def test_balance_deep_random_long(seed):
    grammar = deep_random_grammar(seed, length=10 ** 5)
    balanced, report = balance(grammar)
    check_balanced(grammar, balanced, report)
    assert report.input_max_path > 1000


def test_balance_empty_string():
    grammar = Sslp(1, [(Variable(1),), ()], 0)
    with pytest.raises(EmptyString):
        balance(grammar)


def test_balance_logs_summary(caplog):
    with caplog.at_level("INFO", logger="straightline.balance"):
        balance(ABAB)
    assert "Balanced grammar of length 4" in caplog.text


def test_verify_equivalence_exact():
    balanced, _ = balance(EXAMPLE_GRAMMAR)
    result = verify_equivalence(EXAMPLE_GRAMMAR, balanced, cap=1000)
    assert result.equal
    assert result.method == "exact"


def test_verify_equivalence_exact_mismatch():
    other = Sslp(
        2, [(Variable(1), Variable(1)), (Terminal(1), Terminal(0))], 0
    )
    result = verify_equivalence(ABAB, other, cap=10)
    assert not result.equal
    assert result.method == "exact"


def test_verify_equivalence_fingerprint():
    grammar = doubling_grammar(40)
    balanced, _ = balance(grammar)
    result = verify_equivalence(
        grammar, balanced, cap=1000, rng=random.Random(0)
    )
    assert result == (True, "fingerprint")


def test_verify_equivalence_fingerprint_length_mismatch():
    result = verify_equivalence(
        doubling_grammar(40), doubling_grammar(41), cap=1000
    )
    assert result == (False, "fingerprint")


def test_verify_equivalence_fingerprint_content_mismatch():
    block = (Variable(2), Variable(2))
    ones = (Terminal(1),) * 1024
    first = Sslp(2, [(Variable(1), Terminal(0)), block, ones], 0)
    second = Sslp(2, [(Terminal(0), Variable(1)), block, ones], 0)
    result = verify_equivalence(first, second, cap=100, rng=random.Random(1))
    assert result == (False, "fingerprint")


@pytest.mark.parametrize(
    "n, expected",
    [
        (0, False),
        (1, False),
        (2, True),
        (37, True),
        (561, False),
        (3215031751, False),
        (1000000007, True),
        (998244353, True),
        (2 ** 61 - 1, True),
        (2 ** 61 + 1, False),
        ((2 ** 31 - 1) * (2 ** 29 - 3), False),
    ],
)
def test_is_prime(n, expected):
    assert is_prime(n) is expected


def test_random_prime_has_requested_bits():
    rng = random.Random(3)
    primes = {random_prime(rng) for _ in range(20)}
    assert len(primes) == 20
    for prime in primes:
        assert prime.bit_length() == MODULUS_BITS
        assert is_prime(prime)


def test_verify_equivalence_draws_fresh_moduli(mocker):
    spy = mocker.spy(balance_module, "grammar_fingerprint")
    grammar = doubling_grammar(40)
    balanced, _ = balance(grammar)
    result = verify_equivalence(
        grammar, balanced, cap=1000, rng=random.Random(5)
    )
    assert result == (True, "fingerprint")
    moduli = [call[0][2] for call in spy.call_args_list]
    assert len(moduli) == 6
    assert len(set(moduli)) == 3
    assert all(is_prime(modulus) for modulus in moduli)
    assert all(modulus.bit_length() == MODULUS_BITS for modulus in moduli)
