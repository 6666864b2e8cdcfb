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

import random
from datetime import datetime

from pytz import UTC

from straightline.algebra import GammaSlp, Ref, Term
from straightline.balance import BalanceReport
from straightline.cluster import ClusterSignature
from straightline.forest import (
    CONTEXT,
    EPS,
    FOREST,
    H00,
    H01,
    H10,
    STAR,
    V0,
    V1,
    forest_signature,
)
from straightline.grammar import Sslp, Terminal, Variable
from straightline.semiring import PLUS, TIMES, semiring_signature


def _rule(*ids):
    return tuple(Variable(i) for i in ids)


# A grammar over {0, 1} whose DAG has a single centroid path X0 .. X8
EXAMPLE_RULES = [
    _rule(1, 14),
    _rule(13, 2),
    _rule(12, 3),
    _rule(4, 12),
    _rule(11, 5),
    _rule(6, 11),
    _rule(7, 10),
    _rule(10, 8),
    _rule(9, 9),
    _rule(10, 10),
    _rule(11, 11),
    _rule(12, 12),
    _rule(13, 14),
    (Terminal(0),),
    (Terminal(1),),
]
EXAMPLE_GRAMMAR = Sslp(2, EXAMPLE_RULES, 0)
EXAMPLE_LENGTHS = {0: 62, 7: 40, 8: 32, 9: 16, 10: 8, 11: 4, 12: 2}
EXAMPLE_PATH = tuple(range(9))
EXAMPLE_LEFT_SIBLINGS = (13, 12, 11, 10)
EXAMPLE_RIGHT_SIBLINGS = (10, 11, 12, 14)
EXAMPLE_LAMBDA = (0, 5)
EXAMPLE_ROOT_COUNTS = {9: 2, 10: 6, 11: 14, 12: 30, 13: 31, 14: 31}
EXAMPLE_LEAF_COUNTS = {9: 16, 10: 8, 11: 4, 12: 2, 13: 1, 14: 1}

ABAB = Sslp(
    2,
    [_rule(1, 1), _rule(2, 3), (Terminal(0),), (Terminal(1),)],
    0,
)

SEEDS = list(range(8))
GRAMMAR_SEEDS = list(range(500))
DAG_SEEDS = list(range(200))
WEIGHT_SEEDS = list(range(500))


def doubling_grammar(levels):
    """A chain ``X_i -> X_{i+1} X_{i+1}`` deriving ``2**levels`` a's."""
    rules = [_rule(i + 1, i + 1) for i in range(levels)]
    rules.append((Terminal(0),))
    return Sslp(1, rules, 0)


def comb_grammar(length):
    """A left comb ``X_i -> X_{i+1} t`` of maximal depth."""
    rules = [(Variable(i + 1), Terminal(i % 3)) for i in range(length - 1)]
    rules.append((Terminal(0),))
    return Sslp(3, rules, 0)


def right_comb_grammar(length):
    """A right comb ``X_i -> t X_{i+1}`` of maximal depth."""
    rules = [(Terminal(i % 3), Variable(i + 1)) for i in range(length - 1)]
    rules.append((Terminal(0),))
    return Sslp(3, rules, 0)


def deep_random_grammar(seed, length, alphabet_size=3, short=64):
    """A random grammar deriving at least ``length`` letters along a long
    spine.

    Each rule extends the previous one on a random side, by a terminal or
    by an earlier variable deriving at most ``short`` letters.
    """
    rng = random.Random(seed)
    rules = [(Terminal(rng.randrange(alphabet_size)),)]
    sizes = [1]
    shorts = [0]
    while sizes[-1] < length:
        if rng.random() < 0.3:
            variable = rng.choice(shorts)
            other, size = Variable(variable), sizes[variable]
        else:
            other, size = Terminal(rng.randrange(alphabet_size)), 1
        spine = Variable(len(rules) - 1)
        rules.append((spine, other) if rng.random() < 0.5 else (other, spine))
        sizes.append(sizes[-1] + size)
        if sizes[-1] <= short:
            shorts.append(len(rules) - 1)
    return Sslp(alphabet_size, rules, len(rules) - 1)


def random_grammar(seed, variables=10, alphabet_size=3):
    """A random grammar whose start is the last variable.

    Right-hand sides hold up to three symbols drawn from the terminals and
    the earlier variables; some are empty.
    """
    rng = random.Random(seed)
    rules = []
    for variable in range(variables):
        width = rng.choice([0, 1, 2, 2, 2, 3]) if variable else 2
        rhs = []
        for _ in range(width):
            if variable and rng.random() < 0.6:
                rhs.append(Variable(rng.randrange(variable)))
            else:
                rhs.append(Terminal(rng.randrange(alphabet_size)))
        rules.append(tuple(rhs))
    last = rules[-1] + (Terminal(rng.randrange(alphabet_size)),)
    rules[-1] = last
    return Sslp(alphabet_size, rules, variables - 1)


def random_codes(seed, length, alphabet_size=3):
    rng = random.Random(seed)
    return [rng.randrange(alphabet_size) for _ in range(length)]


SEMIRING = semiring_signature(constants=(0, 1, 2, 3))
MODULUS = 97
# non-commuting values for the constants 2 and 3
MATRICES = {"2": (1, 1, 0, 1), "3": (0, 1, 1, 0)}


def doubling_circuit(levels):
    """``X_i = X_{i+1} + X_{i+1}`` down to the constant 1."""
    rules = [Term(PLUS, (Ref(i + 1), Ref(i + 1))) for i in range(levels)]
    rules.append(Term("1"))
    return GammaSlp(SEMIRING, rules, 0)


def chain_circuit(length):
    """A caterpillar ``2 * (3 + (2 * (...)))`` of maximal depth."""
    rules = []
    for i in range(length):
        symbol = TIMES if i % 2 == 0 else PLUS
        constant = Term("2") if i % 2 == 0 else Term("3")
        rules.append(Term(symbol, (constant, Ref(i + 1))))
    rules.append(Term("1"))
    return GammaSlp(SEMIRING, rules, 0)


def comb_circuit(length):
    """A left comb ``((... + 3) * 2`` of maximal depth."""
    rules = []
    for i in range(length):
        symbol = TIMES if i % 2 == 0 else PLUS
        constant = Term("2") if i % 2 == 0 else Term("3")
        rules.append(Term(symbol, (Ref(i + 1), constant)))
    rules.append(Term("1"))
    return GammaSlp(SEMIRING, rules, 0)


def random_circuit(seed, variables=12):
    """A random semiring circuit whose start is the last variable.

    Operands are earlier variables, constants or small nested terms.
    """
    rng = random.Random(seed)
    rules = []
    for variable in range(variables):
        last = variable == variables - 1
        if variable < 2 or (not last and rng.random() < 0.15):
            rules.append(Term(str(rng.randrange(4))))
            continue

        def operand():
            if rng.random() < 0.7:
                return Ref(rng.randrange(variable))
            return Term(str(rng.randrange(4)))

        left, right = operand(), operand()
        if rng.random() < 0.3:
            nested = rng.choice([PLUS, TIMES])
            right = Term(nested, (right, Ref(rng.randrange(variable))))
        rules.append(Term(rng.choice([PLUS, TIMES]), (left, right)))
    return GammaSlp(SEMIRING, rules, variables - 1)


def matrix_sampler(sort, rng):
    return tuple(rng.randrange(MODULUS) for _ in range(4))


def integer_sampler(sort, rng):
    return rng.randrange(MODULUS)


FOREST_LETTERS = ["a", "b", "c"]
_FOREST_OPERATIONS = {
    H00: ((FOREST, FOREST), FOREST),
    H01: ((FOREST, CONTEXT), CONTEXT),
    H10: ((CONTEXT, FOREST), CONTEXT),
    V0: ((CONTEXT, FOREST), FOREST),
    V1: ((CONTEXT, CONTEXT), CONTEXT),
}


def random_fslp(seed, steps=12):
    """A random forest grammar that uses ``EPS`` and ``STAR`` freely.

    The start variable is last and derives a non-empty forest.
    """
    rng = random.Random(seed)
    rules = []
    pools = {FOREST: [], CONTEXT: []}

    def add(term, sort):
        rules.append(term)
        pools[sort].append(Ref(len(rules) - 1))
        return rules[-1]

    add(Term(EPS), FOREST)
    add(Term(STAR), CONTEXT)
    for name in FOREST_LETTERS:
        add(Term(name), CONTEXT)
    for _ in range(steps):
        symbol = rng.choice(sorted(_FOREST_OPERATIONS))
        arg_sorts, result = _FOREST_OPERATIONS[symbol]
        args = [rng.choice(pools[sort]) for sort in arg_sorts]
        add(Term(symbol, args), result)
    letter = Term(rng.choice(FOREST_LETTERS))
    node = Term(V0, (letter, rng.choice(pools[FOREST])))
    add(Term(H00, (pools[FOREST][-1], node)), FOREST)
    return GammaSlp(
        forest_signature(FOREST_LETTERS), rules, len(rules) - 1
    )


def chain_fslp(depth):
    """A path ``a(b(a(...)))`` of ``depth`` nodes."""
    rules = [
        Term(V1, (Term(FOREST_LETTERS[i % 2]), Ref(i + 1)))
        for i in range(depth)
    ]
    rules.append(Term(STAR))
    rules.append(Term(V0, (Ref(0), Term(EPS))))
    return GammaSlp(
        forest_signature(FOREST_LETTERS), rules, len(rules) - 1
    )


CLUSTER_LETTERS = ["a", "b"]


def random_top_dag(seed, steps=12):
    """A random top dag over ``a`` and ``b`` whose start is last."""
    rng = random.Random(seed)
    rules = []
    pools = {}

    def add(term, sort):
        rules.append(term)
        pools.setdefault(sort, []).append(Ref(len(rules) - 1))

    def pick(sort):
        return rng.choice(pools[sort])

    for a in CLUSTER_LETTERS:
        for b in CLUSTER_LETTERS:
            add(Term("c:{}:{}".format(a, b)), a)
            add(Term("u:{}:{}".format(a, b)), "{}:{}".format(a, b))
    for _ in range(steps):
        a, b, c = (rng.choice(CLUSTER_LETTERS) for _ in range(3))
        kind = rng.choice(["h", "hr", "hl", "v2", "v3"])
        ab, bc = "{}:{}".format(a, b), "{}:{}".format(b, c)
        if kind == "h":
            add(Term("h:" + a, (pick(a), pick(a))), a)
        elif kind == "hr":
            add(Term("hr:" + ab, (pick(a), pick(ab))), ab)
        elif kind == "hl":
            add(Term("hl:" + ab, (pick(ab), pick(a))), ab)
        elif kind == "v2":
            add(Term("v:" + ab, (pick(ab), pick(b))), a)
        else:
            add(Term("v:" + ab + ":" + c, (pick(ab), pick(bc))), a + ":" + c)
    a, b = rng.choice(CLUSTER_LETTERS), rng.choice(CLUSTER_LETTERS)
    ab = "{}:{}".format(a, b)
    add(Term("v:" + ab, (pick(ab), pick(b))), a)
    return GammaSlp(ClusterSignature(CLUSTER_LETTERS), rules, len(rules) - 1)


def chain_top_dag(depth):
    """A path of ``a`` nodes ending in ``b``, ``depth + 3`` nodes in all."""
    rules = [
        Term("v:a:a:a", (Term("u:a:a"), Ref(i + 1))) for i in range(depth)
    ]
    rules.append(Term("u:a:a"))
    rules.append(Term("v:a:a", (Ref(0), Term("c:a:b"))))
    return GammaSlp(ClusterSignature(CLUSTER_LETTERS), rules, len(rules) - 1)


RUN_STARTED_AT = datetime(2026, 3, 10, 11, 39, 12, 110000, tzinfo=UTC)
RUN_STARTED_AT_MILLISECONDS = 1773142752110
RUN_ID = "4cbd2f9f5b0a4d2aa3b0c1e6a1f3b7d2"
EXPERIMENT_ID = "12"
EXPERIMENT_NAME = "straightline-nightly"
INPUT_PATH = "grammars/centroid_path.sslp"

BALANCE_REPORT = BalanceReport(
    input_size=28,
    cnf_size=28,
    output_size=40,
    input_max_path=14,
    output_max_path=8,
    n=62,
    size_ratio=40 / 28,
    depth_slack=0.5,
)
