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

"""Balancing of string straight-line programs to logarithmic depth."""

import bisect
import logging
import math
import random
from typing import NamedTuple

from straightline.centroid import decompose, multidag_from_sslp
from straightline.exceptions import CapExceeded, EmptyString
from straightline.grammar import (
    Sslp,
    Terminal,
    Variable,
    expand,
    is_cnf,
    lengths,
    max_paths,
    strip_unreachable,
    to_cnf,
    validate,
)
from straightline.queries import grammar_fingerprint
from straightline.suffix import build_prefix_sslp, build_suffix_sslp


logger = logging.getLogger(__name__)

FINGERPRINT_ROUNDS = 3
MODULUS_BITS = 61

# Miller-Rabin with these witnesses is exact below 3.3 * 10**24
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    if n < 2:
        return False
    for witness in _WITNESSES:
        if n % witness == 0:
            return n == witness
    odd, twos = n - 1, 0
    while odd % 2 == 0:
        odd //= 2
        twos += 1
    for witness in _WITNESSES:
        x = pow(witness, odd, n)
        if x in (1, n - 1):
            continue
        for _ in range(twos - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng, bits=MODULUS_BITS):
    """Draw a uniformly random prime with exactly ``bits`` bits."""
    while True:
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_prime(candidate):
            return candidate


class BalanceReport(NamedTuple):
    input_size: int
    cnf_size: int
    output_size: int
    input_max_path: int
    output_max_path: int
    n: int
    size_ratio: float
    depth_slack: float

    def as_dict(self):
        return self._asdict()


class Equivalence(NamedTuple):
    equal: bool
    method: str


def _size(grammar):
    return sum(len(rhs) for rhs in grammar.rules)


def path_siblings(grammar, path):
    """Return the off-path children along a centroid path.

    Parameters
    ----------
    grammar : Sslp
        A grammar in Chomsky normal form.
    path : ScdPath

    Returns
    -------
    left : tuple of int
        Left siblings, from the top of the path down.
    right : tuple of int
        Right siblings, from the bottom of the path up.
    """
    left, right = [], []
    for node, direction in zip(path.nodes, path.directions):
        first, second = grammar.rules[node]
        if direction == 2:
            left.append(first.id)
        else:
            right.append(second.id)
    return tuple(left), tuple(reversed(right))


def _append_grammar(rules, part, letters):
    # copy a suffix or prefix grammar, its terminals standing for variables
    offset = len(rules)
    for rhs in part.grammar.rules:
        rules.append(
            tuple(
                Variable(letters[s.code])
                if isinstance(s, Terminal)
                else Variable(s.id + offset)
                for s in rhs
            )
        )
    return [Variable(v + offset) for v in part.variables]


def _balance_path(grammar, sizes, path, rules, names):
    left, right = path_siblings(grammar, path)
    bottom = Variable(path.nodes[-1])

    suffixes, prefixes = [], []
    first_new = len(rules)
    if left:
        part = build_suffix_sslp(left, [sizes[v] for v in left])
        suffixes = _append_grammar(rules, part, left)
    if right:
        part = build_prefix_sslp(right, [sizes[v] for v in right])
        prefixes = _append_grammar(rules, part, right)
    for new in range(first_new, len(rules)):
        names[new] = path.nodes[0]

    left_steps = [
        step for step, d in enumerate(path.directions) if d == 2
    ]
    right_count = 0
    right_below = [0] * len(path.directions)
    for step in reversed(range(len(path.directions))):
        if path.directions[step] == 1:
            right_count += 1
        right_below[step] = right_count

    for step, node in enumerate(path.nodes[:-1]):
        rhs = []
        first_left = bisect.bisect_left(left_steps, step)
        if first_left < len(left_steps):
            rhs.append(suffixes[first_left])
        rhs.append(bottom)
        if right_below[step]:
            rhs.append(prefixes[right_below[step] - 1])
        rules[node] = tuple(rhs)


def balance(grammar):
    """Balance a grammar to depth logarithmic in its string length.

    The grammar is brought into Chomsky normal form and its DAG is split
    into symmetric centroid paths. Along every path the left siblings are
    gathered into a suffix grammar and the right siblings into a prefix
    grammar, both weighted by string length, and every path variable is
    rewritten as a suffix, the bottom variable of the path and a prefix.
    Variables of the normal form keep their ids; new variables are
    appended.

    Returns
    -------
    Sslp
        The balanced grammar, with right-hand sides of length at most 4.
    BalanceReport

    Raises
    ------
    EmptyString
        If the grammar derives the empty string.
    LengthOverflow
        If the string is 2**63 letters or longer.
    """
    validate(grammar)
    input_size = _size(grammar)
    input_max_path = max_paths(grammar)[grammar.start]

    if is_cnf(grammar):
        cnf = strip_unreachable(grammar)
    else:
        cnf = strip_unreachable(to_cnf(grammar))
    sizes = lengths(cnf)
    n = sizes[cnf.start]
    if n == 0:
        raise EmptyString("Grammar derives the empty string")

    result = decompose(multidag_from_sslp(cnf))
    rules = list(cnf.rules)
    names = {}
    for path in result.paths:
        if path.directions:
            _balance_path(cnf, sizes, path, rules, names)
    balanced = Sslp(cnf.alphabet_size, rules, cnf.start)

    output_size = _size(balanced)
    output_max_path = max_paths(balanced)[balanced.start]
    report = BalanceReport(
        input_size=input_size,
        cnf_size=_size(cnf),
        output_size=output_size,
        input_max_path=input_max_path,
        output_max_path=output_max_path,
        n=n,
        size_ratio=output_size / _size(cnf),
        depth_slack=output_max_path - 6 * math.log2(n),
    )
    logger.info(
        "Balanced grammar of length %d: size %d -> %d, max path %d -> %d",
        n,
        input_size,
        output_size,
        input_max_path,
        output_max_path,
    )
    if logger.isEnabledFor(logging.DEBUG):
        for new, top in sorted(names.items()):
            logger.debug("X%d belongs to the centroid path of X%d", new, top)
    return balanced, report


def verify_equivalence(first, second, cap, rng=None):
    """Check whether two grammars derive the same string.

    Both grammars are expanded when they fit within ``cap``, giving an
    exact answer. Otherwise the lengths are compared, then Karp-Rabin
    fingerprints over three rounds, each with a fresh random 61-bit prime
    modulus and a random base. That answer can be wrong with small
    probability, and ``method`` is then "fingerprint".
    """
    try:
        equal = expand(first, cap) == expand(second, cap)
    except CapExceeded:
        pass
    else:
        logger.debug("Compared grammars by expansion")
        return Equivalence(equal, "exact")

    logger.debug("Grammars exceed cap %d, comparing fingerprints", cap)
    rng = random.Random() if rng is None else rng
    if lengths(first)[first.start] != lengths(second)[second.start]:
        return Equivalence(False, "fingerprint")
    for _ in range(FINGERPRINT_ROUNDS):
        modulus = random_prime(rng)
        base = rng.randrange(2, modulus - 1)
        logger.debug("Fingerprinting with base %d modulo %d", base, modulus)
        if grammar_fingerprint(first, base, modulus) != grammar_fingerprint(
            second, base, modulus
        ):
            return Equivalence(False, "fingerprint")
    return Equivalence(True, "fingerprint")
