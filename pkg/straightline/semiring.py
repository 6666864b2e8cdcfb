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

"""Circuits over monoids and semirings, with their subsumption bases."""

import re

from straightline.algebra import (
    DEFAULT_ENVELOPE,
    HOLE,
    BaseContext,
    GammaSlp,
    Ref,
    Signature,
    SubsumptionBase,
    Term,
    balance_circuit,
    evaluate,
)
from straightline.exceptions import SortMismatch
from straightline.grammar import Sslp, Terminal, Variable


MONOID_SORT = "M"
SEMIRING_SORT = "R"
CONCAT = "."
EMPTY = "e"
PLUS = "+"
TIMES = "*"

_LETTER = re.compile(r"^t(\d+)$")
_CONSTANT = re.compile(r"^\d+$")


def letter(code):
    return "t{}".format(code)


def monoid_signature(alphabet_size):
    """Free monoid over ``alphabet_size`` letters named ``t0, t1, ...``."""
    symbols = {
        CONCAT: (MONOID_SORT, MONOID_SORT, MONOID_SORT),
        EMPTY: (MONOID_SORT,),
    }
    for code in range(alphabet_size):
        symbols[letter(code)] = (MONOID_SORT,)
    return Signature([MONOID_SORT], symbols)


def semiring_signature(constants=(0, 1)):
    """Semiring with ``+``, ``*`` and the given integer constants."""
    symbols = {
        PLUS: (SEMIRING_SORT, SEMIRING_SORT, SEMIRING_SORT),
        TIMES: (SEMIRING_SORT, SEMIRING_SORT, SEMIRING_SORT),
    }
    for constant in constants:
        symbols[str(constant)] = (SEMIRING_SORT,)
    return Signature([SEMIRING_SORT], symbols)


def monoid_interpretation(symbol, args):
    """Free monoid: values are tuples of letter codes."""
    if symbol == CONCAT:
        return args[0] + args[1]
    if symbol == EMPTY:
        return ()
    match = _LETTER.match(symbol)
    if match is None:
        raise SortMismatch("Unknown monoid symbol {!r}".format(symbol))
    return (int(match.group(1)),)


def modular_interpretation(modulus=None):
    """Integers, or integers modulo ``modulus`` when it is given."""

    def reduce(value):
        return value if modulus is None else value % modulus

    def interpret(symbol, args):
        if symbol == PLUS:
            return reduce(args[0] + args[1])
        if symbol == TIMES:
            return reduce(args[0] * args[1])
        if _CONSTANT.match(symbol):
            return reduce(int(symbol))
        raise SortMismatch("Unknown semiring symbol {!r}".format(symbol))

    return interpret


def matrix_interpretation(modulus, constants=None):
    """2x2 matrices over integers modulo ``modulus``.

    Values are tuples ``(a, b, c, d)`` in row-major order. Constants are
    scalar matrices unless ``constants`` maps their symbol to a matrix.
    Multiplication does not commute.
    """
    constants = {} if constants is None else dict(constants)

    def interpret(symbol, args):
        if symbol == PLUS:
            return tuple((x + y) % modulus for x, y in zip(*args))
        if symbol == TIMES:
            (a, b, c, d), (e, f, g, h) = args
            return (
                (a * e + b * g) % modulus,
                (a * f + b * h) % modulus,
                (c * e + d * g) % modulus,
                (c * f + d * h) % modulus,
            )
        if symbol in constants:
            return tuple(x % modulus for x in constants[symbol])
        if _CONSTANT.match(symbol):
            value = int(symbol) % modulus
            return (value, 0, 0, value)
        raise SortMismatch("Unknown semiring symbol {!r}".format(symbol))

    return interpret


def _binary(symbol, left, right):
    if left is None:
        return right
    if right is None:
        return left
    return Term(symbol, (left, right))


class MonoidBase(SubsumptionBase):
    """Contexts ``a x b`` of a monoid, with either side optional.

    Elements are pairs of flags telling whether ``a`` and ``b`` are
    present.
    """

    def template(self, element):
        has_a, has_b = element
        term = HOLE
        aux = {}
        if has_b:
            term = Term(CONCAT, (term, Ref("b")))
            aux["b"] = MONOID_SORT
        if has_a:
            term = Term(CONCAT, (Ref("a"), term))
            aux["a"] = MONOID_SORT
        shape = "a" * has_a + "x" + "b" * has_b
        return BaseContext(term, MONOID_SORT, MONOID_SORT, aux, shape)

    def subsume_atomic(self, symbol, position):
        if symbol != CONCAT:
            raise SortMismatch(
                "Monoid symbol {!r} takes no arguments".format(symbol)
            )
        if position == 0:
            return (False, True), {"b": Ref(("arg", 1))}
        return (True, False), {"a": Ref(("arg", 0))}

    def compose(self, outer, inner):
        def side(name, first, second):
            # first and second are (present, prefix) pairs in string order
            parts = [
                Ref((prefix, name)) for present, prefix in (first, second)
                if present
            ]
            if len(parts) == 2:
                return Term(CONCAT, tuple(parts))
            return parts[0] if parts else None

        a = side("a", (outer[0], "outer"), (inner[0], "inner"))
        b = side("b", (inner[1], "inner"), (outer[1], "outer"))
        substitution = {}
        if a is not None:
            substitution["a"] = a
        if b is not None:
            substitution["b"] = b
        return (a is not None, b is not None), substitution

    def contexts(self):
        return [(a, b) for a in (False, True) for b in (False, True)]


class SemiringBase(SubsumptionBase):
    """Contexts ``a * x * b + c`` of a semiring, every part optional.

    Addition is assumed commutative, multiplication is not.
    """

    def template(self, element):
        has_a, has_b, has_c = element
        term = HOLE
        aux = {}
        if has_a:
            term = Term(TIMES, (Ref("a"), term))
            aux["a"] = SEMIRING_SORT
        if has_b:
            term = Term(TIMES, (term, Ref("b")))
            aux["b"] = SEMIRING_SORT
        if has_c:
            term = Term(PLUS, (term, Ref("c")))
            aux["c"] = SEMIRING_SORT
        shape = "a" * has_a + "x" + "b" * has_b + "+c" * has_c
        return BaseContext(term, SEMIRING_SORT, SEMIRING_SORT, aux, shape)

    def subsume_atomic(self, symbol, position):
        other = Ref(("arg", 1 - position))
        if symbol == PLUS:
            return (False, False, True), {"c": other}
        if symbol == TIMES:
            if position == 0:
                return (False, True, False), {"b": other}
            return (True, False, False), {"a": other}
        raise SortMismatch(
            "Semiring symbol {!r} takes no arguments".format(symbol)
        )

    def compose(self, outer, inner):
        def ref(prefix, name, present):
            return Ref((prefix, name)) if present else None

        a1, b1, c1 = (
            ref("outer", name, present)
            for name, present in zip("abc", outer)
        )
        a2, b2, c2 = (
            ref("inner", name, present)
            for name, present in zip("abc", inner)
        )
        # a1 (a2 x b2 + c2) b1 + c1
        a = _binary(TIMES, a1, a2)
        b = _binary(TIMES, b2, b1)
        c = None
        if c2 is not None:
            c = _binary(TIMES, _binary(TIMES, a1, c2), b1)
        c = _binary(PLUS, c, c1)
        substitution = {
            name: term
            for name, term in zip("abc", (a, b, c))
            if term is not None
        }
        element = (a is not None, b is not None, c is not None)
        return element, substitution

    def contexts(self):
        return [
            (a, b, c)
            for a in (False, True)
            for b in (False, True)
            for c in (False, True)
        ]


def sslp_to_circuit(grammar):
    """Turn an SSLP into a circuit over the free monoid.

    Right-hand sides become right-nested concatenations; an empty
    right-hand side becomes the neutral element.
    """
    rules = []
    for rhs in grammar.rules:
        parts = [
            Term(letter(s.code)) if isinstance(s, Terminal) else Ref(s.id)
            for s in rhs
        ]
        if not parts:
            rules.append(Term(EMPTY))
            continue
        term = parts[-1]
        for part in reversed(parts[:-1]):
            term = Term(CONCAT, (part, term))
        rules.append(term)
    return GammaSlp(
        monoid_signature(grammar.alphabet_size), rules, grammar.start
    )


def _flatten(term):
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Ref):
            yield Variable(node.name)
        elif node.symbol == CONCAT:
            stack.extend(reversed(node.args))
        elif node.symbol != EMPTY:
            match = _LETTER.match(node.symbol)
            if match is None:
                raise SortMismatch(
                    "Unknown monoid symbol {!r}".format(node.symbol)
                )
            yield Terminal(int(match.group(1)))


def circuit_to_sslp(circuit, alphabet_size=None):
    """Flatten every concatenation tree of a monoid circuit into an SSLP."""
    rules = [tuple(_flatten(rhs)) for rhs in circuit.rules]
    if alphabet_size is None:
        alphabet_size = 1 + max(
            (s.code for rhs in rules for s in rhs if isinstance(s, Terminal)),
            default=0,
        )
    return Sslp(alphabet_size, rules, circuit.start)


def balance_monoid_circuit(grammar, envelope=DEFAULT_ENVELOPE):
    return balance_circuit(grammar, MonoidBase(), envelope)


def balance_semiring_circuit(grammar, envelope=DEFAULT_ENVELOPE):
    return balance_circuit(grammar, SemiringBase(), envelope)


def balance_sslp_via_circuit(grammar, envelope=DEFAULT_ENVELOPE):
    """Balance an SSLP through its monoid circuit."""
    balanced = balance_monoid_circuit(sslp_to_circuit(grammar), envelope)
    return circuit_to_sslp(balanced, grammar.alphabet_size)


def evaluate_semiring(grammar, modulus=None):
    return evaluate(grammar, modular_interpretation(modulus))


def monoid_base():
    return MonoidBase()


def semiring_base():
    return SemiringBase()
