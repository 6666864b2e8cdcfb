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

"""String straight-line programs: data model, validation and metrics."""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple, Union

import networkx as nx

from straightline.exceptions import (
    CapExceeded,
    CyclicGrammar,
    DanglingReference,
    EmptyString,
    LengthOverflow,
)


logger = logging.getLogger(__name__)

MAX_LENGTH = 2 ** 63


def floor_log2(value):
    """Return the floor of log2 of a positive integer."""
    return value.bit_length() - 1


def ceil_log2(value):
    """Return the ceiling of log2 of a positive integer."""
    return (value - 1).bit_length()


@dataclass(frozen=True)
class Terminal:
    code: int

    def __str__(self):
        return "t{}".format(self.code)


@dataclass(frozen=True)
class Variable:
    id: int

    def __str__(self):
        return "v{}".format(self.id)


Symbol = Union[Terminal, Variable]


@dataclass(frozen=True)
class Sslp:
    """A string straight-line program.

    Parameters
    ----------
    alphabet_size : int
        Number of terminal codes; terminals are ``0 .. alphabet_size - 1``.
    rules : sequence of sequences of Symbol
        The right-hand side of each variable, indexed by variable id.
    start : int
        The start variable.
    """

    alphabet_size: int
    rules: Tuple[Tuple[Symbol, ...], ...]
    start: int

    def __post_init__(self):
        object.__setattr__(
            self, "rules", tuple(tuple(rhs) for rhs in self.rules)
        )

    @property
    def var_count(self):
        return len(self.rules)

    def rhs(self, variable):
        return self.rules[variable]


class SslpStats(NamedTuple):
    size: int
    depth: int
    max_path: int
    length: int


def _dependency_graph(grammar):
    graph = nx.DiGraph()
    graph.add_nodes_from(range(grammar.var_count))
    for variable, rhs in enumerate(grammar.rules):
        for symbol in rhs:
            if isinstance(symbol, Variable):
                graph.add_edge(variable, symbol.id)
    return graph


def validate(grammar):
    """Check that a grammar is well formed.

    Raises
    ------
    DanglingReference
        If the start variable, a referenced variable or a terminal code is
        out of range.
    CyclicGrammar
        If some variable derives itself.
    """
    if grammar.alphabet_size < 1:
        raise DanglingReference(
            "Alphabet size must be positive, got {}".format(
                grammar.alphabet_size
            )
        )
    if not 0 <= grammar.start < grammar.var_count:
        raise DanglingReference(
            "Start variable {} is not defined".format(grammar.start)
        )
    for variable, rhs in enumerate(grammar.rules):
        for symbol in rhs:
            if isinstance(symbol, Variable):
                if not 0 <= symbol.id < grammar.var_count:
                    raise DanglingReference(
                        "Rule X{} refers to undefined variable X{}".format(
                            variable, symbol.id
                        )
                    )
            elif isinstance(symbol, Terminal):
                if not 0 <= symbol.code < grammar.alphabet_size:
                    raise DanglingReference(
                        "Rule X{} uses terminal {} outside the alphabet "
                        "of size {}".format(
                            variable, symbol.code, grammar.alphabet_size
                        )
                    )
            else:
                raise DanglingReference(
                    "Rule X{} contains {!r}, which is not a symbol".format(
                        variable, symbol
                    )
                )
    try:
        edges = nx.find_cycle(_dependency_graph(grammar))
    except nx.NetworkXNoCycle:
        return
    raise CyclicGrammar([source for source, _ in edges])


def bottom_up_order(grammar):
    """Return all variable ids, each after the variables it refers to."""
    graph = _dependency_graph(grammar)
    return list(reversed(list(nx.topological_sort(graph))))


def reachable(grammar, variable=None):
    """Return the set of variables reachable from ``variable``."""
    root = grammar.start if variable is None else variable
    graph = _dependency_graph(grammar)
    return nx.descendants(graph, root) | {root}


def _unchecked_lengths(grammar):
    lengths = [0] * grammar.var_count
    for variable in bottom_up_order(grammar):
        lengths[variable] = sum(
            lengths[s.id] if isinstance(s, Variable) else 1
            for s in grammar.rules[variable]
        )
    return lengths


def lengths(grammar):
    """Return the length of the string derived by each variable.

    Raises
    ------
    LengthOverflow
        If some variable derives a string of length at least 2**63.
    """
    result = _unchecked_lengths(grammar)
    for variable, length in enumerate(result):
        if length >= MAX_LENGTH:
            raise LengthOverflow(
                "Variable X{} derives a string of length {}, which is not "
                "addressable with 63 bits".format(variable, length)
            )
    return result


def expand(grammar, cap, variable=None):
    """Return the terminal codes derived by a variable.

    Parameters
    ----------
    grammar : Sslp
    cap : int
        Largest expansion that will be produced.
    variable : int, optional
        Variable to expand, by default the start variable.

    Raises
    ------
    CapExceeded
        If the derived string is longer than ``cap``.
    """
    if cap < 1:
        raise ValueError("cap must be positive, got {}".format(cap))
    root = grammar.start if variable is None else variable
    size = _unchecked_lengths(grammar)[root]
    if size > cap:
        raise CapExceeded(size, cap)

    codes = []
    stack = [iter(grammar.rules[root])]
    while stack:
        symbol = next(stack[-1], None)
        if symbol is None:
            stack.pop()
        elif isinstance(symbol, Terminal):
            codes.append(symbol.code)
        else:
            stack.append(iter(grammar.rules[symbol.id]))
    return codes


def strip_unreachable(grammar):
    """Drop variables not reachable from the start, renumbering the rest.

    Surviving variables keep their relative order.
    """
    keep = sorted(reachable(grammar))
    renumber = {old: new for new, old in enumerate(keep)}

    def rename(symbol):
        if isinstance(symbol, Variable):
            return Variable(renumber[symbol.id])
        return symbol

    rules = [tuple(rename(s) for s in grammar.rules[old]) for old in keep]
    return Sslp(grammar.alphabet_size, rules, renumber[grammar.start])


def is_cnf(grammar):
    """Whether every rule is a single terminal or two variables."""
    for rhs in grammar.rules:
        if len(rhs) == 1 and isinstance(rhs[0], Terminal):
            continue
        if len(rhs) == 2 and all(isinstance(s, Variable) for s in rhs):
            continue
        return False
    return True


def to_cnf(grammar):
    """Convert a grammar to Chomsky normal form.

    Unreachable variables are dropped and variables deriving the empty
    string are substituted away. Every terminal gets a single variable
    deriving it, and longer right-hand sides are replaced by balanced
    binary trees of fresh variables.

    Raises
    ------
    EmptyString
        If the grammar derives the empty string.
    """
    live = reachable(grammar)
    sizes = _unchecked_lengths(grammar)
    if sizes[grammar.start] == 0:
        raise EmptyString("Grammar derives the empty string")

    rules = []
    terminal_vars = {}
    renamed = {}

    def terminal_var(code):
        if code not in terminal_vars:
            terminal_vars[code] = len(rules)
            rules.append((Terminal(code),))
        return terminal_vars[code]

    def binarize(parts):
        if len(parts) == 1:
            return parts[0]
        mid = len(parts) // 2
        left = binarize(parts[:mid])
        right = binarize(parts[mid:])
        rules.append((Variable(left), Variable(right)))
        return len(rules) - 1

    for variable in bottom_up_order(grammar):
        if variable not in live or sizes[variable] == 0:
            continue
        parts = []
        for symbol in grammar.rules[variable]:
            if isinstance(symbol, Terminal):
                parts.append(terminal_var(symbol.code))
            elif sizes[symbol.id] > 0:
                parts.append(renamed[symbol.id])
        renamed[variable] = binarize(parts)

    return Sslp(grammar.alphabet_size, rules, renamed[grammar.start])


def max_paths(grammar):
    """Return the longest variable chain below each variable.

    A variable whose right-hand side holds no variables has chain
    length 1.
    """
    paths = [0] * grammar.var_count
    for variable in bottom_up_order(grammar):
        paths[variable] = 1 + max(
            (
                paths[s.id]
                for s in grammar.rules[variable]
                if isinstance(s, Variable)
            ),
            default=0,
        )
    return paths


def stats(grammar):
    """Compute size, depth, longest derivation path and string length."""
    live = reachable(grammar)
    size = sum(len(rhs) for rhs in grammar.rules)
    max_path = max_paths(grammar)[grammar.start]
    widest = max((len(grammar.rules[v]) for v in live), default=1)
    depth = max_path * ceil_log2(max(widest, 1))
    length = lengths(grammar)[grammar.start]
    return SslpStats(
        size=size, depth=depth, max_path=max_path, length=length
    )
