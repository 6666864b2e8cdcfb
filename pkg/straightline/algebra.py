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

"""Multi-sorted straight-line programs and their balancing.

A Γ-SLP (circuit) is a straight-line program whose right-hand sides are
terms over a sorted signature. Balancing goes through a tree
straight-line program (TSLP) over the functional extension of the
signature, whose extra symbols build contexts (``Hat``), compose them
(``Compose``) and apply them to terms (``Apply``). A subsumption base of
the target algebra then turns the TSLP back into a plain Γ-SLP.
"""

import abc
import itertools
import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, NamedTuple, Tuple

import networkx as nx

from straightline.centroid import MultiDag, decompose
from straightline.exceptions import (
    BaseMismatch,
    CountOverflow,
    CyclicGrammar,
    DanglingReference,
    SlpError,
    SortMismatch,
)
from straightline.grammar import Terminal, ceil_log2
from straightline.grammar import bottom_up_order as sslp_order
from straightline.suffix import build_suffix_sslp


logger = logging.getLogger(__name__)

MAX_COUNT = 2 ** 63
MAX_BASE_CONTEXT_SIZE = 32
DEFAULT_ENVELOPE = 32


@dataclass(frozen=True)
class ContextSort:
    """Sort of the contexts mapping ``hole`` to ``result``."""

    hole: Any
    result: Any

    def __str__(self):
        return "({},{})".format(self.hole, self.result)


@dataclass(frozen=True)
class Hat:
    """The context obtained from ``symbol`` by leaving ``position`` open."""

    symbol: Any
    position: int


@dataclass(frozen=True)
class Compose:
    """Composition of an outer context ``(q, r)`` with an inner ``(p, q)``."""

    p: Any
    q: Any
    r: Any


@dataclass(frozen=True)
class Apply:
    """Application of a context ``(p, q)`` to a term of sort ``p``."""

    p: Any
    q: Any


@dataclass(frozen=True)
class Term:
    symbol: Any
    args: Tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Ref:
    """A reference to a grammar variable (an int) or a placeholder."""

    name: Any


HOLE = Ref("x")


class Signature:
    """A sorted signature.

    Parameters
    ----------
    sorts : iterable
        The sorts.
    symbols : dict
        Maps each symbol to its type word: the argument sorts followed by
        the result sort.
    """

    def __init__(self, sorts, symbols):
        self.sorts = frozenset(sorts)
        self.symbols = dict(symbols)
        for symbol, word in self.symbols.items():
            if not word:
                raise ValueError(
                    "Symbol {!r} has an empty type".format(symbol)
                )
            for sort in word:
                if sort not in self.sorts:
                    raise SortMismatch(
                        "Symbol {!r} uses unknown sort {!r}".format(
                            symbol, sort
                        )
                    )

    def rank(self, symbol):
        return len(self.type_of(symbol)) - 1

    def type_of(self, symbol):
        """Return the type word of a symbol of the extended signature."""
        if isinstance(symbol, Hat):
            word = self.type_of(symbol.symbol)
            arguments = word[:-1]
            if not 0 <= symbol.position < len(arguments):
                raise SortMismatch(
                    "Symbol {!r} has no argument {}".format(
                        symbol.symbol, symbol.position
                    )
                )
            others = tuple(
                sort
                for i, sort in enumerate(arguments)
                if i != symbol.position
            )
            hole = arguments[symbol.position]
            return others + (ContextSort(hole, word[-1]),)
        if isinstance(symbol, Compose):
            return (
                ContextSort(symbol.q, symbol.r),
                ContextSort(symbol.p, symbol.q),
                ContextSort(symbol.p, symbol.r),
            )
        if isinstance(symbol, Apply):
            return (ContextSort(symbol.p, symbol.q), symbol.p, symbol.q)
        try:
            return self.symbols[symbol]
        except KeyError:
            raise SortMismatch("Unknown symbol {!r}".format(symbol))


@dataclass(frozen=True)
class GammaSlp:
    """A straight-line program over a sorted signature.

    ``rules[X]`` is the right-hand side term of variable ``X``; variables
    are referenced as ``Ref(X)``.
    """

    signature: Signature = field(compare=False)
    rules: Tuple[Any, ...]
    start: int

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def var_count(self):
        return len(self.rules)


class GammaStats(NamedTuple):
    size: int
    max_path: int
    depth: int
    unfolded_size: int


def iter_refs(term):
    """Yield the references of a term, left to right."""
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Ref):
            yield node
        else:
            stack.extend(reversed(node.args))


def term_size(term):
    """Number of nodes of a term, references included."""
    size = 0
    stack = [term]
    while stack:
        node = stack.pop()
        size += 1
        if isinstance(node, Term):
            stack.extend(node.args)
    return size


def substitute(term, mapping):
    """Replace references named in ``mapping`` by terms."""
    if isinstance(term, Ref):
        return mapping.get(term.name, term)
    return Term(term.symbol, [substitute(arg, mapping) for arg in term.args])


def _variables_of(term):
    return [ref.name for ref in iter_refs(term) if isinstance(ref.name, int)]


def _dependency_graph(grammar):
    graph = nx.DiGraph()
    graph.add_nodes_from(range(grammar.var_count))
    for variable, rhs in enumerate(grammar.rules):
        for child in _variables_of(rhs):
            graph.add_edge(variable, child)
    return graph


def bottom_up_order(grammar):
    graph = _dependency_graph(grammar)
    return list(reversed(list(nx.topological_sort(graph))))


def term_sort(signature, term, sorts):
    """Compute the sort of a term, checking every symbol application.

    ``sorts`` maps reference names to their sorts.
    """
    if isinstance(term, Ref):
        try:
            return sorts[term.name]
        except KeyError:
            raise SortMismatch(
                "Reference {!r} has no known sort".format(term.name)
            )
    word = signature.type_of(term.symbol)
    if len(term.args) != len(word) - 1:
        raise SortMismatch(
            "Symbol {!r} expects {} arguments, got {}".format(
                term.symbol, len(word) - 1, len(term.args)
            )
        )
    for position, (arg, expected) in enumerate(zip(term.args, word)):
        actual = term_sort(signature, arg, sorts)
        if actual != expected:
            raise SortMismatch(
                "Argument {} of {!r} has sort {}, expected {}".format(
                    position, term.symbol, actual, expected
                )
            )
    return word[-1]


def validate(grammar):
    """Check a Γ-SLP and return the sort of every variable.

    Raises
    ------
    DanglingReference
        If a rule refers to an undefined variable or a placeholder.
    CyclicGrammar
        If some variable derives itself.
    SortMismatch
        If a rule is not sort-correct or the start is context-sorted.
    """
    if not 0 <= grammar.start < grammar.var_count:
        raise DanglingReference(
            "Start variable {} is not defined".format(grammar.start)
        )
    for variable, rhs in enumerate(grammar.rules):
        for ref in iter_refs(rhs):
            if not isinstance(ref.name, int):
                raise DanglingReference(
                    "Rule X{} contains placeholder {!r}".format(
                        variable, ref.name
                    )
                )
            if not 0 <= ref.name < grammar.var_count:
                raise DanglingReference(
                    "Rule X{} refers to undefined variable X{}".format(
                        variable, ref.name
                    )
                )
    try:
        edges = nx.find_cycle(_dependency_graph(grammar))
    except nx.NetworkXNoCycle:
        pass
    else:
        raise CyclicGrammar([source for source, _ in edges])

    sorts = infer_sorts(grammar)
    if isinstance(sorts[grammar.start], ContextSort):
        raise SortMismatch(
            "Start variable X{} derives a context".format(grammar.start)
        )
    return sorts


def infer_sorts(grammar):
    """Return the sort of every variable, checking sort-correctness."""
    sorts = {}
    for variable in bottom_up_order(grammar):
        sorts[variable] = term_sort(
            grammar.signature, grammar.rules[variable], sorts
        )
    return [sorts[v] for v in range(grammar.var_count)]


def strip(grammar):
    """Drop variables unreachable from the start, renumbering the rest."""
    graph = _dependency_graph(grammar)
    keep = sorted(nx.descendants(graph, grammar.start) | {grammar.start})
    renumber = {old: Ref(new) for new, old in enumerate(keep)}
    rules = [substitute(grammar.rules[old], renumber) for old in keep]
    return GammaSlp(grammar.signature, rules, renumber[grammar.start].name)


def standardize(grammar):
    """Bring every right-hand side into the form ``f(X1, ..., Xn)``.

    Nested subterms become fresh variables and variables whose right-hand
    side is a bare reference are replaced by their targets.
    """
    rules = list(grammar.rules)

    def resolve(variable):
        seen = []
        while isinstance(rules[variable], Ref):
            if variable in seen:
                raise CyclicGrammar(seen[seen.index(variable):])
            seen.append(variable)
            variable = rules[variable].name
        for alias in seen:
            rules[alias] = Ref(variable)
        return variable

    output = [None] * len(rules)

    def flatten(term):
        args = []
        for arg in term.args:
            if isinstance(arg, Ref):
                args.append(Ref(resolve(arg.name)))
            else:
                output.append(None)
                fresh = len(output) - 1
                output[fresh] = flatten(arg)
                args.append(Ref(fresh))
        return Term(term.symbol, args)

    for variable in range(len(rules)):
        if isinstance(rules[variable], Ref):
            target = resolve(variable)
            output[variable] = Ref(target)
        else:
            output[variable] = flatten(rules[variable])

    start = resolve(grammar.start)
    return strip(GammaSlp(grammar.signature, output, start))


def resolve_aliases(grammar):
    """Replace references to variables whose right-hand side is a bare
    reference, keeping nested terms as they are."""
    rules = list(grammar.rules)
    targets = {}

    def target(variable):
        seen = []
        while isinstance(rules[variable], Ref):
            if variable in seen:
                raise CyclicGrammar(seen[seen.index(variable):])
            seen.append(variable)
            variable = rules[variable].name
        for alias in seen:
            targets[alias] = Ref(variable)
        return variable

    for variable in range(len(rules)):
        target(variable)
    start = target(grammar.start)
    rules = [
        rhs if isinstance(rhs, Ref) else substitute(rhs, targets)
        for rhs in rules
    ]
    return strip(GammaSlp(grammar.signature, rules, start))


def evaluate_term(term, interpret, env):
    """Evaluate a term; ``env`` maps reference names to values."""
    if isinstance(term, Ref):
        return env[term.name]
    return interpret(
        term.symbol,
        tuple(evaluate_term(arg, interpret, env) for arg in term.args),
    )


def evaluate(grammar, interpret):
    """Evaluate a grammar bottom-up, every variable once.

    Parameters
    ----------
    grammar : GammaSlp
    interpret : callable
        ``interpret(symbol, args)`` returns the value of ``symbol`` applied
        to the already evaluated ``args``.
    """
    values = {}
    for variable in bottom_up_order(grammar):
        values[variable] = evaluate_term(
            grammar.rules[variable], interpret, values
        )
    return values[grammar.start]


def hat_interpretation(interpret):
    """Extend an interpretation to contexts, represented as callables."""

    def extended(symbol, args):
        if isinstance(symbol, Hat):
            position = symbol.position

            def context(value):
                full = args[:position] + (value,) + args[position:]
                return interpret(symbol.symbol, full)

            return context
        if isinstance(symbol, Compose):
            outer, inner = args
            return lambda value: outer(inner(value))
        if isinstance(symbol, Apply):
            context, value = args
            return context(value)
        return interpret(symbol, args)

    return extended


def _concat(parts):
    return tuple(itertools.chain.from_iterable(parts))


def free_interpretation(symbol, args):
    """Interpretation in the free term algebra.

    Terms are tuples of symbols in preorder; contexts are pairs of the
    preorder before and after the hole.
    """
    if isinstance(symbol, Hat):
        position = symbol.position
        return (
            (symbol.symbol,) + _concat(args[:position]),
            _concat(args[position:]),
        )
    if isinstance(symbol, Compose):
        (outer_before, outer_after), (inner_before, inner_after) = args
        return (outer_before + inner_before, inner_after + outer_after)
    if isinstance(symbol, Apply):
        (before, after), value = args
        return before + value + after
    return (symbol,) + _concat(args)


def unfold(grammar):
    """Return the preorder symbol sequence of the term a grammar derives."""
    return evaluate(grammar, free_interpretation)


def unfolded_sizes(grammar):
    """Node count of the unfolding of every variable of a Γ-SLP.

    Raises
    ------
    CountOverflow
        If an unfolding has 2**63 nodes or more.
    """
    sizes = {}

    def size_of(term):
        if isinstance(term, Ref):
            return sizes[term.name]
        return 1 + sum(size_of(arg) for arg in term.args)

    for variable in bottom_up_order(grammar):
        sizes[variable] = size_of(grammar.rules[variable])
        if sizes[variable] >= MAX_COUNT:
            raise CountOverflow(
                "Variable X{} unfolds to {} nodes".format(
                    variable, sizes[variable]
                )
            )
    return [sizes[v] for v in range(grammar.var_count)]


def unfolded_size(grammar):
    return unfolded_sizes(grammar)[grammar.start]


def max_path(grammar):
    """Longest variable chain below the start of the standardized
    grammar."""
    standard = standardize(grammar)
    paths = {}
    for variable in bottom_up_order(standard):
        paths[variable] = 1 + max(
            (paths[v] for v in _variables_of(standard.rules[variable])),
            default=0,
        )
    return paths[standard.start]


def gamma_stats(grammar):
    """Size, longest path, depth and unfolded size of a Γ-SLP.

    Depth is the longest path times the ceiling log of the largest
    right-hand side.
    """
    size = sum(term_size(rhs) for rhs in grammar.rules)
    longest = max_path(grammar)
    widest = max(term_size(rhs) for rhs in grammar.rules)
    return GammaStats(
        size=size,
        max_path=longest,
        depth=longest * ceil_log2(widest),
        unfolded_size=unfolded_size(grammar),
    )


def _compose_chain(parts, sorts):
    """Right-nested composition of context references."""
    term = parts[-1]
    sort = sorts[parts[-1].name]
    for part in reversed(parts[:-1]):
        outer = sorts[part.name]
        symbol = Compose(sort.hole, sort.result, outer.result)
        term = Term(symbol, (part, term))
        sort = ContextSort(sort.hole, outer.result)
    return term, sort


def balance_to_tslp(grammar):
    """Turn a Γ-SLP into a TSLP of logarithmic depth deriving the same term.

    Every centroid path ``X_0 .. X_p`` of the grammar's DAG is replaced by
    context variables ``Z_i`` (the symbol of ``X_i`` with the path child
    left open) and a suffix grammar over them, weighted by the size each
    context contributes. Path variables become ``Y_i[X_p]`` with ``Y_i``
    the composition of ``Z_i .. Z_(p-1)``.

    Raises
    ------
    CountOverflow
        If the derived term has 2**63 nodes or more.
    SortMismatch
        If the grammar already uses context symbols.
    """
    standard = standardize(grammar)
    signature = standard.signature
    for rhs in standard.rules:
        if isinstance(rhs.symbol, (Hat, Compose, Apply)):
            raise SortMismatch(
                "Cannot balance a grammar that uses context symbols"
            )
    sorts = dict(enumerate(validate(standard)))
    sizes = unfolded_sizes(standard)

    children = [
        tuple(ref.name for ref in standard.rules[v].args)
        for v in range(standard.var_count)
    ]
    result = decompose(MultiDag(standard.var_count, standard.start, children))

    rules = list(standard.rules)

    def new_var(rhs, sort):
        rules.append(rhs)
        sorts[len(rules) - 1] = sort
        return Ref(len(rules) - 1)

    for path in result.paths:
        if not path.directions:
            continue
        contexts = []
        for node, direction in zip(path.nodes, path.directions):
            term = standard.rules[node]
            position = direction - 1
            others = term.args[:position] + term.args[position + 1:]
            hat = Hat(term.symbol, position)
            contexts.append(
                new_var(Term(hat, others), signature.type_of(hat)[-1])
            )
        weights = [
            sizes[node] - sizes[below]
            for node, below in zip(path.nodes, path.nodes[1:])
        ]
        suffixes = build_suffix_sslp(contexts, weights)

        offset = len(rules)
        suffix_rules = suffixes.grammar.rules
        rules.extend([None] * len(suffix_rules))
        for index in sslp_order(suffixes.grammar):
            parts = [
                contexts[s.code]
                if isinstance(s, Terminal)
                else Ref(s.id + offset)
                for s in suffix_rules[index]
            ]
            if len(parts) == 1:
                rules[offset + index] = parts[0]
                sorts[offset + index] = sorts[parts[0].name]
            else:
                term, sort = _compose_chain(parts, sorts)
                rules[offset + index] = term
                sorts[offset + index] = sort

        bottom = path.nodes[-1]
        for step, node in enumerate(path.nodes[:-1]):
            suffix = Ref(suffixes.variables[step] + offset)
            apply = Apply(sorts[bottom], sorts[node])
            rules[node] = Term(apply, (suffix, Ref(bottom)))

    return GammaSlp(signature, rules, standard.start)


@dataclass(frozen=True)
class BaseContext:
    """A parameterized context of a subsumption base.

    ``term`` contains the main variable ``HOLE`` once and a reference to
    every auxiliary variable named in ``aux_sorts``.
    """

    term: Any
    hole_sort: Any
    result_sort: Any
    aux_sorts: Dict[Any, Any] = field(compare=False)
    shape: str = ""

    @property
    def size(self):
        return term_size(self.term)


class SubsumptionBase(abc.ABC):
    """A finite family of contexts subsuming all contexts of an algebra.

    Base elements are hashable ids. Substitutions map the auxiliary
    variables of the returned element to terms: over ``Ref(("arg", i))``
    for atomic contexts, where ``i`` is the argument position of the
    symbol, and over ``Ref(("outer", name))`` and ``Ref(("inner", name))``
    for compositions.
    """

    @abc.abstractmethod
    def template(self, element):
        """Return the BaseContext of a base element."""

    @abc.abstractmethod
    def subsume_atomic(self, symbol, position):
        """Return ``(element, substitution)`` for the atomic context of
        ``symbol`` with argument ``position`` open."""

    @abc.abstractmethod
    def compose(self, outer, inner):
        """Return ``(element, substitution)`` subsuming ``outer[inner]``."""

    def contexts(self):
        """Base elements known up front; lazy bases may list none."""
        return ()


def _check_substitution(base, element, substitution, signature, known):
    template = base.template(element)
    if template.size > MAX_BASE_CONTEXT_SIZE:
        raise BaseMismatch(
            "Base context {!r} has {} nodes, more than {}".format(
                element, template.size, MAX_BASE_CONTEXT_SIZE
            )
        )
    if set(substitution) != set(template.aux_sorts):
        raise BaseMismatch(
            "Substitution for {!r} covers {}, expected {}".format(
                element, sorted(map(str, substitution)),
                sorted(map(str, template.aux_sorts)),
            )
        )
    for name, term in substitution.items():
        try:
            sort = term_sort(signature, term, known)
        except SortMismatch as e:
            raise BaseMismatch(
                "Substitution for {!r} is not sort-correct: {}".format(
                    name, e
                )
            )
        if sort != template.aux_sorts[name]:
            raise BaseMismatch(
                "Auxiliary {!r} of {!r} needs sort {}, got {}".format(
                    name, element, template.aux_sorts[name], sort
                )
            )
    return template


def tslp_to_slp(tslp, base):
    """Replace the contexts of a TSLP by instances of base contexts.

    Every context variable is tracked as a base element together with
    grammar variables for its auxiliaries. Atomic contexts go through
    ``base.subsume_atomic``, compositions through ``base.compose``, and
    applications instantiate the tracked base context.

    Raises
    ------
    BaseMismatch
        If the base returns an element of the wrong sort or an
        inconsistent substitution.
    """
    standard = standardize(tslp)
    signature = standard.signature
    sorts = validate(standard)

    rules = []
    out_sorts = {}
    renamed = {}
    tracked = {}

    def emit(term):
        if isinstance(term, Ref):
            return term.name
        rules.append(term)
        out_sorts[len(rules) - 1] = term_sort(signature, term, out_sorts)
        return len(rules) - 1

    def instantiate(element, substitution, env, expected):
        # env maps placeholder names to output variables
        known = {name: out_sorts[var] for name, var in env.items()}
        template = _check_substitution(
            base, element, substitution, signature, known
        )
        if (template.hole_sort, template.result_sort) != (
            expected.hole,
            expected.result,
        ):
            raise BaseMismatch(
                "Base element {!r} maps {} to {}, expected {}".format(
                    element,
                    template.hole_sort,
                    template.result_sort,
                    expected,
                )
            )
        mapping = {name: Ref(var) for name, var in env.items()}
        aux = {
            name: emit(substitute(term, mapping))
            for name, term in substitution.items()
        }
        return element, aux

    for variable in bottom_up_order(standard):
        term = standard.rules[variable]
        symbol = term.symbol
        if isinstance(symbol, Hat):
            env = {}
            for index, arg in enumerate(term.args):
                position = index if index < symbol.position else index + 1
                env[("arg", position)] = renamed[arg.name]
            element, substitution = base.subsume_atomic(
                symbol.symbol, symbol.position
            )
            tracked[variable] = instantiate(
                element, substitution, env, sorts[variable]
            )
        elif isinstance(symbol, Compose):
            outer, inner = (tracked[arg.name] for arg in term.args)
            env = {}
            for name, var in outer[1].items():
                env[("outer", name)] = var
            for name, var in inner[1].items():
                env[("inner", name)] = var
            element, substitution = base.compose(outer[0], inner[0])
            tracked[variable] = instantiate(
                element, substitution, env, sorts[variable]
            )
        elif isinstance(symbol, Apply):
            context, value = term.args
            element, aux = tracked[context.name]
            template = base.template(element)
            mapping = {name: Ref(var) for name, var in aux.items()}
            mapping[HOLE.name] = Ref(renamed[value.name])
            renamed[variable] = emit(substitute(template.term, mapping))
        else:
            renamed[variable] = emit(
                Term(symbol, [Ref(renamed[a.name]) for a in term.args])
            )

    return strip(GammaSlp(signature, rules, renamed[standard.start]))


def balance_circuit(grammar, base, envelope=DEFAULT_ENVELOPE):
    """Balance a Γ-SLP to depth logarithmic in the size of its term.

    The result evaluates like ``grammar`` in every algebra that admits
    ``base``. A warning is logged when the longest path exceeds
    ``envelope * log2(size) + envelope``.
    """
    balanced = standardize(tslp_to_slp(balance_to_tslp(grammar), base))
    size = unfolded_size(grammar)
    longest = max_path(balanced)
    bound = envelope * math.log2(max(size, 2)) + envelope
    if longest > bound:
        logger.warning(
            "Balanced circuit has a path of length %d, above the envelope "
            "%.1f for unfolded size %d",
            longest,
            bound,
            size,
        )
    return balanced


class SubsumptionReport(NamedTuple):
    checked: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def _sample_env(aux_sorts, sampler, rng, prefix=None):
    env = {}
    for name, sort in aux_sorts.items():
        key = name if prefix is None else (prefix, name)
        env[key] = sampler(sort, rng)
    return env


def verify_subsumption_base(
    base, signature, interpret, sampler, samples=100, rng=None, limit=10000
):
    """Check the subsumption conditions of a base pointwise.

    Every atomic context of ``signature`` must evaluate like the base
    element it is subsumed by, and so must every composition of two
    reachable base elements. Values are drawn with ``sampler(sort, rng)``
    and evaluated with ``interpret``. A base raising ``SlpError`` or
    ``ValueError`` is reported as a failure; other exceptions propagate.

    Returns
    -------
    SubsumptionReport
        The number of checked instances and a list of failures.
    """
    rng = random.Random(0) if rng is None else rng
    checked = 0
    failures = []
    reached = []
    seen = set()

    def remember(element):
        if element not in seen:
            seen.add(element)
            reached.append(element)

    def agree(template, substitution, env, hole_value, expected):
        aux = {
            name: evaluate_term(term, interpret, env)
            for name, term in substitution.items()
        }
        aux[HOLE.name] = hole_value
        return evaluate_term(template.term, interpret, aux) == expected

    for symbol, word in signature.symbols.items():
        for position in range(len(word) - 1):
            try:
                element, substitution = base.subsume_atomic(symbol, position)
                template = base.template(element)
            except (SlpError, ValueError) as e:
                failures.append(("atomic", symbol, position, repr(e)))
                continue
            remember(element)
            for _ in range(samples):
                args = [sampler(sort, rng) for sort in word[:-1]]
                env = {("arg", i): value for i, value in enumerate(args)}
                expected = interpret(symbol, tuple(args))
                checked += 1
                if not agree(
                    template, substitution, env, args[position], expected
                ):
                    failures.append(("atomic", symbol, position, args))
                    break

    queue = deque(reached)
    done = set()
    while queue and len(done) < limit:
        element = queue.popleft()
        for other in list(reached):
            for outer, inner in ((element, other), (other, element)):
                if (outer, inner) in done:
                    continue
                done.add((outer, inner))
                s = base.template(outer)
                t = base.template(inner)
                if s.hole_sort != t.result_sort:
                    continue
                try:
                    composed, substitution = base.compose(outer, inner)
                    u = base.template(composed)
                except (SlpError, ValueError) as e:
                    failures.append(("compose", outer, inner, repr(e)))
                    continue
                if composed not in seen:
                    remember(composed)
                    queue.append(composed)
                for _ in range(samples):
                    env = _sample_env(s.aux_sorts, sampler, rng, "outer")
                    env.update(
                        _sample_env(t.aux_sorts, sampler, rng, "inner")
                    )
                    hole_value = sampler(t.hole_sort, rng)
                    inner_env = {
                        name: env[("inner", name)] for name in t.aux_sorts
                    }
                    inner_env[HOLE.name] = hole_value
                    middle = evaluate_term(t.term, interpret, inner_env)
                    outer_env = {
                        name: env[("outer", name)] for name in s.aux_sorts
                    }
                    outer_env[HOLE.name] = middle
                    expected = evaluate_term(s.term, interpret, outer_env)
                    checked += 1
                    if not agree(u, substitution, env, hole_value, expected):
                        failures.append(("compose", outer, inner, env))
                        break
    return SubsumptionReport(checked, failures)
