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

"""The cluster algebra and top dags.

A cluster is a tree fragment with a labelled top boundary node and at
most one bottom boundary leaf. Clusters of sort ``a`` have top label
``a`` and no bottom boundary; clusters of sort ``a:b`` have a bottom
boundary leaf labelled ``b``. A top dag is a circuit over this algebra.

Symbols are named after the sorts they act on:

=============  ==================  =====================================
symbol         type                meaning
=============  ==================  =====================================
``h:a``        a, a -> a           merge the children of both tops
``hr:a:b``     a, a:b -> a:b       same, boundary in the right cluster
``hl:a:b``     a:b, a -> a:b       same, boundary in the left cluster
``v:a:b``      a:b, b -> a         put a cluster at the boundary leaf
``v:a:b:c``    a:b, b:c -> a:c     same, keeping a boundary
``c:a:b``      a                   the edge a(b)
``u:a:b``      a:b                 the edge a(b) with b the boundary
=============  ==================  =====================================
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

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
    bottom_up_order,
    evaluate,
    validate,
)
from straightline.exceptions import CapExceeded, SortMismatch
from straightline.forest import CLOSE, OPEN, random_forest
from straightline.queries import DEFAULT_BASE, MERSENNE_61


logger = logging.getLogger(__name__)

BOUNDARY = "*"

_BAD_LETTER = re.compile(r"[\s(),*:]|^v\d+$|^$")

_ARITY = {"h": 1, "hr": 2, "hl": 2, "v": (2, 3), "c": 2, "u": 2}


def rank(sort):
    return sort.count(":")


def top_of(sort):
    return sort.split(":")[0]


def bottom_of(sort):
    parts = sort.split(":")
    return parts[1] if len(parts) > 1 else None


def _sort(top, bottom=None):
    return top if bottom is None else "{}:{}".format(top, bottom)


class ClusterSignature(Signature):
    """Cluster algebra over ``letters``; symbol types are derived from
    their names on demand."""

    def __init__(self, letters):
        self.letters = tuple(letters)
        for name in self.letters:
            if _BAD_LETTER.search(name):
                raise ValueError(
                    "{!r} cannot be used as a letter".format(name)
                )
        self.sorts = frozenset(
            [a for a in self.letters]
            + [_sort(a, b) for a in self.letters for b in self.letters]
        )

    @property
    def symbols(self):
        return _all_symbols(self.letters, self)

    def type_of(self, symbol):
        if not isinstance(symbol, str):
            return super().type_of(symbol)
        return _parse_symbol(self.letters, symbol)


@lru_cache(maxsize=None)
def _parse_symbol(letters, symbol):
    kind, *labels = symbol.split(":")
    expected = _ARITY.get(kind)
    if expected is None or len(labels) not in (
        expected if isinstance(expected, tuple) else (expected,)
    ):
        raise SortMismatch("Unknown cluster symbol {!r}".format(symbol))
    for label in labels:
        if label not in letters:
            raise SortMismatch(
                "Symbol {!r} uses unknown letter {!r}".format(symbol, label)
            )
    if kind == "h":
        (a,) = labels
        return (a, a, a)
    if kind == "hr":
        a, b = labels
        return (a, _sort(a, b), _sort(a, b))
    if kind == "hl":
        a, b = labels
        return (_sort(a, b), a, _sort(a, b))
    if kind == "v" and len(labels) == 2:
        a, b = labels
        return (_sort(a, b), b, a)
    if kind == "v":
        a, b, c = labels
        return (_sort(a, b), _sort(b, c), _sort(a, c))
    a, b = labels
    if kind == "c":
        return (a,)
    return (_sort(a, b),)


def _all_symbols(letters, signature):
    names = ["h:" + a for a in letters]
    for a in letters:
        for b in letters:
            names.extend(
                "{}:{}:{}".format(kind, a, b)
                for kind in ("hr", "hl", "v", "c", "u")
            )
            names.extend("v:{}:{}:{}".format(a, b, c) for c in letters)
    return {name: signature.type_of(name) for name in names}


def hmerge_symbol(left, right):
    if top_of(left) != top_of(right) or rank(left) + rank(right) > 1:
        raise SortMismatch(
            "Cannot merge clusters of sorts {} and {}".format(left, right)
        )
    if rank(right):
        return "hr:" + right
    if rank(left):
        return "hl:" + left
    return "h:" + left


def vmerge_symbol(upper, lower):
    if bottom_of(upper) != top_of(lower):
        raise SortMismatch(
            "Cannot put a cluster of sort {} below {}".format(lower, upper)
        )
    if rank(lower):
        return "v:{}:{}".format(upper, bottom_of(lower))
    return "v:" + upper


def _hmerge(first, second):
    """Merge two optional ``(term, sort)`` parts side by side."""
    if first is None:
        return second
    if second is None:
        return first
    symbol = hmerge_symbol(first[1], second[1])
    sort = first[1] if rank(first[1]) else second[1]
    return Term(symbol, (first[0], second[0])), sort


def _vmerge(upper, lower):
    if upper is None:
        return lower
    if lower is None:
        return upper
    symbol = vmerge_symbol(upper[1], lower[1])
    sort = _sort(top_of(upper[1]), bottom_of(lower[1]))
    return Term(symbol, (upper[0], lower[0])), sort


def cluster_interpretation(symbol, args):
    """Clusters as bracket-string tokens; the boundary leaf ``b`` is the
    single token ``*b``."""
    kind, *labels = symbol.split(":")
    if kind in ("h", "hr", "hl"):
        left, right = args
        return left[:-1] + right[2:]
    if kind == "v":
        upper, lower = args
        index = upper.index(BOUNDARY + labels[1])
        return upper[:index] + lower + upper[index + 1:]
    a, b = labels
    if kind == "c":
        return (a, OPEN, b, OPEN, CLOSE, CLOSE)
    return (a, OPEN, BOUNDARY + b, CLOSE)


def to_brackets(value):
    return "".join(
        token[1:] + OPEN + CLOSE if token.startswith(BOUNDARY) else token
        for token in value
    )


def cluster_size(grammar):
    """Number of nodes of the cluster a top dag derives."""
    sizes = {}

    def size_of(term):
        if isinstance(term, Ref):
            return sizes[term.name]
        if not term.args:
            return 2
        return sum(size_of(arg) for arg in term.args) - 1

    for variable in bottom_up_order(grammar):
        sizes[variable] = size_of(grammar.rules[variable])
    return sizes[grammar.start]


def expand_cluster(grammar, cap):
    """Return the token tuple of the tree derived by a top dag.

    Raises
    ------
    CapExceeded
        If the tree has more than ``cap`` nodes.
    """
    if cap < 1:
        raise ValueError("cap must be positive, got {}".format(cap))
    validate(grammar)
    size = cluster_size(grammar)
    if size > cap:
        raise CapExceeded(size, cap)
    return evaluate(grammar, cluster_interpretation)


def cluster_fingerprint(grammar, base=DEFAULT_BASE, modulus=MERSENNE_61):
    """Karp-Rabin fingerprint of the bracket string of the derived tree.

    Token codes match ``forest.token_code``.
    """
    letters = list(grammar.signature.letters)
    empty = (0, 1)

    def token(code):
        return ((code + 1) % modulus, base % modulus)

    def cat(*parts):
        value, power = 0, 1
        for part_value, part_power in parts:
            value = (value * part_power + part_value) % modulus
            power = power * part_power % modulus
        return value, power

    opening, closing = token(1), token(2)

    def label(name):
        return cat(token(letters.index(name) + 3), opening)

    # rank 0: (top, children); rank 1: (top, before, after)
    def interpret(symbol, args):
        kind, *labels = symbol.split(":")
        if kind == "h":
            (a, left), (_, right) = args
            return a, cat(left, right)
        if kind == "hr":
            (a, left), (_, before, after) = args
            return a, cat(left, before), after
        if kind == "hl":
            (a, before, after), (_, right) = args
            return a, before, cat(after, right)
        if kind == "v" and len(labels) == 2:
            (a, before, after), (b, children) = args
            return a, cat(before, label(b), children, closing, after)
        if kind == "v":
            (a, before, after), (b, inner_before, inner_after) = args
            return (
                a,
                cat(before, label(b), inner_before),
                cat(inner_after, closing, after),
            )
        a, b = labels
        if kind == "c":
            return a, cat(label(b), closing)
        return a, empty, empty

    validate(grammar)
    value = evaluate(grammar, interpret)
    if len(value) != 2:
        raise SortMismatch("Only clusters without boundary leaf hash")
    top, children = value
    return cat(label(top), children, closing)[0]


@dataclass(frozen=True)
class ClusterShape:
    """A base context of the cluster algebra.

    Every auxiliary field holds the sort of that auxiliary cluster or
    ``None`` when it is missing. The context is::

        core = v(h(left, x, right), tail)
        body = h(sib, v(wrap, core))      side L
               h(v(wrap, core), sib)      side R
               core                       no side
        top-level: v(top, body)
    """

    hole: str
    side: Optional[str] = None
    top: Optional[str] = None
    sib: Optional[str] = None
    wrap: Optional[str] = None
    left: Optional[str] = None
    right: Optional[str] = None
    tail: Optional[str] = None

    @property
    def label(self):
        sided = {None: 0, "L": 1, "R": 2}[self.side]
        if rank(self.hole) == 0:
            return "ade"[sided]
        if self.tail is not None and rank(self.tail) == 0:
            return "bfg"[sided]
        return "c"


_ROLES = ("top", "sib", "wrap", "left", "right", "tail")


def _shape_term(shape, part):
    core = _hmerge(_hmerge(part("left"), (HOLE, shape.hole)), part("right"))
    core = _vmerge(core, part("tail"))
    if shape.side is None:
        body = core
    else:
        middle = _vmerge(part("wrap"), core)
        if shape.side == "L":
            body = _hmerge(part("sib"), middle)
        else:
            body = _hmerge(middle, part("sib"))
    return _vmerge(part("top"), body)


class ClusterBase(SubsumptionBase):
    """Subsumption base of the cluster algebra.

    Elements are ClusterShape values created on demand, so the base is
    never enumerated for a whole alphabet.
    """

    def template(self, element):
        aux = {}

        def part(role):
            sort = getattr(element, role)
            if sort is None:
                return None
            aux[role] = sort
            return Ref(role), sort

        term, result = _shape_term(element, part)
        return BaseContext(term, element.hole, result, aux, element.label)

    def subsume_atomic(self, symbol, position):
        kind, *labels = symbol.split(":")
        other = Ref(("arg", 1 - position))
        if kind == "h":
            (a,) = labels
            if position == 0:
                return ClusterShape(a, right=a), {"right": other}
            return ClusterShape(a, left=a), {"left": other}
        if kind in ("hr", "hl"):
            a, b = labels
            # the argument holding the boundary leaf
            boundary = 1 if kind == "hr" else 0
            if position == boundary:
                role = "left" if kind == "hr" else "right"
                shape = ClusterShape(_sort(a, b), **{role: a})
                return shape, {role: other}
            side = "R" if kind == "hr" else "L"
            shape = ClusterShape(a, side=side, sib=_sort(a, b))
            return shape, {"sib": other}
        if kind == "v":
            upper, lower = (
                _sort(*labels[:2]),
                _sort(*labels[1:]),
            )
            if position == 0:
                return ClusterShape(upper, tail=lower), {"tail": other}
            return ClusterShape(lower, top=upper), {"top": other}
        raise SortMismatch(
            "Cluster symbol {!r} takes no arguments".format(symbol)
        )

    def compose(self, outer, inner):
        parts = {
            role: (Ref(("inner", role)), getattr(inner, role))
            for role in _ROLES
            if getattr(inner, role) is not None
        }
        mine = {
            role: (Ref(("outer", role)), getattr(outer, role))
            for role in _ROLES
            if getattr(outer, role) is not None
        }
        side = inner.side

        def put(role, value):
            if value is None:
                parts.pop(role, None)
            else:
                parts[role] = value

        # horizontal parts of the outer context join the topmost node
        left, right = mine.get("left"), mine.get("right")
        if "top" in parts:
            put("top", _hmerge(_hmerge(left, parts["top"]), right))
        elif side is None:
            put("left", _hmerge(left, parts.get("left")))
            put("right", _hmerge(parts.get("right"), right))
        elif side == "L":
            put("sib", _hmerge(left, parts["sib"]))
            if "wrap" in parts:
                put("wrap", _hmerge(parts["wrap"], right))
            else:
                put("right", _hmerge(parts.get("right"), right))
        else:
            put("sib", _hmerge(parts["sib"], right))
            if "wrap" in parts:
                put("wrap", _hmerge(left, parts["wrap"]))
            else:
                put("left", _hmerge(left, parts.get("left")))

        # the outer tail goes to the boundary leaf of the inner context
        if "tail" in mine:
            if side is None:
                put("tail", _vmerge(parts.get("tail"), mine["tail"]))
            else:
                sib = _vmerge(parts.pop("sib"), mine["tail"])
                if rank(sib[1]):
                    put("sib", sib)
                else:
                    # without a boundary in sib the wrap joins the top
                    if "wrap" in parts:
                        if side == "L":
                            wrap = _hmerge(sib, parts.pop("wrap"))
                        else:
                            wrap = _hmerge(parts.pop("wrap"), sib)
                        put("top", _vmerge(parts.get("top"), wrap))
                    elif side == "L":
                        put("left", _hmerge(sib, parts.get("left")))
                    else:
                        put("right", _hmerge(parts.get("right"), sib))
                    side = None

        if outer.side is None:
            put("top", _vmerge(mine.get("top"), parts.get("top")))
        else:
            side = outer.side
            put("wrap", _vmerge(mine.get("wrap"), parts.pop("top", None)))
            put("sib", mine["sib"])
            put("top", mine.get("top"))

        shape = ClusterShape(
            inner.hole, side=side, **{r: v[1] for r, v in parts.items()}
        )
        return shape, {role: value[0] for role, value in parts.items()}


def balance_top_dag(grammar, envelope=DEFAULT_ENVELOPE):
    """Balance a top dag to depth logarithmic in the size of its tree.

    Raises
    ------
    SortMismatch
        If the top dag derives a cluster with a boundary leaf.
    """
    sorts = validate(grammar)
    if rank(sorts[grammar.start]):
        raise SortMismatch("A top dag must derive a cluster of rank 0")
    return balance_circuit(grammar, ClusterBase(), envelope)


def cluster_sampler(letters, max_size=12):
    """Sampler of random clusters of a given sort for base verification."""

    def sample(sort, rng):
        size = rng.randint(2, max_size)
        top, bottom = top_of(sort), bottom_of(sort)
        if bottom is None:
            children = random_forest(letters, size - 1, rng)
            return (top, OPEN) + children + (CLOSE,)
        children = random_forest(letters, size - 2, rng)
        slots = [
            index
            for index in range(len(children) + 1)
            if index == 0 or children[index - 1] in (OPEN, CLOSE)
        ]
        index = rng.choice(slots)
        children = (
            children[:index] + (BOUNDARY + bottom,) + children[index:]
        )
        return (top, OPEN) + children + (CLOSE,)

    return sample


def example_top_dag(n):
    """Top dag of ``b(A b(A ... b(c) ... A) A)`` with ``2**n + 1`` b's,
    where ``A`` is ``a`` repeated ``2**n`` times."""
    signature = ClusterSignature(["a", "b", "c"])
    rules = [Term("c:b:a")]
    for _ in range(n):
        previous = Ref(len(rules) - 1)
        rules.append(Term("h:b", (previous, previous)))
    block = Ref(len(rules) - 1)
    rules.append(
        Term("hl:b:b", (Term("hr:b:b", (block, Term("u:b:b"))), block))
    )
    for _ in range(n):
        previous = Ref(len(rules) - 1)
        rules.append(Term("v:b:b:b", (previous, previous)))
    rules.append(Term("v:b:b", (Ref(len(rules) - 1), Term("c:b:c"))))
    return GammaSlp(signature, rules, len(rules) - 1)
