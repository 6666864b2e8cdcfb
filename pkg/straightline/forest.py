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

"""The forest algebra, forest straight-line programs and their balancing.

Forests are sequences of ordered trees over an alphabet; forest contexts
are forests with exactly one leaf labelled ``*``. Values are token tuples
of the bracket string: the tree ``a`` with children ``f`` is
``a ( f )``.
"""

import logging
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
    bottom_up_order,
    evaluate,
    resolve_aliases,
    standardize,
    validate,
)
from straightline.exceptions import CapExceeded, EmptyForest, SortMismatch
from straightline.queries import DEFAULT_BASE, MERSENNE_61


logger = logging.getLogger(__name__)

FOREST = "F0"
CONTEXT = "F1"

H00 = "H00"
H01 = "H01"
H10 = "H10"
V0 = "V0"
V1 = "V1"
EPS = "EPS"
STAR = "STAR"

RESERVED = frozenset([H00, H01, H10, V0, V1, EPS, STAR])
STAR_TOKEN = "*"
OPEN = "("
CLOSE = ")"

_BAD_LETTER = re.compile(r"[\s(),*:]|^v\d+$|^$")

_OPERATIONS = {
    H00: (FOREST, FOREST, FOREST),
    H01: (FOREST, CONTEXT, CONTEXT),
    H10: (CONTEXT, FOREST, CONTEXT),
    V0: (CONTEXT, FOREST, FOREST),
    V1: (CONTEXT, CONTEXT, CONTEXT),
    EPS: (FOREST,),
    STAR: (CONTEXT,),
}


def check_letter(name):
    if name in RESERVED or _BAD_LETTER.search(name):
        raise ValueError("{!r} cannot be used as a letter".format(name))
    return name


def forest_signature(letters):
    """Forest algebra over ``letters``; every letter ``a`` is the constant
    context ``a(*)``."""
    symbols = dict(_OPERATIONS)
    for name in letters:
        symbols[check_letter(name)] = (CONTEXT,)
    return Signature([FOREST, CONTEXT], symbols)


def letters_of(signature):
    return [s for s in signature.symbols if s not in RESERVED]


def _splice(context, value):
    index = context.index(STAR_TOKEN)
    return context[:index] + value + context[index + 1:]


def forest_interpretation(symbol, args):
    if symbol in (H00, H01, H10):
        return args[0] + args[1]
    if symbol in (V0, V1):
        return _splice(args[0], args[1])
    if symbol == EPS:
        return ()
    if symbol == STAR:
        return (STAR_TOKEN,)
    return (symbol, OPEN, STAR_TOKEN, CLOSE)


def to_brackets(value):
    return "".join(value)


def _node_counts(grammar):
    counts = {}
    for variable in bottom_up_order(grammar):
        term = grammar.rules[variable]
        stack = [term]
        total = 0
        while stack:
            node = stack.pop()
            if isinstance(node, Ref):
                total += counts[node.name]
            elif node.symbol not in RESERVED:
                total += 1
            else:
                stack.extend(node.args)
        counts[variable] = total
    return counts


def forest_size(grammar):
    """Number of nodes of the forest a grammar derives."""
    return _node_counts(grammar)[grammar.start]


def expand_forest(grammar, cap):
    """Return the token tuple of the forest derived by ``grammar``.

    Raises
    ------
    CapExceeded
        If the forest has more than ``cap`` nodes.
    """
    if cap < 1:
        raise ValueError("cap must be positive, got {}".format(cap))
    validate(grammar)
    size = forest_size(grammar)
    if size > cap:
        raise CapExceeded(size, cap)
    return evaluate(grammar, forest_interpretation)


def token_code(token, letters):
    """Code of a bracket-string token for fingerprinting."""
    if token == OPEN:
        return 1
    if token == CLOSE:
        return 2
    return letters.index(token) + 3


def forest_fingerprint(grammar, base=DEFAULT_BASE, modulus=MERSENNE_61):
    """Karp-Rabin fingerprint of the bracket string of the derived forest.

    Forests carry a (fingerprint, power) pair, contexts one pair for the
    tokens before ``*`` and one for the tokens after it. The value agrees
    with ``fingerprint_of`` applied to the expanded token codes.
    """
    letters = letters_of(grammar.signature)
    empty = (0, 1)

    def token(code):
        return ((code + 1) % modulus, base % modulus)

    def cat(*parts):
        value, power = 0, 1
        for part_value, part_power in parts:
            value = (value * part_power + part_value) % modulus
            power = power * part_power % modulus
        return value, power

    def interpret(symbol, args):
        if symbol == H00:
            return cat(args[0], args[1])
        if symbol == H01:
            forest, (before, after) = args
            return cat(forest, before), after
        if symbol == H10:
            (before, after), forest = args
            return before, cat(after, forest)
        if symbol == V0:
            (before, after), forest = args
            return cat(before, forest, after)
        if symbol == V1:
            (before, after), (inner_before, inner_after) = args
            return cat(before, inner_before), cat(inner_after, after)
        if symbol == EPS:
            return empty
        if symbol == STAR:
            return empty, empty
        opening = cat(
            token(letters.index(symbol) + 3), token(token_code(OPEN, letters))
        )
        return opening, token(token_code(CLOSE, letters))

    validate(grammar)
    return evaluate(grammar, interpret)[0]


def _star_free(grammar):
    """Rewrite a standardized grammar so that ``STAR`` no longer occurs.

    A context whose ``*`` sits at a root position is split into the
    forests left and right of it; any other context into its top part
    (the subtree above ``*`` cut to ``a(*)``) and the forests left and
    right of ``*``.
    """
    sorts = validate(grammar)
    at_root = {}
    for variable in bottom_up_order(grammar):
        term = grammar.rules[variable]
        if term.symbol == STAR:
            at_root[variable] = True
        elif term.symbol == H01:
            at_root[variable] = at_root[term.args[1].name]
        elif term.symbol == H10:
            at_root[variable] = at_root[term.args[0].name]
        elif term.symbol == V1:
            at_root[variable] = all(at_root[a.name] for a in term.args)
        elif sorts[variable] == CONTEXT:
            at_root[variable] = False

    rules = []

    def slot():
        rules.append(None)
        return len(rules) - 1

    whole, top, left, right = {}, {}, {}, {}
    for variable in range(grammar.var_count):
        if sorts[variable] == FOREST:
            whole[variable] = slot()
        else:
            if not at_root[variable]:
                top[variable] = slot()
            left[variable] = slot()
            right[variable] = slot()

    def ref(table, variable):
        return Ref(table[variable])

    def h00(first, second):
        return Term(H00, (first, second))

    def outside(y, z_top):
        # y_left z_top y_right
        return Term(
            H01, (ref(left, y), Term(H10, (z_top, ref(right, y))))
        )

    for variable in range(grammar.var_count):
        term = grammar.rules[variable]
        symbol = term.symbol
        names = [a.name for a in term.args]
        if symbol == STAR:
            rules[left[variable]] = Term(EPS)
            rules[right[variable]] = Term(EPS)
        elif symbol not in RESERVED:
            rules[top[variable]] = Term(symbol)
            rules[left[variable]] = Term(EPS)
            rules[right[variable]] = Term(EPS)
        elif symbol == EPS:
            rules[whole[variable]] = Term(EPS)
        elif symbol == H00:
            y, z = names
            rules[whole[variable]] = h00(ref(whole, y), ref(whole, z))
        elif symbol == H01:
            y, z = names
            if at_root[z]:
                rules[left[variable]] = h00(ref(whole, y), ref(left, z))
                rules[right[variable]] = ref(right, z)
            else:
                rules[top[variable]] = Term(
                    H01, (ref(whole, y), ref(top, z))
                )
                rules[left[variable]] = ref(left, z)
                rules[right[variable]] = ref(right, z)
        elif symbol == H10:
            y, z = names
            if at_root[y]:
                rules[left[variable]] = ref(left, y)
                rules[right[variable]] = h00(ref(right, y), ref(whole, z))
            else:
                rules[top[variable]] = Term(
                    H10, (ref(top, y), ref(whole, z))
                )
                rules[left[variable]] = ref(left, y)
                rules[right[variable]] = ref(right, y)
        elif symbol == V0:
            y, z = names
            middle = h00(h00(ref(left, y), ref(whole, z)), ref(right, y))
            if at_root[y]:
                rules[whole[variable]] = middle
            else:
                rules[whole[variable]] = Term(V0, (ref(top, y), middle))
        elif symbol == V1:
            y, z = names
            if at_root[y] and at_root[z]:
                rules[left[variable]] = h00(ref(left, y), ref(left, z))
                rules[right[variable]] = h00(ref(right, z), ref(right, y))
            elif at_root[y]:
                rules[top[variable]] = outside(y, ref(top, z))
                rules[left[variable]] = ref(left, z)
                rules[right[variable]] = ref(right, z)
            elif at_root[z]:
                rules[top[variable]] = ref(top, y)
                rules[left[variable]] = h00(ref(left, y), ref(left, z))
                rules[right[variable]] = h00(ref(right, z), ref(right, y))
            else:
                rules[top[variable]] = Term(
                    V1, (ref(top, y), outside(y, ref(top, z)))
                )
                rules[left[variable]] = ref(left, z)
                rules[right[variable]] = ref(right, z)

    return GammaSlp(grammar.signature, rules, whole[grammar.start])


def _eps_free(grammar):
    """Drop empty forests from a standardized star-free grammar.

    Every context variable ``X`` also gets a copy deriving ``X`` applied
    to the empty forest; letters yield ``a(EPS)`` there, the only place
    ``EPS`` remains.
    """
    sorts = validate(grammar)
    empty = set()
    for variable in bottom_up_order(grammar):
        term = grammar.rules[variable]
        if term.symbol == EPS or (
            term.symbol == H00
            and all(a.name in empty for a in term.args)
        ):
            empty.add(variable)
    if grammar.start in empty:
        raise EmptyForest("The grammar derives the empty forest")

    rules = list(grammar.rules)
    closed = {}
    for variable in range(grammar.var_count):
        if sorts[variable] == CONTEXT:
            rules.append(None)
            closed[variable] = len(rules) - 1

    for variable in range(grammar.var_count):
        if variable in empty:
            rules[variable] = Term(EPS)
            continue
        term = grammar.rules[variable]
        symbol = term.symbol
        names = [a.name for a in term.args]
        if symbol not in RESERVED:
            rules[closed[variable]] = Term(V0, (Ref(variable), Term(EPS)))
        elif symbol == H00:
            y, z = names
            if y in empty:
                rules[variable] = Ref(z)
            elif z in empty:
                rules[variable] = Ref(y)
        elif symbol == H01:
            y, z = names
            if y in empty:
                rules[variable] = Ref(z)
                rules[closed[variable]] = Ref(closed[z])
            else:
                rules[closed[variable]] = Term(
                    H00, (Ref(y), Ref(closed[z]))
                )
        elif symbol == H10:
            y, z = names
            if z in empty:
                rules[variable] = Ref(y)
                rules[closed[variable]] = Ref(closed[y])
            else:
                rules[closed[variable]] = Term(
                    H00, (Ref(closed[y]), Ref(z))
                )
        elif symbol == V1:
            y, z = names
            rules[closed[variable]] = Term(V0, (Ref(y), Ref(closed[z])))
        elif symbol == V0:
            y, z = names
            if z in empty:
                rules[variable] = Ref(closed[y])

    return resolve_aliases(GammaSlp(grammar.signature, rules, grammar.start))


def eliminate_eps_star(grammar):
    """Remove the constants ``EPS`` and ``STAR`` from a forest grammar.

    The result derives the same forest; ``EPS`` only survives inside
    right-hand sides ``a(EPS)``.

    Raises
    ------
    SortMismatch
        If the grammar derives a context rather than a forest.
    EmptyForest
        If the grammar derives the empty forest.
    """
    sorts = validate(grammar)
    if sorts[grammar.start] != FOREST:
        raise SortMismatch("A forest grammar must derive a forest")
    standard = standardize(grammar)
    star_free = standardize(_star_free(standard))
    result = _eps_free(star_free)
    logger.debug(
        "Eliminated EPS and STAR: %d variables in, %d out",
        grammar.var_count,
        result.var_count,
    )
    return result


def _shape(kind, side):
    return kind if side is None else kind + side


_HOLE_SORTS = {
    "A": (FOREST, FOREST),
    "B0": (CONTEXT, FOREST),
    "B1": (CONTEXT, CONTEXT),
    "C": (FOREST, CONTEXT),
    "D": (CONTEXT, CONTEXT),
}


class ForestBase(SubsumptionBase):
    """Subsumption base of the forest algebra.

    Elements are ``(kind, side)`` pairs. With ``x`` a forest hole and
    ``y`` a context hole the kinds are::

        A   V0(top, x)
        B0  V0(top, V0(y, tail))
        B1  V1(top, V1(y, tail))
        C   V1(top, H10(sib, V0(wrap, x)))    side L
            V1(top, H01(V0(wrap, x), sib))    side R
        D   like C with V0(y, tail) for x

    ``STAR`` stands in for missing parts.
    """

    def template(self, element):
        kind, side = element
        hole_sort, result_sort = _HOLE_SORTS[kind]
        aux = {"top": CONTEXT}
        top = Ref("top")
        if kind == "A":
            term = Term(V0, (top, HOLE))
        elif kind == "B0":
            term = Term(V0, (top, Term(V0, (HOLE, Ref("tail")))))
            aux["tail"] = FOREST
        elif kind == "B1":
            term = Term(V1, (top, Term(V1, (HOLE, Ref("tail")))))
            aux["tail"] = CONTEXT
        else:
            core = HOLE
            if kind == "D":
                core = Term(V0, (HOLE, Ref("tail")))
                aux["tail"] = FOREST
            inner = Term(V0, (Ref("wrap"), core))
            if side == "L":
                body = Term(H10, (Ref("sib"), inner))
            else:
                body = Term(H01, (inner, Ref("sib")))
            term = Term(V1, (top, body))
            aux["sib"] = CONTEXT
            aux["wrap"] = CONTEXT
        return BaseContext(
            term, hole_sort, result_sort, aux, _shape(kind, side)
        )

    def subsume_atomic(self, symbol, position):
        star = Term(STAR)
        other = Ref(("arg", 1 - position))
        if symbol == H00:
            if position == 0:
                return ("A", None), {"top": Term(H10, (star, other))}
            return ("A", None), {"top": Term(H01, (other, star))}
        if symbol == H01:
            if position == 1:
                top = Term(H01, (other, star))
                return ("B1", None), {"top": top, "tail": star}
            return ("C", "R"), {"top": star, "wrap": star, "sib": other}
        if symbol == H10:
            if position == 1:
                return ("C", "L"), {"top": star, "wrap": star, "sib": other}
            top = Term(H10, (star, other))
            return ("B1", None), {"top": top, "tail": star}
        if symbol == V0:
            if position == 1:
                return ("A", None), {"top": other}
            return ("B0", None), {"top": star, "tail": other}
        if symbol == V1:
            if position == 1:
                return ("B1", None), {"top": other, "tail": star}
            return ("B1", None), {"top": star, "tail": other}
        raise SortMismatch(
            "Forest symbol {!r} takes no arguments".format(symbol)
        )

    def compose(self, outer, inner):
        s_kind, s_side = outer
        t_kind, t_side = inner

        def o(role):
            return Ref(("outer", role))

        def i(role):
            return Ref(("inner", role))

        def v1(first, second):
            return Term(V1, (first, second))

        roles = {
            role: o(role)
            for role in self.template(outer).aux_sorts
            if role != "tail"
        }

        def merge(term):
            if s_side is None:
                roles["top"] = v1(roles["top"], term)
            else:
                roles["wrap"] = v1(roles["wrap"], term)

        if t_kind in ("A", "B0"):
            merge(i("top"))
            if t_kind == "A":
                return outer, roles
            roles["tail"] = i("tail")
            return ("B0" if s_kind == "A" else "D", s_side), roles

        if t_kind == "B1":
            merge(i("top"))
            tail_symbol = V1 if s_kind == "B1" else V0
            roles["tail"] = Term(tail_symbol, (i("tail"), o("tail")))
            return outer, roles

        if s_kind in ("B0", "D"):
            filled = Term(V0, (i("sib"), o("tail")))
            if t_side == "L":
                body = Term(H01, (filled, i("wrap")))
            else:
                body = Term(H10, (i("wrap"), filled))
            merge(v1(i("top"), body))
            if t_kind == "D":
                roles["tail"] = i("tail")
            if s_kind == "B0":
                return ("A" if t_kind == "C" else "B0", None), roles
            return (t_kind, s_side), roles

        # s_kind is B1 and the inner context is sided
        roles = {
            "top": v1(o("top"), i("top")),
            "sib": v1(i("sib"), o("tail")),
            "wrap": i("wrap"),
        }
        if t_kind == "D":
            roles["tail"] = i("tail")
        return inner, roles

    def contexts(self):
        return [
            ("A", None),
            ("B0", None),
            ("B1", None),
            ("C", "L"),
            ("C", "R"),
            ("D", "L"),
            ("D", "R"),
        ]


def balance_fslp(grammar, envelope=DEFAULT_ENVELOPE):
    """Balance a forest grammar to depth logarithmic in its forest size.

    Raises
    ------
    EmptyForest
        If the grammar derives the empty forest.
    """
    return balance_circuit(eliminate_eps_star(grammar), ForestBase(), envelope)


def random_forest(letters, size, rng):
    """Token tuple of a random forest with ``size`` nodes."""
    tokens = []
    budget = size
    while budget > 0:
        below = rng.randint(0, budget - 1)
        tokens.append(rng.choice(letters))
        tokens.append(OPEN)
        tokens.extend(random_forest(letters, below, rng))
        tokens.append(CLOSE)
        budget -= below + 1
    return tuple(tokens)


def random_context(letters, size, rng):
    """Token tuple of a random forest context with ``size`` letter nodes."""
    tokens = random_forest(letters, size, rng)
    slots = [
        index
        for index in range(len(tokens) + 1)
        if index == 0 or tokens[index - 1] in (OPEN, CLOSE)
    ]
    index = rng.choice(slots)
    return tokens[:index] + (STAR_TOKEN,) + tokens[index:]


def forest_sampler(letters, max_size=12):
    """Sampler of random forests and contexts for base verification."""

    def sample(sort, rng):
        size = rng.randint(0, max_size)
        if sort == FOREST:
            return random_forest(letters, size, rng)
        return random_context(letters, size, rng)

    return sample


def example_fslp(n):
    """The FSLP family whose forest is ``b(A Y A)`` nested ``2**n`` deep.

    Here ``A`` is ``a`` repeated ``2**n`` times; the innermost ``b`` is
    ``c``. The forest has ``2**n * (2 * 2**n + 1) + 1`` nodes.
    """
    signature = forest_signature(["a", "b", "c"])
    rules = [Term(V0, (Term("a"), Term(EPS)))]
    for _ in range(n):
        previous = Ref(len(rules) - 1)
        rules.append(Term(H00, (previous, previous)))
    a_block = Ref(len(rules) - 1)
    around = Term(H01, (a_block, Term(H10, (Term(STAR), a_block))))
    rules.append(Term(V1, (Term("b"), around)))
    for _ in range(n):
        previous = Ref(len(rules) - 1)
        rules.append(Term(V1, (previous, previous)))
    top = Ref(len(rules) - 1)
    rules.append(Term(V0, (top, Term(V0, (Term("c"), Term(EPS))))))
    return GammaSlp(signature, rules, len(rules) - 1)
