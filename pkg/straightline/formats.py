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

import re

from straightline.algebra import GammaSlp, Ref, Signature, Term
from straightline.cluster import ClusterSignature
from straightline.exceptions import FormatError
from straightline.forest import RESERVED, forest_signature, letters_of
from straightline.grammar import Sslp, Terminal, Variable


BINARY_MAGIC = b"SLPB"
BINARY_VERSION = 1

SSLP_HEADER = "SSLP 1"
GSLP_HEADER = "GSLP 1"
FSLP_HEADER = "FSLP 1"
TOPDAG_HEADER = "TOPDAG 1"

_SYMBOL = re.compile(r"^([tv])(\d+)$")
_VARIABLE = re.compile(r"^v(\d+)$")
_TOKEN = re.compile(r"\s*([(),]|[^\s(),]+)")


class _Lines:
    """Cursor over the non-empty lines of a text grammar."""

    def __init__(self, text):
        self._lines = [
            (number, line.strip())
            for number, line in enumerate(text.splitlines(), start=1)
            if line.strip()
        ]
        self._index = 0

    def next(self, what):
        if self._index >= len(self._lines):
            raise FormatError("Unexpected end of input, expected " + what)
        number, line = self._lines[self._index]
        self._index += 1
        return number, line

    def header(self, expected):
        number, line = self.next(repr(expected))
        if line != expected:
            raise FormatError(
                "Line {}: expected header {!r}, got {!r}".format(
                    number, expected, line
                )
            )

    def keyword(self, keyword):
        """Return the rest of a ``keyword ...`` line."""
        number, line = self.next(repr(keyword))
        head, _, rest = line.partition(" ")
        if head != keyword:
            raise FormatError(
                "Line {}: expected {!r}, got {!r}".format(
                    number, keyword, line
                )
            )
        return number, rest.strip()

    def count(self, keyword):
        number, rest = self.keyword(keyword)
        try:
            value = int(rest)
        except ValueError:
            raise FormatError(
                "Line {}: {!r} needs an integer, got {!r}".format(
                    number, keyword, rest
                )
            )
        if value < 0:
            raise FormatError(
                "Line {}: {!r} must not be negative".format(number, keyword)
            )
        return value

    def rule(self, expected_id):
        number, rest = self.keyword("rule")
        head, _, body = rest.partition(" ")
        if head != str(expected_id):
            raise FormatError(
                "Line {}: expected rule {}, got {!r}".format(
                    number, expected_id, head
                )
            )
        return number, body.strip()

    def finish(self):
        if self._index < len(self._lines):
            number, line = self._lines[self._index]
            raise FormatError(
                "Line {}: trailing content {!r}".format(number, line)
            )


def _parse_symbol(number, token):
    match = _SYMBOL.match(token)
    if match is None:
        raise FormatError(
            "Line {}: bad symbol {!r}".format(number, token)
        )
    kind, value = match.groups()
    return Terminal(int(value)) if kind == "t" else Variable(int(value))


def sslp_to_text(grammar):
    lines = [
        SSLP_HEADER,
        "alphabet {}".format(grammar.alphabet_size),
        "vars {}".format(grammar.var_count),
        "start {}".format(grammar.start),
    ]
    for variable, rhs in enumerate(grammar.rules):
        lines.append(
            " ".join(["rule", str(variable)] + [str(s) for s in rhs])
        )
    return "\n".join(lines) + "\n"


def sslp_from_text(text):
    """Parse the text SSLP format.

    Raises
    ------
    FormatError
        On a bad header, malformed rule or trailing content.
    """
    lines = _Lines(text)
    lines.header(SSLP_HEADER)
    alphabet_size = lines.count("alphabet")
    var_count = lines.count("vars")
    start = lines.count("start")
    rules = []
    for variable in range(var_count):
        number, body = lines.rule(variable)
        rules.append(
            tuple(_parse_symbol(number, token) for token in body.split())
        )
    lines.finish()
    return Sslp(alphabet_size, rules, start)


def _write_varint(out, value):
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_varint(data, offset):
    value, shift = 0, 0
    while True:
        if offset >= len(data):
            raise FormatError("Truncated varint at byte {}".format(offset))
        byte = data[offset]
        offset += 1
        value |= (byte & 0x7F) << shift
        shift += 7
        if not byte & 0x80:
            return value, offset


def sslp_to_binary(grammar):
    out = bytearray(BINARY_MAGIC)
    out.append(BINARY_VERSION)
    for value in (grammar.alphabet_size, grammar.var_count, grammar.start):
        _write_varint(out, value)
    for rhs in grammar.rules:
        _write_varint(out, len(rhs))
        for symbol in rhs:
            if isinstance(symbol, Variable):
                _write_varint(out, symbol.id << 1 | 1)
            else:
                _write_varint(out, symbol.code << 1)
    return bytes(out)


def sslp_from_binary(data):
    """Parse the binary SSLP format.

    Raises
    ------
    FormatError
        On a bad magic, unknown version, truncation or trailing bytes.
    """
    if not data.startswith(BINARY_MAGIC):
        raise FormatError("Missing SLPB magic")
    offset = len(BINARY_MAGIC)
    if len(data) <= offset or data[offset] != BINARY_VERSION:
        raise FormatError("Unsupported binary version")
    offset += 1
    alphabet_size, offset = _read_varint(data, offset)
    var_count, offset = _read_varint(data, offset)
    start, offset = _read_varint(data, offset)
    rules = []
    for _ in range(var_count):
        length, offset = _read_varint(data, offset)
        rhs = []
        for _ in range(length):
            value, offset = _read_varint(data, offset)
            if value & 1:
                rhs.append(Variable(value >> 1))
            else:
                rhs.append(Terminal(value >> 1))
        rules.append(tuple(rhs))
    if offset != len(data):
        raise FormatError(
            "{} trailing bytes after the last rule".format(len(data) - offset)
        )
    return Sslp(alphabet_size, rules, start)


def term_to_text(term):
    if isinstance(term, Ref):
        return "v{}".format(term.name)
    if not term.args:
        return str(term.symbol)
    return "{}({})".format(
        term.symbol, ", ".join(term_to_text(arg) for arg in term.args)
    )


def term_from_text(text, number=0):
    """Parse a term in prefix notation such as ``f(v3, g(v4))``."""
    tokens = []
    position = 0
    text = text.strip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise FormatError(
                "Line {}: cannot read term {!r}".format(number, text)
            )
        tokens.append(match.group(1))
        position = match.end()

    def fail():
        raise FormatError("Line {}: malformed term {!r}".format(number, text))

    def parse(index):
        if index >= len(tokens) or tokens[index] in "(),":
            fail()
        name = tokens[index]
        match = _VARIABLE.match(name)
        if match is not None:
            return Ref(int(match.group(1))), index + 1
        if index + 1 < len(tokens) and tokens[index + 1] == "(":
            args = []
            index += 2
            while True:
                arg, index = parse(index)
                args.append(arg)
                if index >= len(tokens):
                    fail()
                if tokens[index] == ")":
                    return Term(name, args), index + 1
                if tokens[index] != ",":
                    fail()
                index += 1
        return Term(name), index + 1

    term, end = parse(0)
    if end != len(tokens):
        fail()
    return term


def _rules_to_lines(grammar):
    lines = [
        "vars {}".format(grammar.var_count),
        "start {}".format(grammar.start),
    ]
    for variable, rhs in enumerate(grammar.rules):
        lines.append("rule {} {}".format(variable, term_to_text(rhs)))
    return lines


def _rules_from_lines(lines, signature):
    var_count = lines.count("vars")
    start = lines.count("start")
    rules = []
    for variable in range(var_count):
        number, body = lines.rule(variable)
        rules.append(term_from_text(body, number))
    lines.finish()
    return GammaSlp(signature, rules, start)


def gslp_to_text(grammar):
    signature = grammar.signature
    lines = [GSLP_HEADER, "sorts {}".format(len(signature.sorts))]
    lines.extend("sort {}".format(sort) for sort in sorted(signature.sorts))
    lines.append("symbols {}".format(len(signature.symbols)))
    for symbol, word in signature.symbols.items():
        lines.append(" ".join(["sym", str(symbol)] + list(word)))
    lines.extend(_rules_to_lines(grammar))
    return "\n".join(lines) + "\n"


def gslp_from_text(text):
    lines = _Lines(text)
    lines.header(GSLP_HEADER)
    sorts = [lines.keyword("sort")[1] for _ in range(lines.count("sorts"))]
    symbols = {}
    for _ in range(lines.count("symbols")):
        number, rest = lines.keyword("sym")
        fields = rest.split()
        if len(fields) < 2 or _VARIABLE.match(fields[0]):
            raise FormatError(
                "Line {}: bad symbol declaration {!r}".format(number, rest)
            )
        symbols[fields[0]] = tuple(fields[1:])
    return _rules_from_lines(lines, Signature(sorts, symbols))


def _letters_from_lines(lines):
    count = lines.count("alphabet")
    return [lines.keyword("letter")[1] for _ in range(count)]


def fslp_to_text(grammar):
    letters = letters_of(grammar.signature)
    lines = [FSLP_HEADER, "alphabet {}".format(len(letters))]
    lines.extend("letter {}".format(name) for name in letters)
    lines.extend(_rules_to_lines(grammar))
    return "\n".join(lines) + "\n"


def fslp_from_text(text):
    lines = _Lines(text)
    lines.header(FSLP_HEADER)
    try:
        signature = forest_signature(_letters_from_lines(lines))
    except ValueError as e:
        raise FormatError(str(e))
    return _rules_from_lines(lines, signature)


def top_dag_to_text(grammar):
    letters = grammar.signature.letters
    lines = [TOPDAG_HEADER, "alphabet {}".format(len(letters))]
    lines.extend("letter {}".format(name) for name in letters)
    lines.extend(_rules_to_lines(grammar))
    return "\n".join(lines) + "\n"


def top_dag_from_text(text):
    lines = _Lines(text)
    lines.header(TOPDAG_HEADER)
    try:
        signature = ClusterSignature(_letters_from_lines(lines))
    except ValueError as e:
        raise FormatError(str(e))
    return _rules_from_lines(lines, signature)


_READERS = {
    SSLP_HEADER: sslp_from_text,
    GSLP_HEADER: gslp_from_text,
    FSLP_HEADER: fslp_from_text,
    TOPDAG_HEADER: top_dag_from_text,
}


def is_forest_signature(signature):
    return not isinstance(signature, ClusterSignature) and RESERVED <= set(
        signature.symbols
    )


def loads(data):
    """Parse a grammar in any supported format, detected by its header."""
    if isinstance(data, bytes):
        if data.startswith(BINARY_MAGIC):
            return sslp_from_binary(data)
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError:
            raise FormatError("Input is neither text nor SLPB binary")
    lines = (line.strip() for line in data.splitlines())
    first = next((line for line in lines if line), "")
    try:
        reader = _READERS[first]
    except KeyError:
        raise FormatError("Unknown grammar header {!r}".format(first))
    return reader(data)


def dumps(grammar, binary=False):
    """Serialize a grammar; returns bytes for binary output, else text."""
    if isinstance(grammar, Sslp):
        return sslp_to_binary(grammar) if binary else sslp_to_text(grammar)
    if binary:
        raise FormatError("Only string grammars have a binary format")
    if isinstance(grammar.signature, ClusterSignature):
        return top_dag_to_text(grammar)
    if is_forest_signature(grammar.signature):
        return fslp_to_text(grammar)
    return gslp_to_text(grammar)


def load(path):
    with open(path, "rb") as f:
        return loads(f.read())


def dump(grammar, path, binary=False):
    data = dumps(grammar, binary)
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(path, mode) as f:
        f.write(data)
