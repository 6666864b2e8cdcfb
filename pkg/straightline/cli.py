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

"""The ``slp`` command-line tool."""

import argparse
import logging
import sys

from straightline import formats
from straightline.algebra import GammaSlp, gamma_stats, unfold
from straightline.balance import balance, verify_equivalence
from straightline.centroid import decompose, multidag_from_sslp, to_dot
from straightline.cluster import (
    ClusterSignature,
    balance_top_dag,
    expand_cluster,
)
from straightline.cluster import to_brackets as cluster_brackets
from straightline.compress import compress, compress_bytes
from straightline.config import from_args
from straightline.exceptions import FormatError, SlpError
from straightline.forest import balance_fslp, expand_forest
from straightline.forest import to_brackets as forest_brackets
from straightline.grammar import (
    Sslp,
    expand,
    is_cnf,
    stats,
    strip_unreachable,
    to_cnf,
    validate,
)
from straightline.queries import (
    AccessIndex,
    FingerprintIndex,
    OccIndex,
    RmqIndex,
)
from straightline.semiring import (
    CONCAT,
    PLUS,
    balance_monoid_circuit,
    balance_semiring_circuit,
)
from straightline.tracking import log_balance_report


logger = logging.getLogger(__name__)

COMMANDS = (
    "compress",
    "balance",
    "stats",
    "expand",
    "access",
    "rank",
    "select",
    "succ",
    "pred",
    "subseq",
    "fp",
    "rmq",
    "verify",
    "decompose",
)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="slp",
        description="Balance straight-line programs and query them.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--in", dest="input_path", required=True)
    parser.add_argument("--out", dest="output_path")
    parser.add_argument("--pos", type=int)
    parser.add_argument("--sym", type=int, help="terminal code")
    parser.add_argument("--range", help="1-based inclusive range i:j")
    parser.add_argument("--pattern", help="comma-separated terminal codes")
    parser.add_argument("--cap", type=int, help="expansion size cap")
    parser.add_argument("--envelope", type=int, help="depth envelope")
    parser.add_argument("--base", type=int, help="fingerprint base")
    parser.add_argument("--modulus", type=int, help="fingerprint modulus")
    parser.add_argument(
        "--ints",
        action="store_true",
        help="read or write newline-separated integers instead of bytes",
    )
    parser.add_argument("--binary", action="store_true")
    parser.add_argument(
        "--no-balance",
        action="store_true",
        help="query the grammar as given",
    )
    parser.add_argument("--track", action="store_true")
    parser.add_argument("--experiment")
    parser.add_argument("--against", help="second grammar for verify")
    parser.add_argument("--dot", action="store_true")
    parser.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS)
    return parser


def _read_ints(path):
    with open(path) as f:
        return [int(line) for line in f if line.strip()]


def _read_raw(config):
    """Compress a raw input file into a grammar."""
    if config.ints:
        values = _read_ints(config.input_path)
        if any(value < 0 for value in values):
            raise FormatError("Integer inputs must not be negative")
        return compress(values, max(values, default=0) + 1)
    with open(config.input_path, "rb") as f:
        return compress_bytes(f.read())


def _load(path):
    grammar = formats.load(path)
    if isinstance(grammar, Sslp):
        validate(grammar)
    return grammar


def _load_string_grammar(config):
    if config.ints:
        grammar = _read_raw(config)
    else:
        grammar = _load(config.input_path)
    if not isinstance(grammar, Sslp):
        raise FormatError(
            "Command {!r} needs a string grammar".format(config.command)
        )
    if config.balance_first:
        grammar, _ = balance(grammar)
    return grammar


def _require(config, *names):
    missing = [
        "--" + name.replace("position", "pos").replace("symbol", "sym")
        for name in names
        if getattr(config, name) is None
    ]
    if missing:
        raise FormatError(
            "Command {!r} needs {}".format(config.command, ", ".join(missing))
        )


def _emit(config, data):
    if config.output_path is None:
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        else:
            sys.stdout.write(data)
        return
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(config.output_path, mode) as f:
        f.write(data)


def _lines(fields):
    return "".join("{}: {}\n".format(key, value) for key, value in fields)


def _balance_gamma(grammar, envelope):
    signature = grammar.signature
    if isinstance(signature, ClusterSignature):
        return balance_top_dag(grammar, envelope)
    if formats.is_forest_signature(signature):
        return balance_fslp(grammar, envelope)
    if PLUS in signature.symbols:
        return balance_semiring_circuit(grammar, envelope)
    if CONCAT in signature.symbols:
        return balance_monoid_circuit(grammar, envelope)
    raise FormatError("No subsumption base is known for this signature")


def cmd_compress(config):
    grammar = _read_raw(config)
    _emit(config, formats.dumps(grammar, config.binary))


def cmd_balance(config):
    grammar = _load(config.input_path)
    if isinstance(grammar, GammaSlp):
        balanced = _balance_gamma(grammar, config.envelope)
        _emit(config, formats.dumps(balanced))
        return
    balanced, report = balance(grammar)
    if config.track:
        log_balance_report(
            report,
            config.input_path,
            config.envelope,
            experiment_name=config.experiment,
        )
    _emit(config, formats.dumps(balanced, config.binary))


def cmd_stats(config):
    grammar = _load(config.input_path)
    if isinstance(grammar, GammaSlp):
        _emit(config, _lines(gamma_stats(grammar)._asdict().items()))
        return
    fields = list(stats(grammar)._asdict().items())
    _, report = balance(grammar)
    fields.extend(report.as_dict().items())
    _emit(config, _lines(fields))


def cmd_expand(config):
    grammar = _load(config.input_path)
    if isinstance(grammar, Sslp):
        codes = expand(grammar, config.cap)
        if config.ints:
            _emit(config, "".join("{}\n".format(c) for c in codes))
        else:
            _emit(config, bytes(codes))
    elif isinstance(grammar.signature, ClusterSignature):
        tree = expand_cluster(grammar, config.cap)
        _emit(config, cluster_brackets(tree) + "\n")
    elif formats.is_forest_signature(grammar.signature):
        forest = expand_forest(grammar, config.cap)
        _emit(config, forest_brackets(forest) + "\n")
    else:
        _emit(config, " ".join(map(str, unfold(grammar))) + "\n")


def cmd_access(config):
    _require(config, "position")
    index = AccessIndex(_load_string_grammar(config))
    _emit(config, "{}\n".format(index.access(config.position)))


def cmd_rank(config):
    _require(config, "symbol", "position")
    index = OccIndex(_load_string_grammar(config))
    _emit(config, "{}\n".format(index.rank(config.symbol, config.position)))


def cmd_select(config):
    _require(config, "symbol", "position")
    index = OccIndex(_load_string_grammar(config), with_counts=True)
    result = index.select(config.symbol, config.position)
    _emit(config, "{}\n".format(result))


def cmd_succ(config):
    _require(config, "symbol", "position")
    index = OccIndex(_load_string_grammar(config), with_counts=False)
    result = index.successor(config.position, config.symbol)
    _emit(config, "{}\n".format(result))


def cmd_pred(config):
    _require(config, "symbol", "position")
    index = OccIndex(_load_string_grammar(config), with_counts=False)
    result = index.predecessor(config.position, config.symbol)
    _emit(config, "{}\n".format(result))


def cmd_subseq(config):
    _require(config, "pattern")
    index = OccIndex(_load_string_grammar(config), with_counts=False)
    windows = index.minimal_subsequence_occurrences(config.pattern)
    _emit(config, "".join("{} {}\n".format(i, j) for i, j in windows))


def cmd_fp(config):
    _require(config, "range")
    index = FingerprintIndex(
        _load_string_grammar(config), config.base, config.modulus
    )
    _emit(config, "{}\n".format(index.fingerprint(*config.range)))


def cmd_rmq(config):
    _require(config, "range")
    index = RmqIndex(_load_string_grammar(config))
    position, value = index.rmq(*config.range)
    _emit(config, "{} {}\n".format(position, value))


def cmd_verify(config):
    grammar = _load(config.input_path)
    if not isinstance(grammar, Sslp):
        raise FormatError("verify needs a string grammar")
    if config.against is None:
        other, _ = balance(grammar)
    else:
        other = _load(config.against)
        if not isinstance(other, Sslp):
            raise FormatError("verify needs a string grammar")
    result = verify_equivalence(grammar, other, config.cap)
    verdict = "equal" if result.equal else "different"
    _emit(config, "{} ({})\n".format(verdict, result.method))


def cmd_decompose(config):
    grammar = _load(config.input_path)
    if not isinstance(grammar, Sslp):
        raise FormatError("decompose needs a string grammar")
    cnf = grammar if is_cnf(grammar) else to_cnf(grammar)
    cnf = strip_unreachable(cnf)
    dag = multidag_from_sslp(cnf)
    result = decompose(dag)
    if config.dot:
        _emit(config, to_dot(dag, result))
        return
    lines = []
    for path in result.paths:
        steps = " ".join(
            "X{} -{}->".format(node, direction)
            for node, direction in zip(path.nodes, path.directions)
        )
        lines.append("{} X{}".format(steps, path.nodes[-1]).strip() + "\n")
    _emit(config, "".join(lines))


HANDLERS = {
    "compress": cmd_compress,
    "balance": cmd_balance,
    "stats": cmd_stats,
    "expand": cmd_expand,
    "access": cmd_access,
    "rank": cmd_rank,
    "select": cmd_select,
    "succ": cmd_succ,
    "pred": cmd_pred,
    "subseq": cmd_subseq,
    "fp": cmd_fp,
    "rmq": cmd_rmq,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
}


def main(argv=None, environ=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = from_args(args, environ)
    except ValueError as e:
        parser.error(str(e))
    logging.basicConfig(level=config.log_level)
    try:
        HANDLERS[config.command](config)
    except (SlpError, OSError, ValueError) as e:
        print("slp: {}".format(e), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
