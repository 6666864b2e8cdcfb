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

import os
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from straightline.algebra import DEFAULT_ENVELOPE
from straightline.queries import DEFAULT_BASE, MERSENNE_61


DEFAULT_CAP = 2 ** 24
DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_EXPERIMENT = "straightline"


def parse_range(text):
    """Parse ``i:j`` into a pair of integers."""
    first, sep, second = text.partition(":")
    if not sep:
        raise ValueError("Expected a range i:j, got {!r}".format(text))
    return int(first), int(second)


def parse_pattern(text):
    """Parse comma-separated terminal codes."""
    return tuple(int(part) for part in text.split(",") if part.strip())


@dataclass(frozen=True)
class Config:
    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    position: Optional[int] = None
    symbol: Optional[int] = None
    range: Optional[Tuple[int, int]] = None
    pattern: Optional[Tuple[int, ...]] = None
    cap: int = DEFAULT_CAP
    envelope: int = DEFAULT_ENVELOPE
    base: int = DEFAULT_BASE
    modulus: int = MERSENNE_61
    binary: bool = False
    ints: bool = False
    balance_first: bool = True
    track: bool = False
    experiment: str = DEFAULT_EXPERIMENT
    against: Optional[str] = None
    dot: bool = False
    log_level: str = DEFAULT_LOG_LEVEL


ENV_SETTINGS = [
    ("SLP_ENVELOPE", "envelope", int),
    ("SLP_EXPAND_CAP", "cap", int),
    ("SLP_FINGERPRINT_BASE", "base", int),
    ("SLP_FINGERPRINT_MODULUS", "modulus", int),
    ("SLP_LOG_LEVEL", "log_level", str.upper),
    ("SLP_TRACKING_EXPERIMENT", "experiment", str),
]


def _from_environment(environ):
    settings = {}
    for env_var, field, converter in ENV_SETTINGS:
        value = environ.get(env_var)
        if value:
            try:
                settings[field] = converter(value)
            except ValueError:
                raise ValueError(
                    "Invalid value {!r} for {}".format(value, env_var)
                )
    return settings


def from_args(args, environ=None):
    """Build a Config from parsed arguments.

    Environment variables fill settings the command line leaves unset;
    flags always win.
    """
    environ = os.environ if environ is None else environ
    config = replace(Config(args.command), **_from_environment(environ))
    overrides = {
        "input_path": args.input_path,
        "output_path": args.output_path,
        "position": args.pos,
        "symbol": args.sym,
        "range": None if args.range is None else parse_range(args.range),
        "pattern": (
            None if args.pattern is None else parse_pattern(args.pattern)
        ),
        "cap": args.cap,
        "envelope": args.envelope,
        "base": args.base,
        "modulus": args.modulus,
        "against": args.against,
        "log_level": args.log_level,
        "experiment": args.experiment,
    }
    flags = {
        "binary": args.binary,
        "ints": args.ints,
        "balance_first": not args.no_balance,
        "track": args.track,
        "dot": args.dot,
    }
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **overrides, **flags)
