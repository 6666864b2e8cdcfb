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


class SlpError(Exception):
    """Base class for errors raised by straightline."""

    pass


class FormatError(SlpError):
    """Raised when a grammar file cannot be parsed."""

    pass


class CyclicGrammar(SlpError):
    """Raised when the variables of a grammar depend on themselves."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(
            "Grammar contains the cycle {}".format(
                " -> ".join("X{}".format(v) for v in self.cycle + [cycle[0]])
            )
        )


class DanglingReference(SlpError):
    """Raised when a rule refers to an undefined variable or terminal."""

    pass


class LengthOverflow(SlpError):
    """Raised when a derived string is too long to be addressed."""

    pass


class CapExceeded(SlpError):
    """Raised when an expansion would exceed its size cap."""

    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(
            "Expansion of size {} exceeds the cap of {}".format(size, cap)
        )


class EmptyString(SlpError):
    """Raised when a grammar derives the empty string."""

    pass


class CountOverflow(SlpError):
    """Raised when a path or node count does not fit in 63 bits."""

    pass


class EmptyInput(SlpError):
    """Raised when an input sequence is empty."""

    pass


class WeightOverflow(SlpError):
    """Raised when the total weight of a weighted string is too large."""

    pass


class OutOfRange(SlpError):
    """Raised when a query position lies outside the string."""

    def __init__(self, value, low, high):
        self.value = value
        super().__init__(
            "{} is outside the range [{}, {}]".format(value, low, high)
        )


class UnknownTerminal(SlpError):
    """Raised when a query names a terminal outside the alphabet."""

    pass


class NotFound(SlpError):
    """Raised when a query has no answer."""

    def __init__(self, message, value=None):
        self.value = value
        super().__init__(message)


class BaseMismatch(SlpError):
    """Raised when a subsumption base returns an inconsistent context."""

    pass


class EmptyForest(SlpError):
    """Raised when a forest grammar derives the empty forest."""

    pass


class SortMismatch(SlpError):
    """Raised when a term is not sort-correct."""

    pass


class TrackingError(SlpError):
    """Raised when a report cannot be logged to the tracking server."""

    pass
