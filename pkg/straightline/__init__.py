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

from straightline.grammar import (  # noqa F401
    Sslp,
    Terminal,
    Variable,
    expand,
    lengths,
    stats,
    to_cnf,
    validate,
)
from straightline.balance import balance, verify_equivalence  # noqa F401
from straightline.queries import (  # noqa F401
    AccessIndex,
    FingerprintIndex,
    OccIndex,
    RmqIndex,
)
from straightline.algebra import (  # noqa F401
    GammaSlp,
    Signature,
    Term,
    Ref,
    balance_circuit,
    evaluate,
)
