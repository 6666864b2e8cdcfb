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

import pytest

from straightline.centroid import (
    MultiDag,
    decompose,
    leaf_path_counts,
    multidag_from_sslp,
    root_path_counts,
    to_dot,
    validate_multidag,
)
from straightline.exceptions import (
    CountOverflow,
    CyclicGrammar,
    DanglingReference,
)
from straightline.grammar import strip_unreachable, to_cnf
from tests.fixtures import (
    DAG_SEEDS,
    EXAMPLE_GRAMMAR,
    EXAMPLE_LAMBDA,
    EXAMPLE_LEAF_COUNTS,
    EXAMPLE_PATH,
    EXAMPLE_ROOT_COUNTS,
    random_grammar,
)


EXAMPLE_DAG = multidag_from_sslp(EXAMPLE_GRAMMAR)


def test_multidag_from_sslp():
    assert EXAMPLE_DAG.node_count == 15
    assert EXAMPLE_DAG.root == 0
    assert EXAMPLE_DAG.edges[0] == (1, 14)
    assert EXAMPLE_DAG.edges[8] == (9, 9)
    assert EXAMPLE_DAG.edges[13] == ()


def test_leaf_path_counts_example():
    counts, total = leaf_path_counts(EXAMPLE_DAG)
    assert total == 62
    for node, count in EXAMPLE_LEAF_COUNTS.items():
        assert counts[node] == count


def test_root_path_counts_example():
    counts = root_path_counts(EXAMPLE_DAG)
    assert all(counts[node] == 1 for node in EXAMPLE_PATH)
    for node, count in EXAMPLE_ROOT_COUNTS.items():
        assert counts[node] == count


def test_decompose_example():
    result = decompose(EXAMPLE_DAG)
    long_paths = [path for path in result.paths if len(path)]
    assert len(long_paths) == 1
    path = long_paths[0]
    assert path.nodes == EXAMPLE_PATH
    assert path.directions == (1, 2, 2, 1, 2, 1, 1, 2)
    assert all(result.lambdas[node] == EXAMPLE_LAMBDA for node in path.nodes)
    assert len(result.scd_edges) == 8
    assert result.lambdas[9] == (1, 4)
    assert result.lambdas[13] == (4, 0)


def test_decompose_covers_every_node_once():
    result = decompose(EXAMPLE_DAG)
    owner = result.path_of()
    assert sorted(owner) == list(range(15))
    assert sum(len(path.nodes) for path in result.paths) == 15
    assert result.paths[0].nodes[0] == 0


def test_decompose_parallel_edges():
    # two parallel edges halve the leaf count but double the root count
    dag = MultiDag(2, 0, [(1, 1), ()])
    result = decompose(dag)
    assert result.lambdas == ((0, 1), (1, 0))
    assert not result.scd_edges


def test_decompose_single_node():
    result = decompose(MultiDag(1, 0, [()]))
    assert result.lambdas == ((0, 0),)
    assert len(result.paths) == 1
    assert len(result.paths[0]) == 0


@pytest.mark.parametrize("seed", DAG_SEEDS)
def test_decompose_random(seed):
    variables = 12 + seed % 20
    grammar = strip_unreachable(to_cnf(random_grammar(seed, variables)))
    dag = multidag_from_sslp(grammar)
    validate_multidag(dag)
    result = decompose(dag)

    outgoing = [source for source, _ in result.scd_edges]
    assert len(outgoing) == len(set(outgoing))
    incoming = [dag.edges[s][d - 1] for s, d in result.scd_edges]
    assert len(incoming) == len(set(incoming))

    for source, targets in enumerate(dag.edges):
        for target in targets:
            assert result.root_counts[target] >= result.root_counts[source]
            assert result.leaf_counts[target] <= result.leaf_counts[source]


def test_count_overflow():
    levels = 64
    edges = [(i + 1, i + 1) for i in range(levels)] + [()]
    dag = MultiDag(levels + 1, 0, edges)
    with pytest.raises(CountOverflow):
        leaf_path_counts(dag)
    with pytest.raises(CountOverflow):
        root_path_counts(dag)


@pytest.mark.parametrize(
    "dag, error",
    [
        (MultiDag(2, 0, [(1,), (0,)]), CyclicGrammar),
        (MultiDag(2, 0, [(2,), ()]), DanglingReference),
        (MultiDag(2, 5, [(1,), ()]), DanglingReference),
        (MultiDag(3, 0, [(1,), (), ()]), DanglingReference),
        (MultiDag(2, 1, [(1,), ()]), DanglingReference),
        (MultiDag(2, 0, [(1,)]), DanglingReference),
    ],
)
def test_validate_multidag_errors(dag, error):
    with pytest.raises(error):
        validate_multidag(dag)


def test_to_dot_marks_path_edges():
    result = decompose(EXAMPLE_DAG)
    dot = to_dot(EXAMPLE_DAG, result)
    assert dot.startswith("digraph scd {")
    assert 'n0 -> n1 [label="1", style=bold];' in dot
    assert 'n8 -> n9 [label="1"];' in dot
    assert dot.rstrip().endswith("}")
