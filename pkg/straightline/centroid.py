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

"""Symmetric centroid decomposition of rooted DAGs with multi-edges."""

from dataclasses import dataclass
from typing import Dict, FrozenSet, NamedTuple, Tuple

import networkx as nx

from straightline.exceptions import (
    CountOverflow,
    CyclicGrammar,
    DanglingReference,
)
from straightline.grammar import Variable, floor_log2


MAX_COUNT = 2 ** 63


@dataclass(frozen=True)
class MultiDag:
    """A rooted DAG whose nodes have ordered outgoing edges.

    ``edges[u][d - 1]`` is the target of the edge ``(u, d)``; directions
    are 1-based. Parallel edges to the same target are allowed.
    """

    node_count: int
    root: int
    edges: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple(tuple(targets) for targets in self.edges)
        )


class ScdPath(NamedTuple):
    """A maximal path of scd edges.

    ``directions[i]`` is the direction of the edge leaving ``nodes[i]``, so
    a path of length p has p + 1 nodes and p directions.
    """

    nodes: Tuple[int, ...]
    directions: Tuple[int, ...]

    def __len__(self):
        return len(self.directions)


@dataclass(frozen=True)
class ScdResult:
    lambdas: Tuple[Tuple[int, int], ...]
    scd_edges: FrozenSet[Tuple[int, int]]
    paths: Tuple[ScdPath, ...]
    root_counts: Tuple[int, ...]
    leaf_counts: Tuple[int, ...]

    def path_of(self):
        """Map every node to the index of the path containing it."""
        owner: Dict[int, int] = {}
        for index, path in enumerate(self.paths):
            for node in path.nodes:
                owner[node] = index
        return owner


def _graph(dag):
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(dag.node_count))
    for source, targets in enumerate(dag.edges):
        for target in targets:
            graph.add_edge(source, target)
    return graph


def validate_multidag(dag):
    """Check that the DAG is acyclic and rooted.

    Raises
    ------
    DanglingReference
        If an edge points outside the DAG, the root has incoming edges or
        some node is unreachable from the root.
    CyclicGrammar
        If the graph has a cycle.
    """
    if len(dag.edges) != dag.node_count:
        raise DanglingReference(
            "Expected edge lists for {} nodes, got {}".format(
                dag.node_count, len(dag.edges)
            )
        )
    if not 0 <= dag.root < dag.node_count:
        raise DanglingReference("Root {} is not a node".format(dag.root))
    for source, targets in enumerate(dag.edges):
        for target in targets:
            if not 0 <= target < dag.node_count:
                raise DanglingReference(
                    "Edge from {} to unknown node {}".format(source, target)
                )
    graph = _graph(dag)
    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        pass
    else:
        raise CyclicGrammar([edge[0] for edge in cycle])
    if graph.in_degree(dag.root):
        raise DanglingReference(
            "Root {} has incoming edges".format(dag.root)
        )
    unreachable = set(graph) - nx.descendants(graph, dag.root) - {dag.root}
    if unreachable:
        raise DanglingReference(
            "Nodes {} are not reachable from the root".format(
                sorted(unreachable)
            )
        )


def topological_order(dag):
    """Return the nodes in a deterministic topological order."""
    return list(nx.lexicographical_topological_sort(_graph(dag)))


def _check_count(node, count):
    if count >= MAX_COUNT:
        raise CountOverflow(
            "Node {} has {} paths, which does not fit in 63 bits".format(
                node, count
            )
        )


def leaf_path_counts(dag, order=None):
    """Count the paths from each node to the sinks.

    Returns
    -------
    counts : list of int
        ``counts[v]`` is the number of paths from ``v`` to a sink.
    total : int
        The number of root-to-sink paths.
    """
    order = topological_order(dag) if order is None else order
    counts = [0] * dag.node_count
    for node in reversed(order):
        targets = dag.edges[node]
        counts[node] = sum(counts[t] for t in targets) if targets else 1
        _check_count(node, counts[node])
    return counts, counts[dag.root]


def root_path_counts(dag, order=None):
    """Count the paths from the root to each node."""
    order = topological_order(dag) if order is None else order
    counts = [0] * dag.node_count
    counts[dag.root] = 1
    for node in order:
        _check_count(node, counts[node])
        for target in dag.edges[node]:
            counts[target] += counts[node]
    return counts


def decompose(dag):
    """Compute the symmetric centroid decomposition of a DAG.

    An edge ``(u, d)`` to ``v`` belongs to the decomposition when
    ``u`` and ``v`` have the same pair of binary magnitudes of their
    root-path and leaf-path counts. Each node then has at most one
    incoming and one outgoing decomposition edge, so the edges form
    node-disjoint paths; nodes off every edge appear as length-0 paths.
    Paths are listed in the topological order of their top nodes.
    """
    order = topological_order(dag)
    leaf_counts, _ = leaf_path_counts(dag, order)
    root_counts = root_path_counts(dag, order)
    lambdas = tuple(
        (floor_log2(root_counts[v]), floor_log2(leaf_counts[v]))
        for v in range(dag.node_count)
    )

    scd_edges = set()
    successor = {}
    has_incoming = set()
    for source, targets in enumerate(dag.edges):
        for direction, target in enumerate(targets, start=1):
            if lambdas[source] == lambdas[target]:
                scd_edges.add((source, direction))
                successor[source] = (direction, target)
                has_incoming.add(target)

    paths = []
    for node in order:
        if node in has_incoming:
            continue
        nodes = [node]
        directions = []
        while nodes[-1] in successor:
            direction, target = successor[nodes[-1]]
            directions.append(direction)
            nodes.append(target)
        paths.append(ScdPath(tuple(nodes), tuple(directions)))

    return ScdResult(
        lambdas=lambdas,
        scd_edges=frozenset(scd_edges),
        paths=tuple(paths),
        root_counts=tuple(root_counts),
        leaf_counts=tuple(leaf_counts),
    )


def multidag_from_sslp(grammar):
    """Build the DAG of a grammar in Chomsky normal form.

    Binary rules ``X -> Y Z`` give the edges ``(X, 1)`` to ``Y`` and
    ``(X, 2)`` to ``Z``; terminal rules are sinks. All variables must be
    reachable from the start.
    """
    edges = [
        tuple(s.id for s in rhs if isinstance(s, Variable))
        for rhs in grammar.rules
    ]
    return MultiDag(grammar.var_count, grammar.start, edges)


def to_dot(dag, result, name="scd"):
    """Render the DAG as Graphviz text with decomposition edges in bold."""
    lines = ["digraph {} {{".format(name)]
    for node in range(dag.node_count):
        lines.append(
            '  n{0} [label="{0}\\n{1},{2}"];'.format(
                node, result.root_counts[node], result.leaf_counts[node]
            )
        )
    for source, targets in enumerate(dag.edges):
        for direction, target in enumerate(targets, start=1):
            style = "bold" if (source, direction) in result.scd_edges else ""
            attributes = 'label="{}"'.format(direction)
            if style:
                attributes += ", style={}".format(style)
            lines.append(
                "  n{} -> n{} [{}];".format(source, target, attributes)
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
