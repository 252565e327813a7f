"""Qualitative interval networks and queue-based path consistency."""

import logging
import random
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Iterator, Optional

import regex

from .allen import (
    FULL,
    BaseRelation,
    Relation,
    RelationSet,
    as_set,
    compose_set,
    format_relation,
    is_preconvex,
    parse_relation,
    transpose,
)
from .errors import EmptyAfterIntersection, InconsistentNetwork, NoScenario, ParseError

logger = logging.getLogger(__name__)

IDENTITY = RelationSet([BaseRelation.EQ])


class QualNetwork:
    """Named interval variables with a relation set on every ordered pair.

    A missing edge stands for the full set; edge(j, i) is always the
    transpose of edge(i, j).
    """

    def __init__(self, nodes: Iterable[str] = ()):
        self._nodes: list[str] = []
        self._edges: dict[tuple[str, str], RelationSet] = {}
        self.inconsistent = False
        for node in nodes:
            self.add_node(node)

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(self._nodes)

    def add_node(self, node: str) -> None:
        if node not in self._nodes:
            self._nodes.append(node)

    def edge(self, source: str, target: str) -> RelationSet:
        if source == target:
            return IDENTITY
        return self._edges.get((source, target), FULL)

    def _set(self, source: str, target: str, relation: RelationSet) -> None:
        self._edges[(source, target)] = relation
        self._edges[(target, source)] = transpose(relation)
        if not relation:
            self.inconsistent = True

    def add_constraint(self, source: str, target: str, relation: Relation, strict: bool = False) -> "QualNetwork":
        """Intersects edge(source, target) with ``relation``."""
        self.add_node(source)
        self.add_node(target)
        refined = self.edge(source, target) & as_set(relation)
        if source == target:
            if not refined:
                self.inconsistent = True
        else:
            self._set(source, target, refined)
        if not refined:
            logger.warning("constraint %s %s %s empties the edge", source, format_relation(relation), target)
            if strict:
                raise EmptyAfterIntersection(source, target)
        return self

    def constrained_edges(self) -> Iterator[tuple[str, str, RelationSet]]:
        for source, target in combinations(self._nodes, 2):
            relation = self.edge(source, target)
            if relation != FULL:
                yield source, target, relation

    def copy(self) -> "QualNetwork":
        clone = QualNetwork(self._nodes)
        clone._edges = dict(self._edges)
        clone.inconsistent = self.inconsistent
        return clone

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QualNetwork) or set(self._nodes) != set(other._nodes):
            return False
        return all(self.edge(a, b) == other.edge(a, b) for a in self._nodes for b in self._nodes)

    def __repr__(self) -> str:
        return f"QualNetwork({format_network(self)!r})"


class Verdict(str, Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    PATH_CONSISTENT_UNDECIDED = "path_consistent_undecided"


@dataclass
class PathConsistencyResult:
    network: QualNetwork
    verdict: Verdict
    revisions: int = 0

    def is_consistent(self) -> bool:
        return self.verdict == Verdict.CONSISTENT


def path_consistency(network: QualNetwork, shuffle_seed: Optional[int] = None) -> PathConsistencyResult:
    """Applies R_ij := R_ij & (R_ik o R_kj) until nothing changes.

    The input network is left untouched. ``shuffle_seed`` randomizes the
    initial queue and the triangle order; the fixpoint does not depend on it.
    """
    result = network.copy()
    if result.inconsistent:
        return PathConsistencyResult(result, Verdict.INCONSISTENT)
    nodes = list(result.nodes)
    arcs = [(i, j) for i, j in combinations(nodes, 2)]
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    if rng is not None:
        rng.shuffle(arcs)
        rng.shuffle(nodes)
    queue = deque(arcs)
    queued = set(arcs)
    revisions = 0
    while queue:
        i, j = queue.popleft()
        queued.discard((i, j))
        for k in nodes:
            if k == i or k == j:
                continue
            for a, b, refined in _triangle(result, i, j, k):
                if refined == result.edge(a, b):
                    continue
                revisions += 1
                result._set(a, b, refined)
                if not refined:
                    logger.debug("edge %s-%s emptied after %d revisions", a, b, revisions)
                    return PathConsistencyResult(result, Verdict.INCONSISTENT, revisions)
                if (a, b) not in queued and (b, a) not in queued:
                    queue.append((a, b))
                    queued.add((a, b))
    logger.debug("path consistency reached a fixpoint after %d revisions", revisions)
    labels = (relation for _, _, relation in result.constrained_edges())
    verdict = Verdict.CONSISTENT if all(map(is_preconvex, labels)) else Verdict.PATH_CONSISTENT_UNDECIDED
    return PathConsistencyResult(result, verdict, revisions)


def _triangle(net: QualNetwork, i: str, j: str, k: str) -> Iterator[tuple[str, str, RelationSet]]:
    yield i, k, net.edge(i, k) & compose_set(net.edge(i, j), net.edge(j, k))
    yield k, j, net.edge(k, j) & compose_set(net.edge(k, i), net.edge(i, j))


def find_scenario(network: QualNetwork) -> QualNetwork:
    """An atomic refinement that survives path consistency."""
    closed = path_consistency(network)
    if closed.verdict == Verdict.INCONSISTENT:
        raise NoScenario("the network is inconsistent")
    scenario = _search(closed.network)
    if scenario is None:
        raise NoScenario("backtracking found no atomic scenario")
    return scenario


def _search(network: QualNetwork) -> Optional[QualNetwork]:
    for source, target in combinations(network.nodes, 2):
        relation = network.edge(source, target)
        if len(relation) == 1:
            continue
        for base in relation:
            trial = network.copy()
            trial._set(source, target, RelationSet([base]))
            closed = path_consistency(trial)
            if closed.verdict != Verdict.INCONSISTENT:
                found = _search(closed.network)
                if found is not None:
                    return found
        return None
    return network


def _endpoint_ranks(scenario: QualNetwork) -> dict[tuple[str, int], int]:
    parent: dict[tuple[str, int], tuple[str, int]] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    before: list[tuple[tuple[str, int], tuple[str, int]]] = []
    for node in scenario.nodes:
        before.append(((node, 0), (node, 1)))
    for x, y in combinations(scenario.nodes, 2):
        (relation,) = list(scenario.edge(x, y))
        for end, position in enumerate(relation.code):
            point, y1, y2 = (x, end), (y, 0), (y, 1)
            if position == 0:
                before.append((point, y1))
            elif position == 1:
                union(point, y1)
            elif position == 2:
                before.extend([(y1, point), (point, y2)])
            elif position == 3:
                union(point, y2)
            else:
                before.append((y2, point))
    points = [(node, end) for node in scenario.nodes for end in (0, 1)]
    rank = {find(p): 0 for p in points}
    # longest path over the strict order; at most one pass per point
    for _ in points:
        changed = False
        for low, high in before:
            if rank[find(high)] < rank[find(low)] + 1:
                rank[find(high)] = rank[find(low)] + 1
                changed = True
        if not changed:
            break
    return {p: rank[find(p)] for p in points}


def export_chronogram(network: QualNetwork, width: int = 4) -> str:
    """Draws one consistent scenario of the network as a text timeline."""
    if path_consistency(network).verdict == Verdict.INCONSISTENT:
        raise InconsistentNetwork("an inconsistent network has no chronogram")
    scenario = find_scenario(network)
    ranks = _endpoint_ranks(scenario)
    label = max((len(node) for node in scenario.nodes), default=0)
    lines = ["# one scenario among possibly many"]
    for node in scenario.nodes:
        start, stop = ranks[(node, 0)] * width, ranks[(node, 1)] * width
        row = [" "] * (stop + 1)
        row[start:stop + 1] = "|" + "-" * (stop - start - 1) + "|"
        lines.append(f"{node:<{label}} {''.join(row).rstrip()}")
    return "\n".join(lines) + "\n"


_LINE = regex.compile(r"^(\S+)\s+(.+?)\s+(\S+)$")


def parse_network(text: str) -> QualNetwork:
    """Reads ``<node> <relation> <node>`` lines; ``#`` starts a comment."""
    network = QualNetwork()
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        found = _LINE.match(line)
        if found is None:
            raise ParseError(f"line {number}: expected '<node> <relation> <node>'", position=number)
        try:
            relation = parse_relation(found[2])
        except ParseError as exc:
            raise ParseError(f"line {number}: {exc.message}", position=number, expected=exc.expected) from exc
        network.add_constraint(found[1], found[3], relation)
    return network


def format_network(network: QualNetwork) -> str:
    return "".join(
        f"{source} {format_relation(relation)} {target}\n"
        for source, target, relation in network.constrained_edges()
    )
