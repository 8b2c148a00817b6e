"""Causal DAGs, d-separation and backdoor adjustment sets."""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Iterable


class DagError(ValueError):
    pass


class NodeNameError(DagError):
    def __init__(self, name):
        super().__init__(f"unknown node {name!r}")
        self.name = name


class CycleError(DagError):
    def __init__(self, cycle):
        super().__init__("directed cycle: " + " -> ".join(map(str, list(cycle) + cycle[:1])))
        self.cycle = list(cycle)


@dataclass(frozen=True)
class Dag:
    nodes: frozenset
    edges: frozenset  # of (parent, child)

    def __init__(self, nodes: Iterable = (), edges: Iterable = ()):
        edges = frozenset((a, b) for a, b in edges)
        object.__setattr__(self, "nodes", frozenset(nodes))
        object.__setattr__(self, "edges", edges)
        par: dict = {n: set() for n in self.nodes}
        chi: dict = {n: set() for n in self.nodes}
        for a, b in edges:
            chi.setdefault(a, set()).add(b)
            par.setdefault(b, set()).add(a)
            par.setdefault(a, set())
            chi.setdefault(b, set())
        object.__setattr__(self, "_parents", {k: frozenset(v) for k, v in par.items()})
        object.__setattr__(self, "_children", {k: frozenset(v) for k, v in chi.items()})

    def _check(self, node):
        if node not in self.nodes:
            raise NodeNameError(node)

    def parents(self, node) -> frozenset:
        self._check(node)
        return self._parents[node]

    def children(self, node) -> frozenset:
        self._check(node)
        return self._children[node]

    def descendants(self, node) -> frozenset:
        """Proper descendants of ``node``."""
        return self._closure([node], self._children) - {node}

    def ancestors(self, node) -> frozenset:
        return self._closure([node], self._parents) - {node}

    def _closure(self, start, nbrs) -> frozenset:
        for s in start:
            self._check(s)
        seen = set(start)
        todo = list(start)
        while todo:
            v = todo.pop()
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return frozenset(seen)

    def without_outgoing(self, node) -> "Dag":
        return Dag(self.nodes, (e for e in self.edges if e[0] != node))

    def to_edge_list(self) -> str:
        lines = [f"{a} -> {b}" for a, b in sorted(self.edges)]
        touched = {n for e in self.edges for n in e}
        lines += sorted(str(n) for n in self.nodes - touched)
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_edge_list().encode()).hexdigest()


def find_cycle(dag: Dag) -> list | None:
    """One directed cycle as a node list, or None if the graph is acyclic."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in dag._children}
    for root in sorted(color, key=str):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(sorted(dag._children[root], key=str)))]
        path = [root]
        color[root] = GREY
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = BLACK
                stack.pop()
                path.pop()
            elif color[nxt] == GREY:
                return path[path.index(nxt):]
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                path.append(nxt)
                stack.append((nxt, iter(sorted(dag._children[nxt], key=str))))
    return None


def validate_dag(dag: Dag) -> None:
    """Raise NodeNameError for a dangling endpoint, CycleError for a cycle."""
    for a, b in sorted(dag.edges, key=lambda e: (str(e[0]), str(e[1]))):
        for end in (a, b):
            if end not in dag.nodes:
                raise NodeNameError(end)
    cycle = find_cycle(dag)
    if cycle is not None:
        raise CycleError(cycle)


def parse_edge_list(text: str) -> Dag:
    nodes, edges = set(), set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            parts = [p.strip() for p in line.split("->")]
            if len(parts) != 2 or not all(parts):
                raise DagError(f"line {lineno}: expected 'parent -> child', got {raw.strip()!r}")
            a, b = parts
            edges.add((a, b))
            nodes.update((a, b))
        else:
            nodes.add(line)
    dag = Dag(nodes, edges)
    validate_dag(dag)
    return dag


def load_edge_list(path) -> Dag:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def default_dag_text() -> str:
    return resources.files(__package__).joinpath("default_dag.txt").read_text(encoding="utf-8")


def build_default_dag() -> Dag:
    return parse_edge_list(default_dag_text())


def d_separated(dag: Dag, x, y, z: Iterable = ()) -> bool:
    """True iff every path between ``x`` and ``y`` is blocked by ``z``.

    Reachability search over (node, direction) states: colliders pass only
    when they or a descendant are conditioned on, non-colliders only when
    they are not.
    """
    z = frozenset(z)
    for n in (x, y, *z):
        dag._check(n)
    if x in z or y in z:
        raise DagError("x and y must not be in the conditioning set")
    if x == y:
        return False
    opens_collider = dag._closure(list(z), dag._parents) if z else frozenset()
    # "up": arrived from a child; "down": arrived from a parent
    seen = set()
    queue = deque([(x, "up")])
    while queue:
        v, direction = queue.popleft()
        if (v, direction) in seen:
            continue
        seen.add((v, direction))
        if v == y:
            return False
        if direction == "up" and v not in z:
            queue.extend((p, "up") for p in dag._parents[v])
            queue.extend((c, "down") for c in dag._children[v])
        elif direction == "down":
            if v not in z:
                queue.extend((c, "down") for c in dag._children[v])
            if v in opens_collider:
                queue.extend((p, "up") for p in dag._parents[v])
    return True


def satisfies_backdoor(dag: Dag, treatment, outcome, z: Iterable = ()) -> bool:
    z = frozenset(z)
    for n in (treatment, outcome, *z):
        dag._check(n)
    if treatment == outcome:
        raise DagError("treatment and outcome must differ")
    if treatment in z or outcome in z:
        return False
    if z & dag.descendants(treatment):
        return False
    return d_separated(dag.without_outgoing(treatment), treatment, outcome, z)


def find_minimal_adjustment_set(dag: Dag, treatment, outcome, observed: Iterable | None = None):
    """Smallest backdoor set, ties by lexicographic order; None if none exists."""
    if treatment == outcome:
        raise DagError("treatment and outcome must differ")
    pool = dag.nodes if observed is None else frozenset(observed) & dag.nodes
    banned = dag.descendants(treatment) | {treatment, outcome}
    candidates = sorted((n for n in pool if n not in banned), key=str)
    for k in range(len(candidates) + 1):
        for combo in combinations(candidates, k):
            if satisfies_backdoor(dag, treatment, outcome, combo):
                return frozenset(combo)
    return None
