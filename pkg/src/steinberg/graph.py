"""Finite directed graphs, paths and cycles."""

from __future__ import annotations

import json
from itertools import combinations_with_replacement
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    src: str
    dst: str


@dataclass(frozen=True)
class Path:
    """A path ``e1 ... ek`` from ``start`` to ``end``; ``edges == ()`` is the vertex ``start``."""

    start: str
    end: str
    edges: Tuple[str, ...] = ()

    def __len__(self):
        return len(self.edges)

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    @property
    def key(self):
        return (len(self.edges), self.edges, self.start)

    @property
    def last(self) -> Optional[str]:
        return self.edges[-1] if self.edges else None

    def __add__(self, other: Path) -> Path:
        if self.end != other.start:
            raise GraphError(f"cannot concatenate {self} and {other}")
        return Path(self.start, other.end, self.edges + other.edges)

    def startswith(self, prefix: Path) -> bool:
        return self.start == prefix.start and self.edges[:len(prefix.edges)] == prefix.edges

    def drop_prefix(self, prefix: Path) -> Path:
        """The path ``q`` with ``self == prefix + q``."""
        if not self.startswith(prefix):
            raise GraphError(f"{prefix} is not a prefix of {self}")
        return Path(prefix.end, self.end, self.edges[len(prefix.edges):])

    def __str__(self):
        return ".".join(self.edges) if self.edges else self.start


class Graph:
    """A finite directed graph ``(E0, E1, s, r)``; ``src``/``dst`` are ``s``/``r``."""

    def __init__(self, vertices: Iterable[str], edges: Iterable[Tuple[str, str, str]]):
        self.vertices: Tuple[str, ...] = tuple(vertices)
        self.edges: Tuple[Edge, ...] = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        names = list(self.vertices) + [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise GraphError("vertex and edge names must be unique")
        vs = set(self.vertices)
        for e in self.edges:
            if e.src not in vs or e.dst not in vs:
                raise GraphError(f"edge {e.name} has an endpoint outside the vertex set")
        self._edge: Dict[str, Edge] = {e.name: e for e in self.edges}

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self):
        es = ", ".join(f"{e.name}:{e.src}->{e.dst}" for e in self.edges)
        return f"Graph({list(self.vertices)}, [{es}])"

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        try:
            return cls(data["vertices"], [(e["name"], e["src"], e["dst"]) for e in data.get("edges", [])])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph: {exc}") from None

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [{"name": e.name, "src": e.src, "dst": e.dst} for e in self.edges]}

    @classmethod
    def load(cls, path) -> Graph:
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    # -- lookups ----------------------------------------------------------

    def edge(self, name: str) -> Edge:
        return self._edge[name]

    def is_vertex(self, name: str) -> bool:
        return name in self._vertex_set

    def is_edge(self, name: str) -> bool:
        return name in self._edge

    @cached_property
    def _vertex_set(self):
        return frozenset(self.vertices)

    @cached_property
    def _out(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e.name)
        return {v: sorted(es) for v, es in out.items()}

    def out_edges(self, v: str) -> List[str]:
        return self._out[v]

    def is_regular(self, v: str) -> bool:
        return bool(self._out[v])

    @cached_property
    def special_edges(self) -> Dict[str, str]:
        """Default choice of one outgoing edge per regular vertex (least name)."""
        return {v: es[0] for v, es in self._out.items() if es}

    @cached_property
    def special_edge_set(self) -> frozenset:
        return frozenset(self.special_edges.values())

    def vertex_path(self, v: str) -> Path:
        if v not in self._vertex_set:
            raise GraphError(f"unknown vertex {v!r}")
        return Path(v, v)

    def path(self, *names: str) -> Path:
        """A path from a vertex name or a sequence of edge names."""
        if len(names) == 1 and names[0] in self._vertex_set:
            return self.vertex_path(names[0])
        if not names:
            raise GraphError("empty path")
        for n in names:
            if n not in self._edge:
                raise GraphError(f"unknown edge {n!r}")
        for a, b in zip(names, names[1:]):
            if self._edge[a].dst != self._edge[b].src:
                raise GraphError(f"edges {a} and {b} do not compose")
        return Path(self._edge[names[0]].src, self._edge[names[-1]].dst, tuple(names))

    def extend(self, p: Path, e: str) -> Path:
        return Path(p.start, self._edge[e].dst, p.edges + (e,))


def regular_vertices(g: Graph) -> List[str]:
    return [v for v in g.vertices if g.is_regular(v)]


def sinks(g: Graph) -> List[str]:
    return [v for v in g.vertices if not g.is_regular(v)]


def enumerate_paths(g: Graph, max_len: int) -> List[Path]:
    """All paths of length at most ``max_len``, ordered by length then edge names."""
    layer = sorted((g.vertex_path(v) for v in g.vertices), key=lambda p: p.key)
    out = list(layer)
    for _ in range(max_len):
        layer = [g.extend(p, e) for p in layer for e in g.out_edges(p.end)]
        layer.sort(key=lambda p: p.key)
        out.extend(layer)
    return out


def simple_cycles(g: Graph) -> List[Path]:
    """Closed paths whose edges have pairwise distinct sources, one per base vertex."""
    found = []

    def walk(base, path, seen):
        for e in g.out_edges(path.end):
            nxt = g.extend(path, e)
            if nxt.end == base:
                found.append(nxt)
            elif nxt.end not in seen:
                walk(base, nxt, seen | {nxt.end})

    for v in g.vertices:
        walk(v, g.vertex_path(v), frozenset([v]))
    found.sort(key=lambda p: p.key)
    return found


def has_exit(g: Graph, cycle: Path) -> bool:
    return any(g.out_edges(g.edge(e).src) != [e] for e in cycle.edges)


def cycles_without_exit(g: Graph) -> List[Path]:
    return [c for c in simple_cycles(g) if not has_exit(g, c)]


def is_acyclic(g: Graph) -> bool:
    # Kahn-style peeling of sinks is cheaper than enumerating cycles
    out_deg = {v: len(g.out_edges(v)) for v in g.vertices}
    preds: Dict[str, List[str]] = {v: [] for v in g.vertices}
    for e in g.edges:
        preds[e.dst].append(e.src)
    stack = [v for v, d in out_deg.items() if d == 0]
    removed = 0
    while stack:
        v = stack.pop()
        removed += 1
        for u in preds[v]:
            out_deg[u] -= 1
            if out_deg[u] == 0:
                stack.append(u)
    return removed == len(g.vertices)


def max_cycle_length(g: Graph) -> int:
    return max((len(c) for c in simple_cycles(g)), default=0)


def is_weakly_connected(g: Graph) -> bool:
    if not g.vertices:
        return True
    adj: Dict[str, set] = {v: set() for v in g.vertices}
    for e in g.edges:
        adj[e.src].add(e.dst)
        adj[e.dst].add(e.src)
    seen = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(g.vertices)


# -- named sample graphs ------------------------------------------------------


def single_vertex() -> Graph:
    return Graph(["v"], [])


def loop() -> Graph:
    return Graph(["v"], [("c", "v", "v")])


def toeplitz() -> Graph:
    return Graph(["v", "w"], [("c", "v", "v"), ("f", "v", "w")])


def rose(k: int = 2) -> Graph:
    return Graph(["v"], [(chr(ord("a") + i), "v", "v") for i in range(k)])


def edge_graph() -> Graph:
    """``v --e--> w``."""
    return Graph(["v", "w"], [("e", "v", "w")])


def line(n: int) -> Graph:
    """``v1 -> v2 -> ... -> vn`` with edges ``e1 ... e(n-1)``."""
    return Graph([f"v{i}" for i in range(1, n + 1)],
                 [(f"e{i}", f"v{i}", f"v{i + 1}") for i in range(1, n)])


def loop_with_tail() -> Graph:
    """``u --t--> v`` followed by a loop ``c`` at ``v``."""
    return Graph(["u", "v"], [("c", "v", "v"), ("t", "u", "v")])


def binary_tree(depth: int = 2) -> Graph:
    """Rooted binary tree with edges pointing away from the root."""
    vertices, edges = ["r"], []
    layer = ["r"]
    for _ in range(depth):
        nxt = []
        for v in layer:
            for side in "LR":
                w = (v + side) if v != "r" else side
                vertices.append(w)
                edges.append((f"e{w}", v, w))
                nxt.append(w)
        layer = nxt
    return Graph(vertices, edges)


SAMPLE_GRAPHS = {
    "vertex": single_vertex,
    "loop": loop,
    "toeplitz": toeplitz,
    "rose2": rose,
    "line3": lambda: line(3),
    "loop_tail": loop_with_tail,
    "edge": edge_graph,
}


def all_small_graphs(max_vertices: int = 3, max_edges: int = 3) -> List[Graph]:
    """Every graph on vertices ``v1..vn`` (n >= 1) with at most ``max_edges`` edges.

    Edges are multisets of ordered vertex pairs (loops and parallel edges
    allowed), named ``a, b, c, ...`` in sorted pair order.
    """
    out = []
    for n in range(1, max_vertices + 1):
        vs = [f"v{i}" for i in range(1, n + 1)]
        pairs = [(a, b) for a in vs for b in vs]
        for k in range(max_edges + 1):
            for combo in combinations_with_replacement(pairs, k):
                out.append(Graph(vs, [(chr(ord("a") + i), s, d) for i, (s, d) in enumerate(combo)]))
    return out
