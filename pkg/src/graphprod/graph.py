"""Defining graphs for graph products of cyclic groups.

A :class:`DefiningGraph` is a finite simplicial graph whose vertices carry a
cyclic order (an integer ``n >= 2`` or :data:`INF`).  The declaration order of
the vertices is the total order used by every canonical form in the package,
so vertices are addressed internally by their index in that order.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

INF = None
"""Order of an infinite cyclic vertex group."""

_NAME_RE = re.compile(r"[A-Za-z0-9_.]+\Z")


class GraphError(ValueError):
    """Raised for malformed graphs or unknown vertices."""


class ParseError(GraphError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


def format_order(order: int | None) -> str:
    return "inf" if order is None else str(order)


def check_order(order: int | None) -> int | None:
    if order is None:
        return None
    if isinstance(order, bool) or not isinstance(order, int):
        raise GraphError(f"order must be an integer or inf, got {order!r}")
    if order < 2:
        raise GraphError(f"order {order} is below 2")
    return order


@dataclass(frozen=True, eq=False)
class DefiningGraph:
    """Finite simplicial graph with cyclic vertex orders.

    ``names`` and ``orders`` are parallel tuples in declaration order;
    ``edges`` holds index pairs ``(i, j)`` with ``i < j``.
    """

    names: tuple[str, ...]
    orders: tuple[int | None, ...]
    edges: frozenset[tuple[int, int]] = frozenset()
    index: dict[str, int] = field(init=False, repr=False)
    adj: tuple[frozenset[int], ...] = field(init=False, repr=False)
    adj_mask: tuple[int, ...] = field(init=False, repr=False)
    dep_mask: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.names) != len(self.orders):
            raise GraphError("names and orders differ in length")
        index = {}
        for i, name in enumerate(self.names):
            if not _NAME_RE.match(name):
                raise GraphError(f"invalid vertex name {name!r}")
            if name in index:
                raise GraphError(f"duplicate vertex {name!r}")
            index[name] = i
            check_order(self.orders[i])
        n = len(self.names)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for i, j in self.edges:
            if not (0 <= i < j < n):
                raise GraphError(f"bad edge {(i, j)!r}")
            nbrs[i].add(j)
            nbrs[j].add(i)
        full = (1 << n) - 1
        masks = tuple(sum(1 << j for j in s) for s in nbrs)
        set_ = object.__setattr__
        set_(self, "index", index)
        set_(self, "adj", tuple(frozenset(s) for s in nbrs))
        set_(self, "adj_mask", masks)
        # vertices that do not commute with v (v itself included)
        set_(self, "dep_mask", tuple(full & ~m for m in masks))
        set_(self, "_key", (self.names, self.orders, tuple(sorted(self.edges))))

    @classmethod
    def build(
        cls,
        vertices: Sequence[tuple[str, int | None]],
        edges: Iterable[tuple[str, str]] = (),
    ) -> "DefiningGraph":
        """Build from ``(name, order)`` pairs and name pairs."""
        names = tuple(v for v, _ in vertices)
        orders = tuple(check_order(o) for _, o in vertices)
        index = {v: i for i, v in enumerate(names)}
        if len(index) != len(names):
            raise GraphError("duplicate vertex names")
        pairs = set()
        for a, b in edges:
            if a not in index or b not in index:
                raise GraphError(f"edge {a}-{b} has an unknown endpoint")
            if a == b:
                raise GraphError(f"loop at {a}")
            i, j = sorted((index[a], index[b]))
            if (i, j) in pairs:
                raise GraphError(f"duplicate edge {a}-{b}")
            pairs.add((i, j))
        return cls(names, orders, frozenset(pairs))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, DefiningGraph):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"DefiningGraph({len(self.names)} vertices, {len(self.edges)} edges)"

    # -- lookups -----------------------------------------------------------

    def vid(self, v: str | int) -> int:
        """Vertex index for a name (or a checked index)."""
        if isinstance(v, int) and not isinstance(v, bool):
            if 0 <= v < len(self.names):
                return v
        elif v in self.index:
            return self.index[v]
        raise GraphError(f"unknown vertex {v!r}")

    def vids(self, vs: Iterable[str | int]) -> frozenset[int]:
        return frozenset(self.vid(v) for v in vs)

    def order(self, v: str | int) -> int | None:
        return self.orders[self.vid(v)]

    def adjacent(self, v: str | int, w: str | int) -> bool:
        return self.vid(w) in self.adj[self.vid(v)]

    def commute(self, i: int, j: int) -> bool:
        return (self.adj_mask[i] >> j) & 1 == 1

    def sorted_names(self, vs: Iterable[int]) -> list[str]:
        return [self.names[i] for i in sorted(vs)]

    def edge_names(self) -> list[tuple[str, str]]:
        return [(self.names[i], self.names[j]) for i, j in sorted(self.edges)]

    @property
    def all_finite(self) -> bool:
        return all(o is not None for o in self.orders)

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(b in self.adj[a] for k, a in enumerate(vs) for b in vs[k + 1:])

    def induced(self, keep: Iterable[str | int]) -> "DefiningGraph":
        """Full subgraph on ``keep``, in declaration order."""
        idx = sorted(self.vids(keep))
        new = {old: k for k, old in enumerate(idx)}
        edges = frozenset(
            (new[i], new[j]) for i, j in self.edges if i in new and j in new
        )
        return DefiningGraph(
            tuple(self.names[i] for i in idx), tuple(self.orders[i] for i in idx), edges
        )

    def with_orders(self, orders: Sequence[int | None]) -> "DefiningGraph":
        return DefiningGraph(self.names, tuple(orders), self.edges)

    def to_text(self) -> str:
        lines = [f"vertex {n} order {format_order(o)}" for n, o in zip(self.names, self.orders)]
        lines += [f"edge {a} {b}" for a, b in self.edge_names()]
        return "\n".join(lines) + "\n"


# -- parsing ------------------------------------------------------------------


def parse_graph(text: str) -> DefiningGraph:
    """Parse the line-based graph format.

    ::

        # comment
        vertex <name> order <n|inf>
        edge <name> <name>
    """
    vertices: list[tuple[str, int | None]] = []
    seen: dict[str, int] = {}
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "vertex":
            if len(tok) != 4 or tok[2] != "order":
                raise ParseError(lineno, "expected 'vertex <name> order <n|inf>'")
            name = tok[1]
            if not _NAME_RE.match(name):
                raise ParseError(lineno, f"invalid vertex name {name!r}")
            if name in seen:
                raise ParseError(lineno, f"duplicate vertex {name!r}")
            if tok[3] == "inf":
                order = None
            else:
                try:
                    order = int(tok[3])
                except ValueError:
                    raise ParseError(lineno, f"bad order {tok[3]!r}") from None
                if order < 2:
                    raise ParseError(lineno, f"order {order} is below 2")
            seen[name] = len(vertices)
            vertices.append((name, order))
        elif tok[0] == "edge":
            if len(tok) != 3:
                raise ParseError(lineno, "expected 'edge <name> <name>'")
            a, b = tok[1], tok[2]
            for x in (a, b):
                if x not in seen:
                    raise ParseError(lineno, f"unknown vertex {x!r}")
            if a == b:
                raise ParseError(lineno, f"loop at {a!r}")
            pair = tuple(sorted((seen[a], seen[b])))
            if pair in edges:
                raise ParseError(lineno, f"duplicate edge {a} {b}")
            edges.add(pair)
        else:
            raise ParseError(lineno, f"unknown directive {tok[0]!r}")
    return DefiningGraph(
        tuple(v for v, _ in vertices), tuple(o for _, o in vertices), frozenset(edges)
    )


# -- subgraph operators -------------------------------------------------------


def link_star(g: DefiningGraph, v: str | int) -> tuple[frozenset[int], frozenset[int]]:
    i = g.vid(v)
    return g.adj[i], g.adj[i] | {i}


def components(g: DefiningGraph, allowed: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of the full subgraph on ``allowed``.

    Sorted by least vertex; this least vertex names the component.
    """
    rest = set(allowed)
    out = []
    for start in sorted(rest):
        if start not in rest:
            continue
        comp = {start}
        rest.discard(start)
        todo = [start]
        while todo:
            u = todo.pop()
            for w in g.adj[u]:
                if w in rest:
                    rest.discard(w)
                    comp.add(w)
                    todo.append(w)
        out.append(frozenset(comp))
    return out


def components_outside_star(g: DefiningGraph, v: str | int) -> list[frozenset[int]]:
    _, star = link_star(g, v)
    return components(g, set(range(len(g))) - star)


def connected_components(g: DefiningGraph) -> list[frozenset[int]]:
    return components(g, range(len(g)))


def is_connected(g: DefiningGraph) -> bool:
    return len(connected_components(g)) <= 1


def graph_distance(g: DefiningGraph, v: str | int, w: str | int) -> float:
    """Edge-count distance; ``math.inf`` across components."""
    a, b = g.vid(v), g.vid(w)
    if a == b:
        return 0
    dist = {a: 0}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        for x in g.adj[u]:
            if x not in dist:
                dist[x] = dist[u] + 1
                if x == b:
                    return dist[x]
                queue.append(x)
    return math.inf


def distance_matrix(g: DefiningGraph) -> list[list[float]]:
    n = len(g)
    return [[graph_distance(g, i, j) for j in range(n)] for i in range(n)]


@dataclass(frozen=True, order=True)
class SilWitness:
    """A pair ``v < w`` at distance >= 2 and a component of the graph minus
    ``lk(v) & lk(w)`` that avoids both."""

    v: int
    w: int
    component: tuple[int, ...]

    def describe(self, g: DefiningGraph) -> str:
        comp = ",".join(g.names[i] for i in self.component)
        return f"({g.names[self.v]}, {g.names[self.w]}, {{{comp}}})"


def find_sils(g: DefiningGraph) -> list[SilWitness]:
    n = len(g)
    out = []
    for v in range(n):
        for w in range(v + 1, n):
            if w in g.adj[v]:
                continue
            common = g.adj[v] & g.adj[w]
            for comp in components(g, set(range(n)) - common):
                if v not in comp and w not in comp:
                    out.append(SilWitness(v, w, tuple(sorted(comp))))
    out.sort()
    return out


def center_split(g: DefiningGraph) -> tuple[frozenset[int], DefiningGraph]:
    """Cone vertices (generating the center) and the graph they leave."""
    n = len(g)
    delta = frozenset(v for v in range(n) if len(g.adj[v]) == n - 1)
    return delta, g.induced(set(range(n)) - delta)


# -- blow-up of abelian vertex groups -----------------------------------------


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return n == 1


def blow_up(
    factors: Mapping[str, Sequence[int | None]] | Sequence[tuple[str, Sequence[int | None]]],
    edges: Iterable[tuple[str, str]] = (),
) -> DefiningGraph:
    """Replace each vertex by a clique of its indecomposable cyclic factors.

    Vertex ``v`` with factors ``[f1, f2, ...]`` becomes ``v.1, v.2, ...``;
    factors must be prime powers or ``INF``.
    """
    items = list(factors.items()) if isinstance(factors, Mapping) else list(factors)
    vertices: list[tuple[str, int | None]] = []
    groups: dict[str, list[str]] = {}
    for v, fs in items:
        if v in groups:
            raise GraphError(f"duplicate vertex {v!r}")
        if not fs:
            raise GraphError(f"vertex {v!r} has no cyclic factors")
        names = []
        for k, f in enumerate(fs, 1):
            if f is not None and not (isinstance(f, int) and _is_prime_power(f)):
                raise GraphError(
                    f"vertex {v!r}: factor {f!r} is not an indecomposable cyclic order"
                )
            names.append(f"{v}.{k}")
            vertices.append((f"{v}.{k}", f))
        groups[v] = names
    out_edges = []
    for names in groups.values():
        out_edges += [(a, b) for k, a in enumerate(names) for b in names[k + 1:]]
    seen = set()
    for a, b in edges:
        if a not in groups or b not in groups:
            raise GraphError(f"edge {a}-{b} has an unknown endpoint")
        if a == b or frozenset((a, b)) in seen:
            raise GraphError(f"bad edge {a}-{b}")
        seen.add(frozenset((a, b)))
        out_edges += [(x, y) for x in groups[a] for y in groups[b]]
    return DefiningGraph.build(vertices, out_edges)
