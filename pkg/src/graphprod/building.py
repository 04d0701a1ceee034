"""Finite balls of the right-angled building of a graph product.

Chambers are cosets ``gK`` and are represented by the normal form of ``g``;
poset vertices ``gG_T`` (``T`` a clique) by the shortest element of the coset.
Balls are enumerated breadth-first from the identity with exponents of
infinite-order vertices bounded by ``E``; every check skips (and counts) the
cases whose answer could depend on chambers outside the ball.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .aut import Automorphism, AutomorphismError, compose, graph_symmetry, vertex_iso, apply
from .autpc import Report
from .graph import DefiningGraph, GraphError
from .words import (
    GroupWord,
    ball,
    format_word,
    generator,
    invert,
    is_reduced,
    multiply,
    normalize,
    strip_right,
    syllable_alphabet,
)


def coxeter_shadow(g: DefiningGraph) -> DefiningGraph:
    """Same graph with every vertex group replaced by Z/2."""
    return DefiningGraph(g.names, (2,) * len(g), g.edges)


def gamma_map(g: DefiningGraph, x: GroupWord) -> GroupWord:
    """Replace each syllable by the Coxeter generator of its vertex.

    Not a homomorphism; the result is reduced in the Coxeter group because no
    shuffle of a reduced word brings two syllables of one vertex together.
    """
    w = coxeter_shadow(g)
    return GroupWord(w, tuple((v, 1) for v, _ in x.syllables))


@dataclass(frozen=True)
class Chamber:
    rep: GroupWord

    def __lt__(self, other):
        return self.rep.sort_key() < other.rep.sort_key()

    def __str__(self):
        return str(self.rep)


@dataclass(frozen=True)
class CosetVertex:
    rep: GroupWord
    spherical: frozenset[int]

    def sort_key(self):
        return (len(self.spherical), tuple(sorted(self.spherical)), self.rep.sort_key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def label(self) -> str:
        g = self.rep.graph
        return f"{self.rep} | {{{','.join(g.sorted_names(self.spherical))}}}"


def coset_rep(g: DefiningGraph, x: GroupWord, T: Iterable[str | int]) -> GroupWord:
    """Shortest representative of ``x G_T``; ``T`` must span a clique."""
    t = g.vids(T)
    if not g.is_clique(t):
        raise GraphError(f"{{{','.join(g.sorted_names(t))}}} does not span a complete subgraph")
    return strip_right(x, t)


# -- chambers -------------------------------------------------------------------


@dataclass
class ChamberBall:
    graph: DefiningGraph
    radius: int
    exponent_bound: int
    chambers: list[GroupWord]
    # (chamber, vertex) -> class key, the shortest element of chamber * G_v
    class_of: dict[tuple[GroupWord, int], GroupWord] = field(repr=False)
    members: dict[tuple[int, GroupWord], list[GroupWord]] = field(repr=False)
    complete: bool = False

    def __contains__(self, x: GroupWord) -> bool:
        return (x, 0) in self.class_of or (len(self.graph) == 0 and x.is_identity)

    def adjacent(self, x: GroupWord, v: int) -> list[GroupWord]:
        """Chambers of the ball that are ``v``-adjacent to ``x``."""
        return [c for c in self.members[(v, self.class_of[(x, v)])] if c != x]

    def to_text(self) -> str:
        g = self.graph
        ids = {}
        lines = [f"# ball radius {self.radius} exponent bound {self.exponent_bound}"]
        for c in self.chambers:
            lines.append(f"chamber {c}")
        for v in range(len(g)):
            keys = sorted({self.class_of[(c, v)] for c in self.chambers}, key=GroupWord.sort_key)
            ids = {k: n for n, k in enumerate(keys)}
            for c in self.chambers:
                lines.append(f"chamber {c} vertex {g.names[v]} class {ids[self.class_of[(c, v)]]}")
        return "\n".join(lines) + "\n"


def _is_closed(g: DefiningGraph, chambers: set, exponent_bound: int) -> bool:
    if not g.all_finite:
        return False
    alphabet = syllable_alphabet(g, exponent_bound)
    for c in chambers:
        for v, e in alphabet:
            if multiply(c, generator(g, v, e)) not in chambers:
                return False
    return True


def chamber_ball(g: DefiningGraph, radius: int, exponent_bound: int = 2) -> ChamberBall:
    if radius < 0 or exponent_bound < 1:
        raise ValueError("radius must be >= 0 and exponent bound >= 1")
    chambers = ball(g, radius, exponent_bound)
    class_of = {}
    members: dict = {}
    for c in chambers:
        for v in range(len(g)):
            key = strip_right(c, (v,))
            class_of[(c, v)] = key
            members.setdefault((v, key), []).append(c)
    complete = _is_closed(g, set(chambers), exponent_bound)
    return ChamberBall(g, radius, exponent_bound, chambers, class_of, members, complete)


def w_distance(g: DefiningGraph, a: Chamber | GroupWord, b: Chamber | GroupWord) -> GroupWord:
    """W-valued distance ``gamma(a^-1 b)``."""
    a = a.rep if isinstance(a, Chamber) else a
    b = b.rep if isinstance(b, Chamber) else b
    return gamma_map(g, multiply(invert(a), b))


def gallery_check(
    cb: ChamberBall, a: Chamber | GroupWord, b: Chamber | GroupWord, gallery_type: Sequence[str | int]
) -> bool:
    """Is there a gallery of the given (reduced) type from ``a`` to ``b`` in the ball?"""
    g = cb.graph
    a = a.rep if isinstance(a, Chamber) else a
    b = b.rep if isinstance(b, Chamber) else b
    types = [g.vid(s) for s in gallery_type]
    if not is_reduced(coxeter_shadow(g), [(s, 1) for s in types]):
        raise GraphError(
            f"gallery type {format_word(g, [(s, 1) for s in types])} is not reduced"
        )
    frontier = {a}
    for s in types:
        frontier = {c for x in frontier for c in cb.adjacent(x, s)}
        if not frontier:
            return False
    return b in frontier


def reduced_types(g: DefiningGraph, max_len: int) -> list[tuple[int, ...]]:
    """Every reduced word of the Coxeter shadow with at most ``max_len`` letters."""
    w = coxeter_shadow(g)
    out = [()]
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for t in layer:
            for s in range(len(g)):
                cand = t + (s,)
                if is_reduced(w, [(x, 1) for x in cand]):
                    nxt.append(cand)
        out += nxt
        layer = nxt
    return out


def verify_distance_axiom(cb: ChamberBall, max_type_len: int | None = None) -> Report:
    """Gallery of reduced type ``w`` from ``a`` to ``b`` exists iff the
    W-distance is ``w``, for every chamber pair and every reduced type.

    A pair and type are skipped when a gallery could leave the ball, i.e.
    when the ball is not closed and ``|a| + |w| > radius``.
    """
    g = cb.graph
    shadow = coxeter_shadow(g)
    max_len = cb.radius if max_type_len is None else max_type_len
    types = reduced_types(g, max_len)
    type_words = [normalize(shadow, [(s, 1) for s in t]) for t in types]
    rep = Report("W-distance axiom: gallery of reduced type w exists iff d(a,b) = w")
    skipped = 0
    for a in cb.chambers:
        for b in cb.chambers:
            d = w_distance(g, a, b)
            for t, tw in zip(types, type_words):
                if not cb.complete and len(a) + len(t) > cb.radius:
                    skipped += 1
                    continue
                rep.checked += 1
                has = gallery_check(cb, a, b, t)
                if has != (tw == d):
                    rep.violations.append(
                        f"a={a} b={b} type {format_word(shadow, [(s, 1) for s in t]) if t else '1'}: "
                        f"gallery {'exists' if has else 'missing'} but d(a,b)={d}"
                    )
    rep.lines.append(
        f"{len(cb.chambers)} chambers, {len(types)} reduced types, "
        f"checked {rep.checked}, skipped {skipped} (ball boundary, E={cb.exponent_bound})"
    )
    return rep


def verify_class_sizes(cb: ChamberBall) -> Report:
    """Every complete s-class holds exactly ``|G_s|`` chambers (at least two)."""
    g = cb.graph
    rep = Report("s-equivalence classes have |G_s| chambers")
    skipped = 0
    for (v, key), mem in sorted(cb.members.items(), key=lambda kv: (kv[0][0], kv[0][1].sort_key())):
        o = g.orders[v]
        if o is not None and len(mem) > o:
            rep.violations.append(f"class {key} G_{g.names[v]} has {len(mem)} > {o} chambers")
            continue
        if o is None or not (cb.complete or len(key) + 1 <= cb.radius):
            skipped += 1
            continue
        rep.checked += 1
        if len(mem) != o or len(mem) < 2:
            rep.violations.append(f"class {key} G_{g.names[v]} has {len(mem)} chambers, expected {o}")
    rep.lines.append(f"checked {rep.checked} complete classes, skipped {skipped} partial")
    return rep


# -- the poset of cosets ----------------------------------------------------------


def cliques(g: DefiningGraph) -> list[frozenset[int]]:
    """All vertex sets spanning complete subgraphs, the empty set included."""
    out = [frozenset()]
    for k in range(1, len(g) + 1):
        found = False
        for c in combinations(range(len(g)), k):
            if g.is_clique(c):
                out.append(frozenset(c))
                found = True
        if not found:
            break
    return out


@dataclass
class PosetBall:
    graph: DefiningGraph
    radius: int
    exponent_bound: int
    elements: list[CosetVertex]
    index: dict[CosetVertex, int] = field(repr=False)
    below: dict[int, list[int]] = field(repr=False)  # strictly below
    above: dict[int, list[int]] = field(repr=False)  # strictly above

    def le_pairs(self) -> list[tuple[int, int]]:
        return sorted((i, j) for j, bs in self.below.items() for i in bs)

    def cubes(self) -> list[tuple[int, int, int]]:
        """Intervals ``[x, y]`` with ``x < y`` as ``(x, y, dimension)``."""
        out = []
        for i, j in self.le_pairs():
            out.append((i, j, len(self.elements[j].spherical) - len(self.elements[i].spherical)))
        return out

    def stabilizer_order(self, i: int) -> int | None:
        """``|G_T|`` for element ``i``; ``None`` when infinite."""
        orders = [self.graph.orders[v] for v in self.elements[i].spherical]
        return None if None in orders else prod(orders)

    def to_text(self) -> str:
        lines = [f"# poset radius {self.radius} exponent bound {self.exponent_bound}"]
        for i, x in enumerate(self.elements):
            so = self.stabilizer_order(i)
            lines.append(f"coset {x.label()}  # id {i}, |G_T| = {'inf' if so is None else so}")
        for i, j in self.le_pairs():
            lines.append(f"le {i} {j}")
        return "\n".join(lines) + "\n"


def poset_ball(g: DefiningGraph, radius: int, exponent_bound: int = 2) -> PosetBall:
    chambers = ball(g, radius, exponent_bound)
    cls = cliques(g)
    found = set()
    for c in chambers:
        for t in cls:
            found.add(CosetVertex(strip_right(c, t), t))
    elements = sorted(found)
    index = {x: i for i, x in enumerate(elements)}
    by_type: dict[frozenset, list[int]] = {}
    for i, x in enumerate(elements):
        by_type.setdefault(x.spherical, []).append(i)
    below = {i: [] for i in range(len(elements))}
    above = {i: [] for i in range(len(elements))}
    for t1, idx in by_type.items():
        for t2 in cls:
            if t1 < t2:
                for i in idx:
                    top = CosetVertex(strip_right(elements[i].rep, t2), t2)
                    j = index.get(top)
                    if j is not None:
                        below[j].append(i)
                        above[i].append(j)
    for d in (below, above):
        for k in d:
            d[k].sort()
    return PosetBall(g, radius, exponent_bound, elements, index, below, above)


def poset_le(x: CosetVertex, y: CosetVertex) -> bool:
    """``x <= y`` iff ``T1 <= T2`` and ``x.rep^-1 y.rep`` lies in ``G_T2``."""
    if not x.spherical <= y.spherical:
        return False
    return strip_right(multiply(invert(x.rep), y.rep), y.spherical).is_identity


def _is_interior(pb: PosetBall, i: int) -> bool:
    g = pb.graph
    x = pb.elements[i]
    if any(g.orders[v] is None for v in x.spherical):
        return False
    counts: dict[frozenset, int] = {}
    for j in pb.below[i]:
        t = pb.elements[j].spherical
        counts[t] = counts.get(t, 0) + 1
    for k in range(len(x.spherical)):
        for t1 in combinations(sorted(x.spherical), k):
            t1 = frozenset(t1)
            need = prod(g.orders[v] for v in x.spherical - t1)
            if counts.get(t1, 0) != need:
                return False
    return True


def link_of(pb: PosetBall, i: int) -> tuple[list[tuple[str, int]], set[frozenset]]:
    """Vertices and simplices of the link of element ``i`` in the cube complex.

    Link vertices are the edges at ``i`` (``("up", j)`` / ``("down", j)``);
    each cube ``[lo, hi]`` through ``i`` contributes the simplex of its edges at ``i``.
    """
    ti = len(pb.elements[i].spherical)
    lows = [i] + pb.below[i]
    highs = [i] + pb.above[i]
    below_set = set(pb.below[i])
    verts = sorted(
        [("down", j) for j in pb.below[i] if len(pb.elements[j].spherical) == ti - 1]
        + [("up", j) for j in pb.above[i] if len(pb.elements[j].spherical) == ti + 1]
    )
    simplices = set()
    for lo in lows:
        lo_up = set(pb.above[lo]) | {lo}
        downs = [("down", j) for _, j in verts if j in below_set and j in lo_up and _ == "down"]
        for hi in highs:
            hi_down = set(pb.below[hi]) | {hi}
            ups = [("up", j) for kind, j in verts if kind == "up" and j in hi_down]
            simplices.add(frozenset(downs + ups))
    return verts, simplices


def link_flag_check(pb: PosetBall) -> Report:
    """The link of every fully interior element must be a flag complex."""
    rep = Report("links in the cube complex are flag")
    skipped = 0
    for i in range(len(pb.elements)):
        if not _is_interior(pb, i):
            skipped += 1
            continue
        rep.checked += 1
        verts, simplices = link_of(pb, i)
        skel = nx.Graph()
        skel.add_nodes_from(verts)
        for s in simplices:
            for a, b in combinations(sorted(s), 2):
                skel.add_edge(a, b)
        for clique in nx.enumerate_all_cliques(skel):
            if frozenset(map(tuple, clique)) not in simplices:
                rep.violations.append(
                    f"link of {pb.elements[i].label()}: {len(clique)} pairwise joined "
                    "vertices span no simplex"
                )
                break
    rep.lines.append(f"checked {rep.checked} interior elements, skipped {skipped} on the boundary")
    return rep


# -- the finite symmetry group Sigma ------------------------------------------------


def sigma_element(
    g: DefiningGraph,
    perm: Mapping[str | int, str | int] | None = None,
    isos: Mapping[str | int, int] | None = None,
) -> Automorphism:
    """Graph symmetry composed after vertex isomorphisms: ``x -> sigma(iso(x))``."""
    out = graph_symmetry(g, perm or {})
    for v, k in (isos or {}).items():
        out = compose(out, vertex_iso(g, v, k))
    return out


def _vertex_permutation(s: Automorphism) -> list[int]:
    perm = []
    for v, w in enumerate(s.images):
        if len(w.syllables) != 1:
            raise AutomorphismError(
                f"not an element of Sigma: {s.graph.names[v]} -> {w} is not a single syllable"
            )
        perm.append(w.syllables[0][0])
    if sorted(perm) != list(range(len(perm))):
        raise AutomorphismError("not an element of Sigma: generators are not permuted")
    return perm


def sigma_action(s: Automorphism, target: Chamber | CosetVertex):
    """``sigma . gG_T = sigma(g) G_sigma(T)``, re-canonicalized."""
    perm = _vertex_permutation(s)
    if isinstance(target, Chamber):
        return Chamber(apply(s, target.rep))
    t = frozenset(perm[v] for v in target.spherical)
    return CosetVertex(strip_right(apply(s, target.rep), t), t)


def left_action(x: GroupWord, target: Chamber | CosetVertex):
    """Left multiplication by a group element."""
    if isinstance(target, Chamber):
        return Chamber(multiply(x, target.rep))
    return CosetVertex(strip_right(multiply(x, target.rep), target.spherical), target.spherical)
