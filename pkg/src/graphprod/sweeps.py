"""Exhaustive small-graph sweeps.

Graphs come from the networkx atlas of all graphs on at most seven vertices
(one per isomorphism class).  Vertices are renamed ``v1 .. vn``.  Sweeps are
pure functions of their input, so ``parallel_map`` may farm them out to a
process pool without changing any report.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator, Sequence, TypeVar

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .aut import PCDescriptor, apply, commutes, compose, partial_conjugations, pc_automorphism
from .autpc import Report, tilde_edge_rule
from .graph import (
    DefiningGraph,
    components_outside_star,
    connected_components,
    distance_matrix,
    find_sils,
    is_connected,
)
from .words import (
    GroupWord,
    generator,
    normalize,
    syllable_alphabet,
    _closure,
    _minimal,
)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], jobs: int = 1) -> list[R]:
    """``[fn(x) for x in items]``, optionally in a process pool; order kept."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# -- graph enumeration ------------------------------------------------------------


def _from_nx(h: nx.Graph, order: int | None = 2) -> DefiningGraph:
    n = h.number_of_nodes()
    names = tuple(f"v{i + 1}" for i in range(n))
    edges = frozenset(tuple(sorted(e)) for e in h.edges())
    return DefiningGraph(names, (order,) * n, edges)


def atlas_graphs(max_vertices: int, min_vertices: int = 1) -> list[DefiningGraph]:
    """One graph per isomorphism class, all orders 2, in atlas order."""
    if max_vertices > 7:
        raise ValueError("the graph atlas stops at seven vertices")
    return [
        _from_nx(h)
        for h in nx.graph_atlas_g()
        if min_vertices <= h.number_of_nodes() <= max_vertices
    ]


def connected_graphs(max_vertices: int, sil: bool | None = None) -> list[DefiningGraph]:
    """Connected atlas graphs; ``sil`` filters on having SILs."""
    out = []
    for g in atlas_graphs(max_vertices):
        if not is_connected(g):
            continue
        if sil is not None and bool(find_sils(g)) != sil:
            continue
        out.append(g)
    return out


def automorphism_perms(g: DefiningGraph) -> list[tuple[int, ...]]:
    h = nx.Graph()
    h.add_nodes_from(range(len(g)))
    h.add_edges_from(g.edges)
    perms = [tuple(m[i] for i in range(len(g))) for m in GraphMatcher(h, h).isomorphisms_iter()]
    return sorted(perms)


def order_assignments(
    g: DefiningGraph, choices: Sequence[int | None], up_to_symmetry: bool = True
) -> list[DefiningGraph]:
    """Every assignment of orders from ``choices``; with ``up_to_symmetry``,
    one per orbit of the graph's symmetry group (the lexicographically least
    under the position of each choice in ``choices``)."""
    rank = {c: i for i, c in enumerate(choices)}
    perms = automorphism_perms(g) if up_to_symmetry else [tuple(range(len(g)))]
    out = []
    for combo in product(choices, repeat=len(g)):
        key = tuple(rank[c] for c in combo)
        if up_to_symmetry and any(
            tuple(key[p[i]] for i in range(len(g))) < key for p in perms
        ):
            continue
        out.append(g.with_orders(combo))
    return out


def graph_family(max_vertices: int, choices: Sequence[int | None], sil: bool | None = False):
    """Connected graphs (filtered on SILs) times all order assignments up to symmetry."""
    return [
        h for g in connected_graphs(max_vertices, sil) for h in order_assignments(g, choices)
    ]


# -- commutation of partial conjugations ----------------------------------------------


def _word(g: DefiningGraph, *parts) -> GroupWord:
    """Product of generators/inverses given as ``(vertex, exponent)`` pairs."""
    return normalize(g, parts)


def case_formula(g: DefiningGraph, a: PCDescriptor, b: PCDescriptor, c0: tuple, d0: tuple):
    """Predicted images of both composites when ``(C, D) != (C0, D0)``.

    Returns a list of expected images for every generator, following the
    three displayed piecewise cases; ``None`` when the pair is the
    non-commuting one.
    """
    v, w = a.v, b.v
    C, D = set(a.component), set(b.component)
    if a.component == c0 and b.component == d0:
        return None
    out = []
    for x in range(len(g)):
        if a.component != c0 and b.component != d0:
            if x in C:
                out.append(_word(g, (v, 1), (x, 1), (v, -1)))
            elif x in D:
                out.append(_word(g, (w, 1), (x, 1), (w, -1)))
            else:
                out.append(generator(g, x))
        elif a.component != c0:  # D = D0, C inside D
            if x in C:
                out.append(_word(g, (w, 1), (v, 1), (x, 1), (v, -1), (w, -1)))
            elif x in D:
                out.append(_word(g, (w, 1), (x, 1), (w, -1)))
            else:
                out.append(generator(g, x))
        else:  # C = C0, D inside C
            if x in D:
                out.append(_word(g, (v, 1), (w, 1), (x, 1), (w, -1), (v, -1)))
            elif x in C:
                out.append(_word(g, (v, 1), (x, 1), (v, -1)))
            else:
                out.append(generator(g, x))
    return out


def lemma_commutation_check(g: DefiningGraph) -> Report:
    """Commutation of partial conjugations against the tilde edge rule, the
    containment of components, and the explicit case formulas."""
    rep = Report(f"partial conjugation commutation on {_graph_label(g)}")
    descs = partial_conjugations(g)
    pcs = {d: pc_automorphism(g, d) for d in descs}
    dist = distance_matrix(g)
    comps = {v: [tuple(sorted(c)) for c in components_outside_star(g, v)] for v in range(len(g))}
    for i, a in enumerate(descs):
        for b in descs[i + 1:]:
            rep.checked += 1
            edge = tilde_edge_rule(dist, a, b)
            if commutes(pcs[a], pcs[b]) != edge:
                rep.violations.append(
                    f"{a.describe(g)} {b.describe(g)}: commute={not edge} but edge rule says {edge}"
                )
    n = len(g)
    for v in range(n):
        for w in range(n):
            if v == w or dist[v][w] < 2:
                continue
            c0 = next(c for c in comps[v] if w in c)
            d0 = next(d for d in comps[w] if v in d)
            for c in comps[v]:
                rep.checked += 1
                if c != c0 and not set(c) <= set(d0):
                    rep.violations.append(
                        f"v={g.names[v]} w={g.names[w]}: component {c} not inside D0"
                    )
            for c in comps[v]:
                for d in comps[w]:
                    a, b = PCDescriptor(v, c), PCDescriptor(w, d)
                    ab = compose(pcs[a], pcs[b])
                    ba = compose(pcs[b], pcs[a])
                    expected = case_formula(g, a, b, c0, d0)
                    rep.checked += 1
                    if expected is None:
                        vv = generator(g, v)
                        want_ab = _word(g, (v, 1), (w, 1), (v, 1), (w, -1), (v, -1))
                        want_ba = _word(g, (w, 1), (v, 1), (w, -1))
                        if apply(ab, vv) != want_ab or apply(ba, vv) != want_ba:
                            rep.violations.append(
                                f"v={g.names[v]} w={g.names[w]}: C0/D0 images differ from vwvw^-1v^-1, wvw^-1"
                            )
                        continue
                    if list(ab.images) != expected or list(ba.images) != expected:
                        rep.violations.append(
                            f"v={g.names[v]} w={g.names[w]} C={c} D={d}: case formula fails"
                        )
    return rep


def _graph_label(g: DefiningGraph) -> str:
    orders = "".join("i" if o is None else str(o) for o in g.orders)
    edges = ",".join(f"{a}{b}" for a, b in sorted(g.edges))
    return f"n={len(g)} orders={orders} edges=[{edges}]"


def remark_disconnected_check(max_vertices: int) -> Report:
    """Three or more components force a SIL; a disconnected SIL-free graph is
    two complete graphs (and conversely)."""
    rep = Report(f"disconnected graphs with <= {max_vertices} vertices")
    for g in atlas_graphs(max_vertices):
        comps = connected_components(g)
        if len(comps) < 2:
            continue
        rep.checked += 1
        sil_free = not find_sils(g)
        two_cliques = len(comps) == 2 and all(g.is_clique(c) for c in comps)
        if len(comps) >= 3 and sil_free:
            rep.violations.append(f"{_graph_label(g)}: {len(comps)} components but no SIL")
        if sil_free != two_cliques:
            rep.violations.append(
                f"{_graph_label(g)}: SIL-free={sil_free} but two-cliques={two_cliques}"
            )
    rep.lines.append(f"checked {rep.checked} disconnected graphs")
    return rep


# -- normal form against the rewriting oracle -------------------------------------------


def oracle_key(g: DefiningGraph, raw: tuple, budget: int) -> tuple:
    """Least minimal-length word in the rewriting closure of ``raw``.

    Two raw words are oracle-equal iff their minimal sets meet, and the
    minimal set of an element is a single shuffle class, so the least member
    identifies the class.
    """
    return min(_minimal(_closure(g, raw, budget)))


@dataclass
class OracleSweep:
    graphs: int = 0
    words: int = 0
    pairs: int = 0
    discrepancies: list[str] = field(default_factory=list)
    complete: bool = True
    elapsed: float = 0.0


def _words_upto(g: DefiningGraph, max_len: int, exponent_bound: int) -> Iterator[tuple]:
    alphabet = syllable_alphabet(g, exponent_bound)
    for n in range(max_len + 1):
        yield from product(alphabet, repeat=n)


def oracle_sweep_graph(
    g: DefiningGraph, max_total: int, exponent_bound: int, deadline: float | None = None
) -> OracleSweep:
    """Check ``normalize(a) == normalize(b)`` iff ``oracle_equal(a, b)`` for all
    raw pairs with ``|a| + |b| <= max_total``.

    Each raw word is classified once by its normal form and once by its oracle
    key; the pair relation is then decided by comparing class labels per
    length, which covers exactly the same pairs as a double loop.
    """
    res = OracleSweep(graphs=1)
    start = time.monotonic()
    # by_len[n] maps normal form -> set of oracle keys, and key -> set of normal forms
    nf_keys: list[dict] = [dict() for _ in range(max_total + 1)]
    key_nfs: list[dict] = [dict() for _ in range(max_total + 1)]
    counts = [0] * (max_total + 1)
    for raw in _words_upto(g, max_total, exponent_bound):
        if deadline is not None and time.monotonic() > deadline:
            res.complete = False
            break
        res.words += 1
        nf = normalize(g, raw).syllables
        key = oracle_key(g, raw, max(len(raw), 1))
        n = len(raw)
        counts[n] += 1
        nf_keys[n].setdefault(nf, set()).add(key)
        key_nfs[n].setdefault(key, set()).add(nf)
    for i in range(max_total + 1):
        for j in range(i, max_total + 1 - i):
            res.pairs += counts[i] * counts[j] if i != j else counts[i] * (counts[i] + 1) // 2
            # a class label seen at both lengths must carry a single label on the other side
            for label, left in (("normal form", nf_keys), ("oracle class", key_nfs)):
                for a, sa in left[i].items():
                    sb = left[j].get(a)
                    if sb is None:
                        continue
                    union = sa | sb
                    if len(union) > 1:
                        res.discrepancies.append(
                            f"{_graph_label(g)}: lengths {i},{j} share a {label} but split on the other side"
                        )
                        break
    res.elapsed = time.monotonic() - start
    return res



def oracle_sweep(
    max_vertices: int,
    choices: Sequence[int | None],
    max_total: int,
    exponent_bound: int,
    time_limit: float | None = None,
) -> OracleSweep:
    """Normal form against the oracle over every graph with at most
    ``max_vertices`` vertices (connected or not) and every order assignment
    up to symmetry.  Stops at ``time_limit`` seconds and marks the sweep
    incomplete."""
    start = time.monotonic()
    deadline = None if time_limit is None else start + time_limit
    total = OracleSweep(graphs=0)
    for base in atlas_graphs(max_vertices):
        for g in order_assignments(base, choices):
            if deadline is not None and time.monotonic() > deadline:
                total.complete = False
                break
            r = oracle_sweep_graph(g, max_total, exponent_bound, deadline)
            total.graphs += 1
            total.words += r.words
            total.pairs += r.pairs
            total.discrepancies += r.discrepancies
            if not r.complete:
                total.complete = False
                break
        if not total.complete:
            break
    total.elapsed = time.monotonic() - start
    return total


def oracle_workload(max_vertices: int, choices: Sequence[int | None], max_total: int, exponent_bound: int) -> int:
    """Number of raw words an oracle sweep has to classify."""
    n_words = 0
    for base in atlas_graphs(max_vertices):
        for g in order_assignments(base, choices):
            a = len(syllable_alphabet(g, exponent_bound))
            n_words += sum(a**k for k in range(max_total + 1))
    return n_words
