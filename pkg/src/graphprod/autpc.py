"""The graph of partial conjugations and the map from its graph product.

``build_tilde`` turns a defining graph into the graph whose vertices are the
partial conjugations ``p_{v,C}``; ``phi`` sends a word over those vertices to
the corresponding composite of partial conjugations.  The ``verify_*``
functions check, at desk scale, that ``phi`` respects the defining relations,
that the inner part is normal, that short words have nontrivial image and
that commutators of partial conjugations are inner exactly when there are no
separating intersections of links.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .aut import (
    Automorphism,
    PCDescriptor,
    aut_commutator,
    aut_power,
    commutes,
    compose,
    identity as identity_aut,
    inner,
    is_identity,
    is_inner,
    partial_conjugations,
    pc_automorphism,
)
from .graph import (
    DefiningGraph,
    GraphError,
    SilWitness,
    distance_matrix,
    find_sils,
    is_connected,
)
from .words import (
    GroupWord,
    _push,
    generator,
    invert,
    lex_normal_form,
    normalize,
    product_of,
    syllable_alphabet,
)


class SilRefusal(ValueError):
    """A theorem-level check was requested on a graph with SILs."""

    def __init__(self, graph: DefiningGraph, witnesses: list[SilWitness]):
        self.witnesses = witnesses
        shown = ", ".join(w.describe(graph) for w in witnesses[:5])
        more = "" if len(witnesses) <= 5 else f" (+{len(witnesses) - 5} more)"
        super().__init__(f"graph has SILs: {shown}{more}")


@dataclass(eq=False)
class TildeGraph:
    base: DefiningGraph
    descriptors: list[PCDescriptor]
    graph: DefiningGraph
    by_vertex: dict[int, list[int]] = field(repr=False)
    _pcs: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.descriptors)

    def index_of(self, d: PCDescriptor) -> int:
        return self.descriptors.index(d)

    def pc(self, i: int, k: int = 1) -> Automorphism:
        """The partial conjugation for tilde vertex ``i`` raised to ``k``."""
        key = (i, k)
        if key not in self._pcs:
            self._pcs[key] = pc_automorphism(self.base, self.descriptors[i], k)
        return self._pcs[key]

    def non_edges(self) -> list[tuple[int, int]]:
        n = len(self.descriptors)
        return [
            (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in self.graph.edges
        ]


def tilde_edge_rule(dist, a: PCDescriptor, b: PCDescriptor) -> bool:
    """Adjacent unless ``d(v,w) >= 2``, ``v`` in ``D`` and ``w`` in ``C``."""
    return not (dist[a.v][b.v] >= 2 and a.v in b.component and b.v in a.component)


def build_tilde(g: DefiningGraph) -> TildeGraph:
    descs = partial_conjugations(g)
    dist = distance_matrix(g)
    edges = frozenset(
        (i, j)
        for i in range(len(descs))
        for j in range(i + 1, len(descs))
        if tilde_edge_rule(dist, descs[i], descs[j])
    )
    names = tuple(d.name(g) for d in descs)
    orders = tuple(g.orders[d.v] for d in descs)
    by_vertex: dict[int, list[int]] = {v: [] for v in range(len(g))}
    for i, d in enumerate(descs):
        by_vertex[d.v].append(i)
    return TildeGraph(g, descs, DefiningGraph(names, orders, edges), by_vertex)


def p_v_word(t: TildeGraph, v: str | int) -> GroupWord:
    """Product of the ``p_{v,C}`` over all components, in component order."""
    vi = t.base.vid(v)
    return normalize(t.graph, [(i, 1) for i in t.by_vertex[vi]])


def phi(t: TildeGraph, x: GroupWord) -> Automorphism:
    """Word ``p1 p2 ... pk`` to ``pi_1 o pi_2 o ... o pi_k``."""
    if x.graph != t.graph:
        raise GraphError("word is not over the tilde graph")
    out = identity_aut(t.base)
    for i, e in x.syllables:
        out = compose(out, t.pc(i, e))
    return out


def _compose_pc(t: TildeGraph, a_images, a_inv, i: int, e: int):
    """Images of ``a o pi_i^e`` from the images of ``a``.

    ``pi^e`` only moves the generators of its component, sending ``x`` to
    ``v^e x v^-e``; so ``a o pi^e`` sends ``x`` to ``a(v)^e a(x) a(v)^-e``.
    """
    d = t.descriptors[i]
    g = t.base
    av = a_images[d.v]
    conj = av.syllables * e if e > 0 else a_inv[d.v].syllables * -e
    conj_inv = a_inv[d.v].syllables * e if e > 0 else av.syllables * -e
    new = list(a_images)
    for x in d.component:
        out: list = []
        for s in conj:
            _push(g, out, *s)
        for s in a_images[x].syllables:
            _push(g, out, *s)
        for s in conj_inv:
            _push(g, out, *s)
        new[x] = GroupWord(g, lex_normal_form(g, out))
    return new


# -- verifications --------------------------------------------------------------


@dataclass
class Report:
    title: str
    lines: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        out = [f"== {self.title}"] + self.lines
        out += [f"FAIL {v}" for v in self.violations]
        out.append("OK" if self.ok else f"FAIL {len(self.violations)}")
        return "\n".join(out)


def _refuse_sils(g: DefiningGraph) -> None:
    sils = find_sils(g)
    if sils:
        raise SilRefusal(g, sils)


def verify_phi_well_defined(t: TildeGraph) -> Report:
    """Edges of the tilde graph must map to commuting partial conjugations,
    and each ``pi`` of finite order ``n`` must satisfy ``pi^n = 1``."""
    rep = Report("phi respects the relations of the tilde graph")
    g = t.graph
    for i, j in sorted(g.edges):
        rep.checked += 1
        if not commutes(t.pc(i), t.pc(j)):
            rep.violations.append(f"edge {g.names[i]} -- {g.names[j]}: images do not commute")
    for i, o in enumerate(g.orders):
        if o is None:
            continue
        rep.checked += 1
        if not is_identity(aut_power(t.pc(i), o)):
            rep.violations.append(f"{g.names[i]}^{o} is not the identity")
    rep.lines.append(f"checked {rep.checked} relations")
    return rep


def verify_normality(t: TildeGraph) -> Report:
    """Conjugating ``p_v`` by a generator ``p_{w,D}`` gives ``p_v`` when
    ``v`` is outside ``D`` and ``p_w p_v p_w^-1`` when ``v`` lies in ``D``.

    Checked both in the graph product of the tilde graph and after ``phi``.
    """
    _refuse_sils(t.base)
    rep = Report("image of v -> p_v is normal")
    tg = t.graph
    base = t.base
    for v in range(len(base)):
        if not t.by_vertex[v]:
            continue  # central vertex: p_v is trivial
        pv = p_v_word(t, v)
        for i, d in enumerate(t.descriptors):
            rep.checked += 1
            x = generator(tg, i)
            lhs = product_of(tg, [x, pv, x ** -1])
            if v in d.component:
                pw = p_v_word(t, d.v)
                rhs = product_of(tg, [pw, pv, pw ** -1])
            else:
                rhs = pv
            label = f"v={base.names[v]}, conjugator {tg.names[i]}"
            if lhs != rhs:
                rep.violations.append(f"{label}: {lhs} != {rhs} in the tilde group")
            elif phi(t, lhs) != phi(t, rhs):
                rep.violations.append(f"{label}: images under phi differ")
    rep.lines.append(f"checked {rep.checked} conjugates")
    return rep


def verify_injectivity_sample(t: TildeGraph, max_len: int = 3, exponent_bound: int = 2) -> Report:
    """Every nontrivial normal form with at most ``max_len`` syllables must
    have nontrivial image under ``phi``.

    Words are grown one syllable at a time, so each image costs a single
    composition with one partial conjugation.
    """
    _refuse_sils(t.base)
    rep = Report(f"phi is injective on words of length <= {max_len}")
    tg, g = t.graph, t.base
    alphabet = syllable_alphabet(tg, exponent_bound)
    gens = [generator(g, v) for v in range(len(g))]
    layer = {(): (gens, gens)}
    for _ in range(max_len):
        nxt = {}
        for word, (imgs, inv) in layer.items():
            n = len(word)
            for i, e in alphabet:
                out = list(word)
                _push(tg, out, i, e)
                if len(out) != n + 1:
                    continue
                nf = lex_normal_form(tg, out)
                if nf in nxt:
                    continue
                new = _compose_pc(t, imgs, inv, i, e)
                new_inv = [invert(w) for w in new] if max_len > n + 1 else None
                nxt[nf] = (new, new_inv)
                rep.checked += 1
                if all(w.syllables == ((v, 1),) for v, w in enumerate(new)):
                    rep.violations.append(
                        f"{GroupWord(tg, nf)} maps to the identity automorphism"
                    )
        layer = nxt
    rep.lines.append(f"checked {rep.checked} nontrivial words (exponent bound {exponent_bound})")
    return rep


@dataclass
class AbelianVerdict:
    verdict: str  # "abelian-consistent", "non-abelian" or "inconclusive"
    witness: tuple[PCDescriptor, PCDescriptor] | None
    sils: list[SilWitness]
    checked: int
    reason: str = ""

    @property
    def consistent(self) -> bool:
        """Verdict agrees with the SIL sweep."""
        if self.verdict == "inconclusive":
            return False
        return (self.verdict == "abelian-consistent") == (not self.sils)

    def describe(self, g: DefiningGraph) -> str:
        if self.witness is None:
            return self.verdict
        a, b = self.witness
        return f"{self.verdict}: [pi_{a.describe(g)}, pi_{b.describe(g)}] is not inner"


def out_pc_abelian_test(g: DefiningGraph, radius: int = 4, exponent_bound: int = 2) -> AbelianVerdict:
    """Test whether every commutator of partial conjugations is inner.

    Pairs built from SIL witnesses are tried first, since those are the
    expected non-inner commutators.
    """
    if not is_connected(g):
        raise GraphError("out_pc_abelian_test needs a connected graph")
    sils = find_sils(g)
    descs = partial_conjugations(g)
    pcs = {d: pc_automorphism(g, d) for d in descs}
    pairs = []
    for s in sils:
        a, b = PCDescriptor(s.v, s.component), PCDescriptor(s.w, s.component)
        if a in pcs and b in pcs:
            pairs.append((a, b))
    pairs += [(a, b) for k, a in enumerate(descs) for b in descs[k + 1:]]
    seen = set()
    checked = 0
    undecided = None
    for a, b in pairs:
        if (a, b) in seen:
            continue
        seen.add((a, b))
        checked += 1
        pa, pb = pcs[a], pcs[b]
        if commutes(pa, pb):
            continue
        res = is_inner(aut_commutator(pa, pb), radius, exponent_bound)
        if res.status == "not_found":
            return AbelianVerdict("non-abelian", (a, b), sils, checked, res.reason)
        if res.status == "inconclusive" and undecided is None:
            undecided = ((a, b), res.reason)
    if undecided is not None:
        return AbelianVerdict("inconclusive", undecided[0], sils, checked, undecided[1])
    return AbelianVerdict("abelian-consistent", None, sils, checked)


def inner_by_vertex_check(t: TildeGraph) -> Report:
    """``phi(p_v)`` is conjugation by ``v``."""
    rep = Report("phi(p_v) is the inner automorphism by v")
    g = t.base
    for v in range(len(g)):
        rep.checked += 1
        if phi(t, p_v_word(t, v)) != inner(g, generator(g, v)):
            rep.violations.append(f"phi(p_{g.names[v]}) is not conjugation by {g.names[v]}")
    return rep


def tilde_equals_base(t: TildeGraph) -> bool:
    """Tilde graph equals the base under ``p_{v,C} -> v`` (one component each)."""
    g = t.base
    if [d.v for d in t.descriptors] != list(range(len(g))):
        return False
    return t.graph.edges == g.edges and t.graph.orders == g.orders

