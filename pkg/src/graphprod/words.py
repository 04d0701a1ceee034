"""Words in a graph product of cyclic groups.

Elements are kept as canonical normal forms.  A raw syllable sequence is first
reduced (each incoming syllable slides left past commuting syllables and merges
with a syllable of its own vertex if it meets one), then the reduced word is
rewritten into the lexicographically least shuffle, comparing syllables by the
declaration order of their vertices.  Two raw sequences represent the same
element exactly when their normal forms coincide.
"""
from __future__ import annotations

import re
from collections import deque
from itertools import product
from typing import Iterable, Iterator, Sequence

from .graph import DefiningGraph, GraphError

Syllable = tuple[int, int]


class WordError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """The rewriting oracle needed words longer than its budget."""


def canonical_exponent(order: int | None, e: int) -> int:
    return e if order is None else e % order


def _push(g: DefiningGraph, out: list[Syllable], v: int, e: int) -> None:
    order = g.orders[v]
    if order is not None:
        e %= order
    if e == 0:
        return
    j = len(out) - 1
    mask = g.adj_mask[v]
    while j >= 0:
        u, f = out[j]
        if u == v:
            ne = f + e
            if order is not None:
                ne %= order
            if ne == 0:
                del out[j]
            else:
                out[j] = (v, ne)
            return
        if not (mask >> u) & 1:
            break
        j -= 1
    out.append((v, e))


def reduce_syllables(g: DefiningGraph, raw: Iterable[Syllable]) -> list[Syllable]:
    """A reduced (not yet canonically shuffled) word for ``raw``."""
    out: list[Syllable] = []
    for v, e in raw:
        _push(g, out, v, e)
    return out


def lex_normal_form(g: DefiningGraph, word: Sequence[Syllable]) -> tuple[Syllable, ...]:
    """Least shuffle of a reduced word under declaration order."""
    rest = list(word)
    out = []
    dep = g.dep_mask
    while rest:
        blocked = 0
        best = -1
        best_v = len(g.names)
        for k, (u, _) in enumerate(rest):
            if not (blocked >> u) & 1 and u < best_v:
                best, best_v = k, u
                if u == 0:
                    break
            blocked |= dep[u]
        out.append(rest.pop(best))
    return tuple(out)


def normal_form(g: DefiningGraph, raw: Iterable[Syllable]) -> tuple[Syllable, ...]:
    return lex_normal_form(g, reduce_syllables(g, raw))


class GroupWord:
    """Element of ``G_Gamma`` in canonical normal form.

    Build with :func:`normalize`; the constructor trusts its input.
    """

    __slots__ = ("graph", "syllables", "_hash")

    def __init__(self, graph: DefiningGraph, syllables: tuple[Syllable, ...]):
        self.graph = graph
        self.syllables = syllables
        self._hash = None

    def __eq__(self, other):
        if not isinstance(other, GroupWord):
            return NotImplemented
        return self.syllables == other.syllables and (
            self.graph is other.graph or self.graph == other.graph
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.syllables)
        return self._hash

    def __len__(self):
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)

    def __bool__(self):
        return True

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return multiply(self, other)

    def __invert__(self) -> "GroupWord":
        return invert(self)

    def __pow__(self, k: int) -> "GroupWord":
        return power(self, k)

    def sort_key(self):
        return (len(self.syllables), self.syllables)

    def __lt__(self, other: "GroupWord"):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return format_word(self.graph, self.syllables)

    def __repr__(self):
        return f"GroupWord({self})"

    def named(self) -> list[tuple[str, int]]:
        return [(self.graph.names[v], e) for v, e in self.syllables]


def identity(g: DefiningGraph) -> GroupWord:
    return GroupWord(g, ())


def generator(g: DefiningGraph, v: str | int, e: int = 1) -> GroupWord:
    return normalize(g, [(v, e)])


def normalize(g: DefiningGraph, raw: Iterable[tuple[str | int, int]]) -> GroupWord:
    """Canonical form of a raw ``(vertex, exponent)`` sequence.

    Vertices may be names or indices; exponents may be any integer.
    """
    ints = [(g.vid(v), int(e)) for v, e in raw]
    return GroupWord(g, normal_form(g, ints))


def _same_graph(a: GroupWord, b: GroupWord) -> None:
    if a.graph is not b.graph and a.graph != b.graph:
        raise GraphError("words live over different graphs")


def multiply(a: GroupWord, b: GroupWord) -> GroupWord:
    _same_graph(a, b)
    if not b.syllables:
        return a
    if not a.syllables:
        return b
    out = list(a.syllables)
    g = a.graph
    for v, e in b.syllables:
        _push(g, out, v, e)
    return GroupWord(g, lex_normal_form(g, out))


def product_of(g: DefiningGraph, words: Iterable[GroupWord]) -> GroupWord:
    out: list[Syllable] = []
    for w in words:
        for v, e in w.syllables:
            _push(g, out, v, e)
    return GroupWord(g, lex_normal_form(g, out))


def inverse_syllables(g: DefiningGraph, syllables: Sequence[Syllable]) -> list[Syllable]:
    out = []
    for v, e in reversed(syllables):
        o = g.orders[v]
        out.append((v, -e if o is None else o - e))
    return out


def invert(a: GroupWord) -> GroupWord:
    g = a.graph
    # the reverse of a reduced word is reduced
    return GroupWord(g, lex_normal_form(g, inverse_syllables(g, a.syllables)))


def power(a: GroupWord, k: int) -> GroupWord:
    if k < 0:
        a, k = invert(a), -k
    g = a.graph
    out: list[Syllable] = []
    for _ in range(k):
        for v, e in a.syllables:
            _push(g, out, v, e)
    return GroupWord(g, lex_normal_form(g, out))


def commutator(a: GroupWord, b: GroupWord) -> GroupWord:
    return product_of(a.graph, [a, b, invert(a), invert(b)])


def is_reduced(g: DefiningGraph, raw: Sequence[tuple[str | int, int]]) -> bool:
    """True when ``raw`` (nonzero canonical exponents) is a reduced word."""
    ints = [(g.vid(v), e) for v, e in raw]
    if any(canonical_exponent(g.orders[v], e) == 0 for v, e in ints):
        return False
    return len(reduce_syllables(g, ints)) == len(ints)


def strip_right(x: GroupWord, vertices: Iterable[int]) -> GroupWord:
    """Shortest element of the coset ``x G_S``.

    Repeatedly deletes a syllable that can be shuffled to the right end and
    whose vertex lies in ``S``.
    """
    g = x.graph
    smask = 0
    for v in vertices:
        smask |= 1 << v
    rest = list(x.syllables)
    changed = True
    while changed and rest:
        changed = False
        later = 0
        for k in range(len(rest) - 1, -1, -1):
            u = rest[k][0]
            if (smask >> u) & 1 and not (later >> u) & 1:
                del rest[k]
                changed = True
                break
            later |= g.dep_mask[u]
    return GroupWord(g, lex_normal_form(g, rest))


def in_subgroup(x: GroupWord, vertices: Iterable[int]) -> bool:
    vs = set(vertices)
    return all(v in vs for v, _ in x.syllables)


# -- text format --------------------------------------------------------------

_TOKEN_RE = re.compile(r"([A-Za-z0-9_.]+)(?:\^(-?\d+))?\Z")


def parse_word(g: DefiningGraph, text: str) -> GroupWord:
    """Parse ``v1 v2^-1 v1^3``.  ``1`` or an empty string is the identity."""
    return normalize(g, parse_raw(g, text))


def parse_raw(g: DefiningGraph, text: str) -> list[tuple[int, int]]:
    raw = []
    tokens = text.split()
    if tokens == ["1"] and "1" not in g.index:
        return []
    for tok in tokens:
        m = _TOKEN_RE.match(tok)
        if not m:
            raise WordError(f"bad word token {tok!r}")
        name, exp = m.group(1), m.group(2)
        if name not in g.index:
            raise WordError(f"unknown vertex {name!r}")
        raw.append((g.index[name], int(exp) if exp is not None else 1))
    return raw


def format_word(g: DefiningGraph, syllables: Sequence[Syllable]) -> str:
    if not syllables:
        return "1"
    return " ".join(
        g.names[v] if e == 1 else f"{g.names[v]}^{e}" for v, e in syllables
    )


# -- enumeration --------------------------------------------------------------


def syllable_alphabet(
    g: DefiningGraph, exponent_bound: int, vertices: Iterable[int] | None = None
) -> list[Syllable]:
    """All single syllables; exponents of infinite-order vertices lie in
    ``[-E, E] \\ {0}``."""
    out = []
    for v in sorted(range(len(g)) if vertices is None else vertices):
        o = g.orders[v]
        if o is None:
            out += [(v, e) for e in range(-exponent_bound, exponent_bound + 1) if e]
        else:
            out += [(v, e) for e in range(1, o)]
    return out


def ball(
    g: DefiningGraph,
    radius: int,
    exponent_bound: int = 2,
    vertices: Iterable[int] | None = None,
) -> list[GroupWord]:
    """All elements of syllable length <= ``radius`` (in sorted order).

    Built breadth-first by right multiplication by single syllables; the
    optional ``vertices`` restricts to the special subgroup they generate.
    """
    alphabet = syllable_alphabet(g, exponent_bound, vertices)
    seen = {()}
    layer = [()]
    for _ in range(radius):
        nxt = set()
        for w in layer:
            n = len(w)
            for s in alphabet:
                out = list(w)
                _push(g, out, *s)
                if len(out) == n + 1:
                    nf = lex_normal_form(g, out)
                    if nf not in seen:
                        seen.add(nf)
                        nxt.add(nf)
        layer = sorted(nxt)
    words = [GroupWord(g, s) for s in seen]
    words.sort(key=GroupWord.sort_key)
    return words


def iter_words(g: DefiningGraph, length: int, exponent_bound: int) -> Iterator[list[Syllable]]:
    """Every raw syllable sequence of exactly ``length`` syllables."""
    alphabet = syllable_alphabet(g, exponent_bound)
    for combo in product(alphabet, repeat=length):
        yield list(combo)


# -- independent rewriting oracle ---------------------------------------------


def _merge_adjacent(g: DefiningGraph, word: tuple[Syllable, ...]) -> tuple[Syllable, ...]:
    out: list[Syllable] = []
    for v, e in word:
        e = canonical_exponent(g.orders[v], e)
        if e == 0:
            continue
        if out and out[-1][0] == v:
            ne = canonical_exponent(g.orders[v], out[-1][1] + e)
            out.pop()
            if ne:
                out.append((v, ne))
        else:
            out.append((v, e))
    return tuple(out)


def _moves(g: DefiningGraph, w: tuple[Syllable, ...]) -> Iterator[tuple[Syllable, ...]]:
    n = len(w)
    for k in range(n):
        v, e = w[k]
        ce = canonical_exponent(g.orders[v], e)
        if ce == 0 or ce != e:
            # delete an exponent-zero syllable or reduce mod the order
            yield w[:k] + (((v, ce),) if ce else ()) + w[k + 1:]
        if k + 1 < n:
            u, f = w[k + 1]
            if u == v:
                yield w[:k] + ((v, e + f),) + w[k + 2:]
            elif g.commute(u, v):
                yield w[:k] + (w[k + 1], w[k]) + w[k + 2:]


def oracle_equal(
    g: DefiningGraph,
    raw1: Sequence[tuple[str | int, int]],
    raw2: Sequence[tuple[str | int, int]],
    budget: int = 6,
) -> bool:
    """Decide equality by exhausting elementary rewriting moves.

    Starting from both words, apply every swap of adjacent commuting
    syllables, merge of adjacent same-vertex syllables and deletion of
    exponent-zero syllables, until nothing new appears.  The moves never
    lengthen a word, so the search is finite; the two words are equal iff
    their move-closures share a word of minimal length.  Independent of the
    normal-form code.  Raises :class:`BudgetExceeded` when an input is longer
    than ``budget`` after merging.
    """
    w1 = tuple((g.vid(v), e) for v, e in raw1)
    w2 = tuple((g.vid(v), e) for v, e in raw2)
    for w in (w1, w2):
        if len(_merge_adjacent(g, w)) > budget:
            raise BudgetExceeded(f"word of length {len(w)} exceeds budget {budget}")
    c1 = _closure(g, w1, budget)
    c2 = _closure(g, w2, budget)
    m1 = _minimal(c1)
    m2 = _minimal(c2)
    return bool(m1 & m2)


def _closure(g: DefiningGraph, start: tuple[Syllable, ...], budget: int) -> set:
    start = _merge_adjacent(g, start) if len(start) > budget else start
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for x in _moves(g, w):
            if x not in seen:
                if len(x) > budget:
                    raise BudgetExceeded("intermediate word exceeds budget")
                seen.add(x)
                queue.append(x)
    return seen


def _minimal(words: set) -> set:
    # only words whose exponents are already canonical and nonzero
    m = min(len(w) for w in words)
    return {w for w in words if len(w) == m}
