"""Bound quiver algebras Λ = F_p Q / I with an explicit path basis.

Path words are tuples of arrow names read in application order: ``("a", "b")``
means "a first, then b" and needs ``target(a) == source(b)``.  The algebra
product follows composition of maps, so ``x · y`` is the path "y then x"; with
this convention left Λ-modules are exactly representations of ``Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .linalg import PrimeField

Word = tuple[str, ...]


class AlgebraError(ValueError):
    """Invalid algebra input."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("vertex labels must be unique")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("arrow names must be unique")
        for a in self.arrows:
            for end in (a.source, a.target):
                if end not in self.vertices:
                    raise AlgebraError(f"arrow {a.name!r} uses undeclared vertex {end!r}")

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_by_name(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))

    def word_ends(self, word: Word) -> tuple[str, str]:
        """Source and target of a nonempty composable word."""
        try:
            arrows = [self.arrow_by_name[n] for n in word]
        except KeyError as exc:
            raise AlgebraError(f"unknown arrow {exc.args[0]!r}") from None
        for x, y in zip(arrows, arrows[1:]):
            if x.target != y.source:
                raise AlgebraError(f"word {'*'.join(word)} is not composable at {x.name}->{y.name}")
        return arrows[0].source, arrows[-1].target


@dataclass(frozen=True)
class Relation:
    """A linear combination of path words, ``terms = ((coeff, word), ...)``."""

    terms: tuple[tuple[int, Word], ...]

    def reversed(self) -> "Relation":
        return Relation(tuple((c, tuple(reversed(w))) for c, w in self.terms))


@dataclass(frozen=True)
class RelationSet:
    relations: tuple[Relation, ...]
    nilpotency_bound: int


def _check_relations(q: Quiver, rs: RelationSet) -> None:
    if rs.nilpotency_bound < 2:
        raise AlgebraError("nilpotency_bound must be at least 2")
    for k, rel in enumerate(rs.relations):
        if not rel.terms:
            raise AlgebraError(f"relation {k} is empty")
        ends = set()
        for coeff, word in rel.terms:
            if len(word) < 2:
                raise AlgebraError(
                    f"relation {k}: term {'*'.join(word) or '<vertex>'} has length < 2 (not admissible)"
                )
            ends.add(q.word_ends(word))
        if len(ends) != 1:
            raise AlgebraError(f"relation {k}: terms do not share source and target")


def _paths_by_length(q: Quiver, max_len: int) -> list[list[Word]]:
    """All nonempty words of length 1..max_len grouped by length, deg-lex ordered."""
    out: list[list[Word]] = [[]]
    if max_len < 1:
        return out
    out.append([(a.name,) for a in q.arrows])
    for _ in range(2, max_len + 1):
        nxt = []
        for w in out[-1]:
            last = q.arrow_by_name[w[-1]]
            for a in q.arrows:
                if a.source == last.target:
                    nxt.append(w + (a.name,))
        out.append(nxt)
    return out


class AlgebraTable:
    """Path basis and structure constants of a finite-dimensional bound quiver algebra.

    ``mult[i, j]`` holds the coordinates of ``basis[i] · basis[j]`` (that is,
    the path ``basis[j]`` followed by ``basis[i]``).
    """

    def __init__(self, field: PrimeField, quiver: Quiver, relation_set: RelationSet,
                 words: Sequence[Word], sources: Sequence[int], targets: Sequence[int],
                 mult: np.ndarray):
        self.field = field
        self.quiver = quiver
        self.relation_set = relation_set
        self.words = tuple(tuple(w) for w in words)
        self.sources = tuple(int(s) for s in sources)
        self.targets = tuple(int(t) for t in targets)
        mult = np.asarray(mult, dtype=np.int64)
        mult.setflags(write=False)
        self.mult = mult
        self._opposite: Optional[AlgebraTable] = None
        self._is_opposite = False

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return len(self.words)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    @property
    def relations(self) -> tuple[Relation, ...]:
        return self.relation_set.relations

    @property
    def nilpotency_bound(self) -> int:
        return self.relation_set.nilpotency_bound

    @cached_property
    def labels(self) -> tuple[str, ...]:
        return tuple("*".join(w) if w else f"e_{self.vertices[s]}"
                     for w, s in zip(self.words, self.sources))

    @cached_property
    def _index(self) -> dict[tuple[int, Word], int]:
        return {(s if not w else -1, w): i for i, (w, s) in enumerate(zip(self.words, self.sources))}

    def vertex(self, v: str) -> int:
        try:
            return self.quiver.vertex_index[v]
        except KeyError:
            raise AlgebraError(f"unknown vertex {v!r}") from None

    def idempotent(self, v: str) -> int:
        return self._index[(self.vertex(v), ())]

    def basis_index(self, word: Word) -> Optional[int]:
        """Index of a nonempty word when it is itself a basis element."""
        return self._index.get((-1, tuple(word)))

    def path_basis(self, source: str, target: str) -> list[int]:
        """Basis indices of the classes of paths from ``source`` to ``target``."""
        s, t = self.vertex(source), self.vertex(target)
        return [i for i in range(self.dim) if self.sources[i] == s and self.targets[i] == t]

    def path_basis_idx(self, s: int, t: int) -> list[int]:
        return self._blocks.get((s, t), [])

    @cached_property
    def _blocks(self) -> dict[tuple[int, int], list[int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for i in range(self.dim):
            out.setdefault((self.sources[i], self.targets[i]), []).append(i)
        return out

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Product of two elements given as coordinate vectors."""
        d = self.dim
        xm = self.field.matmul(np.asarray(x).reshape(1, d), self.mult.reshape(d, d * d))
        return self.field.matmul(np.asarray(y).reshape(1, d), xm.reshape(d, d)).ravel()

    @property
    def is_opposite(self) -> bool:
        """True for tables produced by ``opposite_algebra`` from a non-opposite one."""
        return self._is_opposite

    @cached_property
    def signature(self) -> tuple:
        return (self.p, self.quiver, self.words, self.sources, self.targets, self.mult.tobytes())

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, AlgebraTable):
            return NotImplemented
        return self.signature == other.signature

    @cached_property
    def _hash(self) -> int:
        return hash(self.signature)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"AlgebraTable(dim={self.dim}, vertices={list(self.vertices)}, p={self.p})"


def build_algebra(field: PrimeField, quiver: Quiver, relation_set: RelationSet) -> AlgebraTable:
    """Compute the path basis and multiplication table of F_p Q / I.

    Paths of length at least ``nilpotency_bound`` are set to zero.  When all
    relations are homogeneous the ideal is saturated degree by degree
    (``I_l = arrows·I_{l-1} + I_{l-1}·arrows + relations of length l``) and
    the enumeration stops at the first degree with no surviving path.
    Otherwise the closure is taken in the whole truncated path space.  In
    every degree the surviving basis consists of the paths that are not
    leading terms of the reduced ideal, leading meaning largest in the
    length-then-lexicographic order.
    """
    _check_relations(quiver, relation_set)
    p = field.p
    N = relation_set.nilpotency_bound
    rels = [{w: c % p for c, w in rel.terms} for rel in relation_set.relations]
    homogeneous = all(len({len(w) for w in r}) == 1 for r in rels)

    # normal form of every word of length < cutoff, as {standard word: coeff}
    normal: dict[Word, dict[Word, int]] = {}
    arrow_pos = {a.name: i for i, a in enumerate(quiver.arrows)}

    def deglex(w: Word):
        return (len(w), tuple(arrow_pos[x] for x in w))

    standard_by_len: list[list[Word]] = [[]]

    def reduce_space(words: list[Word], gens: list[dict[Word, int]]):
        """Row-reduce ``gens`` over ``words`` with the largest word first."""
        order = list(reversed(words))
        col = {w: i for i, w in enumerate(order)}
        if gens:
            mat = np.zeros((len(gens), len(order)), dtype=np.int64)
            for r, g in enumerate(gens):
                for w, c in g.items():
                    mat[r, col[w]] = (mat[r, col[w]] + c) % p
            red, pivots, rank = field.rref(mat)
        else:
            red, pivots, rank = np.zeros((0, len(order)), dtype=np.int64), [], 0
        pivset = set(pivots)
        std = [order[j] for j in range(len(order)) if j not in pivset]
        rows = {}
        for i, pc in enumerate(pivots):
            rows[order[pc]] = {order[j]: int(red[i, j]) for j in np.nonzero(red[i])[0] if j != pc}
        for w in words:
            if w in rows:
                normal[w] = {u: (-c) % p for u, c in rows[w].items()}
            else:
                normal[w] = {w: 1}
        ideal_rows = [{order[j]: int(red[i, j]) for j in np.nonzero(red[i])[0]} for i in range(rank)]
        return sorted(std, key=deglex), ideal_rows

    def times_arrows(rows: list[dict[Word, int]], cutoff: int) -> list[dict[Word, int]]:
        out = []
        for r in rows:
            some = next(iter(r))
            s, t = quiver.word_ends(some)
            for a in quiver.arrows:
                if a.source == t:
                    g = {w + (a.name,): c for w, c in r.items() if len(w) + 1 < cutoff}
                    if g:
                        out.append(g)
                if a.target == s:
                    g = {(a.name,) + w: c for w, c in r.items() if len(w) + 1 < cutoff}
                    if g:
                        out.append(g)
        return out

    if homogeneous:
        cutoff = N
        arrows1 = [(a.name,) for a in quiver.arrows]
        for w in arrows1:
            normal[w] = {w: 1}
        standard_by_len.append(arrows1)
        ideal_prev: list[dict[Word, int]] = []
        for ell in range(2, N):
            gens = times_arrows(ideal_prev, N) + [r for r in rels if len(next(iter(r))) == ell]
            # every length-ell path either extends a standard path or occurs in gens
            cand = set()
            for w in standard_by_len[-1]:
                last = quiver.arrow_by_name[w[-1]]
                cand.update(w + (a.name,) for a in quiver.arrows if a.source == last.target)
            for g in gens:
                cand.update(g)
            std, ideal_prev = reduce_space(sorted(cand, key=deglex), gens)
            standard_by_len.append(std)
            if not std:
                cutoff = ell
                break
    else:
        paths = _paths_by_length(quiver, N - 1)
        cutoff = N
        all_words = [w for ell in range(1, N) for w in paths[ell]]
        gens = [dict(r) for r in rels]
        rank = -1
        while True:
            std, rows = reduce_space(all_words, gens)
            if len(rows) == rank:
                break
            rank = len(rows)
            gens = rows + times_arrows(rows, N)
        standard_by_len = [[]] + [[w for w in std if len(w) == ell] for ell in range(1, N)]

    words: list[Word] = []
    sources: list[int] = []
    targets: list[int] = []
    vidx = quiver.vertex_index
    for i, v in enumerate(quiver.vertices):
        words.append(())
        sources.append(i)
        targets.append(i)
    for ell in range(1, len(standard_by_len)):
        for w in standard_by_len[ell]:
            s, t = quiver.word_ends(w)
            words.append(w)
            sources.append(vidx[s])
            targets.append(vidx[t])
    index = {w: i for i, w in enumerate(words) if w}
    d = len(words)

    def word_vector(w: Word) -> np.ndarray:
        vec = np.zeros(d, dtype=np.int64)
        if len(w) >= cutoff:
            return vec
        for u, c in normal[w].items():
            vec[index[u]] = (vec[index[u]] + c) % p
        return vec

    mult = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            # basis[i] · basis[j] is "basis[j] then basis[i]"
            if targets[j] != sources[i]:
                continue
            wi, wj = words[i], words[j]
            if not wi:
                mult[i, j, j] = 1
            elif not wj:
                mult[i, j, i] = 1
            else:
                mult[i, j] = word_vector(wj + wi)
    return AlgebraTable(field, quiver, relation_set, words, sources, targets, mult)


def opposite_algebra(a: AlgebraTable) -> AlgebraTable:
    """Λ^op: arrows reversed, words reversed, ``mult_op[i, j] = mult[j, i]``.

    Basis indices are shared with ``a``, and taking the opposite twice returns
    the original table object.
    """
    if a._opposite is not None:
        return a._opposite
    rs = RelationSet(tuple(r.reversed() for r in a.relations), a.nilpotency_bound)
    op = AlgebraTable(
        a.field,
        a.quiver.opposite(),
        rs,
        [tuple(reversed(w)) for w in a.words],
        a.targets,
        a.sources,
        np.ascontiguousarray(np.transpose(a.mult, (1, 0, 2))),
    )
    op._opposite = a
    op._is_opposite = not a._is_opposite
    a._opposite = op
    return op


def quiver_from_lists(vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]]) -> Quiver:
    return Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))


def make_algebra(prime: int, vertices, arrows, relations=(), nilpotency_bound: int = 12) -> AlgebraTable:
    """Convenience constructor.

    ``relations`` is a list of relations, each a list of ``(coeff, word)``
    pairs where ``word`` is a sequence of arrow names or a ``"a*b"`` string.
    """
    def as_word(w) -> Word:
        return tuple(w.split("*")) if isinstance(w, str) else tuple(w)

    rs = RelationSet(
        tuple(Relation(tuple((int(c), as_word(w)) for c, w in rel)) for rel in relations),
        nilpotency_bound,
    )
    return build_algebra(PrimeField(prime), quiver_from_lists(vertices, arrows), rs)
