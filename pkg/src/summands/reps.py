"""Finite-dimensional representations of a bound quiver and their morphisms.

This is the abelian category everything else lives in: Hom spaces,
kernels, images, cokernels, direct sums, the lattice of subobjects and
pushouts.  All objects are immutable; every constructor validates its
output (relations for ``Rep``, intertwining for ``RepMap``).
"""

from __future__ import annotations

from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .algebra import AlgebraError, AlgebraTable, Word
from .linalg import PrimeField, block_diag, quotient


class RepError(ValueError):
    """A module or morphism violates its defining conditions."""


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m, dtype=np.int64)
    m.setflags(write=False)
    return m


class Rep:
    """A representation: a vector space per vertex and a matrix per arrow.

    ``mats[k]`` is the matrix of arrow ``k`` with shape
    ``(dims[target], dims[source])``.
    """

    def __init__(self, algebra: AlgebraTable, dims: Sequence[int],
                 mats: Sequence[np.ndarray], check: bool = True):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        self.mats = tuple(_frozen(np.asarray(m, dtype=np.int64).reshape(
            self.dims[self._t(k)], self.dims[self._s(k)])) for k, m in enumerate(mats))
        if check:
            self.validate()

    def _s(self, k: int) -> int:
        return self.algebra.quiver.vertex_index[self.algebra.arrows[k].source]

    def _t(self, k: int) -> int:
        return self.algebra.quiver.vertex_index[self.algebra.arrows[k].target]

    @property
    def field(self) -> PrimeField:
        return self.algebra.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def arrow(self, name: str) -> np.ndarray:
        for k, a in enumerate(self.algebra.arrows):
            if a.name == name:
                return self.mats[k]
        raise AlgebraError(f"unknown arrow {name!r}")

    @cached_property
    def _arrow_pos(self) -> dict[str, int]:
        return {a.name: k for k, a in enumerate(self.algebra.arrows)}

    def action(self, word: Word, source: Optional[int] = None) -> np.ndarray:
        """Matrix by which a path acts; an empty word needs its vertex."""
        if not word:
            return self.field.eye(self.dims[source])
        out = self.mats[self._arrow_pos[word[0]]]
        for name in word[1:]:
            out = self.field.matmul(self.mats[self._arrow_pos[name]], out)
        return out

    def basis_action(self, i: int) -> np.ndarray:
        """Matrix of basis element ``i`` of the algebra, from its source to its target space."""
        return self._basis_actions[i]

    @cached_property
    def _basis_actions(self) -> tuple[np.ndarray, ...]:
        alg = self.algebra
        return tuple(self.action(w, s) for w, s in zip(alg.words, alg.sources))

    def validate(self) -> None:
        alg = self.algebra
        p = alg.p
        if len(self.dims) != len(alg.vertices):
            raise RepError(f"expected {len(alg.vertices)} vertex dimensions, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise RepError("dimensions must be non-negative")
        if len(self.mats) != len(alg.arrows):
            raise RepError(f"expected {len(alg.arrows)} arrow matrices, got {len(self.mats)}")
        for k, m in enumerate(self.mats):
            if m.size and (m.min() < 0 or m.max() >= p):
                raise RepError(f"arrow {alg.arrows[k].name}: entries not reduced mod {p}")
        for k, rel in enumerate(alg.relations):
            (c0, w0), = rel.terms[:1]
            s, t = alg.quiver.word_ends(w0)
            acc = np.zeros((self.dims[alg.vertex(t)], self.dims[alg.vertex(s)]), dtype=np.int64)
            for c, w in rel.terms:
                acc = (acc + c * self.action(w)) % p
            if acc.any():
                text = " + ".join(f"{c}*{'*'.join(w)}" for c, w in rel.terms)
                raise RepError(f"relation {k} ({text}) does not vanish on the module")
        # paths of length >= nilpotency_bound act as zero
        level = [self.field.eye(d) for d in self.dims]
        for _ in range(alg.nilpotency_bound):
            nxt = [np.zeros((d, 0), dtype=np.int64) for d in self.dims]
            for k in range(len(alg.arrows)):
                s, t = self._s(k), self._t(k)
                if level[s].shape[1]:
                    nxt[t] = np.hstack([nxt[t], self.field.matmul(self.mats[k], level[s])])
            level = [self.field.column_basis(x) for x in nxt]
            if not any(x.shape[1] for x in level):
                break
        if any(x.shape[1] for x in level):
            raise RepError(f"paths of length {alg.nilpotency_bound} do not act as zero")

    @cached_property
    def key(self) -> tuple:
        return (self.algebra.signature, self.dims, tuple(m.tobytes() for m in self.mats))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return self is other or self.key == other.key

    @cached_property
    def _hash(self) -> int:
        return hash(self.key)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        dims = {v: d for v, d in zip(self.algebra.vertices, self.dims)}
        return f"Rep(dims={dims})"


class RepMap:
    """A morphism of representations given by one matrix per vertex."""

    def __init__(self, source: Rep, target: Rep, blocks: Sequence[np.ndarray], check: bool = True):
        if source.algebra != target.algebra:
            raise RepError("source and target live over different algebras")
        self.source = source
        self.target = target
        self.blocks = tuple(_frozen(np.asarray(b, dtype=np.int64).reshape(target.dims[v], source.dims[v]))
                            for v, b in enumerate(blocks))
        if check:
            self.validate()

    @property
    def field(self) -> PrimeField:
        return self.source.field

    @property
    def algebra(self) -> AlgebraTable:
        return self.source.algebra

    def validate(self) -> None:
        f = self.field
        if len(self.blocks) != len(self.source.dims):
            raise RepError("wrong number of vertex blocks")
        for v, b in enumerate(self.blocks):
            if b.size and (b.min() < 0 or b.max() >= f.p):
                raise RepError(f"vertex {self.algebra.vertices[v]}: entries not reduced mod {f.p}")
        for k, a in enumerate(self.algebra.arrows):
            s, t = self.source._s(k), self.source._t(k)
            lhs = f.matmul(self.blocks[t], self.source.mats[k])
            rhs = f.matmul(self.target.mats[k], self.blocks[s])
            if not np.array_equal(lhs, rhs):
                raise RepError(f"map does not commute with arrow {a.name}")

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks]) if self.blocks else np.zeros(0, np.int64)

    @classmethod
    def from_vector(cls, source: Rep, target: Rep, vec: np.ndarray, check: bool = False) -> "RepMap":
        blocks = []
        pos = 0
        for v in range(len(source.dims)):
            n = target.dims[v] * source.dims[v]
            blocks.append(np.asarray(vec[pos:pos + n]).reshape(target.dims[v], source.dims[v]))
            pos += n
        return cls(source, target, blocks, check=check)

    def is_endo(self) -> bool:
        return self.source == self.target

    def __matmul__(self, other: "RepMap") -> "RepMap":
        """Composition: ``(g @ f)`` is ``g ∘ f``."""
        if other.target != self.source:
            raise RepError("composition of non-composable maps")
        f = self.field
        return RepMap(other.source, self.target,
                      [f.matmul(g, h) for g, h in zip(self.blocks, other.blocks)], check=False)

    def _same_frame(self, other: "RepMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise RepError("maps have different source or target")

    def __add__(self, other: "RepMap") -> "RepMap":
        self._same_frame(other)
        p = self.field.p
        return RepMap(self.source, self.target, [(x + y) % p for x, y in zip(self.blocks, other.blocks)], check=False)

    def __sub__(self, other: "RepMap") -> "RepMap":
        self._same_frame(other)
        p = self.field.p
        return RepMap(self.source, self.target, [(x - y) % p for x, y in zip(self.blocks, other.blocks)], check=False)

    def __neg__(self) -> "RepMap":
        p = self.field.p
        return RepMap(self.source, self.target, [(-x) % p for x in self.blocks], check=False)

    def __rmul__(self, c: int) -> "RepMap":
        p = self.field.p
        return RepMap(self.source, self.target, [(int(c) % p) * x % p for x in self.blocks], check=False)

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(np.array_equal(x, y) for x, y in zip(self.blocks, other.blocks)))

    @cached_property
    def _hash(self) -> int:
        return hash((self.source, self.target, tuple(b.tobytes() for b in self.blocks)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"RepMap({self.source!r} -> {self.target!r})"


# -- basic objects ------------------------------------------------------

def zero_rep(algebra: AlgebraTable) -> Rep:
    n = len(algebra.vertices)
    return Rep(algebra, [0] * n, [np.zeros((0, 0), np.int64) for _ in algebra.arrows])


def simple(algebra: AlgebraTable, v: str) -> Rep:
    i = algebra.vertex(v)
    dims = [1 if j == i else 0 for j in range(len(algebra.vertices))]
    return Rep(algebra, dims, [np.zeros((dims[algebra.vertex(a.target)], dims[algebra.vertex(a.source)]),
                                        np.int64) for a in algebra.arrows])


def identity(m: Rep) -> RepMap:
    return RepMap(m, m, [m.field.eye(d) for d in m.dims], check=False)


def zero_map(m: Rep, n: Rep) -> RepMap:
    return RepMap(m, n, [np.zeros((n.dims[v], m.dims[v]), np.int64) for v in range(len(m.dims))], check=False)


def power(f: RepMap, n: int) -> RepMap:
    """``f`` composed with itself ``n`` times (binary exponentiation)."""
    if not f.is_endo():
        raise RepError("power of a non-endomorphism")
    result = identity(f.source)
    base = f
    while n > 0:
        if n & 1:
            result = base @ result
        n >>= 1
        if n:
            base = base @ base
    return result


# -- Hom spaces -----------------------------------------------------------

class HomSpace:
    """Hom(M, N) as the null space of the intertwining system.

    ``basis`` holds vectorised maps as columns (canonical kernel basis);
    coordinates of a map are its entries at the ``free`` positions.
    """

    def __init__(self, m: Rep, n: Rep):
        if m.algebra != n.algebra:
            raise AlgebraError("Hom between modules over different algebras")
        self.m, self.n = m, n
        f = m.field
        alg = m.algebra
        offsets = [0]
        for v in range(len(m.dims)):
            offsets.append(offsets[-1] + n.dims[v] * m.dims[v])
        self.offsets = offsets
        nvar = offsets[-1]
        rows = []
        for k in range(len(alg.arrows)):
            s, t = m._s(k), m._t(k)
            blk = np.zeros((n.dims[t] * m.dims[s], nvar), dtype=np.int64)
            if blk.shape[0] == 0:
                continue
            # X_t M_a - N_a X_s, vectorised row-major
            blk[:, offsets[t]:offsets[t + 1]] = f.kron(f.eye(n.dims[t]), m.mats[k].T)
            blk[:, offsets[s]:offsets[s + 1]] = (blk[:, offsets[s]:offsets[s + 1]]
                                                 - f.kron(n.mats[k], f.eye(m.dims[s]))) % f.p
            rows.append(blk)
        system = np.vstack(rows) if rows else np.zeros((0, nvar), dtype=np.int64)
        self.basis, self.free = f.kernel_basis(system, return_free=True)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def map(self, coords: np.ndarray) -> RepMap:
        vec = self.m.field.matmul(self.basis, np.asarray(coords, dtype=np.int64).reshape(-1, 1)).ravel()
        return RepMap.from_vector(self.m, self.n, vec)

    def maps(self) -> list[RepMap]:
        return [RepMap.from_vector(self.m, self.n, self.basis[:, j]) for j in range(self.dim)]

    def coords(self, f: RepMap) -> np.ndarray:
        return f.vector[self.free]

    def coords_of_vectors(self, vecs: np.ndarray) -> np.ndarray:
        """Coordinates of vectorised maps given as columns."""
        return vecs[self.free]


@lru_cache(maxsize=4096)
def hom_space(m: Rep, n: Rep) -> HomSpace:
    return HomSpace(m, n)


def hom_basis(m: Rep, n: Rep) -> list[RepMap]:
    """Canonical basis of Hom(M, N)."""
    return hom_space(m, n).maps()


def random_hom(m: Rep, n: Rep, rng: np.random.Generator) -> RepMap:
    h = hom_space(m, n)
    return h.map(rng.integers(0, m.field.p, size=h.dim))


# -- subobjects ---------------------------------------------------------

class SubRep:
    """An arrow-stable subspace per vertex, held as canonical column bases."""

    def __init__(self, ambient: Rep, bases: Sequence[np.ndarray], canonical: bool = False):
        f = ambient.field
        self.ambient = ambient
        if canonical:
            self.bases = tuple(_frozen(b) for b in bases)
        else:
            self.bases = tuple(_frozen(f.column_basis(np.asarray(b, dtype=np.int64))) for b in bases)
        for k, a in enumerate(ambient.algebra.arrows):
            s, t = ambient._s(k), ambient._t(k)
            img = f.matmul(ambient.mats[k], self.bases[s])
            if img.shape[1] and f.solve(self.bases[t], img) is None:
                raise RepError(f"subspace is not stable under arrow {a.name}")

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.shape[1] for b in self.bases)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @cached_property
    def rep(self) -> Rep:
        f = self.ambient.field
        mats = []
        for k in range(len(self.ambient.algebra.arrows)):
            s, t = self.ambient._s(k), self.ambient._t(k)
            img = f.matmul(self.ambient.mats[k], self.bases[s])
            tb = self.bases[t]
            if tb.shape[1] == 0 or img.shape[1] == 0:
                mats.append(np.zeros((tb.shape[1], self.bases[s].shape[1]), np.int64))
            else:
                mats.append(f.solve(tb, img))
        return Rep(self.ambient.algebra, self.dims, mats)

    @cached_property
    def inclusion(self) -> RepMap:
        return RepMap(self.rep, self.ambient, self.bases)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubRep):
            return NotImplemented
        return self.ambient == other.ambient and all(np.array_equal(x, y) for x, y in zip(self.bases, other.bases))

    def __hash__(self) -> int:
        return hash((self.ambient, tuple(b.tobytes() for b in self.bases)))

    def __le__(self, other: "SubRep") -> bool:
        f = self.ambient.field
        return all(x.shape[1] == 0 or (y.shape[1] and f.solve(y, x) is not None)
                   for x, y in zip(self.bases, other.bases))

    def __repr__(self) -> str:
        return f"SubRep(dims={self.dims})"


def sub_zero(m: Rep) -> SubRep:
    return SubRep(m, [np.zeros((d, 0), np.int64) for d in m.dims], canonical=True)


def sub_whole(m: Rep) -> SubRep:
    return SubRep(m, [m.field.eye(d) for d in m.dims], canonical=True)


def _check_same_ambient(s: SubRep, t: SubRep) -> None:
    if s.ambient != t.ambient:
        raise RepError("subobjects of different modules")


def sub_intersect(s: SubRep, t: SubRep) -> SubRep:
    _check_same_ambient(s, t)
    f = s.ambient.field
    return SubRep(s.ambient, [f.intersect(x, y) for x, y in zip(s.bases, t.bases)], canonical=True)


def sub_add(s: SubRep, t: SubRep) -> SubRep:
    _check_same_ambient(s, t)
    f = s.ambient.field
    return SubRep(s.ambient, [f.column_basis(np.hstack([x, y])) for x, y in zip(s.bases, t.bases)], canonical=True)


def generated_sub(m: Rep, generators: Mapping[int, np.ndarray]) -> SubRep:
    """Smallest submodule containing the given columns (keyed by vertex index)."""
    f = m.field
    spans = [f.column_basis(np.asarray(generators.get(v, np.zeros((d, 0))), dtype=np.int64))
             for v, d in enumerate(m.dims)]
    changed = True
    while changed:
        changed = False
        for k in range(len(m.algebra.arrows)):
            s, t = m._s(k), m._t(k)
            if not spans[s].shape[1]:
                continue
            new = f.column_basis(np.hstack([spans[t], f.matmul(m.mats[k], spans[s])]))
            if new.shape[1] != spans[t].shape[1]:
                spans[t] = new
                changed = True
    return SubRep(m, spans, canonical=True)


def radical(m: Rep) -> SubRep:
    """rad M, the sum of the images of all arrows."""
    f = m.field
    imgs = [np.zeros((d, 0), np.int64) for d in m.dims]
    for k in range(len(m.algebra.arrows)):
        imgs[m._t(k)] = np.hstack([imgs[m._t(k)], m.mats[k]])
    return SubRep(m, [f.column_basis(x) for x in imgs], canonical=True)


def quotient_rep(sub: SubRep) -> tuple[Rep, RepMap, list[np.ndarray]]:
    """``M / sub`` with its projection and canonical per-vertex sections."""
    m = sub.ambient
    f = m.field
    qs = [quotient(f, d, b) for d, b in zip(m.dims, sub.bases)]
    mats = []
    for k in range(len(m.algebra.arrows)):
        s, t = m._s(k), m._t(k)
        mats.append(f.mul_chain(qs[t].proj, m.mats[k], qs[s].section))
    q = Rep(m.algebra, [x.dim for x in qs], mats)
    return q, RepMap(m, q, [x.proj for x in qs]), [x.section for x in qs]


# -- kernels and cokernels ------------------------------------------------

def kernel(f: RepMap) -> tuple[SubRep, RepMap]:
    fld = f.field
    sub = SubRep(f.source, [fld.kernel_basis(b) if b.shape[0] else fld.eye(b.shape[1]) for b in f.blocks])
    return sub, sub.inclusion


def image_sub(f: RepMap) -> SubRep:
    fld = f.field
    return SubRep(f.target, [fld.column_basis(b) for b in f.blocks], canonical=True)


def image(f: RepMap) -> tuple[SubRep, RepMap, RepMap]:
    """Epi-mono factorisation ``f = beta ∘ alpha`` through the image."""
    fld = f.field
    sub = image_sub(f)
    alpha_blocks = []
    for b, basis in zip(f.blocks, sub.bases):
        if basis.shape[1] == 0:
            alpha_blocks.append(np.zeros((0, b.shape[1]), np.int64))
        else:
            alpha_blocks.append(fld.solve(basis, b))
    alpha = RepMap(f.source, sub.rep, alpha_blocks)
    return sub, alpha, sub.inclusion


def cokernel(f: RepMap) -> tuple[Rep, RepMap]:
    q, proj, _ = quotient_rep(image_sub(f))
    return q, proj


def is_mono(f: RepMap) -> bool:
    fld = f.field
    return all(fld.rank(b) == b.shape[1] for b in f.blocks)


def is_epi(f: RepMap) -> bool:
    fld = f.field
    return all(fld.rank(b) == b.shape[0] for b in f.blocks)


def is_iso(f: RepMap) -> bool:
    return all(b.shape[0] == b.shape[1] for b in f.blocks) and is_mono(f)


def inverse(f: RepMap) -> RepMap:
    if not is_iso(f):
        raise RepError("map is not an isomorphism")
    fld = f.field
    return RepMap(f.target, f.source, [fld.inverse(b) if b.size else b for b in f.blocks])


# -- sums and pushouts ------------------------------------------------------

def direct_sum(*mods: Rep) -> tuple[Rep, list[RepMap], list[RepMap]]:
    """``M_1 ⊕ ... ⊕ M_k`` with its injections and projections."""
    if not mods:
        raise RepError("direct sum of nothing")
    alg = mods[0].algebra
    if any(m.algebra != alg for m in mods):
        raise AlgebraError("direct sum of modules over different algebras")
    f = alg.field
    nv = len(alg.vertices)
    dims = [sum(m.dims[v] for m in mods) for v in range(nv)]
    mats = [block_diag([m.mats[k] for m in mods]) for k in range(len(alg.arrows))]
    total = Rep(alg, dims, mats, check=False)
    injs, projs = [], []
    offs = [0] * nv
    for m in mods:
        ib, pb = [], []
        for v in range(nv):
            e = np.zeros((dims[v], m.dims[v]), np.int64)
            e[offs[v]:offs[v] + m.dims[v]] = f.eye(m.dims[v])
            ib.append(e)
            pb.append(np.ascontiguousarray(e.T))
            offs[v] += m.dims[v]
        injs.append(RepMap(m, total, ib, check=False))
        projs.append(RepMap(total, m, pb, check=False))
    return total, injs, projs


def map_sum(*maps: RepMap) -> RepMap:
    """Block-diagonal ``f_1 ⊕ ... ⊕ f_k``."""
    src, _, _ = direct_sum(*[g.source for g in maps])
    tgt, _, _ = direct_sum(*[g.target for g in maps])
    nv = len(src.dims)
    return RepMap(src, tgt, [block_diag([g.blocks[v] for g in maps]) for v in range(nv)], check=False)


def hstack_maps(target: Rep, maps: Sequence[RepMap]) -> RepMap:
    """The map ``⊕ sources → target`` with the given components."""
    src, _, _ = direct_sum(*[g.source for g in maps])
    nv = len(src.dims)
    return RepMap(src, target, [np.hstack([g.blocks[v] for g in maps]) for v in range(nv)], check=False)


def vstack_maps(source: Rep, maps: Sequence[RepMap]) -> RepMap:
    """The map ``source → ⊕ targets`` with the given components."""
    tgt, _, _ = direct_sum(*[g.target for g in maps])
    nv = len(tgt.dims)
    return RepMap(source, tgt, [np.vstack([g.blocks[v] for g in maps]) for v in range(nv)], check=False)


def pushout(a: RepMap, b: RepMap) -> tuple[Rep, RepMap, RepMap]:
    """Pushout of ``B <-a- A -b-> D``; returns ``(E, c: D -> E, d: B -> E)`` with ``d∘a = c∘b``."""
    if a.source != b.source:
        raise RepError("pushout legs have different sources")
    s, (iB, iD), _ = direct_sum(a.target, b.target)
    diff = vstack_maps(a.source, [a, -b])
    e, q = cokernel(diff)
    return e, q @ iD, q @ iB
