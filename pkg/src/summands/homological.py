"""Projective covers with their syzygies, plus Ext^1 and Hom modulo projectives."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraError, AlgebraTable
from .linalg import PrimeField, Quotient, block_diag, quotient
from .reps import (
    HomSpace,
    Rep,
    RepMap,
    direct_sum,
    hom_space,
    kernel,
    radical,
    zero_rep,
)


@lru_cache(maxsize=256)
def projective(algebra: AlgebraTable, v: str) -> Rep:
    """P(v) = Λ e_v: paths starting at ``v``, arrows acting by left multiplication."""
    vi = algebra.vertex(v)
    nv = len(algebra.vertices)
    blocks = [algebra.path_basis_idx(vi, w) for w in range(nv)]
    mats = []
    for a in algebra.arrows:
        s, t = algebra.vertex(a.source), algebra.vertex(a.target)
        ai = algebra.basis_index((a.name,))
        m = np.zeros((len(blocks[t]), len(blocks[s])), np.int64)
        for col, i in enumerate(blocks[s]):
            m[:, col] = algebra.mult[ai, i][blocks[t]]
        mats.append(m)
    return Rep(algebra, [len(b) for b in blocks], mats)


def map_from_projective(cover: Rep, summands: Sequence[int], target: Rep,
                        images: Sequence[np.ndarray]) -> RepMap:
    """The map ``⊕_k P(v_k) → X`` sending the k-th generator ``e_{v_k}`` to ``images[k]``."""
    alg = target.algebra
    f = alg.field
    nv = len(alg.vertices)
    blocks = []
    for w in range(nv):
        cols = []
        for vk, x in zip(summands, images):
            idx = alg.path_basis_idx(vk, w)
            if idx:
                cols.append(np.column_stack([f.matmul(target.basis_action(i), np.asarray(x).reshape(-1, 1)).ravel()
                                             for i in idx]).reshape(target.dims[w], len(idx)))
        blocks.append(np.hstack(cols) if cols else np.zeros((target.dims[w], 0), np.int64))
    return RepMap(cover, target, blocks)


@dataclass(frozen=True)
class SyzygyData:
    """A projective cover ``pi: P -> A`` and the syzygy ``iota: ΩA -> P``.

    ``summands[k]`` is the vertex index of the k-th indecomposable summand of
    ``P`` and ``generators[k]`` the element of ``A`` its top generator maps to.
    """

    target: Rep
    cover: Rep
    pi: RepMap
    omega: Rep
    iota: RepMap
    summands: tuple[int, ...]
    generators: tuple[np.ndarray, ...]

    def generator_position(self, k: int) -> tuple[int, int]:
        """(vertex, row) of the k-th generator ``e_{v_k}`` inside ``P``."""
        alg = self.cover.algebra
        v = self.summands[k]
        row = sum(len(alg.path_basis_idx(self.summands[j], v)) for j in range(k))
        return v, row


def top_basis(m: Rep) -> list[np.ndarray]:
    """Per vertex, canonical representatives of a basis of top(M) = M / rad M."""
    rad = radical(m)
    return [quotient(m.field, d, b).section for d, b in zip(m.dims, rad.bases)]


def projective_cover(m: Rep, extra: Optional[dict[str, int]] = None) -> SyzygyData:
    """Minimal projective cover of ``m`` and its kernel.

    ``extra`` adds surplus summands ``P(v)`` mapping to zero; this gives a
    non-minimal cover and is meant for tests only.
    """
    if not extra:
        return _minimal_cover(m)
    return _build_cover(m, extra)


@lru_cache(maxsize=4096)
def _minimal_cover(m: Rep) -> SyzygyData:
    return _build_cover(m, None)


def _build_cover(m: Rep, extra: Optional[dict[str, int]]) -> SyzygyData:
    alg = m.algebra
    summands: list[int] = []
    gens: list[np.ndarray] = []
    for v, sec in enumerate(top_basis(m)):
        for j in range(sec.shape[1]):
            summands.append(v)
            gens.append(np.ascontiguousarray(sec[:, j]))
    for v, count in (extra or {}).items():
        vi = alg.vertex(v)
        for _ in range(count):
            summands.append(vi)
            gens.append(np.zeros(m.dims[vi], np.int64))
    if summands:
        cover, _, _ = direct_sum(*[projective(alg, alg.vertices[v]) for v in summands])
    else:
        cover = zero_rep(alg)
    pi = map_from_projective(cover, summands, m, gens)
    sub, iota = kernel(pi)
    for g in gens:
        g.setflags(write=False)
    return SyzygyData(m, cover, pi, sub.rep, iota, tuple(summands), tuple(gens))


def lift_through_covers(f: RepMap, cov_b: Optional[SyzygyData] = None,
                        cov_a: Optional[SyzygyData] = None) -> tuple[RepMap, RepMap]:
    """Comparison maps ``fP: P_B -> P_A`` and ``Ωf: ΩB -> ΩA`` over ``f: B -> A``.

    Each generator of ``P_B`` is sent to a preimage under ``pi_A`` of its
    image in ``A``; ``Ωf`` is the restriction of ``fP`` to the syzygies.
    """
    cov_b = cov_b or projective_cover(f.source)
    cov_a = cov_a or projective_cover(f.target)
    fld = f.field
    lifts = []
    for v, x in zip(cov_b.summands, cov_b.generators):
        y = fld.matmul(f.blocks[v], x.reshape(-1, 1))
        z = fld.solve(cov_a.pi.blocks[v], y)
        if z is None:  # pragma: no cover - pi_A is surjective
            raise AssertionError("projective cover is not surjective")
        lifts.append(z.ravel())
    fP = map_from_projective(cov_b.cover, cov_b.summands, cov_a.cover, lifts)
    om_blocks = []
    for v in range(len(f.source.dims)):
        rhs = fld.matmul(fP.blocks[v], cov_b.iota.blocks[v])
        ia = cov_a.iota.blocks[v]
        if ia.shape[1] == 0:
            om_blocks.append(np.zeros((0, rhs.shape[1]), np.int64))
        else:
            om_blocks.append(fld.solve(ia, rhs))
    return fP, RepMap(cov_b.omega, cov_a.omega, om_blocks)


# -- composition as linear operators on vectorised Hom spaces -------------

def precompose_operator(g: RepMap, n: Rep) -> np.ndarray:
    """Matrix of ``h ↦ h ∘ g`` from vec Hom(Y, N) to vec Hom(X, N) for ``g: X -> Y``."""
    f = g.field
    return block_diag([f.kron(f.eye(n.dims[v]), g.blocks[v].T) for v in range(len(n.dims))])


def postcompose_operator(g: RepMap, x: Rep) -> np.ndarray:
    """Matrix of ``h ↦ g ∘ h`` from vec Hom(X, N) to vec Hom(X, N') for ``g: N -> N'``."""
    f = g.field
    return block_diag([f.kron(g.blocks[v], f.eye(x.dims[v])) for v in range(len(x.dims))])


@dataclass(frozen=True)
class ExtSpace:
    """Ext^1(A, M) as the cokernel of Hom(P, M) → Hom(ΩA, M)."""

    a: Rep
    m: Rep
    syzygy: SyzygyData
    hom: HomSpace          # Hom(ΩA, M)
    quot: Quotient         # on Hom(ΩA, M) coordinates

    @property
    def dim(self) -> int:
        return self.quot.dim

    @property
    def field(self) -> PrimeField:
        return self.a.field

    def representatives(self) -> np.ndarray:
        """Vectorised maps ΩA → M, one per Ext basis element (columns)."""
        return self.field.matmul(self.hom.basis, self.quot.section)

    def project_vectors(self, vecs: np.ndarray) -> np.ndarray:
        """Ext coordinates of vectorised maps ΩA → M given as columns."""
        return self.field.matmul(self.quot.proj, self.hom.coords_of_vectors(vecs))

    def class_of(self, h: RepMap) -> np.ndarray:
        return self.project_vectors(h.vector.reshape(-1, 1)).ravel()


def _check_same_algebra(x: Rep, y: Rep) -> None:
    if x.algebra != y.algebra:
        raise AlgebraError("modules live over different algebras")


@lru_cache(maxsize=8192)
def ext1(a: Rep, m: Rep) -> ExtSpace:
    _check_same_algebra(a, m)
    return ext1_from_cover(projective_cover(a), m)


def ext1_from_cover(syz: SyzygyData, m: Rep) -> ExtSpace:
    f = m.field
    h_omega = hom_space(syz.omega, m)
    h_p = hom_space(syz.cover, m)
    restricted = f.matmul(precompose_operator(syz.iota, m), h_p.basis)
    q = quotient(f, h_omega.dim, h_omega.coords_of_vectors(restricted))
    return ExtSpace(syz.target, m, syz, h_omega, q)


def ext_pullback_matrix(f: RepMap, m: Rep, omega_map: Optional[RepMap] = None) -> np.ndarray:
    """Matrix of Ext^1(f, M): Ext^1(A, M) → Ext^1(B, M) for ``f: B -> A``.

    ``omega_map`` may pass a precomputed ``Ωf`` between the minimal syzygies.
    """
    src, tgt = ext1(f.target, m), ext1(f.source, m)
    om = omega_map if omega_map is not None else lift_through_covers(f)[1]
    reps = src.representatives()
    return tgt.project_vectors(f.field.matmul(precompose_operator(om, m), reps))


def ext_pushforward_matrix(a: Rep, g: RepMap) -> np.ndarray:
    """Matrix of Ext^1(A, g): Ext^1(A, M) → Ext^1(A, M') for ``g: M -> M'``."""
    src, tgt = ext1(a, g.source), ext1(a, g.target)
    omega = src.syzygy.omega
    return tgt.project_vectors(g.field.matmul(postcompose_operator(g, omega), src.representatives()))


# -- Hom modulo projectives -----------------------------------------------

@dataclass(frozen=True)
class StableHomSpace:
    """Hom(B, A) modulo maps factoring through a projective."""

    b: Rep
    a: Rep
    hom: HomSpace
    trivial: np.ndarray    # vectorised pi_A ∘ h for h in a basis of Hom(B, P_A)
    through: HomSpace      # Hom(B, P_A)
    quot: Quotient         # on Hom(B, A) coordinates

    @property
    def dim(self) -> int:
        return self.quot.dim

    @property
    def field(self) -> PrimeField:
        return self.a.field

    def representatives(self) -> np.ndarray:
        return self.field.matmul(self.hom.basis, self.quot.section)

    def project_vectors(self, vecs: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.quot.proj, self.hom.coords_of_vectors(vecs))

    def class_of(self, f: RepMap) -> np.ndarray:
        return self.project_vectors(f.vector.reshape(-1, 1)).ravel()

    def map(self, coords: np.ndarray) -> RepMap:
        vec = self.field.matmul(self.representatives(), np.asarray(coords).reshape(-1, 1)).ravel()
        return RepMap.from_vector(self.b, self.a, vec)


@lru_cache(maxsize=8192)
def stable_hom(b: Rep, a: Rep) -> StableHomSpace:
    _check_same_algebra(b, a)
    f = a.field
    h = hom_space(b, a)
    cov = projective_cover(a)
    through = hom_space(b, cov.cover)
    trivial = f.matmul(postcompose_operator(cov.pi, b), through.basis)
    q = quotient(f, h.dim, h.coords_of_vectors(trivial))
    return StableHomSpace(b, a, h, trivial, through, q)


def factors_through_projective(f: RepMap) -> tuple[bool, Optional[RepMap]]:
    """Whether ``f: B -> A`` factors through a projective, with a witness ``h: B -> P_A``.

    Any map into a projective factors through the cover ``pi_A``, so it is
    enough to test membership in ``pi_A ∘ Hom(B, P_A)``.
    """
    st = stable_hom(f.source, f.target)
    fld = f.field
    x = fld.solve(st.trivial, f.vector.reshape(-1, 1))
    if x is None:
        return False, None
    return True, st.through.map(x.ravel())


def stable_precompose_matrix(f: RepMap, m: Rep) -> np.ndarray:
    """Matrix of ``[h] ↦ [h ∘ f]``: stHom(A, M) → stHom(B, M) for ``f: B -> A``."""
    src, tgt = stable_hom(f.target, m), stable_hom(f.source, m)
    return tgt.project_vectors(f.field.matmul(precompose_operator(f, m), src.representatives()))


def stable_postcompose_matrix(x: Rep, g: RepMap) -> np.ndarray:
    """Matrix of ``[h] ↦ [g ∘ h]``: stHom(X, N) → stHom(X, N') for ``g: N -> N'``."""
    src, tgt = stable_hom(x, g.source), stable_hom(x, g.target)
    return tgt.project_vectors(g.field.matmul(postcompose_operator(g, x), src.representatives()))


def stably_equal(f: RepMap, g: RepMap) -> bool:
    return not stable_hom(f.source, f.target).class_of(f - g).any()


def has_projective_summand(m: Rep) -> bool:
    """Whether some ``P(v)`` is a direct summand of ``m``.

    ``P(v)`` splits off iff some composite ``P(v) -> m -> P(v)`` is a unit of
    the local ring ``End P(v)``, i.e. has nonzero coefficient at ``e_v``.
    The top coefficient is bilinear in the two maps, so basis pairs suffice.
    """
    alg = m.algebra
    for v in alg.vertices:
        if not m.dims[alg.vertex(v)]:
            continue
        p = projective(alg, v)
        gen = _generator_index(p, v)
        into = hom_space(p, m).maps()
        out = hom_space(m, p).maps()
        for h in into:
            for k in out:
                if (k @ h).blocks[alg.vertex(v)][gen, gen] % alg.p:
                    return True
    return False


def _generator_index(p: Rep, v: str) -> int:
    """Row of ``e_v`` inside the ``v`` space of ``P(v)``."""
    alg = p.algebra
    vi = alg.vertex(v)
    return alg.path_basis_idx(vi, vi).index(alg.idempotent(v))
