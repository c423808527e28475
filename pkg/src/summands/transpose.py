"""Tor_1 through tensor products, with the Auslander transpose.

Right Λ-modules are representations over ``opposite_algebra(Λ)``: the arrow
``a: v -> w`` of ``Q`` then carries the matrix of right multiplication by
``a``, a map from the ``w`` space to the ``v`` space.  ``tensor(m, n)``
takes ``m`` over Λ^op and ``n`` over Λ.

The transpose of ``A`` (over any algebra ``X``) is the cokernel of the dual
of a minimal presentation ``P1 -> P0 -> A -> 0`` and lives over ``X^op``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .algebra import AlgebraError, AlgebraTable, opposite_algebra
from .homological import (
    SyzygyData,
    lift_through_covers,
    postcompose_operator,
    projective,
    projective_cover,
    stable_hom,
)
from .linalg import PrimeField, Quotient, block_diag, quotient
from .reps import Rep, RepMap, cokernel, direct_sum, hom_space, identity, zero_rep


def _check_pair(m: Rep, n: Rep) -> None:
    if m.algebra != opposite_algebra(n.algebra):
        raise AlgebraError("tensor needs a module over the opposite of the other module's algebra")


@dataclass(frozen=True)
class TensorSpace:
    """``m ⊗_Λ n`` as ``(⊕_v m_v ⊗ n_v)`` modulo the balancing relations."""

    m: Rep
    n: Rep
    offsets: tuple[int, ...]
    quot: Quotient

    @property
    def dim(self) -> int:
        return self.quot.dim

    def raw_index(self, v: int, x: int, y: int) -> int:
        return self.offsets[v] + x * self.n.dims[v] + y


@lru_cache(maxsize=8192)
def tensor(m: Rep, n: Rep) -> TensorSpace:
    """Coordinates of ``m ⊗_Λ n``; the relations are ``x·a ⊗ y = x ⊗ a·y`` for every arrow."""
    _check_pair(m, n)
    alg = n.algebra
    f = alg.field
    nv = len(alg.vertices)
    offsets = [0]
    for v in range(nv):
        offsets.append(offsets[-1] + m.dims[v] * n.dims[v])
    total = offsets[-1]
    cols = []
    for k, arrow in enumerate(alg.arrows):
        v, w = alg.vertex(arrow.source), alg.vertex(arrow.target)
        ncols = m.dims[w] * n.dims[v]
        if ncols == 0:
            continue
        r = np.zeros((total, ncols), np.int64)
        # x in m_w, y in n_v: (x·a) ⊗ y  -  x ⊗ (a·y)
        r[offsets[v]:offsets[v + 1]] = f.kron(m.mats[k], f.eye(n.dims[v]))
        r[offsets[w]:offsets[w + 1]] = (r[offsets[w]:offsets[w + 1]] - f.kron(f.eye(m.dims[w]), n.mats[k])) % f.p
        cols.append(r)
    rel = np.hstack(cols) if cols else np.zeros((total, 0), np.int64)
    return TensorSpace(m, n, tuple(offsets), quotient(f, total, rel))


def tensor_map(f: RepMap, g: RepMap) -> np.ndarray:
    """Matrix of ``f ⊗ g`` on tensor coordinates."""
    src, tgt = tensor(f.source, g.source), tensor(f.target, g.target)
    fld = f.field
    raw = block_diag([fld.kron(fb, gb) for fb, gb in zip(f.blocks, g.blocks)])
    return fld.mul_chain(tgt.quot.proj, raw, src.quot.section)


@dataclass(frozen=True)
class TorSpace:
    """Tor_1(A, N) = ker(ΩA ⊗ N → P0 ⊗ N), basis given in ΩA ⊗ N coordinates."""

    a: Rep
    n: Rep
    syzygy: SyzygyData
    omega_tensor: TensorSpace
    inclusion: np.ndarray       # ι ⊗ N on tensor coordinates
    basis: np.ndarray
    free: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def coords(self, vecs: np.ndarray) -> np.ndarray:
        """Tor coordinates of ΩA ⊗ N vectors (columns) known to lie in the kernel."""
        return vecs[list(self.free)]


@lru_cache(maxsize=8192)
def tor1(a: Rep, n: Rep) -> TorSpace:
    _check_pair(a, n)
    syz = projective_cover(a)
    inc = tensor_map(syz.iota, identity(n))
    t_om = tensor(syz.omega, n)
    basis, free = a.field.kernel_basis(inc, return_free=True)
    return TorSpace(a, n, syz, t_om, inc, basis, tuple(free))


def tor_induced_matrix(f: RepMap, n: Rep, omega_map: Optional[RepMap] = None) -> np.ndarray:
    """Matrix of Tor_1(f, N): Tor_1(A, N) → Tor_1(A', N) for ``f: A -> A'`` (covariant)."""
    src, tgt = tor1(f.source, n), tor1(f.target, n)
    om = omega_map if omega_map is not None else lift_through_covers(f)[1]
    moved = f.field.matmul(tensor_map(om, identity(n)), src.basis)
    return tgt.coords(moved)


def tor_pushforward_matrix(a: Rep, g: RepMap) -> np.ndarray:
    """Matrix of Tor_1(A, g) for ``g: N -> N'``."""
    src, tgt = tor1(a, g.source), tor1(a, g.target)
    moved = g.field.matmul(tensor_map(identity(src.syzygy.omega), g), src.basis)
    return tgt.coords(moved)


# -- transpose --------------------------------------------------------------

@dataclass(frozen=True)
class MinimalPresentation:
    a: Rep
    p1: Rep
    p0: Rep
    d: RepMap           # P1 -> P0
    pi: RepMap          # P0 -> A
    cover0: SyzygyData
    cover1: SyzygyData  # cover of ΩA


def minimal_presentation(a: Rep) -> MinimalPresentation:
    c0 = projective_cover(a)
    c1 = projective_cover(c0.omega)
    d = c0.iota @ c1.pi
    return MinimalPresentation(a, c1.cover, c0.cover, d, c0.pi, c0, c1)


@dataclass(frozen=True)
class TransposeData:
    presentation: MinimalPresentation
    p0_dual: Rep
    p1_dual: Rep
    d_dual: RepMap      # P0* -> P1*
    tr: Rep
    q: RepMap           # P1* -> Tr A
    p1_dual_summands: tuple[int, ...]


def _sum_of_projectives(alg: AlgebraTable, summands) -> Rep:
    if not summands:
        return zero_rep(alg)
    return direct_sum(*[projective(alg, alg.vertices[v]) for v in summands])[0]


@lru_cache(maxsize=2048)
def transpose_data(a: Rep) -> TransposeData:
    x = a.algebra
    y = opposite_algebra(x)
    fld = x.field
    pres = minimal_presentation(a)
    s0, s1 = pres.cover0.summands, pres.cover1.summands
    nv = len(x.vertices)

    # lam[j][k]: component in summand j of P0 of the image of the k-th generator of P1,
    # as a coordinate vector over the shared basis.
    lam = [[np.zeros(x.dim, np.int64) for _ in s1] for _ in s0]
    for k, wk in enumerate(s1):
        v, row = pres.cover1.generator_position(k)
        col = pres.d.blocks[v][:, row]
        pos = 0
        for j, vj in enumerate(s0):
            idx = x.path_basis_idx(vj, wk)
            lam[j][k][idx] = col[pos:pos + len(idx)]
            pos += len(idx)

    p0d = _sum_of_projectives(y, s0)
    p1d = _sum_of_projectives(y, s1)
    blocks = []
    for u in range(nv):
        rows = []
        for k, wk in enumerate(s1):
            tgt_idx = y.path_basis_idx(wk, u)
            row_blocks = []
            for j, vj in enumerate(s0):
                src_idx = y.path_basis_idx(vj, u)
                blk = np.zeros((len(tgt_idx), len(src_idx)), np.int64)
                if tgt_idx and src_idx and lam[j][k].any():
                    # d* sends y to y · λ, a product in the opposite algebra
                    for c, yi in enumerate(src_idx):
                        blk[:, c] = fld.matmul(lam[j][k].reshape(1, -1), y.mult[yi]).ravel()[tgt_idx]
                row_blocks.append(blk)
            rows.append(np.hstack(row_blocks) if row_blocks else np.zeros((len(tgt_idx), p0d.dims[u]), np.int64))
        blocks.append(np.vstack(rows) if rows else np.zeros((0, p0d.dims[u]), np.int64))
    d_dual = RepMap(p0d, p1d, blocks)
    tr, q = cokernel(d_dual)
    return TransposeData(pres, p0d, p1d, d_dual, tr, q, tuple(s1))


def transpose(a: Rep) -> Rep:
    """Auslander transpose ``Tr A``, a module over the opposite algebra."""
    return transpose_data(a).tr


# -- Tor_1(A, -) ≅ stHom(Tr A, -) -----------------------------------------

@dataclass(frozen=True)
class TorIsoReport:
    dim_tor: int
    dim_stable_hom: int
    surjective: bool
    kills_projective_maps: bool
    natural: Optional[bool]

    @property
    def passed(self) -> bool:
        return (self.dim_tor == self.dim_stable_hom and self.surjective
                and self.kills_projective_maps and self.natural is not False)


def tor_comparison_matrix(a: Rep, n: Rep) -> np.ndarray:
    """Matrix of Hom(Tr A, N) → Tor_1(A, N) (Hom coordinates to Tor coordinates).

    ``h`` is pulled back to ``P1* → N``, read as an element of ``P1 ⊗ N``
    through ``Hom(P*, N) ≅ P ⊗ N`` and pushed to ``ΩA ⊗ N``.
    """
    td = transpose_data(a)
    pres = td.presentation
    fld = a.field
    y = n.algebra
    hs = hom_space(td.tr, n)
    t_p1 = tensor(pres.p1, n)
    tor = tor1(a, n)
    push = tensor_map(pres.cover1.pi, identity(n))
    cols = []
    for h in hs.maps():
        phi = h @ td.q
        raw = np.zeros(t_p1.quot.n, np.int64)
        offset = [0] * len(y.vertices)
        for k, wk in enumerate(td.p1_dual_summands):
            # generator of the k-th summand of P1* sits at e_{wk}, the first path from wk to wk
            gen_row = offset[wk]
            nk = phi.blocks[wk][:, gen_row]
            _, prow = pres.cover1.generator_position(k)
            for yy in range(n.dims[wk]):
                raw[t_p1.raw_index(wk, prow, yy)] = nk[yy]
            for u in range(len(y.vertices)):
                offset[u] += len(y.path_basis_idx(wk, u))
        cols.append(fld.matmul(push, fld.matmul(t_p1.quot.proj, raw.reshape(-1, 1))).ravel())
    if not cols:
        return np.zeros((tor.dim, 0), np.int64)
    return tor.coords(np.column_stack(cols))


def tor_iso_check(a: Rep, n: Rep, g: Optional[RepMap] = None) -> TorIsoReport:
    """Check Tor_1(A, N) ≅ stHom(Tr A, N) through an explicit comparison map.

    The comparison map must be onto Tor_1 with kernel exactly the maps
    factoring through projectives; with ``g: N -> N'`` it must also commute
    with the maps induced by ``g`` on both sides.
    """
    fld = a.field
    tor = tor1(a, n)
    tr = transpose(a)
    st = stable_hom(tr, n)
    phi = tor_comparison_matrix(a, n)
    surjective = fld.rank(phi) == tor.dim if phi.size else tor.dim == 0
    trivial = st.hom.coords_of_vectors(st.trivial)
    kills = not fld.matmul(phi, trivial).any() if trivial.size and phi.size else True
    natural = None
    if g is not None:
        phi2 = tor_comparison_matrix(a, g.target)
        h1, h2 = hom_space(tr, g.source), hom_space(tr, g.target)
        post = h2.coords_of_vectors(fld.matmul(postcompose_operator(g, tr), h1.basis))
        lhs = fld.matmul(phi2, post)
        rhs = fld.matmul(tor_pushforward_matrix(a, g), phi)
        natural = bool(np.array_equal(lhs, rhs))
    return TorIsoReport(tor.dim, st.dim, surjective, kills, natural)
