"""Natural maps between covariant Ext functors via Hom modulo projectives.

A morphism ``f: B -> A`` induces ``Ext^1(f, -): Ext^1(A, -) -> Ext^1(B, -)``;
these depend only on the class of ``f`` modulo maps factoring through
projectives, and every natural transformation arises this way.  Natural
transformations are therefore carried around as (stable classes of) module
maps and evaluated pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .homological import (
    ExtSpace,
    ext1,
    ext_pullback_matrix,
    ext_pushforward_matrix,
    lift_through_covers,
    projective_cover,
    stable_hom,
    stably_equal,
)
from .linalg import multiplicative_order
from .reps import Rep, RepError, RepMap, identity, power


@dataclass(frozen=True)
class InducedExtMap:
    f: RepMap
    m: Rep
    matrix: np.ndarray   # Ext^1(A, m) coordinates -> Ext^1(B, m) coordinates


def induced_ext_map(f: RepMap, m: Rep) -> InducedExtMap:
    return InducedExtMap(f, m, ext_pullback_matrix(f, m))


@dataclass(frozen=True)
class ConnectingClass:
    f: RepMap
    space: ExtSpace      # Ext^1(B, ΩA)
    value: np.ndarray

    def is_zero(self) -> bool:
        return not self.value.any()


def connecting_class(f: RepMap) -> ConnectingClass:
    """Class of the pullback of ``0 → ΩA → P_A → A → 0`` along ``f: B -> A``.

    It is represented by the comparison map ``Ωf: ΩB → ΩA`` read in
    Ext^1(B, ΩA).
    """
    cov_a = projective_cover(f.target)
    _, om = lift_through_covers(f)
    space = ext1(f.source, cov_a.omega)
    return ConnectingClass(f, space, space.class_of(om))


def hr_kernel_dim(b: Rep, a: Rep) -> int:
    """dim ker(Ext^1(B, ΩA) → Ext^1(B, P_A)), the map induced by the syzygy inclusion."""
    cov = projective_cover(a)
    mat = ext_pushforward_matrix(b, cov.iota)
    return mat.shape[1] - a.field.rank(mat)


def is_stably_idempotent(f: RepMap) -> bool:
    if not f.is_endo():
        raise RepError("is_stably_idempotent needs an endomorphism")
    return stably_equal(f @ f, f)


def stable_power_idempotent(u: RepMap, quick: int = 32) -> tuple[RepMap, int]:
    """Smallest ``m >= 1`` with ``u^m ≡ u^(2m)`` modulo projectives, and ``e = u^m``.

    Short orbits are found by direct iteration.  Otherwise the stable
    endomorphism ring ``R`` is split by the Fitting decomposition of left
    multiplication by ``u``: on the image part ``u`` acts invertibly with
    some multiplicative order ``t``, on the kernel part it is nilpotent of
    index ``s``; ``m`` is the least multiple of ``t`` that is at least ``s``.
    """
    if not u.is_endo():
        raise RepError("stable_power_idempotent needs an endomorphism")
    a = u.source
    st = stable_hom(a, a)
    fld = a.field
    p = fld.p
    d = st.dim
    if d == 0:
        return u, 1
    reps = [st.map(np.eye(d, dtype=np.int64)[:, j]) for j in range(d)]
    left = np.column_stack([st.class_of(u @ r) for r in reps])
    cls_u = st.class_of(u)
    seq = [None, cls_u]
    for k in range(2, 2 * quick + 1):
        seq.append(fld.matmul(left, seq[-1].reshape(-1, 1)).ravel())
    for m in range(1, quick + 1):
        if np.array_equal(seq[m], seq[2 * m]):
            return power(u, m), m

    # Fitting split of left multiplication on R
    ln = fld.eye(d)
    for _ in range(d):
        ln = fld.matmul(ln, left)
    img = fld.column_basis(ln)
    ker = fld.kernel_basis(ln)
    one = st.class_of(identity(a))
    both = np.hstack([img, ker])
    coeffs = fld.solve(both, one.reshape(-1, 1)).ravel()
    e_cls = fld.matmul(img, coeffs[: img.shape[1]].reshape(-1, 1)).ravel()
    rest = (one - e_cls) % p
    s = 0
    cur = rest
    while cur.any():
        cur = fld.matmul(left, cur.reshape(-1, 1)).ravel()
        s += 1
    if img.shape[1]:
        on_img = fld.solve(img, fld.matmul(left, img))
        t = multiplicative_order(fld, on_img)
    else:
        t = 1
    m = t * max(1, -(-s // t))
    e = power(u, m)
    if not stably_equal(e, e @ e):  # pragma: no cover
        raise AssertionError("power is not stably idempotent")
    return e, m
