"""Fitting decomposition of an endomorphism of a finite-length module."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reps import (
    RepError,
    RepMap,
    SubRep,
    hstack_maps,
    identity,
    image_sub,
    inverse,
    is_iso,
    kernel,
    power,
    sub_add,
    sub_intersect,
    sub_whole,
    sub_zero,
)


def restrict(f: RepMap, src: SubRep, dst: SubRep) -> RepMap:
    """``f`` restricted to ``src → dst``; raises if ``f(src)`` is not inside ``dst``."""
    fld = f.field
    blocks = []
    for v, (sb, db) in enumerate(zip(src.bases, dst.bases)):
        img = fld.matmul(f.blocks[v], sb)
        if db.shape[1] == 0:
            if img.any():
                raise RepError("image leaves the target subobject")
            blocks.append(np.zeros((0, sb.shape[1]), np.int64))
            continue
        x = fld.solve(db, img)
        if x is None:
            raise RepError("image leaves the target subobject")
        blocks.append(x)
    return RepMap(src.rep, dst.rep, blocks)


def _chains(f: RepMap):
    """Yield ``(Ker f^k, Im f^k)`` for k = 0, 1, 2, ..."""
    g = identity(f.source)
    while True:
        yield kernel(g)[0], image_sub(g)
        g = f @ g


def fitting_index(f: RepMap) -> int:
    """Smallest n with Ker f^n = Ker f^(n+1) and Im f^n = Im f^(n+1)."""
    if not f.is_endo():
        raise RepError("fitting_index needs an endomorphism")
    prev = None
    for k, (ker, im) in enumerate(_chains(f)):
        if prev is not None and prev == (ker, im):
            return k - 1
        prev = (ker, im)
        if k > f.source.total_dim + 1:  # pragma: no cover - finite length forbids this
            raise AssertionError("kernel/image chains failed to stabilise")
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class FittingResult:
    f: RepMap
    n: int
    kernel: SubRep   # Ker f^n
    image: SubRep    # Im f^n
    q: RepMap        # Ker f^n ⊕ Im f^n -> A
    q_inv: RepMap
    on_kernel: RepMap
    on_image: RepMap


def fitting_decomposition(f: RepMap) -> FittingResult:
    """``A ≅ Ker f^n ⊕ Im f^n`` with every invariant checked on construction."""
    n = fitting_index(f)
    a = f.source
    fn = power(f, n)
    K, _ = kernel(fn)
    I = image_sub(fn)
    if sub_intersect(K, I) != sub_zero(a):
        raise AssertionError("Ker f^n ∩ Im f^n is not zero")
    if sub_add(K, I) != sub_whole(a):
        raise AssertionError("Ker f^n + Im f^n is not the whole module")
    q = hstack_maps(a, [K.inclusion, I.inclusion])
    if not is_iso(q):
        raise AssertionError("Ker f^n ⊕ Im f^n -> A is not an isomorphism")
    q_inv = inverse(q)
    on_k = restrict(f, K, K)
    on_i = restrict(f, I, I)
    if not power(on_k, n).is_zero():
        raise AssertionError("f is not nilpotent on Ker f^n")
    if not is_iso(on_i):
        raise AssertionError("f is not invertible on Im f^n")
    return FittingResult(f, n, K, I, q, q_inv, on_k, on_i)
