"""Seeded random modules and morphisms for property tests and batteries."""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraTable
from .homological import projective, projective_cover
from .reps import Rep, RepMap, direct_sum, generated_sub, hom_space, quotient_rep, random_hom, simple


def _random_vector(m: Rep, rng: np.random.Generator) -> tuple[int, np.ndarray] | None:
    live = [v for v, d in enumerate(m.dims) if d]
    if not live:
        return None
    v = int(rng.choice(live))
    vec = rng.integers(0, m.field.p, size=(m.dims[v], 1))
    return v, vec


def _cut(m: Rep, rng: np.random.Generator, count: int) -> Rep:
    """Quotient of ``m`` by the submodule generated by ``count`` random elements."""
    gens: dict[int, np.ndarray] = {}
    for _ in range(count):
        pick = _random_vector(m, rng)
        if pick is None:
            break
        v, vec = pick
        gens[v] = np.hstack([gens[v], vec]) if v in gens else vec
    if not gens:
        return m
    return quotient_rep(generated_sub(m, gens))[0]


def random_cyclic_quotient(alg: AlgebraTable, rng: np.random.Generator, max_dim: int) -> Rep:
    """A nonzero quotient of one or two indecomposable projectives, of total dim ≤ ``max_dim``."""
    nv = len(alg.vertices)
    while True:
        k = int(rng.integers(1, 3))
        tops = [alg.vertices[int(i)] for i in rng.integers(0, nv, size=k)]
        m = direct_sum(*[projective(alg, v) for v in tops])[0]
        m = _cut(m, rng, int(rng.integers(0, 3)))
        while m.total_dim > max_dim:
            m = _cut(m, rng, 1)
        if m.total_dim:
            return m


def random_rep(alg: AlgebraTable, rng: np.random.Generator, max_dim: int = 6) -> Rep:
    """Random nonzero module of total dimension at most ``max_dim``.

    Direct sums are drawn a quarter of the time, so modules with several
    indecomposable summands show up often.  The other draws give a simple,
    a syzygy or a cyclic quotient of a projective.
    """
    kind = int(rng.integers(0, 4))
    if kind == 0 and max_dim >= 2:
        first = random_cyclic_quotient(alg, rng, max_dim - 1)
        rest = max_dim - first.total_dim
        if rest >= 1:
            second = random_rep(alg, rng, rest)
            return direct_sum(first, second)[0]
        return first
    if kind == 1:
        return simple(alg, alg.vertices[int(rng.integers(0, len(alg.vertices)))])
    if kind == 2:
        base = random_cyclic_quotient(alg, rng, max_dim)
        om = projective_cover(base).omega
        if 0 < om.total_dim <= max_dim:
            return om
        return base
    return random_cyclic_quotient(alg, rng, max_dim)


def random_piece(alg: AlgebraTable, rng: np.random.Generator, max_dim: int) -> Rep:
    """A small module that is usually indecomposable, drawn from one of four kinds."""
    kind = int(rng.integers(0, 4))
    v = alg.vertices[int(rng.integers(0, len(alg.vertices)))]
    if kind == 0:
        return simple(alg, v)
    if kind == 1:
        p = projective(alg, v)
        if p.total_dim <= max_dim:
            return p
    if kind == 2:
        om = projective_cover(random_cyclic_quotient(alg, rng, max_dim + 2)).omega
        if 0 < om.total_dim <= max_dim:
            return om
    return random_cyclic_quotient(alg, rng, max_dim)


def random_decomposable(alg: AlgebraTable, rng: np.random.Generator, max_dim: int = 7,
                        parts: int = 3) -> Rep:
    """Direct sum of up to ``parts`` random pieces, total dimension at most ``max_dim``."""
    pieces = []
    budget = max_dim
    for _ in range(int(rng.integers(2, parts + 1))):
        if budget < 1:
            break
        piece = random_piece(alg, rng, budget)
        pieces.append(piece)
        budget -= piece.total_dim
    return direct_sum(*pieces)[0]


def random_endo(m: Rep, rng: np.random.Generator, sparse: bool = False) -> RepMap:
    """Random endomorphism; ``sparse`` zeroes about half of the Hom coordinates."""
    if not sparse:
        return random_hom(m, m, rng)
    h = hom_space(m, m)
    coords = rng.integers(0, m.field.p, size=h.dim) * (rng.random(h.dim) < 0.5)
    return h.map(coords)
