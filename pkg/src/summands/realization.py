"""Realizing a direct summand of G(A, -) as G(B, -) for a submodule B of A.

A summand is given by a stably idempotent endomorphism ``f`` of ``A``.
The descent chain repeatedly replaces ``(A_i, f_i)`` by the image of
``f_i`` with ``f_{i+1} = (alpha_i ∘ beta_i)^2`` until ``f_i`` is an
epimorphism.  The chain depends only on ``f``; the functor backend is used
to verify the result pointwise on a battery of test modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .algebra import AlgebraTable, opposite_algebra
from .generators import random_rep
from .hilton_rees import is_stably_idempotent
from .homological import (
    ext1,
    ext_pullback_matrix,
    lift_through_covers,
    projective,
    projective_cover,
    stable_hom,
    stable_precompose_matrix,
)
from .reps import Rep, RepError, RepMap, hom_space, identity, image, is_epi, is_mono, simple
from .transpose import tor1, tor_induced_matrix


class PreconditionError(ValueError):
    """Raised when the endomorphism to realize is not stably idempotent."""


class Tag(str, Enum):
    EXT1_COV = "ext1"
    STABLE_HOM_COV = "stablehom"
    TOR1 = "tor1"


@dataclass(frozen=True)
class FunctorBackend:
    """A bifunctor G(X, M) evaluated on coordinates.

    EXT1_COV and STABLE_HOM_COV are contravariant in ``X``; TOR1 is covariant
    in ``X``, with ``X`` a right module (a Rep over the opposite algebra) and
    ``M`` a left module.
    """

    tag: Tag

    @property
    def covariant(self) -> bool:
        return self.tag is Tag.TOR1

    def battery_algebra(self, alg: AlgebraTable) -> AlgebraTable:
        """Algebra of the test modules ``M`` when ``X`` lives over ``alg``."""
        return opposite_algebra(alg) if self.covariant else alg

    def evaluate(self, x: Rep, m: Rep) -> int:
        if self.tag is Tag.EXT1_COV:
            return ext1(x, m).dim
        if self.tag is Tag.STABLE_HOM_COV:
            return stable_hom(x, m).dim
        return tor1(x, m).dim

    def lift(self, f: RepMap) -> Optional[RepMap]:
        """Data about ``f`` shared by every evaluation point (the syzygy map Ωf)."""
        if self.tag is Tag.STABLE_HOM_COV:
            return None
        return lift_through_covers(f)[1]

    def induced(self, f: RepMap, m: Rep, lifted: Optional[RepMap] = None) -> np.ndarray:
        """Matrix of G(f, M) on canonical coordinates.

        Contravariant backends map G(target, M) → G(source, M), TOR1 maps
        G(source, M) → G(target, M).  ``lifted`` is the result of ``lift(f)``.
        """
        if self.tag is Tag.EXT1_COV:
            return ext_pullback_matrix(f, m, lifted)
        if self.tag is Tag.STABLE_HOM_COV:
            return stable_precompose_matrix(f, m)
        return tor_induced_matrix(f, m, lifted)

    def induced_endo(self, f: RepMap, m: Rep) -> np.ndarray:
        """G(f, M) for an endomorphism ``f``, using a cached linearisation over End(A)."""
        a = f.source
        ops = _endo_operators(self.tag, a, m)
        coords = hom_space(a, a).coords(f)
        if ops.shape[0] == 0:
            return np.zeros(ops.shape[1:], np.int64)
        flat = a.field.matmul(coords.reshape(1, -1), ops.reshape(ops.shape[0], -1))
        return flat.reshape(ops.shape[1:])


EXT1 = FunctorBackend(Tag.EXT1_COV)
STABLE_HOM = FunctorBackend(Tag.STABLE_HOM_COV)
TOR1 = FunctorBackend(Tag.TOR1)
BACKENDS = {b.tag.value: b for b in (EXT1, STABLE_HOM, TOR1)}


def backend(name: str | Tag) -> FunctorBackend:
    try:
        return BACKENDS[Tag(name).value]
    except ValueError:
        raise ValueError(f"unknown backend {name!r}; expected one of {sorted(BACKENDS)}") from None


@lru_cache(maxsize=4096)
def _endo_operators(tag: Tag, a: Rep, m: Rep) -> np.ndarray:
    """Stack of G(b_j, M) over the canonical basis b_j of End(A)."""
    be = FunctorBackend(tag)
    d = be.evaluate(a, m)
    basis = hom_space(a, a).maps()
    if not basis:
        return np.zeros((0, d, d), np.int64)
    ops = np.stack([be.induced(b, m, _lift_cached(tag, b)) for b in basis]).astype(np.int64)
    ops.setflags(write=False)
    return ops


@lru_cache(maxsize=8192)
def _lift_cached(tag: Tag, f: RepMap) -> Optional[RepMap]:
    return FunctorBackend(tag).lift(f)


@lru_cache(maxsize=16384)
def _transport_cached(tag: Tag, f: RepMap, m: Rep) -> np.ndarray:
    t = FunctorBackend(tag).induced(f, m, _lift_cached(tag, f))
    t.setflags(write=False)
    return t


# -- certificates -------------------------------------------------------------

@dataclass(frozen=True)
class ChainStep:
    a: Rep            # A_i
    f: RepMap         # f_i: A_i -> A_i
    alpha: RepMap     # A_i ->> A_{i+1}
    beta: RepMap      # A_{i+1} >-> A_i


@dataclass(frozen=True)
class SummandCertificate:
    tag: Tag
    a: Rep
    f: RepMap
    steps: tuple[ChainStep, ...]
    b: Rep
    final: RepMap         # f_n on B, an epimorphism
    inclusion: RepMap     # B >-> A, composite of the betas
    projection: RepMap    # A ->> B, composite of the alphas
    terminal: str

    @property
    def length(self) -> int:
        return len(self.steps)


def realize_summand(a: Rep, f: RepMap, be: FunctorBackend) -> SummandCertificate:
    """Descend along images of ``f`` until the endomorphism becomes epi.

    Raises ``RepError`` for a non-endomorphism and ``PreconditionError`` if
    ``f`` is not stably idempotent.
    """
    if f.source != a or not f.is_endo():
        raise RepError("realize_summand needs an endomorphism of A")
    if not is_stably_idempotent(f):
        raise PreconditionError("f is not stably idempotent")
    steps = []
    cur, fi = a, f
    incl, proj = identity(a), identity(a)
    while not is_epi(fi):
        _, alpha, beta = image(fi)
        nxt = alpha.target
        if nxt.total_dim >= cur.total_dim:  # pragma: no cover - non-epi endo has smaller image
            raise AssertionError("descent failed to shrink the module")
        steps.append(ChainStep(cur, fi, alpha, beta))
        g = alpha @ beta
        incl = incl @ beta
        proj = alpha @ proj
        cur, fi = nxt, g @ g
    reason = "f is an epimorphism of A" if not steps else f"f_{len(steps)} is an epimorphism of A_{len(steps)}"
    return SummandCertificate(be.tag, a, f, tuple(steps), cur, fi, incl, proj, reason)


def check_certificate_invariants(cert: SummandCertificate) -> list[str]:
    """Structural invariants of the chain; returns the list of violations."""
    bad = []
    if len(cert.steps) > cert.a.total_dim:
        bad.append("chain longer than dim A")
    for i, st in enumerate(cert.steps):
        if st.beta @ st.alpha != st.f:
            bad.append(f"step {i}: beta∘alpha != f")
        if not is_mono(st.beta) or not is_epi(st.alpha):
            bad.append(f"step {i}: factorisation is not epi-mono")
        if st.alpha.target.total_dim >= st.a.total_dim:
            bad.append(f"step {i}: dimension did not drop")
        if not is_stably_idempotent(st.f):
            bad.append(f"step {i}: f not stably idempotent")
        nxt_f = cert.steps[i + 1].f if i + 1 < len(cert.steps) else cert.final
        g = st.alpha @ st.beta
        if nxt_f != g @ g:
            bad.append(f"step {i}: next endomorphism is not (alpha∘beta)^2")
    if not is_epi(cert.final):
        bad.append("final endomorphism is not epi")
    if not is_stably_idempotent(cert.final):
        bad.append("final endomorphism not stably idempotent")
    if not is_mono(cert.inclusion) or cert.inclusion.source != cert.b or cert.inclusion.target != cert.a:
        bad.append("inclusion is not a monomorphism B -> A")
    if not is_epi(cert.projection):
        bad.append("projection is not an epimorphism A -> B")
    return bad


# -- verification -----------------------------------------------------------

@dataclass(frozen=True)
class BatteryPoint:
    label: str
    m: Rep


@dataclass(frozen=True)
class VerificationRow:
    label: str
    dims: tuple[int, ...]
    dim_g_a: int
    rank_e: int
    dim_g_b: int
    idempotent: bool
    transported: bool

    @property
    def passed(self) -> bool:
        return self.idempotent and self.transported and self.rank_e == self.dim_g_b


@dataclass(frozen=True)
class VerificationReport:
    tag: Tag
    rows: tuple[VerificationRow, ...]
    invariant_failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.invariant_failures and all(r.passed for r in self.rows)

    def lines(self) -> list[str]:
        out = [f"backend {self.tag.value}"]
        out += [f"invariant violated: {x}" for x in self.invariant_failures]
        for r in self.rows:
            out.append(f"{r.label}: dim G(A,M) = {r.dim_g_a}, rank e_M = {r.rank_e}, "
                       f"dim G(B,M) = {r.dim_g_b}, idempotent {r.idempotent}, "
                       f"transport {r.transported} -> {'pass' if r.passed else 'FAIL'}")
        return out


def verify_certificate(cert: SummandCertificate, battery: Sequence[BatteryPoint],
                       check_invariants: bool = True) -> VerificationReport:
    """Pointwise check that the summand cut out by ``f`` is G(B, -).

    At every battery module ``M`` with ``e_M = G(f, M)``:

    - ``e_M`` is idempotent with rank ``dim G(B, M)``;
    - the transport map is injective on the image of ``e_M``. It is
      G(inclusion, M) for contravariant backends and G(projection, M) for TOR1.
    """
    if not battery:
        raise ValueError("verification battery is empty")
    be = FunctorBackend(cert.tag)
    fld = cert.a.field
    transport_map = cert.projection if be.covariant else cert.inclusion
    rows = []
    for point in battery:
        m = point.m
        e = be.induced_endo(cert.f, m)
        idem = bool(np.array_equal(fld.matmul(e, e), e % fld.p))
        r = fld.rank(e) if e.size else 0
        t = _transport_cached(cert.tag, transport_map, m)
        moved = fld.matmul(t, e) if t.size and e.size else np.zeros((t.shape[0], e.shape[1]), np.int64)
        transported = (fld.rank(moved) if moved.size else 0) == r
        rows.append(VerificationRow(point.label, tuple(m.dims), e.shape[0], r,
                                    be.evaluate(cert.b, m), idem, transported))
    bad = tuple(check_certificate_invariants(cert)) if check_invariants else ()
    return VerificationReport(cert.tag, tuple(rows), bad)


def default_battery(alg: AlgebraTable, seed: int = 0, n_random: int = 8,
                    max_dim: int = 6) -> list[BatteryPoint]:
    """Per vertex the simple with its projective cover and syzygy, followed by seeded random modules."""
    pts = []
    for v in alg.vertices:
        pts.append(BatteryPoint(f"S({v})", simple(alg, v)))
    for v in alg.vertices:
        pts.append(BatteryPoint(f"P({v})", projective(alg, v)))
    for v in alg.vertices:
        pts.append(BatteryPoint(f"ΩS({v})", projective_cover(simple(alg, v)).omega))
    rng = np.random.default_rng(seed)
    for k in range(n_random):
        pts.append(BatteryPoint(f"random {k}", random_rep(alg, rng, max_dim)))
    return pts


def certificate_battery(cert: SummandCertificate, seed: int = 0,
                        n_random: int = 8) -> list[BatteryPoint]:
    return default_battery(FunctorBackend(cert.tag).battery_algebra(cert.a.algebra), seed, n_random)
