"""Seeded property suites; ``summands selftest`` is the acceptance entry point.

Every suite returns report lines that depend only on the seed, so two runs
with the same seed print byte-identical reports.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .algebra import AlgebraTable, opposite_algebra
from .fitting import fitting_decomposition, restrict
from .fixtures import NAMES, dual_numbers, fixture_algebra, fixture_algebras
from .generators import random_decomposable, random_endo, random_piece, random_rep
from .hilton_rees import (
    connecting_class,
    hr_kernel_dim,
    induced_ext_map,
    is_stably_idempotent,
    stable_power_idempotent,
)
from .homological import (
    ext1,
    ext_pushforward_matrix,
    factors_through_projective,
    has_projective_summand,
    precompose_operator,
    projective,
    projective_cover,
    stable_hom,
)
from .realization import (
    EXT1,
    STABLE_HOM,
    TOR1,
    default_battery,
    realize_summand,
    verify_certificate,
)
from .reps import (
    Rep,
    RepMap,
    direct_sum,
    generated_sub,
    hom_space,
    hstack_maps,
    identity,
    image,
    is_iso,
    kernel,
    map_sum,
    power,
    pushout,
    quotient_rep,
    random_hom,
    simple,
    sub_add,
    sub_intersect,
    sub_whole,
    sub_zero,
    zero_map,
)
from .transpose import tor_iso_check, transpose


@dataclass
class SuiteResult:
    number: int
    name: str
    lines: list[str] = field(default_factory=list)
    passed: bool = True

    def check(self, ok: bool, line: str) -> None:
        self.lines.append(f"  {line}: {'ok' if ok else 'FAIL'}")
        self.passed = self.passed and ok

    def note(self, line: str) -> None:
        self.lines.append(f"  {line}")

    def report(self) -> list[str]:
        head = f"suite {self.number} {self.name}: {'PASS' if self.passed else 'FAIL'}"
        return [head] + self.lines


def _rng(seed: int, *salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, *salt])


def _dims(m: Rep) -> str:
    return "(" + ",".join(str(d) for d in m.dims) + ")"


# -- 1. Fitting -------------------------------------------------------------------

def fitting_violations(f: RepMap) -> list[str]:
    """Independent re-check of every Fitting invariant for ``f``."""
    bad = []
    try:
        res = fitting_decomposition(f)
    except AssertionError as exc:
        return [str(exc)]
    a = f.source
    n = res.n
    if n > a.total_dim:
        bad.append("index exceeds dim A")
    k_next, i_next = kernel(power(f, n + 1))[0], image(power(f, n + 1))[0]
    if k_next != res.kernel or i_next != res.image:
        bad.append("chains not stable at n")
    if n > 0:
        k_prev, i_prev = kernel(power(f, n - 1))[0], image(power(f, n - 1))[0]
        if k_prev == res.kernel and i_prev == res.image:
            bad.append("n is not minimal")
    if [x + y for x, y in zip(res.kernel.dims, res.image.dims)] != list(a.dims):
        bad.append("dimensions do not add up")
    if sub_intersect(res.kernel, res.image) != sub_zero(a):
        bad.append("kernel and image meet")
    if sub_add(res.kernel, res.image) != sub_whole(a):
        bad.append("kernel and image do not span")
    if res.q @ res.q_inv != identity(a) or res.q_inv @ res.q != identity(res.q.source):
        bad.append("q_inv is not inverse to q")
    if not power(res.on_kernel, n).is_zero():
        bad.append("f not nilpotent on the kernel part")
    if not is_iso(res.on_image):
        bad.append("f not invertible on the image part")
    return bad


def suite_fitting(seed: int, count: int = 200, max_dim: int = 8) -> SuiteResult:
    res = SuiteResult(1, "Fitting decomposition")
    for ai, name in enumerate(NAMES):
        alg = fixture_algebra(name)
        rng = _rng(seed, 1, ai)
        ok = 0
        nontrivial = 0
        a = None
        for k in range(count):
            if k % 10 == 0:
                a = random_decomposable(alg, rng, max_dim)
            f = random_endo(a, rng, sparse=k % 2 == 1)
            bad = fitting_violations(f)
            if bad:
                res.note(f"{name} endomorphism {k}: {'; '.join(bad)}")
            else:
                ok += 1
                res_f = fitting_decomposition(f)
                nontrivial += bool(res_f.kernel.total_dim and res_f.image.total_dim)
        res.check(ok == count, f"{name}: {ok}/{count} endomorphisms decompose, {nontrivial} with both parts nonzero")
    return res


# -- 2. pushouts --------------------------------------------------------------------

def cocone_basis(a: RepMap, b: RepMap, z: Rep) -> tuple[np.ndarray, object, object]:
    """Basis (columns) of pairs ``(x, y)`` with ``x∘a = y∘b`` in Hom(B,Z) ⊕ Hom(D,Z) coordinates."""
    fld = z.field
    hb, hd = hom_space(a.target, z), hom_space(b.target, z)
    left = fld.matmul(precompose_operator(a, z), hb.basis)
    right = fld.matmul(precompose_operator(b, z), hd.basis)
    system = np.hstack([left, (-right) % fld.p])
    return fld.kernel_basis(system), hb, hd


def universal_map(e: Rep, c: RepMap, d: RepMap, x: RepMap, y: RepMap) -> tuple[bool, bool]:
    """(exists, unique) for ``u: E -> Z`` with ``u∘d = x`` and ``u∘c = y``."""
    z = x.target
    fld = z.field
    he = hom_space(e, z)
    system = np.vstack([fld.matmul(precompose_operator(d, z), he.basis),
                        fld.matmul(precompose_operator(c, z), he.basis)])
    rhs = np.concatenate([x.vector, y.vector]).reshape(-1, 1)
    if system.shape[1] == 0:
        return not rhs.any(), True
    sol = fld.solve(system, rhs)
    return sol is not None, fld.rank(system) == he.dim


@dataclass(frozen=True)
class PushoutInstance:
    """Rows ``0 → A -a→ B -r→ C → 0`` and ``0 → D -c→ E -t→ C → 0`` with ``b: A→D``, ``d: B→E``."""

    a: RepMap
    b: RepMap
    c: RepMap
    d: RepMap
    t: RepMap


def random_pushout_instance(alg: AlgebraTable, rng: np.random.Generator) -> PushoutInstance:
    e = random_rep(alg, rng, 5)
    gens = {}
    live = [v for v, dv in enumerate(e.dims) if dv]
    for _ in range(int(rng.integers(0, 3))):
        v = int(rng.choice(live))
        vec = rng.integers(0, alg.p, size=(e.dims[v], 1))
        gens[v] = np.hstack([gens[v], vec]) if v in gens else vec
    dsub = generated_sub(e, gens)
    c = dsub.inclusion
    _, t, _ = quotient_rep(dsub)
    x = random_rep(alg, rng, 3)
    cov = projective_cover(e)
    bmod, _, _ = direct_sum(cov.cover, x)
    d = hstack_maps(e, [cov.pi, random_hom(x, e, rng)])
    r = t @ d
    asub, a = kernel(r)
    da = d @ a
    blocks = []
    fld = alg.field
    for v in range(len(alg.vertices)):
        if c.blocks[v].shape[1] == 0:
            blocks.append(np.zeros((0, da.blocks[v].shape[1]), np.int64))
        else:
            blocks.append(fld.solve(c.blocks[v], da.blocks[v]))
    b = RepMap(asub.rep, c.source, blocks)
    return PushoutInstance(a, b, c, d, t)


def suite_pushout(seed: int, count: int = 100, cocones: int = 5) -> SuiteResult:
    res = SuiteResult(2, "pushouts of exact rows")
    for ai, name in enumerate(("A2", "dualnumbers")):
        alg = fixture_algebra(name)
        rng = _rng(seed, 2, ai)
        iso_ok = univ_ok = 0
        n = count // 2
        for k in range(n):
            inst = random_pushout_instance(alg, rng)
            assert inst.d @ inst.a == inst.c @ inst.b
            e, c2, d2 = pushout(inst.a, inst.b)
            ex, un = universal_map(e, c2, d2, inst.d, inst.c)
            u_ok = ex and un
            if u_ok:
                # the comparison map E' -> E solved from the universal property
                he = hom_space(e, inst.c.target)
                fld = alg.field
                system = np.vstack([fld.matmul(precompose_operator(d2, inst.c.target), he.basis),
                                    fld.matmul(precompose_operator(c2, inst.c.target), he.basis)])
                rhs = np.concatenate([inst.d.vector, inst.c.vector]).reshape(-1, 1)
                u = he.map(fld.solve(system, rhs).ravel() if system.shape[1] else np.zeros(0, np.int64))
                u_ok = is_iso(u)
            iso_ok += u_ok
            good = True
            for j in range(cocones):
                z = random_rep(alg, rng, 4) if j else inst.c.target
                basis, hb, hd = cocone_basis(inst.a, inst.b, z)
                coeffs = rng.integers(0, alg.p, size=(basis.shape[1], 1))
                vec = alg.field.matmul(basis, coeffs).ravel() if basis.shape[1] else np.zeros(hb.dim + hd.dim, np.int64)
                x, y = hb.map(vec[:hb.dim]), hd.map(vec[hb.dim:])
                ex, un = universal_map(e, c2, d2, x, y)
                good = good and ex and un
            univ_ok += good
        res.check(iso_ok == n, f"{name}: comparison map is an isomorphism in {iso_ok}/{n} instances")
        res.check(univ_ok == n, f"{name}: universal property against {cocones} cocones in {univ_ok}/{n} instances")
    return res


# -- 3. Hilton-Rees -------------------------------------------------------------------

def suite_hilton_rees(seed: int, count: int = 200) -> SuiteResult:
    res = SuiteResult(3, "Hilton-Rees correspondence")
    per = count // len(NAMES)
    for ai, name in enumerate(NAMES):
        alg = fixture_algebra(name)
        rng = _rng(seed, 3, ai)
        equiv = dims = additive = invariant = natural = 0
        trivial = 0
        for k in range(per):
            b = random_decomposable(alg, rng, 5)
            a = random_decomposable(alg, rng, 5)
            cov = projective_cover(a)
            h = cov.pi @ random_hom(b, cov.cover, rng)
            f = h if k % 4 == 0 else random_hom(b, a, rng)
            through, _ = factors_through_projective(f)
            trivial += through
            equiv += connecting_class(f).is_zero() == through
            dims += stable_hom(b, a).dim == hr_kernel_dim(b, a)
            m = random_rep(alg, rng, 5)
            g = random_hom(b, a, rng)
            fm = induced_ext_map(f, m).matrix
            sm = induced_ext_map(f + g, m).matrix
            additive += np.array_equal(sm, (fm + induced_ext_map(g, m).matrix) % alg.p)
            invariant += np.array_equal(induced_ext_map(f + h, m).matrix, fm)
            m2 = random_rep(alg, rng, 5)
            k_map = random_hom(m, m2, rng)
            lhs = alg.field.matmul(ext_pushforward_matrix(b, k_map), fm)
            rhs = alg.field.matmul(induced_ext_map(f, m2).matrix, ext_pushforward_matrix(a, k_map))
            natural += np.array_equal(lhs, rhs)
        res.check(equiv == per, f"{name}: theta f = 0 iff f factors through a projective, {equiv}/{per} ({trivial} trivial)")
        res.check(dims == per, f"{name}: stable Hom dimension equals the kernel dimension, {dims}/{per}")
        res.check(additive == per, f"{name}: induced maps additive, {additive}/{per}")
        res.check(invariant == per, f"{name}: induced maps depend on the stable class only, {invariant}/{per}")
        res.check(natural == per, f"{name}: induced maps natural in M, {natural}/{per}")
    return res


# -- 4. realization ---------------------------------------------------------------------

def suite_realization(seed: int, modules: int = 5, endos: int = 100, max_dim: int = 7) -> SuiteResult:
    res = SuiteResult(4, "summand realization")
    for ai, name in enumerate(NAMES):
        alg = fixture_algebra(name)
        for side, x, backends in (("left", alg, (EXT1, STABLE_HOM)), ("right", opposite_algebra(alg), (TOR1,))):
            rng = _rng(seed, 4, ai, side == "right")
            battery = default_battery(backends[0].battery_algebra(x), seed)
            counts = {be.tag.value: 0 for be in backends}
            coherent = 0
            longest = 0
            idem_ok = 0
            for i in range(modules):
                a = random_decomposable(x, rng, max_dim)
                for j in range(endos):
                    u = random_endo(a, rng, sparse=j % 2 == 1)
                    e, _ = stable_power_idempotent(u)
                    idem_ok += is_stably_idempotent(e)
                    certs = []
                    for be in backends:
                        cert = realize_summand(a, e, be)
                        counts[be.tag.value] += verify_certificate(cert, battery).passed
                        certs.append(cert)
                        longest = max(longest, cert.length)
                    if len(certs) == 2:
                        coherent += certs[0].steps == certs[1].steps and certs[0].b == certs[1].b
                    else:
                        coherent += 1
            total = modules * endos
            res.check(idem_ok == total, f"{name} ({side}): e = u^m stably idempotent, {idem_ok}/{total}")
            for tag, c in counts.items():
                res.check(c == total, f"{name} backend {tag}: {c}/{total} certificates verified on "
                                      f"{len(battery)} battery modules")
            if len(backends) == 2:
                res.check(coherent == total, f"{name}: ext1 and stablehom chains identical, {coherent}/{total}")
            res.note(f"{name} ({side}): longest chain {longest}")
    return res


# -- 5. Tor and transpose ------------------------------------------------------------

def suite_tor(seed: int) -> SuiteResult:
    res = SuiteResult(5, "Tor and transpose")
    for ai, name in enumerate(NAMES):
        alg = fixture_algebra(name)
        op = opposite_algebra(alg)
        rng = _rng(seed, 5, ai)
        left = default_battery(alg, seed)
        right = default_battery(op, seed)
        ok = total = 0
        for pa in right:
            for j, pn in enumerate(left):
                other = left[(j + 1) % len(left)].m
                g = random_hom(pn.m, other, rng)
                total += 1
                ok += tor_iso_check(pa.m, pn.m, g).passed
        res.check(ok == total, f"{name}: Tor1(A,N) ≅ stable Hom(Tr A, N) on {ok}/{total} pairs")
        zero = all(transpose(projective(x, v)).is_zero() for x in (alg, op) for v in alg.vertices)
        res.check(zero, f"{name}: Tr of every indecomposable projective is 0")
        cands = []
        for v in alg.vertices:
            cands.append(simple(alg, v))
            om = projective_cover(simple(alg, v)).omega
            if om.total_dim:
                cands.append(om)
        for _ in range(4):
            cands.append(random_piece(alg, rng, 5))
        cands = [m for m in cands if m.total_dim and not has_projective_summand(m)]
        dual_ok = 0
        for m in cands:
            tt = transpose(transpose(m))
            good = tt.dims == m.dims
            for pt in left:
                xm = pt.m
                good = good and stable_hom(tt, xm).dim == stable_hom(m, xm).dim
                good = good and stable_hom(xm, tt).dim == stable_hom(xm, m).dim
            dual_ok += good
        res.check(dual_ok == len(cands),
                  f"{name}: Tr Tr duality on {dual_ok}/{len(cands)} modules without projective summands")
    return res


# -- 6. worked examples ------------------------------------------------------------------

def suite_examples(seed: int) -> SuiteResult:
    res = SuiteResult(6, "worked examples over the dual numbers")
    alg = dual_numbers()
    s, lam = simple(alg, "v"), projective(alg, "v")
    a = direct_sum(lam, s)[0]
    battery = default_battery(alg, seed)
    s_point = [p for p in battery if p.label == "S(v)"]

    f = map_sum(zero_map(lam, lam), identity(s))
    cert = realize_summand(a, f, EXT1)
    rep = verify_certificate(cert, s_point)
    row = rep.rows[0]
    res.check(cert.b.dims == (1,) and cert.length == 1 and rep.passed and row.rank_e == 1
              and ext1(s, s).dim == 1,
              f"f = 0 ⊕ id_S: B dims {_dims(cert.b)}, chain length {cert.length}, "
              f"rank e_S = {row.rank_e}, dim Ext1(S,S) = {ext1(s, s).dim}")

    g = map_sum(identity(lam), zero_map(s, s))
    cert = realize_summand(a, g, EXT1)
    rep = verify_certificate(cert, s_point)
    row = rep.rows[0]
    zero_functor = all(ext1(cert.b, p.m).dim == 0 for p in battery)
    res.check(cert.b == lam and rep.passed and row.rank_e == 0 and zero_functor,
              f"f = id_Λ ⊕ 0: B dims {_dims(cert.b)}, rank e_S = {row.rank_e}, Ext1(B,-) zero on the battery")

    theta = connecting_class(identity(s))
    res.check(not theta.is_zero() and theta.space.dim == 1,
              f"theta·id_S = {[int(x) for x in theta.value]} in Ext1(S, ΩS) of dim {theta.space.dim}")
    return res


SUITES: dict[int, Callable[[int], SuiteResult]] = {
    1: suite_fitting,
    2: suite_pushout,
    3: suite_hilton_rees,
    4: suite_realization,
    5: suite_tor,
    6: suite_examples,
}


def run_selftest(seed: int = 0, suites=None, timings: Optional[dict[int, float]] = None) -> tuple[bool, list[str]]:
    """Run the chosen suites; wall times go to ``timings`` so the report stays deterministic."""
    chosen = sorted(SUITES) if not suites else sorted(set(suites))
    lines = [f"selftest seed {seed}"]
    ok = True
    for n in chosen:
        start = time.perf_counter()
        r = SUITES[n](seed)
        if timings is not None:
            timings[n] = time.perf_counter() - start
        ok = ok and r.passed
        lines += r.report()
    lines.append(f"selftest: {'PASS' if ok else 'FAIL'}")
    return ok, lines
