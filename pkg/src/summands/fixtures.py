"""The fixture algebras shipped with the package."""

from __future__ import annotations

from pathlib import Path

from .algebra import AlgebraTable, make_algebra, opposite_algebra
from .homological import projective, projective_cover
from .io import algebra_to_json, map_to_json, rep_to_json, write_json
from .reps import direct_sum, identity, is_iso, map_sum, simple, zero_map

FIXTURE_DIR = Path(__file__).parent / "fixture_data"

NAMES = ("dualnumbers", "truncated3", "A2", "A3", "square")


def dual_numbers(prime: int = 101) -> AlgebraTable:
    """F_p[a]/(a^2): one vertex, one loop."""
    return make_algebra(prime, ["v"], [("a", "v", "v")], [[(1, "a*a")]], 10)


def truncated_polynomial(prime: int = 101) -> AlgebraTable:
    """F_p[x]/(x^3)."""
    return make_algebra(prime, ["v"], [("x", "v", "v")], [[(1, "x*x*x")]], 10)


def a2(prime: int = 101) -> AlgebraTable:
    """Path algebra of 1 -> 2."""
    return make_algebra(prime, ["1", "2"], [("a", "1", "2")], [], 10)


def a3(prime: int = 101) -> AlgebraTable:
    """Path algebra of 1 -> 2 -> 3."""
    return make_algebra(prime, ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [], 10)


def square(prime: int = 101) -> AlgebraTable:
    """Square 1 -> 2 -> 4, 1 -> 3 -> 4 with the zero relation a*b."""
    return make_algebra(prime, ["1", "2", "3", "4"],
                        [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
                        [[(1, "a*b")]], 10)


_BUILDERS = {
    "dualnumbers": dual_numbers,
    "truncated3": truncated_polynomial,
    "A2": a2,
    "A3": a3,
    "square": square,
}


def fixture_algebra(name: str, prime: int = 101) -> AlgebraTable:
    try:
        return _BUILDERS[name](prime)
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; expected one of {list(NAMES)}") from None


def fixture_algebras(prime: int = 101) -> dict[str, AlgebraTable]:
    return {n: fixture_algebra(n, prime) for n in NAMES}


def _suffix(alg: AlgebraTable, v: str) -> str:
    return "" if len(alg.vertices) == 1 else v


def corpus_files(name: str, prime: int = 101) -> dict[str, dict]:
    """The JSON documents shipped for one fixture algebra, keyed by file name.

    - ``S<v>``, ``P<v>`` and ``S<v>_right`` per vertex; the vertex suffix is
      dropped for one-vertex algebras.
    - ``A = P(u) ⊕ S(v)`` for the first vertex ``u`` and the first
      non-projective simple ``S(v)``, with the endomorphisms ``f = 0 ⊕ id`` and
      ``g = id ⊕ 0``.
    - ``A_right``, ``f_right`` and ``g_right``: the same over the opposite algebra.
    """
    alg = fixture_algebra(name, prime)
    files: dict[str, dict] = {"algebra.json": algebra_to_json(alg)}
    for v in alg.vertices:
        files[f"S{_suffix(alg, v)}.json"] = rep_to_json(simple(alg, v), "algebra.json")
        files[f"P{_suffix(alg, v)}.json"] = rep_to_json(projective(alg, v), "algebra.json")
        files[f"S{_suffix(alg, v)}_right.json"] = rep_to_json(simple(opposite_algebra(alg), v), "algebra.json")
    for side, x in (("", alg), ("_right", opposite_algebra(alg))):
        u = x.vertices[0]
        v = next(w for w in x.vertices if not is_iso(projective_cover(simple(x, w)).pi))
        p, s = projective(x, u), simple(x, v)
        a = direct_sum(p, s)[0]
        files[f"A{side}.json"] = rep_to_json(a, "algebra.json")
        files[f"f{side}.json"] = map_to_json(map_sum(zero_map(p, p), identity(s)), f"A{side}.json", f"A{side}.json")
        files[f"g{side}.json"] = map_to_json(map_sum(identity(p), zero_map(s, s)), f"A{side}.json", f"A{side}.json")
    return files


def write_corpus(root: Path | str, prime: int = 101) -> list[Path]:
    written = []
    for name in NAMES:
        d = Path(root) / name
        d.mkdir(parents=True, exist_ok=True)
        for fname, obj in corpus_files(name, prime).items():
            write_json(d / fname, obj)
            written.append(d / fname)
    return written
