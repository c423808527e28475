"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``numpy`` integer arrays with entries reduced into
``[0, p)``; the field object carries ``p`` and all the arithmetic.  Every
routine is deterministic, and kernel bases follow one canonical convention
(free variables set to 1 one at a time, pivots back-solved) so coordinates
computed downstream are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

_SMALL = 100  # entries below which rref runs on Python lists
_INT64_MAX = 2**63 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime ``2 <= p < 2**31``."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not 2 <= self.p < 2**31:
            raise ValueError(f"prime must be an integer in [2, 2^31), got {self.p!r}")
        if not is_prime(int(self.p)):
            raise ValueError(f"{self.p} is not prime")

    # -- construction ----------------------------------------------------

    def array(self, data, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
        a = np.array(data, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        return a % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def random(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def inv_scalar(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, -1, self.p)

    # -- arithmetic ------------------------------------------------------

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``a @ b mod p`` without int64 overflow."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        inner = a.shape[1]
        if inner == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        sq = (self.p - 1) ** 2
        chunk = max(1, _INT64_MAX // max(sq, 1))
        if inner <= chunk:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, inner, chunk):
            out = (out + (a[:, s:s + chunk] @ b[s:s + chunk]) % self.p) % self.p
        return out

    def mul_chain(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return out

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # entries are < p < 2^31, so each product fits in int64
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = a[:, None, :, None] * b[None, :, None, :]
        return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]) % self.p

    # -- elimination -----------------------------------------------------

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, list[int], int]:
        """Reduced row echelon form; returns ``(reduced, pivots, rank)``."""
        r = np.array(m, dtype=np.int64) % self.p
        rows, cols = r.shape
        if rows * cols <= _SMALL:
            return self._rref_small(r)
        pivots: list[int] = []
        row = 0
        p = self.p
        for col in range(cols):
            if row >= rows:
                break
            nz = np.nonzero(r[row:, col])[0]
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            inv = pow(int(r[row, col]), -1, p)
            r[row] = (r[row] * inv) % p
            others = np.nonzero(r[:, col])[0]
            others = others[others != row]
            if others.size:
                factors = r[others, col].reshape(-1, 1)
                r[others] = (r[others] - (factors * r[row]) % p) % p
            pivots.append(col)
            row += 1
        return r, pivots, len(pivots)

    def _rref_small(self, m: np.ndarray) -> tuple[np.ndarray, list[int], int]:
        # plain Python lists beat numpy's per-call overhead on tiny matrices
        p = self.p
        rows, cols = m.shape
        r = m.tolist()
        pivots: list[int] = []
        row = 0
        for col in range(cols):
            if row >= rows:
                break
            piv = next((i for i in range(row, rows) if r[i][col]), None)
            if piv is None:
                continue
            r[row], r[piv] = r[piv], r[row]
            inv = pow(r[row][col], -1, p)
            pr = [(x * inv) % p for x in r[row]]
            r[row] = pr
            for i in range(rows):
                fac = r[i][col]
                if i != row and fac:
                    r[i] = [(x - fac * y) % p for x, y in zip(r[i], pr)]
            pivots.append(col)
            row += 1
        return np.array(r, dtype=np.int64).reshape(rows, cols), pivots, len(pivots)

    def rank(self, m: np.ndarray) -> int:
        m = np.asarray(m)
        if m.size == 0:
            return 0
        # rank of the thinner orientation is cheaper
        if m.shape[0] > m.shape[1]:
            m = m.T
        return self.rref(m)[2]

    def kernel_basis(self, m: np.ndarray, return_free: bool = False):
        """Columns spanning the null space of ``m`` in canonical form.

        Each column sets one free variable to 1 and the others to 0; the
        pivot variables are back-solved.  With ``return_free`` the free
        variable positions are returned too; coordinates of a null vector in
        this basis are then just its entries at those positions.
        """
        m = np.asarray(m, dtype=np.int64)
        cols = m.shape[1]
        if m.shape[0] == 0:
            return (self.eye(cols), list(range(cols))) if return_free else self.eye(cols)
        r, pivots, rank = self.rref(m)
        pivot_set = set(pivots)
        free = [c for c in range(cols) if c not in pivot_set]
        k = np.zeros((cols, len(free)), dtype=np.int64)
        if free:
            k[free, range(len(free))] = 1
            if pivots:
                k[np.ix_(pivots, range(len(free)))] = (-r[:rank][:, free]) % self.p
        return (k, free) if return_free else k

    def solve(self, m: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
        """Solve ``m @ x = b``; ``None`` when inconsistent.

        ``b`` may carry several right-hand sides as columns.  Free variables
        are set to zero.
        """
        m = np.asarray(m, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        vec = b.ndim == 1
        if vec:
            b = b.reshape(-1, 1)
        if b.shape[0] != m.shape[0]:
            raise ValueError(f"solve: {m.shape[0]} equations but right-hand side has {b.shape[0]} rows")
        n = m.shape[1]
        if m.shape[0] == 0:
            x = np.zeros((n, b.shape[1]), dtype=np.int64)
            return x.ravel() if vec else x
        r, pivots, rank = self.rref(np.hstack([m, b]))
        if pivots and pivots[-1] >= n:
            return None
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        for i, pc in enumerate(pivots):
            x[pc] = r[i, n:]
        return x.ravel() if vec else x

    def inverse(self, m: np.ndarray) -> np.ndarray:
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        x = self.solve(m, self.eye(n))
        if x is None:
            raise ValueError("matrix is singular")
        return x

    # -- subspaces -------------------------------------------------------

    def column_basis(self, m: np.ndarray) -> np.ndarray:
        """Canonical basis of the column space of ``m``.

        The result is the transpose of the nonzero rows of ``rref(m.T)``, so
        two matrices span the same space exactly when their canonical bases
        are equal.
        """
        m = np.asarray(m, dtype=np.int64)
        if m.shape[1] == 0 or m.shape[0] == 0:
            return np.zeros((m.shape[0], 0), dtype=np.int64)
        r, pivots, rank = self.rref(m.T)
        return np.ascontiguousarray(r[:rank].T)

    def intersect(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Canonical basis of colspan(a) ∩ colspan(b)."""
        if a.shape[1] == 0 or b.shape[1] == 0:
            return np.zeros((a.shape[0], 0), dtype=np.int64)
        k = self.kernel_basis(np.hstack([a, (-b) % self.p]))
        return self.column_basis(self.matmul(a, k[: a.shape[1]]))


@lru_cache(maxsize=None)
def _factor_cyclotomic_part(p: int, k: int) -> dict[int, int]:
    from sympy import cyclotomic_poly, factorint

    return factorint(int(cyclotomic_poly(k, p)))


def _factor_p_power_minus_one(p: int, delta: int) -> dict[int, int]:
    from sympy import divisors

    out: dict[int, int] = {}
    for k in divisors(delta):
        for q, e in _factor_cyclotomic_part(p, k).items():
            out[q] = out.get(q, 0) + e
    return out


def matrix_power(field: PrimeField, x: np.ndarray, n: int) -> np.ndarray:
    result = field.eye(x.shape[0])
    base = x
    while n > 0:
        if n & 1:
            result = field.matmul(result, base)
        n >>= 1
        if n:
            base = field.matmul(base, base)
    return result


def minimal_polynomial(field: PrimeField, x: np.ndarray) -> list[int]:
    """Coefficients (constant term first, monic) of the minimal polynomial of ``x``."""
    n = x.shape[0]
    powers = [field.eye(n).ravel()]
    cur = field.eye(n)
    while True:
        cur = field.matmul(cur, x)
        powers.append(cur.ravel())
        k = field.kernel_basis(np.column_stack(powers))
        if k.shape[1]:
            v = k[:, 0]
            lead = int(v[-1])
            return [int(c) * pow(lead, -1, field.p) % field.p for c in v]


def multiplicative_order(field: PrimeField, x: np.ndarray) -> int:
    """Order of an invertible matrix in GL_n(F_p).

    The order divides ``p^c * lcm(p^deg(g) - 1)`` over the irreducible factors
    ``g`` of the minimal polynomial (``p^c`` at least the largest
    multiplicity); that bound is then reduced prime by prime.
    """
    x = np.ascontiguousarray(np.asarray(x, dtype=np.int64) % field.p)
    return _order_cached(field.p, x.shape[0], x.tobytes())


@lru_cache(maxsize=4096)
def _order_cached(p: int, n: int, raw: bytes) -> int:
    from sympy import Poly, symbols

    field = PrimeField(p)
    x = np.frombuffer(raw, dtype=np.int64).reshape(n, n)
    if n == 0:
        return 1
    coeffs = minimal_polynomial(field, x)
    t = symbols("t")
    poly = Poly(list(reversed(coeffs)), t, modulus=p)
    _, factors = poly.factor_list()
    if any(g.degree() == 1 and g.eval(0) % p == 0 for g, _ in factors):
        raise ValueError("matrix is singular")
    primes: dict[int, int] = {}
    max_mult = max(e for _, e in factors)
    c = 0
    while p**c < max_mult:
        c += 1
    if c:
        primes[p] = c
    for g, _ in factors:
        for q, e in _factor_p_power_minus_one(p, g.degree()).items():
            primes[q] = max(primes.get(q, 0), e)
    order = 1
    for q, e in primes.items():
        order *= q**e
    ident = field.eye(n)
    if not np.array_equal(matrix_power(field, x, order), ident):  # pragma: no cover
        raise AssertionError("order bound failed")
    for q in sorted(primes):
        while order % q == 0 and np.array_equal(matrix_power(field, x, order // q), ident):
            order //= q
    return order


def pivot_rows(basis: np.ndarray) -> list[int]:
    """Pivot rows of a canonical column basis (first nonzero of each column)."""
    return [int(np.nonzero(basis[:, j])[0][0]) for j in range(basis.shape[1])]


@dataclass(frozen=True)
class Quotient:
    """F_p^n modulo a subspace, with canonical coordinates.

    ``proj`` (k x n) sends a vector to its class; ``section`` (n x k) picks
    the representative supported on the non-pivot coordinates of the
    subspace's canonical basis.
    """

    n: int
    sub: np.ndarray
    proj: np.ndarray
    section: np.ndarray

    @property
    def dim(self) -> int:
        return self.proj.shape[0]


def quotient(field: PrimeField, n: int, spanning: np.ndarray) -> Quotient:
    sub = field.column_basis(spanning) if spanning.size else np.zeros((n, 0), dtype=np.int64)
    piv = pivot_rows(sub)
    piv_set = set(piv)
    keep = [i for i in range(n) if i not in piv_set]
    reducer = field.eye(n)
    if piv:
        reducer = (reducer - field.matmul(sub, reducer[piv])) % field.p
    proj = np.ascontiguousarray(reducer[keep])
    section = np.ascontiguousarray(field.eye(n)[:, keep])
    return Quotient(n, sub, proj, section)


def coords_in(field: PrimeField, basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Coordinates of the columns of ``vectors`` in ``basis``; raises if outside."""
    x = field.solve(basis, vectors)
    if x is None:
        raise ValueError("vector not in the span of the basis")
    return x


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
