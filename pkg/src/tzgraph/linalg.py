"""Dense linear algebra and sampling utilities shared by the solvers.

The LU factorization tracks the permutation parity so the sign of the
determinant comes out of the same pivoted elimination that solves the
Newton systems.  A pivot below ``rtol * ||A||_inf`` marks the matrix as
numerically singular instead of dividing through by noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_RTOL = 1e-12


@dataclass(frozen=True)
class LUFactors:
    lu: np.ndarray
    perm: np.ndarray
    parity: int
    singular: bool


def lu_factor(a: np.ndarray, pivot_rtol: float = PIVOT_RTOL) -> LUFactors:
    """Partial-pivoted LU of a square matrix with a relative pivot floor."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = float(np.max(np.sum(np.abs(a), axis=1))) if n else 0.0
    threshold = pivot_rtol * scale
    perm = np.arange(n)
    parity = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= threshold:
            return LUFactors(a, perm, parity, True)
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            parity = -parity
        a[k + 1 :, k] /= a[k, k]
        a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :])
    return LUFactors(a, perm, parity, False)


def lu_solve(factors: LUFactors, b: np.ndarray) -> np.ndarray:
    """Solve A x = b given the pivoted factorization of A."""
    if factors.singular:
        raise np.linalg.LinAlgError("matrix is numerically singular")
    lu = factors.lu
    n = lu.shape[0]
    x = np.asarray(b, dtype=float)[factors.perm].copy()
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1 :] @ x[i + 1 :]) / lu[i, i]
    return x


def det_sign(a: np.ndarray, pivot_rtol: float = PIVOT_RTOL) -> int:
    """Sign of det(A) via pivoted LU: +1, -1, or 0 when degenerate."""
    factors = lu_factor(a, pivot_rtol)
    if factors.singular:
        return 0
    sign = factors.parity
    for d in np.diag(factors.lu):
        if d < 0.0:
            sign = -sign
    return int(sign)


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes if p * p <= candidate):
            primes.append(candidate)
        candidate += 1
    return primes


def _van_der_corput(index: int, base: int) -> float:
    x = 0.0
    f = 1.0 / base
    while index > 0:
        x += (index % base) * f
        index //= base
        f /= base
    return x


def halton_ball(dim: int, count: int, radius: float, seed: int = 0) -> np.ndarray:
    """Low-discrepancy points in the sup-norm ball of the given radius.

    Deterministic for fixed ``(dim, count, radius, seed)``; the seed shifts
    the Halton index window so distinct seeds draw distinct point sets.
    """
    if count <= 0:
        return np.zeros((0, dim))
    bases = first_primes(dim)
    offset = 1 + seed * count
    points = np.empty((count, dim))
    for j, base in enumerate(bases):
        points[:, j] = [_van_der_corput(offset + i, base) for i in range(count)]
    return radius * (2.0 * points - 1.0)
