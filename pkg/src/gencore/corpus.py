"""Random test matrices with a prescribed core size and Drazin index.

Every matrix is built as ``P @ blockdiag(D, N) @ P^{-1}`` where ``D`` is
nonsingular and ``N`` is a direct sum of shift blocks, the largest of size
``k``.  The float generator bounds the conditioning of ``P`` and ``D``; the
exact generator uses unimodular integer ``P`` so ``A`` stays integral.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .factor import rank
from .numfield import ExactC, Mat, block_diag, inv


@dataclass(frozen=True)
class Sample:
    A: Mat
    r: int  # size of the nonsingular block, rk(A^k)
    k: int  # Drazin index
    label: str


def shift_blocks(sizes, exact=False):
    """Direct sum of upper shift matrices of the given sizes."""
    n = sum(sizes)
    N = np.zeros((n, n), dtype=object if exact else complex)
    at = 0
    for s in sizes:
        for i in range(s - 1):
            N[at + i, at + i + 1] = 1
        at += s
    if exact:
        return Mat([[ExactC(int(x)) for x in row] for row in N], exact=True) if n else Mat.zeros(0, 0, True)
    return Mat(N) if n else Mat.zeros(0, 0)


def _block_sizes(rng, total, k):
    """Random partition of ``total`` into parts ``<= k`` containing a ``k``."""
    if total == 0:
        return []
    sizes = [k]
    left = total - k
    while left:
        s = int(rng.integers(1, min(k, left) + 1))
        sizes.append(s)
        left -= s
    rng.shuffle(sizes)
    return sizes


def _unitary(rng, n, complex_=True):
    z = rng.standard_normal((n, n))
    if complex_:
        z = z + 1j * rng.standard_normal((n, n))
    q, rr = np.linalg.qr(z)
    d = np.diag(rr)
    return q * (d / np.abs(d))


def _conditioned(rng, n, lo, hi, complex_=True):
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    s = rng.uniform(lo, hi, n)
    return _unitary(rng, n, complex_) @ np.diag(s) @ _unitary(rng, n, complex_).conj().T


def pick_shape(rng, n_max=12, k_max=4):
    """Random ``(n, r, k)`` with ``r + k <= n`` and ``k = 0`` iff ``r = n``."""
    n = int(rng.integers(1, n_max + 1))
    k = int(rng.integers(0, min(k_max, n) + 1))
    if k == 0:
        return n, n, 0
    r = int(rng.integers(0, n - k + 1))
    return n, r, k


def random_float(rng, n, r, k, d_cond=10.0, p_cond=10.0, complex_=True) -> Sample:
    """Float sample; ``cond(D) <= d_cond`` and ``cond(P) <= p_cond``."""
    D = _conditioned(rng, r, 1.0, d_cond, complex_)
    N = shift_blocks(_block_sizes(rng, n - r, k)).array
    P = _conditioned(rng, n, 1.0, p_cond, complex_)
    core = np.zeros((n, n), dtype=complex)
    core[:r, :r] = D
    core[r:, r:] = N
    A = P @ core @ np.linalg.inv(P)
    return Sample(Mat(A), r, k, f"float n={n} r={r} k={k}")


def _unimodular(rng, n, gaussian):
    def entry():
        z = int(rng.integers(-2, 3))
        if gaussian and rng.random() < 0.5:
            return ExactC(z, int(rng.integers(-1, 2)))
        return ExactC(z)

    L = Mat.identity(n, exact=True).array.copy()
    U = Mat.identity(n, exact=True).array.copy()
    for i in range(n):
        for j in range(i):
            L[i, j] = entry()
            U[j, i] = entry()
    L, U = Mat(L, exact=True), Mat(U, exact=True)
    # unit-triangular factors have integral inverses
    return L @ U


def random_exact(rng, n, r, k, gaussian=False) -> Sample:
    """Exact sample with integer (or Gaussian integer) entries."""
    while True:
        D = Mat(
            [[ExactC(int(rng.integers(-3, 4)), int(rng.integers(-1, 2)) if gaussian else 0)
              for _ in range(r)] for _ in range(r)],
            exact=True,
        ) if r else Mat.zeros(0, 0, exact=True)
        if r == 0:
            break
        if rank(D) == r:
            break
    N = shift_blocks(_block_sizes(rng, n - r, k), exact=True)
    P = _unimodular(rng, n, gaussian)
    Pinv = inv(P)
    A = P @ block_diag(D, N) @ Pinv
    return Sample(A, r, k, f"exact n={n} r={r} k={k}{' gaussian' if gaussian else ''}")


def float_corpus(count, seed=0, n_max=12, k_max=4, d_cond=10.0):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n, r, k = pick_shape(rng, n_max, k_max)
        out.append(random_float(rng, n, r, k, d_cond=d_cond, complex_=bool(i % 2)))
    return out


def exact_corpus(count, seed=0, n_max=6, k_max=4):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n, r, k = pick_shape(rng, n_max, k_max)
        out.append(random_exact(rng, n, r, k, gaussian=bool(i % 3 == 2)))
    return out
