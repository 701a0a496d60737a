"""Rank decisions, full-rank factorizations and the Moore-Penrose inverse.

Float matrices go through the SVD.  Exact matrices go through Gauss-Jordan
elimination with the largest-modulus pivot in each column, which keeps every
intermediate quantity a Gaussian rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import (
    BackendUnsupported,
    ConvergenceFailure,
    RankDecisionAmbiguous,
    SingularGram,
    SingularMatrix,
    ZeroMatrix,
)
from .numfield import DEFAULT_TOL, EPS, ExactC, Mat, Tolerance, inv

# A singular value above the cutoff but within this factor of it makes a rank
# decision ambiguous in the strict paths (index, full-rank chain).  Rounding
# noise routinely reaches a sizeable fraction of the cutoff, so values below
# it are always read as zero.
AMBIGUITY_BAND = 100.0


def svd(A: Mat, full_matrices: bool = False):
    """Return ``(U, sigma, V)`` with ``A = U @ diag(sigma) @ V.H``."""
    if A.exact:
        raise BackendUnsupported("singular values are irrational in general; use elimination")
    try:
        u, s, vh = np.linalg.svd(A.array, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from None
    return Mat(u), [float(x) for x in s], Mat(vh.conj().T)


def singular_values(A: Mat) -> np.ndarray:
    if A.exact:
        A = A.to_float()
    if A.array.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(A.array, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from None


def count_above(sigma, cutoff: float, strict: bool = False) -> int:
    """Number of singular values above ``cutoff``.

    With ``strict=True`` a value kept by the cutoff but lying within
    ``AMBIGUITY_BAND`` of it raises :class:`RankDecisionAmbiguous`.
    """
    sigma = np.asarray(sigma, dtype=float)
    r = int(np.count_nonzero(sigma > cutoff))
    if strict and cutoff > 0:
        near = (sigma > cutoff) & (sigma <= cutoff * AMBIGUITY_BAND)
        if np.any(near):
            raise RankDecisionAmbiguous(
                f"singular value(s) {sigma[near].tolist()} too close to cutoff {cutoff:.3e}"
            )
    return r


# -- exact elimination ----------------------------------------------------

def rref(A: Mat):
    """Reduced row echelon form of an exact matrix.

    Returns ``(R, pivots)`` where ``R`` holds the nonzero rows (a ``Mat`` of
    shape ``(len(pivots), cols)``) and ``pivots`` the pivot column indices.
    Columns are scanned left to right; within a column the row with the
    largest modulus is chosen (lowest row index on ties).
    """
    if not A.exact:
        raise BackendUnsupported("rref is exact-only; float rank goes through the SVD")
    m, n = A.shape
    work = [list(row) for row in A.array]
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        best, best_row = Fraction(0), -1
        for r in range(row, m):
            size = work[r][col].abs2()
            if size > best:
                best, best_row = size, r
        if best_row < 0:
            continue
        work[row], work[best_row] = work[best_row], work[row]
        piv = work[row][col]
        prow = [z / piv for z in work[row]]
        work[row] = prow
        for r in range(m):
            if r != row:
                f = work[r][col]
                if f:
                    work[r] = [a - f * b for a, b in zip(work[r], prow)]
        pivots.append(col)
        row += 1
    R = np.empty((len(pivots), n), dtype=object)
    for i in range(len(pivots)):
        R[i, :] = work[i]
    return Mat._wrap(R, True), pivots


def nullspace(A: Mat, tol: Tolerance = DEFAULT_TOL) -> Mat:
    """Basis of ker(A) as columns (exact: from the RREF; float: from the SVD)."""
    n = A.cols
    if A.exact:
        R, pivots = rref(A)
        free = [c for c in range(n) if c not in set(pivots)]
        basis = np.empty((n, len(free)), dtype=object)
        basis.fill(ExactC(0))
        for j, f in enumerate(free):
            basis[f, j] = ExactC(1)
            for i, p in enumerate(pivots):
                basis[p, j] = -R.array[i, f]
        return Mat._wrap(basis, True)
    U, s, V = svd(A, full_matrices=True)
    cutoff = tol.rank_rel_for(A.shape) * (s[0] if s else 0.0)
    r = count_above(s, cutoff)
    return V[:, r:]


def column_basis(A: Mat, tol: Tolerance = DEFAULT_TOL) -> Mat:
    """Basis of R(A) as columns (exact: pivot columns; float: orthonormal)."""
    if A.exact:
        _, pivots = rref(A)
        return A[:, pivots]
    U, s, _ = svd(A)
    cutoff = tol.rank_rel_for(A.shape) * (s[0] if s else 0.0)
    return U[:, :count_above(s, cutoff)]


def rank(A: Mat, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank (float) or exact pivot count (exact)."""
    if A.rows == 0 or A.cols == 0:
        return 0
    if A.exact:
        if A.is_zero():
            return 0
        return len(rref(A)[1])
    s = singular_values(A)
    return count_above(s, tol.rank_rel_for(A.shape) * s[0])


# -- full-rank factorizations ---------------------------------------------

@dataclass(frozen=True)
class FullRankFactorization:
    """``A = E @ F`` with ``E`` of full column rank and ``F`` of full row rank."""

    E: Mat
    F: Mat
    r: int

    def product(self) -> Mat:
        return self.E @ self.F


def _exact_frf(A: Mat) -> FullRankFactorization:
    R, pivots = rref(A)
    if not pivots:
        raise ZeroMatrix("the zero matrix has no full-rank factorization")
    return FullRankFactorization(A[:, pivots], R, len(pivots))


def _float_frf(A: Mat, cutoff: float, strict: bool = False) -> FullRankFactorization:
    U, s, V = svd(A)
    r = count_above(s, cutoff, strict=strict)
    if r == 0:
        raise ZeroMatrix("the zero matrix has no full-rank factorization")
    E = Mat(U.array[:, :r] * np.asarray(s[:r]))
    return FullRankFactorization(E, V[:, :r].H, r)


def full_rank_factorize(A: Mat, tol: Tolerance = DEFAULT_TOL) -> FullRankFactorization:
    """Deterministic full-rank factorization.

    Exact: ``E`` is the pivot columns of ``A`` and ``F`` the nonzero rows of
    its RREF.  Float: ``E = U_r diag(sigma_r)``, ``F = V_r^*``.
    """
    if A.exact:
        return _exact_frf(A)
    s = singular_values(A)
    if s.size == 0 or s[0] == 0:
        raise ZeroMatrix("the zero matrix has no full-rank factorization")
    return _float_frf(A, tol.rank_rel_for(A.shape) * s[0])


class Terminal(Enum):
    NONSINGULAR = "nonsingular"
    ZERO = "zero"


@dataclass(frozen=True)
class FullRankChain:
    """Iterated factorizations ``G_l B_l = B_{l+1} G_{l+1}``.

    ``M = B_1 ... B_k``, ``N = G_k ... G_1`` and ``L = G_k B_k`` so that
    ``A^k = M N`` and ``N M = L^k``.
    """

    factors: tuple
    M: Mat
    N: Mat
    L: Mat
    terminal: Terminal
    nonsingular_input: bool

    @property
    def length(self) -> int:
        return len(self.factors)

    @property
    def index(self) -> int:
        """Drazin index certified by the chain (0 for a nonsingular input)."""
        k = self.length
        if self.terminal is Terminal.ZERO:
            return k + 1
        if k == 1 and self.nonsingular_input:
            return 0
        return k


def full_rank_chain(A: Mat, tol: Tolerance = DEFAULT_TOL) -> FullRankChain:
    """Build the chain until ``G_k B_k`` is nonsingular or zero.

    Float decisions use one absolute cutoff, ``strict_rank_rel * ||A||_2``,
    for every level; values too close to it raise :class:`RankDecisionAmbiguous`.
    """
    if not A.is_square:
        raise ValueError("the full-rank chain needs a square matrix")
    n = A.rows
    if A.exact:
        if A.is_zero():
            raise ZeroMatrix("the zero matrix has no full-rank chain")
        frf, size_rank = _exact_frf, rank

        def is_zero(X):
            return X.is_zero()
    else:
        s = singular_values(A)
        if s.size == 0 or s[0] == 0:
            raise ZeroMatrix("the zero matrix has no full-rank chain")
        cutoff = tol.strict_rank_rel_for(A.shape) * s[0]
        zero_cut = tol.strict_rank_rel_for(A.shape) * A.fro_norm()

        def frf(X):
            return _float_frf(X, cutoff, strict=True)

        def is_zero(X):
            return X.fro_norm() <= zero_cut

        def size_rank(X):
            return count_above(singular_values(X), cutoff, strict=True)

    first = frf(A)
    factors = [(first.E, first.F)]
    nonsingular_input = first.r == n
    while True:
        B, G = factors[-1]
        L = G @ B
        if is_zero(L):
            terminal = Terminal.ZERO
            break
        if size_rank(L) == L.rows:
            terminal = Terminal.NONSINGULAR
            break
        if len(factors) >= n:
            raise RuntimeError(f"full-rank chain exceeded depth {n}; rank decisions are inconsistent")
        nxt = frf(L)
        factors.append((nxt.E, nxt.F))
    M = factors[0][0]
    N = factors[0][1]
    for B, G in factors[1:]:
        M = M @ B
        N = G @ N
    return FullRankChain(tuple(factors), M, N, L, terminal, nonsingular_input)


# -- Moore-Penrose ----------------------------------------------------------

def _checked_inv(G: Mat) -> Mat:
    try:
        Gi = inv(G)
    except SingularMatrix:
        raise SingularGram("Gram matrix of the factorization is singular") from None
    if not G.exact and G.rows and np.linalg.cond(G.array) > 1.0 / (100 * EPS):
        raise SingularGram("Gram matrix of the factorization is numerically singular")
    return Gi


def pinv_product_formula(frf: FullRankFactorization) -> Mat:
    """``F^* (F F^*)^{-1} (E^* E)^{-1} E^*``."""
    E, F = frf.E, frf.F
    Fh, Eh = F.H, E.H
    return Fh @ _checked_inv(F @ Fh) @ _checked_inv(Eh @ E) @ Eh


def moore_penrose(
    A: Mat, tol: Tolerance = DEFAULT_TOL, method: str | None = None, rank: int | None = None
) -> Mat:
    """Moore-Penrose inverse.

    ``method`` is ``"svd"`` (float default) or ``"product"`` (exact default,
    also available for float).  A float caller that already knows the rank
    (for example ``rk(A^k)`` from :func:`gencore.spectral.index`) passes it as
    ``rank`` to truncate the SVD there instead of re-deciding it.
    """
    if method is None:
        method = "product" if A.exact else "svd"
    if A.rows == 0 or A.cols == 0 or A.is_zero() or rank == 0:
        return Mat.zeros(A.cols, A.rows, exact=A.exact)
    if method == "product":
        if A.exact:
            return pinv_product_formula(_exact_frf(A))
        if rank is None:
            return pinv_product_formula(full_rank_factorize(A, tol))
        U, s, V = svd(A)
        E = Mat(U.array[:, :rank] * np.asarray(s[:rank]))
        return pinv_product_formula(FullRankFactorization(E, V[:, :rank].H, rank))
    if method != "svd":
        raise ValueError(f"unknown Moore-Penrose method {method!r}")
    U, s, V = svd(A)
    r = rank if rank is not None else count_above(s, tol.rank_rel_for(A.shape) * s[0])
    if r == 0:
        return Mat.zeros(A.cols, A.rows)
    Vr = V.array[:, :r] / np.asarray(s[:r])
    return Mat(Vr @ U.array[:, :r].conj().T)
