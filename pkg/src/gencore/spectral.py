"""Drazin index, core-nilpotent splitting and the Hartwig-Spindelböck form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    BackendUnsupported,
    ConvergenceFailure,
    NilpotentInput,
    RankDecisionAmbiguous,
    ZeroMatrix,
)
from .factor import (
    column_basis,
    count_above,
    full_rank_chain,
    moore_penrose,
    nullspace,
    rank,
    singular_values,
    svd,
)
from .numfield import DEFAULT_TOL, Mat, Tolerance, hstack, inv, matpow


@dataclass(frozen=True)
class IndexInfo:
    """Drazin index ``k`` with the ranks of ``A^0, A^1, ..., A^{k+1}``.

    Float results also carry orthonormal bases of ``R(A^0), ..., R(A^k)``.
    """

    k: int
    rank_chain: tuple
    range_bases: tuple = field(default=(), compare=False, repr=False)

    @property
    def core_rank(self) -> int:
        """``rk(A^k)``: the size of the nonsingular block."""
        return self.rank_chain[self.k]

    @property
    def nilpotent(self) -> bool:
        return self.core_rank == 0


def _power_ranks(A: Mat, tol: Tolerance):
    n = A.rows
    ranks = [n]
    if A.exact:
        P = Mat.identity(n, exact=True)
        while True:
            P = P @ A
            ranks.append(rank(P))
            if ranks[-1] == ranks[-2]:
                return ranks, ()
    # R(A^p) = A R(A^{p-1}), so rk(A^p) = rk(A Q) for an orthonormal basis Q
    # of R(A^{p-1}).  Forming A^p itself would square the dynamic range at
    # every step; A Q keeps every decision at the scale of ||A||.
    a = A.array
    norm2 = float(singular_values(A)[0]) if n else 0.0
    cutoff = tol.strict_rank_rel_for(A.shape) * norm2
    Q = np.eye(n, dtype=complex)
    bases = [Mat(Q)]
    while True:
        B = a @ Q
        if B.shape[1] == 0 or norm2 == 0:
            r = 0
        else:
            try:
                u, sv, _ = np.linalg.svd(B, full_matrices=False)
            except np.linalg.LinAlgError as exc:
                raise ConvergenceFailure(f"SVD did not converge: {exc}") from None
            r = count_above(sv, cutoff, strict=True)
        ranks.append(r)
        if r == ranks[-2]:
            return ranks, tuple(bases)
        Q = u[:, :r] if r else np.zeros((n, 0), dtype=complex)
        bases.append(Mat(Q))
        if len(ranks) > n + 2:
            raise RankDecisionAmbiguous("rank chain of powers failed to stabilize")


def index(A: Mat, tol: Tolerance = DEFAULT_TOL) -> IndexInfo:
    """Drazin index, certified by two routes.

    The ranks of successive powers give ``k`` directly; the full-rank chain
    gives it from its terminal block.  Disagreement means a rank decision
    went wrong and raises :class:`RankDecisionAmbiguous`.
    """
    if not A.is_square:
        raise ValueError(f"index is defined for square matrices, got {A.shape}")
    ranks, bases = _power_ranks(A, tol)
    k = len(ranks) - 2
    if not A.is_zero() and A.rows:
        chain_k = full_rank_chain(A, tol).index
        if chain_k != k:
            raise RankDecisionAmbiguous(
                f"rank chain of powers gives index {k}, full-rank chain gives {chain_k}"
            )
    return IndexInfo(k, tuple(ranks), bases)


def power_range_projector(A: Mat, p: int, tol: Tolerance = DEFAULT_TOL, info: IndexInfo | None = None) -> Mat:
    """Orthogonal projector ``A^p (A^p)^+`` onto ``R(A^p)``.

    Float input uses the orthonormal range bases found while computing the
    index, which stay accurate when ``A^p`` itself is badly conditioned.
    """
    info = info or index(A, tol)
    if A.exact:
        Ap = matpow(A, p)
        return Ap @ moore_penrose(Ap, tol)
    if not info.range_bases:
        info = index(A, tol)
    Q = info.range_bases[min(p, info.k)]
    return Q @ Q.H


@dataclass(frozen=True)
class CoreNilpotent:
    """``A = P @ blockdiag(D, Nnil) @ P^{-1}`` with ``D`` nonsingular, ``Nnil`` nilpotent."""

    P: Mat
    Pinv: Mat
    D: Mat
    Nnil: Mat
    k: int

    @property
    def r(self) -> int:
        return self.D.rows

    @property
    def P1(self) -> Mat:
        return self.P[:, : self.r]

    @property
    def Q1(self) -> Mat:
        return self.Pinv[: self.r, :]


def core_nilpotent(A: Mat, tol: Tolerance = DEFAULT_TOL, info: IndexInfo | None = None) -> CoreNilpotent:
    """Core-nilpotent decomposition.

    Exact: ``P = [basis of R(A^k) | basis of ker(A^k)]``.  Float: a complex
    Schur form reordered so the ``rk(A^k)`` largest eigenvalues lead, then
    decoupled with a Sylvester solve.
    """
    if info is None:
        info = index(A, tol)
    if info.nilpotent:
        raise NilpotentInput("nilpotent matrix: the core block is empty")
    r, k = info.core_rank, info.k
    if A.exact:
        Ak = matpow(A, k)
        P = hstack(column_basis(Ak), nullspace(Ak))
        Pinv = inv(P)
        D = Pinv[:r, :] @ A @ P[:, :r]
        Nnil = Pinv[r:, :] @ A @ P[:, r:]
        return CoreNilpotent(P, Pinv, D, Nnil, k)
    return _schur_split(A, r, k, tol)


def _schur_split(A: Mat, r: int, k: int, tol: Tolerance) -> CoreNilpotent:
    n = A.rows
    a = A.array
    eigs = np.linalg.eigvals(a)
    mags = np.sort(np.abs(eigs))[::-1]
    norm2 = float(singular_values(A)[0])
    if mags[r - 1] <= tol.eig_zero_rel_for(A.shape) * norm2:
        raise RankDecisionAmbiguous(
            f"{r} eigenvalues expected away from zero, smallest is {mags[r - 1]:.3e}"
        )
    cut = mags[r - 1] / 2 if r == n or mags[r] == 0 else float(np.sqrt(mags[r - 1] * mags[r]))
    try:
        T, Z, sdim = scipy.linalg.schur(a, output="complex", sort=lambda z: abs(z) > cut)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"Schur reordering failed: {exc}") from None
    if sdim != r:
        raise RankDecisionAmbiguous(f"Schur reordering kept {sdim} eigenvalues, expected {r}")
    T11, T12, T22 = T[:r, :r], T[:r, r:], T[r:, r:]
    if r < n:
        try:
            Y = scipy.linalg.solve_sylvester(T11, -T22, -T12)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise ConvergenceFailure(f"Sylvester solve failed: {exc}") from None
    else:
        Y = np.zeros((r, 0), dtype=complex)
    S = np.eye(n, dtype=complex)
    S[:r, r:] = Y
    Sinv = np.eye(n, dtype=complex)
    Sinv[:r, r:] = -Y
    P = Mat(Z @ S)
    Pinv = Mat(Sinv @ Z.conj().T)
    return CoreNilpotent(P, Pinv, Mat(T11), Mat(T22), k)


@dataclass(frozen=True)
class HSForm:
    """``A = U @ [[B, T], [0, 0]] @ U^*`` with ``U`` unitary and ``[B T]`` of full row rank."""

    U: Mat
    B: Mat
    T: Mat

    @property
    def r(self) -> int:
        return self.B.rows


def hs_form(A: Mat, tol: Tolerance = DEFAULT_TOL, r: int | None = None) -> HSForm:
    """Unitary similarity whose first ``rk(A)`` columns span ``R(A)``.

    ``U`` comes from the full SVD of ``A``; pass ``r`` when the rank is
    already known.
    """
    if A.exact:
        raise BackendUnsupported("orthonormal bases are irrational in general; HS form is float-only")
    if not A.is_square:
        raise ValueError("HS form needs a square matrix")
    U, s, _ = svd(A, full_matrices=True)
    if not s or s[0] == 0:
        raise ZeroMatrix("HS form of the zero matrix is not defined")
    if r is None:
        r = count_above(s, tol.rank_rel_for(A.shape) * s[0])
    Ur, U2 = U[:, :r], U[:, r:]
    top = Ur.H @ A
    return HSForm(U, top @ Ur, top @ U2)
