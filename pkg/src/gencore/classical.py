"""Drazin, group, core, core-EP and DMP inverses.

Each inverse can be reached by more than one algorithm so results can be
cross-checked:

``RANK_CHAIN``
    products of the full-rank chain, ``A^D = M L^{-k-1} N``.
``CORE_NILPOTENT``
    the split ``A = P blockdiag(D, N) P^{-1}``, ``A^D = P_1 D^{-1} Q_1``.
``HS_RECURSIVE``
    recursion on the leading block of the Hartwig-Spindelböck form (float only).
``DEFINITION``
    the closed formula built from ``A^D`` and a Moore-Penrose inverse.

:func:`core_ep_power` evaluates ``(A^D)^m A^k (A^k)^+`` by any of the four
routes; the core-EP inverse is its ``m = 1`` case and the new
⟨i,m⟩-core inverse in :mod:`gencore.imjm` is built on it.
"""

from __future__ import annotations

from enum import Enum

from .errors import IndexTooLarge, RankDecisionAmbiguous, BackendUnsupported
from .factor import Terminal, full_rank_chain, moore_penrose
from .numfield import DEFAULT_TOL, Mat, Tolerance, block_diag, inv, matpow
from .spectral import IndexInfo, core_nilpotent, hs_form, index, power_range_projector


class Algorithm(Enum):
    RANK_CHAIN = "rank-chain"
    CORE_NILPOTENT = "core-nilpotent"
    HS_RECURSIVE = "hs-recursive"
    DEFINITION = "definition"


DRAZIN_ALGORITHMS = (Algorithm.RANK_CHAIN, Algorithm.CORE_NILPOTENT)
CORE_EP_ALGORITHMS = tuple(Algorithm)


def _require_square(A: Mat):
    if not A.is_square:
        raise ValueError(f"expected a square matrix, got {A.shape}")


def _zero_like(A: Mat) -> Mat:
    return Mat.zeros(A.rows, A.cols, exact=A.exact)


def inverse_power(L: Mat, p: int) -> Mat:
    """``L^{-p}`` for nonsingular ``L`` and ``p >= 0``."""
    return matpow(inv(L), p)


def drazin(
    A: Mat,
    tol: Tolerance = DEFAULT_TOL,
    alg: Algorithm = Algorithm.RANK_CHAIN,
    info: IndexInfo | None = None,
) -> Mat:
    """Drazin inverse ``A^D``; the zero matrix for nilpotent ``A``."""
    _require_square(A)
    alg = Algorithm(alg)
    if A.rows == 0 or A.is_zero():
        return _zero_like(A)
    if alg is Algorithm.RANK_CHAIN:
        chain = full_rank_chain(A, tol)
        if chain.terminal is Terminal.ZERO:
            return _zero_like(A)
        return chain.M @ inverse_power(chain.L, chain.length + 1) @ chain.N
    if alg is Algorithm.CORE_NILPOTENT:
        info = info or index(A, tol)
        if info.nilpotent:
            return _zero_like(A)
        cn = core_nilpotent(A, tol, info)
        return cn.P1 @ inv(cn.D) @ cn.Q1
    raise ValueError(f"drazin supports {[a.value for a in DRAZIN_ALGORITHMS]}, not {alg.value}")


def group_inverse(A: Mat, tol: Tolerance = DEFAULT_TOL, info: IndexInfo | None = None) -> Mat:
    """``A^#``; raises :class:`IndexTooLarge` when ``ind(A) >= 2``."""
    _require_square(A)
    info = info or index(A, tol)
    if info.k > 1:
        raise IndexTooLarge(info.k)
    return drazin(A, tol, info=info)


def core_inverse(A: Mat, tol: Tolerance = DEFAULT_TOL, info: IndexInfo | None = None) -> Mat:
    """Core inverse ``A^# A A^+``; needs ``ind(A) <= 1``."""
    _require_square(A)
    info = info or index(A, tol)
    if info.k > 1:
        raise IndexTooLarge(info.k)
    G = drazin(A, tol, info=info)
    return G @ A @ moore_penrose(A, tol, rank=info.rank_chain[1])


def power_pinv(A: Mat, p: int, tol: Tolerance, info: IndexInfo) -> Mat:
    """``(A^p)^+`` truncated at the rank certified by ``info``."""
    r = info.rank_chain[p] if p < len(info.rank_chain) else info.core_rank
    return moore_penrose(matpow(A, p), tol, rank=r)


def _hs_recursive(A: Mat, m: int, tol: Tolerance, info: IndexInfo) -> Mat:
    if A.exact:
        raise BackendUnsupported("the HS recursion needs unitary similarities; use the float backend")
    if info.k == 0:
        return inverse_power(A, m)
    if info.nilpotent:
        return _zero_like(A)
    hs = hs_form(A, tol, r=info.rank_chain[1])
    sub = index(hs.B, tol)
    if sub.k >= info.k:
        raise RankDecisionAmbiguous(
            f"leading HS block has index {sub.k}, expected less than {info.k}"
        )
    inner = _hs_recursive(hs.B, m, tol, sub)
    pad = Mat.zeros(A.rows - hs.r, A.rows - hs.r)
    return hs.U @ block_diag(inner, pad) @ hs.U.H


def core_ep_power(
    A: Mat,
    m: int = 1,
    tol: Tolerance = DEFAULT_TOL,
    alg: Algorithm = Algorithm.DEFINITION,
    info: IndexInfo | None = None,
    i: int | None = None,
) -> Mat:
    """``(A^D)^m A^i (A^i)^+`` for ``i >= ind(A)`` (``i`` defaults to the index).

    Only the definition route reads ``i``; the others evaluate the
    ``i = ind(A)`` form, which is the same matrix for every ``i >= ind(A)``.
    """
    _require_square(A)
    alg = Algorithm(alg)
    if m < 1:
        raise ValueError("m must be a positive integer")
    info = info or index(A, tol)
    if i is None:
        i = info.k
    if i < info.k:
        raise ValueError(f"i={i} is below ind(A)={info.k}")
    if info.nilpotent:
        return _zero_like(A)
    if info.k == 0 and alg is not Algorithm.HS_RECURSIVE:
        return inverse_power(A, m)
    if alg is Algorithm.DEFINITION:
        D = drazin(A, tol, Algorithm.RANK_CHAIN, info)
        return matpow(D, m) @ power_range_projector(A, i, tol, info)
    if alg is Algorithm.RANK_CHAIN:
        chain = full_rank_chain(A, tol)
        M = chain.M
        return M @ inverse_power(chain.L, m) @ moore_penrose(M, tol, rank=M.cols)
    if alg is Algorithm.CORE_NILPOTENT:
        cn = core_nilpotent(A, tol, info)
        P1 = cn.P1
        return P1 @ inverse_power(cn.D, m) @ moore_penrose(P1, tol, rank=cn.r)
    return _hs_recursive(A, m, tol, info)


def core_ep(
    A: Mat,
    tol: Tolerance = DEFAULT_TOL,
    alg: Algorithm = Algorithm.DEFINITION,
    info: IndexInfo | None = None,
) -> Mat:
    """Core-EP inverse ``A^D A^k (A^k)^+``; zero for nilpotent ``A``."""
    return core_ep_power(A, 1, tol, alg, info)


def dmp(
    A: Mat,
    tol: Tolerance = DEFAULT_TOL,
    alg: Algorithm = Algorithm.RANK_CHAIN,
    info: IndexInfo | None = None,
) -> Mat:
    """DMP inverse ``A^D A A^+``; ``alg`` selects the Drazin route."""
    _require_square(A)
    info = info or index(A, tol)
    if info.nilpotent:
        return _zero_like(A)
    if info.k == 0:
        return inv(A)
    D = drazin(A, tol, alg, info)
    return D @ A @ moore_penrose(A, tol, rank=info.rank_chain[1])
