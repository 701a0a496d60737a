"""The ⟨i,m⟩-core and (j,m)-core inverses and the identities tying them together.

Both are defined by a two-equation system in ``X``::

    ⟨i,m⟩:  X = A^D A X,  A^m X = A^i (A^i)^+
    (j,m):  X = A^D A X,  A^m X = A^m (A^j)^+

The first system is solvable exactly when ``i >= ind(A)``, with solution
``(A^D)^m A^i (A^i)^+``.  The second has no such clean criterion, so its
only possible solution ``A^D A (A^j)^+`` is substituted back and accepted
when it satisfies both equations.  Results come back as
:class:`GenCoreResult`; call :meth:`GenCoreResult.require` to turn an
inconsistent system into an :class:`Inconsistent` exception.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classical import Algorithm, core_ep, core_ep_power, dmp, drazin, inverse_power, power_pinv
from .errors import Inconsistent, RankDecisionAmbiguous
from .numfield import DEFAULT_TOL, Mat, Tolerance, approx_eq, matpow
from .spectral import IndexInfo, index, power_range_projector
from .verify import im_core_tag, jm_core_tag, verify


def _positive(name, value):
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class ImCoreParams:
    i: int
    m: int

    def __post_init__(self):
        _positive("i", self.i)
        _positive("m", self.m)


@dataclass(frozen=True)
class JmCoreParams:
    j: int
    m: int

    def __post_init__(self):
        _positive("j", self.j)
        _positive("m", self.m)


@dataclass(frozen=True)
class GenCoreResult:
    """Outcome of solving one of the two systems.

    ``inverse`` is ``None`` exactly when ``consistent`` is false.  ``witness``
    says which condition decided consistency, and ``residuals`` maps each
    defining equation to the residual of the substituted candidate.
    """

    inverse: Mat | None
    consistent: bool
    witness: str | None = None
    residuals: dict = field(default_factory=dict)

    def require(self) -> Mat:
        if not self.consistent:
            raise Inconsistent(self.witness or "system is inconsistent", self.witness)
        return self.inverse


def _residuals(A, X, tag, tol):
    return {e.label: e.residual for e in verify(A, X, tag, tol).entries}


def _square(A: Mat):
    if not A.is_square:
        raise ValueError(f"expected a square matrix, got {A.shape}")


def im_core(
    A: Mat,
    p: ImCoreParams,
    tol: Tolerance = DEFAULT_TOL,
    alg: Algorithm = Algorithm.DEFINITION,
    info: IndexInfo | None = None,
) -> GenCoreResult:
    """⟨i,m⟩-core inverse ``(A^D)^m A^i (A^i)^+``, consistent iff ``i >= ind(A)``.

    ``alg`` picks the route (see :func:`gencore.classical.core_ep_power`);
    routes other than the definition use ``i = ind(A)``, which gives the
    same matrix.  An inconsistent result still reports the residuals of the
    formula candidate, showing which equation it breaks.
    """
    _square(A)
    info = info or index(A, tol)
    i, m, k = p.i, p.m, info.k
    tag = im_core_tag(i, m)
    if i < k:
        D = drazin(A, tol, info=info)
        cand = matpow(D, m) @ power_range_projector(A, i, tol, info)
        return GenCoreResult(
            None, False, f"i={i} is below ind(A)={k}", _residuals(A, cand, tag, tol)
        )
    X = core_ep_power(A, m, tol, alg, info, i=i)
    return GenCoreResult(X, True, f"i={i} >= ind(A)={k}", _residuals(A, X, tag, tol))


def jm_core(
    A: Mat,
    p: JmCoreParams,
    tol: Tolerance = DEFAULT_TOL,
    info: IndexInfo | None = None,
) -> GenCoreResult:
    """(j,m)-core inverse ``A^D A (A^j)^+``, accepted only if it solves the system.

    Any solution must equal that candidate (multiply ``A^m X = ...`` on the
    left by ``(A^D)^m``), so substitution decides consistency.  Nonsingular
    input gives ``A^{-j}``.
    """
    _square(A)
    info = info or index(A, tol)
    j, m, k = p.j, p.m, info.k
    tag = jm_core_tag(j, m)
    if k == 0:
        X = inverse_power(A, j)
        return GenCoreResult(X, True, "A is nonsingular", _residuals(A, X, tag, tol))
    D = drazin(A, tol, info=info)
    cand = D @ A @ power_pinv(A, j, tol, info)
    report = verify(A, cand, tag, tol)
    res = {e.label: e.residual for e in report.entries}
    if not report.overall:
        failed = ", ".join(e.label for e in report.entries if not e.passed)
        return GenCoreResult(None, False, f"candidate A^D A (A^{j})^+ fails {failed}", res)
    if k > max(j, m):
        raise RankDecisionAmbiguous(
            f"system solved although ind(A)={k} exceeds max(j, m)={max(j, m)}"
        )
    why = f"m={m} >= ind(A)={k}" if m >= k else f"candidate satisfies the system with m={m} < ind(A)={k}"
    return GenCoreResult(cand, True, why, res)


def im_core_index_invariance_check(A: Mat, i: int, m: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``A^⊕_{i,m} = A^⊕_{k,m}`` for every ``i >= k = ind(A)``."""
    info = index(A, tol)
    if i < info.k:
        raise ValueError(f"i={i} is below ind(A)={info.k}")
    X = im_core(A, ImCoreParams(i, m), tol, info=info).require()
    Y = core_ep_power(A, m, tol, Algorithm.DEFINITION, info, i=info.k)
    return approx_eq(X, Y, tol)


def duality_check(A: Mat, m: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``A^⊕_{k,m} = A^⊖_{m,k}`` for ``m >= k``; ``k`` is taken as 1 for nonsingular ``A``."""
    info = index(A, tol)
    k = max(info.k, 1)
    if m < k:
        raise ValueError(f"m={m} is below ind(A)={info.k}")
    X = im_core(A, ImCoreParams(k, m), tol, info=info).require()
    Y = jm_core(A, JmCoreParams(m, k), tol, info=info).require()
    return approx_eq(X, Y, tol)


def dmp_coincidence(A: Mat, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``A^⊖_{1,k}`` equals the DMP inverse (``A^{-1}`` when ``A`` is nonsingular)."""
    info = index(A, tol)
    X = jm_core(A, JmCoreParams(1, max(info.k, 1)), tol, info=info).require()
    return approx_eq(X, dmp(A, tol, info=info), tol)


def coreep_coincidence(A: Mat, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``A^⊕_{k,1}`` equals the core-EP inverse."""
    info = index(A, tol)
    X = im_core(A, ImCoreParams(max(info.k, 1), 1), tol, info=info).require()
    return approx_eq(X, core_ep(A, tol, info=info), tol)


def jk_from_dmp_coreep(A: Mat, tol: Tolerance = DEFAULT_TOL) -> Mat:
    """``A^{D,+} (A^D)^{k-1} A X`` with ``X`` the core-EP inverse; equals ``A^⊖_{k,k}``.

    Needs ``ind(A) >= 1``.
    """
    info = index(A, tol)
    k = info.k
    if k == 0:
        raise ValueError("A is nonsingular; the formula needs ind(A) >= 1")
    D = drazin(A, tol, info=info)
    return dmp(A, tol, info=info) @ matpow(D, k - 1) @ A @ core_ep(A, tol, info=info)
