"""Residual checks of candidate inverses against their defining equations.

Every entry records ``||lhs - rhs||_F`` scaled by ``max(1, ||A||_F^d)``.
``d`` is the degree of the heavier side when ``A`` counts +1 and each
inverse-type factor (``X``, ``A^D``, ``(A^p)^+``) counts -1, floored at 0;
so ``AXA = A`` has ``d = 1`` and ``XA^{k+1} = A^k`` has ``d = k``.  Exact inputs
give residual exactly ``0.0`` or a positive value, and pass only on ``0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import DimensionMismatch, GenInverseError
from .factor import count_above, moore_penrose, rank, singular_values
from .numfield import DEFAULT_TOL, Mat, Tolerance, matpow, residual


@dataclass(frozen=True)
class DefinitionTag:
    """Which definition to check.  ``params`` carries (i, m) or (j, m)."""

    name: str
    params: tuple = ()

    KINDS = (
        "MoorePenrose", "Group", "Drazin", "Core", "CoreEP", "DMP",
        "ImCore", "JmCore", "Outer", "OneThree", "TwoThree", "OneTwoThree",
    )

    def __post_init__(self):
        if self.name not in self.KINDS:
            raise ValueError(f"unknown definition {self.name!r}")
        if self.name in ("ImCore", "JmCore") and len(self.params) != 2:
            raise ValueError(f"{self.name} needs two parameters")

    def __str__(self):
        if self.params:
            return f"{self.name}({', '.join(map(str, self.params))})"
        return self.name


MOORE_PENROSE = DefinitionTag("MoorePenrose")
GROUP = DefinitionTag("Group")
DRAZIN = DefinitionTag("Drazin")
CORE = DefinitionTag("Core")
CORE_EP = DefinitionTag("CoreEP")
DMP = DefinitionTag("DMP")
OUTER = DefinitionTag("Outer")
ONE_THREE = DefinitionTag("OneThree")
TWO_THREE = DefinitionTag("TwoThree")
ONE_TWO_THREE = DefinitionTag("OneTwoThree")


def im_core_tag(i, m):
    return DefinitionTag("ImCore", (i, m))


def jm_core_tag(j, m):
    return DefinitionTag("JmCore", (j, m))


@dataclass(frozen=True)
class Entry:
    label: str
    residual: float
    raw: float
    scale: float
    passed: bool
    degree: int = 0


@dataclass
class VerifyReport:
    tag: str
    entries: list = field(default_factory=list)
    note: str | None = None

    @property
    def overall(self) -> bool:
        return all(e.passed for e in self.entries)

    def entry(self, label) -> Entry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)

    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)

    def to_dict(self):
        out = {
            "tag": self.tag,
            "overall": self.overall,
            "entries": [
                {"equation": e.label, "residual": e.residual, "pass": e.passed}
                for e in self.entries
            ],
        }
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.tag}: {'PASS' if self.overall else 'FAIL'}"]
        if self.note:
            lines.append(f"  note: {self.note}")
        for e in self.entries:
            lines.append(f"  {'ok  ' if e.passed else 'FAIL'} {e.label:<36} {e.residual:.3e}")
        return "\n".join(lines)


class _Checker:
    """Accumulates report entries for one ``(A, X)`` pair."""

    def __init__(self, A: Mat, tol: Tolerance, tag: str):
        self.A = A
        self.tol = tol
        self.norm = A.fro_norm()
        self.report = VerifyReport(tag)

    def eq(self, label, lhs: Mat, rhs: Mat, degree: int):
        raw = residual(lhs, rhs)
        scale = max(1.0, self.norm ** degree)
        if lhs.exact and rhs.exact:
            passed = raw == 0.0
        else:
            passed = raw / scale <= self.tol.eq_rel
        self.report.entries.append(Entry(label, raw / scale, raw, scale, passed, degree))
        return passed

    def flag(self, label, ok: bool):
        self.report.entries.append(Entry(label, 0.0 if ok else 1.0, 0.0 if ok else 1.0, 1.0, ok))
        return ok


def _penrose(c: _Checker, X: Mat, which):
    A = c.A
    AX, XA = A @ X, X @ A
    if 1 in which:
        c.eq("AXA = A", AX @ A, A, 1)
    if 2 in which:
        c.eq("XAX = X", XA @ X, X, 0)
    if 3 in which:
        c.eq("(AX)* = AX", AX.H, AX, 0)
    if 4 in which:
        c.eq("(XA)* = XA", XA.H, XA, 0)


def _index_info(A: Mat, tol: Tolerance):
    from .spectral import index

    return index(A, tol)


def _drazin_of(A: Mat, tol: Tolerance, info=None) -> Mat:
    from .classical import drazin

    return drazin(A, tol, info=info)


def _power_rank(info, p: int) -> int:
    chain = info.rank_chain
    return chain[p] if p < len(chain) else info.core_rank


def _pinv_power(A: Mat, p: int, tol: Tolerance, info) -> Mat:
    # a numerically vanishing power must not have its rounding noise inverted,
    # so the rank comes from the certified chain rather than a fresh cutoff
    return moore_penrose(matpow(A, p), tol, rank=_power_rank(info, p))


def _projector(A: Mat, p: int, tol: Tolerance, info) -> Mat:
    from .spectral import power_range_projector

    return power_range_projector(A, p, tol, info)


def _projector_eq(c: _Checker, label, P: Mat, Q: Mat):
    c.eq(label, P, Q, 0)


def verify(A: Mat, X: Mat, tag: DefinitionTag, tol: Tolerance = DEFAULT_TOL) -> VerifyReport:
    """Evaluate every defining equation of ``tag`` for the pair ``(A, X)``.

    ``A^D`` and powers' pseudoinverses needed by a definition are recomputed
    internally.
    """
    if X.shape != (A.cols, A.rows):
        raise DimensionMismatch(f"candidate {X.shape} does not match A {A.shape}")
    if A.exact != X.exact:
        X = X.to_exact() if A.exact else X.to_float()
    c = _Checker(A, tol, str(tag))
    name = tag.name
    if name == "MoorePenrose":
        _penrose(c, X, (1, 2, 3, 4))
    elif name == "Outer":
        _penrose(c, X, (2,))
    elif name == "OneThree":
        _penrose(c, X, (1, 3))
    elif name == "TwoThree":
        _penrose(c, X, (2, 3))
    elif name == "OneTwoThree":
        _penrose(c, X, (1, 2, 3))
    else:
        if not A.is_square:
            raise DimensionMismatch(f"{name} needs a square matrix, got {A.shape}")
        _square_definition(c, X, tag)
    return c.report


def _square_definition(c: _Checker, X: Mat, tag: DefinitionTag):
    A, tol, name = c.A, c.tol, tag.name
    info = _index_info(A, tol)
    if name in ("Group", "Core"):
        k = info.k
        if not c.flag("ind(A) <= 1", k <= 1):
            c.report.note = f"ind(A) = {k}"
            return
    if name in ("Drazin", "Group"):
        k = info.k if name == "Drazin" else 1
        Ak = matpow(A, k)
        c.eq(f"XA^{k + 1} = A^{k}", X @ Ak @ A, Ak, k)
        c.eq("XAX = X", X @ A @ X, X, 0)
        c.eq("AX = XA", A @ X, X @ A, 0)
    elif name == "Core":
        # (AX)* = AX, XA^2 = A, AX^2 = X
        AX = A @ X
        c.eq("(AX)* = AX", AX.H, AX, 0)
        c.eq("XA^2 = A", X @ A @ A, A, 1)
        c.eq("AX^2 = X", AX @ X, X, 0)
    elif name == "CoreEP":
        k = info.k
        c.eq("XAX = X", X @ A @ X, X, 0)
        proj = _projector(A, k, tol, info)
        # R(X) = R(X*) = R(A^k) through the orthogonal projectors
        Xp = moore_penrose(X, tol, rank=None if X.exact else info.core_rank)
        _projector_eq(c, "XX+ = A^k(A^k)+", X @ Xp, proj)
        _projector_eq(c, "X+X = A^k(A^k)+", Xp @ X, proj)
    elif name == "DMP":
        k = info.k
        D = _drazin_of(A, tol, info)
        Ak = matpow(A, k)
        c.eq("XAX = X", X @ A @ X, X, 0)
        c.eq("XA = A^D A", X @ A, D @ A, 0)
        c.eq(f"A^{k}X = A^{k}A+", Ak @ X, Ak @ _pinv_power(A, 1, tol, info), max(k - 1, 0))
    elif name == "ImCore":
        i, m = tag.params
        D = _drazin_of(A, tol, info)
        c.eq("X = A^D A X", D @ A @ X, X, 0)
        proj = _projector(A, i, tol, info)
        c.eq(f"A^{m}X = A^{i}(A^{i})+", matpow(A, m) @ X, proj, max(m - 1, 0))
    elif name == "JmCore":
        j, m = tag.params
        D = _drazin_of(A, tol, info)
        Am = matpow(A, m)
        c.eq("X = A^D A X", D @ A @ X, X, 0)
        c.eq(f"A^{m}X = A^{m}(A^{j})+", Am @ X, Am @ _pinv_power(A, j, tol, info), max(m - 1, m - j, 0))
    else:  # pragma: no cover - guarded by DefinitionTag
        raise ValueError(name)


def check_lemma24_25(
    A: Mat, X: Mat, k: int, m_max: int, tol: Tolerance = DEFAULT_TOL
) -> VerifyReport:
    """Power identities implied by ``AX^{k+1} = X^k`` and ``XA^{k+1} = A^k``.

    The two hypotheses are checked first; if either fails the report says
    so and stops there.
    """
    c = _Checker(A, tol, f"power identities k={k} m<={m_max}")
    pa = {p: matpow(A, p) for p in range(0, 2 * k + m_max + 1)}
    px = {p: matpow(X, p) for p in range(0, 2 * k + m_max + 2)}
    h1 = c.eq("hyp: AX^(k+1) = X^k", A @ px[k + 1], px[k], 0)
    h2 = c.eq("hyp: XA^(k+1) = A^k", X @ pa[k + 1], pa[k], k)
    if not (h1 and h2):
        c.report.note = "hypotheses failed"
        return c.report
    for m in range(1, m_max + 1):
        c.eq(f"(1) A^k = X^m A^(k+m) [m={m}]", px[m] @ pa[k + m], pa[k], k)
        c.eq(f"(2) X^k = A^m X^(k+m) [m={m}]", pa[m] @ px[k + m], px[k], 0)
        c.eq(f"(3) A^kX^k = A^(k+m)X^(k+m) [m={m}]", pa[k] @ px[k], pa[k + m] @ px[k + m], 0)
        c.eq(f"(4) X^kA^k = X^(k+m)A^(k+m) [m={m}]", px[k] @ pa[k], px[k + m] @ pa[k + m], 0)
        c.eq(f"(5) A^k = A^mX^mA^k [m={m}]", pa[m] @ px[m] @ pa[k], pa[k], k)
        c.eq(f"(6) X^k = X^mA^mX^k [m={m}]", px[m] @ pa[m] @ px[k], px[k], 0)
    c.eq("A^D = X^(k+1) A^k", px[k + 1] @ pa[k], _drazin_of(A, tol), 0)
    return c.report


def is_ep(A: Mat, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``R(A) = R(A*)``, tested as ``AA^+ = A^+A``."""
    from .numfield import approx_eq

    Ap = moore_penrose(A, tol)
    return approx_eq(A @ Ap, Ap @ A, tol)


def is_projector_onto_power_range(Q: Mat, A: Mat, p: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Orthogonal projector onto ``R(A^p)``: idempotent, Hermitian, fixes ``A^p``, right rank."""
    from .numfield import approx_eq

    if Q.shape != A.shape:
        return False
    Ap = matpow(A, p)
    try:
        target = _power_rank(_index_info(A, tol), p)
        if not (approx_eq(Q @ Q, Q, tol) and approx_eq(Q.H, Q, tol) and approx_eq(Q @ Ap, Ap, tol)):
            return False
        # an orthogonal projector has singular values 0 and 1 only
        r = rank(Q) if Q.exact else count_above(singular_values(Q), 0.5)
        return r == target
    except GenInverseError:
        return False
