"""Scalar fields and the dense matrix type.

Two scalar realizations are supported:

* the approximate field, stored as ``numpy.complex128``;
* the exact field :class:`ExactC`, a complex number whose real and
  imaginary parts are :class:`fractions.Fraction` values.

:class:`Mat` wraps a read-only numpy array of either kind.  Every routine
further up the package is written once against ``Mat`` and dispatches on
``Mat.exact`` only where the algorithms genuinely differ (rank decisions,
factorizations), so the exact backend can serve as an oracle for the float
one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
import math

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

EPS = float(np.finfo(np.float64).eps)

# Default margin applied to rank decisions on powers and full-rank chains,
# where rounding noise reaches several times ``max(rows, cols) * EPS``.
STRICT_MARGIN = 1e3


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)  # exact binary value of the float
    return Fraction(x)


class ExactC:
    """Complex number with arbitrary-precision rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, complex):
            re, im = re.real, re.imag + im
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _new(cls, re, im):
        z = object.__new__(cls)
        z.re = re
        z.im = im
        return z

    @classmethod
    def coerce(cls, x):
        if isinstance(x, ExactC):
            return x
        if isinstance(x, (complex, np.complexfloating)):
            x = complex(x)
            return cls._new(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, (np.floating, np.integer)):
            x = x.item()
        return cls._new(_frac(x), Fraction(0))

    def __add__(self, other):
        if not isinstance(other, ExactC):
            if isinstance(other, (int, Fraction)):
                return ExactC._new(self.re + other, self.im)
            other = ExactC.coerce(other)
        return ExactC._new(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = ExactC.coerce(other)
        return ExactC._new(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ExactC.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExactC):
            if isinstance(other, (int, Fraction)):
                return ExactC._new(self.re * other, self.im * other)
            other = ExactC.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return ExactC._new(a * c, b)
        return ExactC._new(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactC.coerce(other)
        c, d = other.re, other.im
        den = c * c + d * d
        if not den:
            raise ZeroDivisionError("division by exact zero")
        a, b = self.re, self.im
        return ExactC._new((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        return ExactC.coerce(other) / self

    def __neg__(self):
        return ExactC._new(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return ExactC._new(self.re, -self.im)

    def abs2(self):
        """Squared modulus, exactly."""
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(self.abs2())

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, ExactC):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational, float, complex)):
            other = ExactC.coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactC({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


@dataclass(frozen=True)
class Tolerance:
    """Thresholds for the approximate backend; the exact backend ignores them.

    ``None`` selects the size-dependent default ``max(rows, cols) * EPS``.
    """

    rank_rel: float | None = None
    eq_rel: float = 1e-10
    eig_zero_rel: float | None = None

    def __post_init__(self):
        for name in ("rank_rel", "eq_rel", "eig_zero_rel"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")

    def rank_rel_for(self, shape) -> float:
        if self.rank_rel is not None:
            return self.rank_rel
        return max(max(shape), 1) * EPS

    def strict_rank_rel_for(self, shape) -> float:
        """Cutoff for index and chain decisions; an explicit ``rank_rel`` wins."""
        if self.rank_rel is not None:
            return self.rank_rel
        return STRICT_MARGIN * max(max(shape), 1) * EPS

    def eig_zero_rel_for(self, shape) -> float:
        if self.eig_zero_rel is not None:
            return self.eig_zero_rel
        return max(max(shape), 1) * EPS


DEFAULT_TOL = Tolerance()


def _to_exact_array(data):
    arr = np.asarray(data, dtype=object)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got ndim={arr.ndim}")
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = ExactC.coerce(x) if not isinstance(x, str) else ExactC(Fraction(x))
    return out


def _to_float_array(data):
    arr = np.asarray(data)
    if arr.dtype == object:
        arr = np.vectorize(complex, otypes=[np.complex128])(arr) if arr.size else arr.astype(np.complex128)
    arr = np.array(arr, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got ndim={arr.ndim}")
    return arr


class Mat:
    """Immutable dense complex matrix over the float or the exact field."""

    __slots__ = ("_a", "exact")

    def __init__(self, data, exact: bool | None = None):
        if isinstance(data, Mat):
            if exact is None or exact == data.exact:
                self._a, self.exact = data._a, data.exact
                return
            data = data._a
        if exact is None:
            probe = np.asarray(data, dtype=object)
            exact = probe.size > 0 and all(
                isinstance(x, (ExactC, Fraction, int)) for x in probe.flat
            ) and any(isinstance(x, (ExactC, Fraction)) for x in probe.flat)
        arr = _to_exact_array(data) if exact else _to_float_array(data)
        arr.flags.writeable = False
        self._a = arr
        self.exact = bool(exact)

    @classmethod
    def _wrap(cls, arr, exact):
        m = object.__new__(cls)
        if exact and arr.size and not isinstance(arr.flat[0], ExactC):
            arr = _to_exact_array(arr)
        arr.flags.writeable = False
        m._a = arr
        m.exact = exact
        return m

    # -- construction helpers -------------------------------------------
    @classmethod
    def identity(cls, n, exact=False):
        if exact:
            arr = np.empty((n, n), dtype=object)
            one, zero = ExactC(1), ExactC(0)
            for i in range(n):
                for j in range(n):
                    arr[i, j] = one if i == j else zero
            return cls._wrap(arr, True)
        return cls._wrap(np.eye(n, dtype=np.complex128), False)

    @classmethod
    def zeros(cls, rows, cols, exact=False):
        if exact:
            arr = np.empty((rows, cols), dtype=object)
            arr.fill(ExactC(0))
            return cls._wrap(arr, True)
        return cls._wrap(np.zeros((rows, cols), dtype=np.complex128), False)

    def like(self, data):
        """Build a matrix on the same backend as ``self``."""
        return Mat(data, exact=self.exact)

    # -- shape and access ------------------------------------------------
    @property
    def shape(self):
        return self._a.shape

    @property
    def rows(self):
        return self._a.shape[0]

    @property
    def cols(self):
        return self._a.shape[1]

    @property
    def entries(self):
        return tuple(self._a.flat)

    @property
    def array(self):
        """Read-only view of the underlying numpy array."""
        return self._a

    @property
    def is_square(self):
        return self.rows == self.cols

    def __getitem__(self, key):
        out = self._a[key]
        if isinstance(out, np.ndarray):
            if out.ndim == 2:
                return Mat._wrap(out.copy(), self.exact)
            return out.copy()
        return out

    # -- arithmetic ------------------------------------------------------
    def _check_backend(self, other):
        if self.exact != other.exact:
            raise TypeError("cannot mix exact and float matrices; convert one first")

    def __matmul__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        self._check_backend(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.exact:
            if self.cols == 0:
                return Mat.zeros(self.rows, other.cols, exact=True)
            return Mat._wrap(np.dot(self._a, other._a), True)
        return Mat._wrap(self._a @ other._a, False)

    def __add__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        self._check_backend(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return Mat._wrap(self._a + other._a, self.exact)

    def __sub__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        self._check_backend(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return Mat._wrap(self._a - other._a, self.exact)

    def __neg__(self):
        return Mat._wrap(-self._a, self.exact)

    def __mul__(self, scalar):
        if isinstance(scalar, Mat):
            return NotImplemented
        if self.exact:
            s = ExactC.coerce(scalar)
            return Mat._wrap(self._a * s, True)
        return Mat._wrap(self._a * complex(scalar), False)

    __rmul__ = __mul__

    def adjoint(self):
        """Conjugate transpose."""
        if self.exact:
            out = np.empty((self.cols, self.rows), dtype=object)
            for (i, j), z in np.ndenumerate(self._a):
                out[j, i] = z.conjugate()
            return Mat._wrap(out, True)
        return Mat._wrap(self._a.conj().T.copy(), False)

    @property
    def H(self):
        return self.adjoint()

    @property
    def T(self):
        return Mat._wrap(self._a.T.copy(), self.exact)

    # -- norms and predicates -------------------------------------------
    def fro2(self):
        """Squared Frobenius norm (exact ``Fraction`` on the exact backend)."""
        if self.exact:
            return sum((z.abs2() for z in self._a.flat), Fraction(0))
        return float(np.vdot(self._a, self._a).real)

    def fro_norm(self) -> float:
        if self.exact:
            return math.sqrt(self.fro2())
        return float(np.linalg.norm(self._a))

    def is_zero(self):
        if self.exact:
            return not any(self._a.flat)
        return not np.any(self._a)

    def to_float(self):
        if not self.exact:
            return self
        return Mat(self._a, exact=False)

    def to_exact(self):
        if self.exact:
            return self
        return Mat(self._a, exact=True)

    def to_numpy(self):
        """A writable complex128 copy."""
        return np.array(self.to_float()._a, dtype=np.complex128)

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (
            self.exact == other.exact
            and self.shape == other.shape
            and bool(np.all(self._a == other._a))
        )

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        rows = [[str(z) if self.exact else repr(complex(z)) for z in row] for row in self._a]
        return f"Mat({rows}, {kind})"


def _same_backend(*mats):
    exact = mats[0].exact
    for m in mats[1:]:
        if m.exact != exact:
            raise TypeError("cannot mix exact and float matrices")
    return exact


def hstack(*mats):
    exact = _same_backend(*mats)
    return Mat._wrap(np.hstack([m.array for m in mats]), exact)


def vstack(*mats):
    exact = _same_backend(*mats)
    return Mat._wrap(np.vstack([m.array for m in mats]), exact)


def block_diag(*mats):
    exact = _same_backend(*mats)
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = Mat.zeros(rows, cols, exact=exact).array.copy()
    r = c = 0
    for m in mats:
        out[r:r + m.rows, c:c + m.cols] = m.array
        r += m.rows
        c += m.cols
    return Mat._wrap(out, exact)


def matmul(A: Mat, B: Mat) -> Mat:
    return A @ B


def adjoint(A: Mat) -> Mat:
    return A.adjoint()


def matpow(A: Mat, p: int) -> Mat:
    """``A**p`` for a square ``A`` and ``p >= 0`` by binary powering."""
    if not A.is_square:
        raise DimensionMismatch(f"power of a non-square {A.shape} matrix")
    if p < 0:
        raise ValueError("negative powers need an inverse; use inv() first")
    result = Mat.identity(A.rows, exact=A.exact)
    base = A
    first = True
    while p:
        if p & 1:
            result = base if first else result @ base
            first = False
        p >>= 1
        if p:
            base = base @ base
    return result


def _exact_inverse(A: Mat) -> Mat:
    n = A.rows
    work = [list(row) + [ExactC(int(i == j)) for j in range(n)] for i, row in enumerate(A.array)]
    for col in range(n):
        best, best_row = Fraction(0), -1
        for r in range(col, n):
            size = work[r][col].abs2()
            if size > best:
                best, best_row = size, r
        if best_row < 0:
            raise SingularMatrix("matrix is singular")
        work[col], work[best_row] = work[best_row], work[col]
        pivot_row = work[col]
        piv = pivot_row[col]
        pivot_row = [z / piv for z in pivot_row]
        work[col] = pivot_row
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [a - f * b for a, b in zip(work[r], pivot_row)]
    return Mat._wrap(np.array([row[n:] for row in work], dtype=object).reshape(n, n), True)


def inv(A: Mat) -> Mat:
    """Ordinary inverse; raises :class:`SingularMatrix` when none exists."""
    if not A.is_square:
        raise DimensionMismatch(f"inverse of a non-square {A.shape} matrix")
    if A.rows == 0:
        return A
    if A.exact:
        return _exact_inverse(A)
    try:
        out = np.linalg.inv(A.array)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from None
    if not np.all(np.isfinite(out)):
        raise SingularMatrix("inverse overflowed")
    return Mat._wrap(out, False)


def approx_eq(A: Mat, B: Mat, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Equality within ``tol.eq_rel`` (float) or entrywise identity (exact).

    A float/exact pair is compared in floating point.
    """
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot compare {A.shape} with {B.shape}")
    if A.exact and B.exact:
        return bool(np.all(A.array == B.array))
    A, B = A.to_float(), B.to_float()
    diff = np.linalg.norm(A.array - B.array)
    scale = max(1.0, np.linalg.norm(A.array), np.linalg.norm(B.array))
    return bool(diff <= tol.eq_rel * scale)


def residual(A: Mat, B: Mat):
    """Frobenius distance; exact backend returns the exact squared distance's root as float,
    and exactly ``0.0`` when the matrices agree."""
    d = A - B
    if d.exact:
        return 0.0 if d.is_zero() else d.fro_norm()
    return d.fro_norm()
