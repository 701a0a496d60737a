"""Reading and writing matrices as complex-literal CSV or string-encoded JSON.

Complex literals take the forms ``a``, ``bi``, ``a+bi`` and ``a-bi`` where
``a`` and ``b`` are decimals (``-1.5``, ``2e-3``) or rationals (``3/7``).
JSON files look like::

    {"rows": 2, "cols": 2, "data": [[["1", "0"], ["0", "1/2"]], ...]}

with every real and imaginary part a string, so exact values survive.
Writers emit a canonical form (shortest round-trip floats, reduced
fractions), so writing a parsed canonical file reproduces it byte for byte.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GenInverseError
from .numfield import ExactC, Mat


class MatrixParseError(GenInverseError, ValueError):
    """Malformed matrix file or complex literal."""


_REAL = r"(?:\d+/\d+|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
_SIGNED = rf"[+-]?{_REAL}"
_REAL_ONLY = re.compile(rf"^{_SIGNED}$")
_FORMS = (
    re.compile(rf"^(?P<re>{_SIGNED})$"),
    re.compile(rf"^(?P<im>{_SIGNED})i$"),
    re.compile(rf"^(?P<re>{_SIGNED})(?P<im>[+-]{_REAL})i$"),
)


@dataclass(frozen=True)
class Literal:
    """A parsed complex literal, kept as strings until a backend is chosen."""

    re: str
    im: str

    @property
    def rational(self) -> bool:
        return "/" in self.re or "/" in self.im


def _check_real(text: str) -> str:
    if not _REAL_ONLY.match(text):
        raise MatrixParseError(f"not a real number: {text!r}")
    if "/" in text and int(text.split("/")[1]) == 0:
        raise MatrixParseError(f"zero denominator in {text!r}")
    return text


def parse_literal(text: str) -> Literal:
    s = text.strip().replace(" ", "")
    for form in _FORMS:
        m = form.match(s)
        if m:
            parts = m.groupdict()
            return Literal(_check_real(parts.get("re") or "0"), _check_real(parts.get("im") or "0"))
    raise MatrixParseError(f"bad complex literal: {text!r}")


def _to_fraction(s: str) -> Fraction:
    return Fraction(s)


def _to_float(s: str) -> float:
    x = float(Fraction(s)) if "/" in s else float(s)
    if not math.isfinite(x):
        raise MatrixParseError(f"value out of floating range: {s!r}")
    return x


@dataclass(frozen=True)
class ParsedMatrix:
    """Literals of a matrix file, with the flag that any entry was rational."""

    entries: tuple

    @property
    def rational(self) -> bool:
        return any(e.rational for row in self.entries for e in row)

    @property
    def shape(self):
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def to_mat(self, exact: bool) -> Mat:
        rows, cols = self.shape
        if exact:
            data = [[ExactC(_to_fraction(e.re), _to_fraction(e.im)) for e in row] for row in self.entries]
            return Mat(data, exact=True) if rows and cols else Mat.zeros(rows, cols, exact=True)
        arr = np.array(
            [[complex(_to_float(e.re), _to_float(e.im)) for e in row] for row in self.entries],
            dtype=complex,
        ).reshape(rows, cols)
        return Mat(arr)


def _rectangular(rows) -> tuple:
    if not rows:
        raise MatrixParseError("matrix has no rows")
    width = len(rows[0])
    if width == 0:
        raise MatrixParseError("matrix has no columns")
    for n, row in enumerate(rows, 1):
        if len(row) != width:
            raise MatrixParseError(f"row {n} has {len(row)} entries, expected {width}")
    return tuple(tuple(r) for r in rows)


def parse_csv(text: str) -> ParsedMatrix:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([parse_literal(tok) for tok in line.split(",")])
    return ParsedMatrix(_rectangular(rows))


def _json_part(value, where) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise MatrixParseError(f"{where}: expected a string-encoded number")
    return _check_real(value.strip() if isinstance(value, str) else repr(value))


def parse_json(text: str) -> ParsedMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or not {"rows", "cols", "data"} <= obj.keys():
        raise MatrixParseError('JSON matrix needs "rows", "cols" and "data"')
    data = obj["data"]
    if not isinstance(data, list):
        raise MatrixParseError('"data" must be a list of rows')
    rows = []
    for r, row in enumerate(data):
        if not isinstance(row, list):
            raise MatrixParseError(f"row {r + 1} is not a list")
        out = []
        for c, cell in enumerate(row):
            where = f"entry ({r + 1},{c + 1})"
            if not (isinstance(cell, list) and len(cell) == 2):
                raise MatrixParseError(f'{where}: expected ["re", "im"]')
            out.append(Literal(_json_part(cell[0], where), _json_part(cell[1], where)))
        rows.append(out)
    parsed = ParsedMatrix(_rectangular(rows))
    if parsed.shape != (obj["rows"], obj["cols"]):
        raise MatrixParseError(
            f"declared shape ({obj['rows']},{obj['cols']}) does not match data {parsed.shape}"
        )
    return parsed


def parse_matrix(text: str) -> ParsedMatrix:
    """JSON when the text starts with ``{``, CSV otherwise."""
    return parse_json(text) if text.lstrip().startswith("{") else parse_csv(text)


def _fmt_real(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    x = float(x)
    return "0.0" if x == 0 and math.copysign(1.0, x) > 0 else repr(x)


def _parts(A: Mat):
    for row in A.array:
        if A.exact:
            yield [(_fmt_real(z.re), _fmt_real(z.im)) for z in row]
        else:
            yield [(_fmt_real(z.real), _fmt_real(z.imag)) for z in row]


def matrix_to_obj(A: Mat) -> dict:
    return {"rows": A.rows, "cols": A.cols, "data": [[list(p) for p in row] for row in _parts(A)]}


def to_json(A: Mat) -> str:
    return json.dumps(matrix_to_obj(A)) + "\n"


def _literal(re_s: str, im_s: str) -> str:
    if im_s in ("0", "0.0"):
        return re_s
    if re_s in ("0", "0.0"):
        return f"{im_s}i"
    sign = "" if im_s.startswith("-") else "+"
    return f"{re_s}{sign}{im_s}i"


def to_csv(A: Mat) -> str:
    return "".join(",".join(_literal(*p) for p in row) + "\n" for row in _parts(A))
