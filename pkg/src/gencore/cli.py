"""Command-line front end.

Exit codes::

    0  success
    2  the requested inverse does not exist (inconsistent system, index too large)
    3  bad input: unparsable matrix, wrong shape, bad flags
    4  numerical failure: ambiguous rank decision, non-convergence
    5  verify found a failing equation
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import fixtures
from .classical import Algorithm, core_ep, core_inverse, dmp, drazin, group_inverse
from .errors import (
    BackendUnsupported,
    ConvergenceFailure,
    DimensionMismatch,
    GenInverseError,
    Inconsistent,
    IndexTooLarge,
    NilpotentInput,
    RankDecisionAmbiguous,
    SingularGram,
    SingularMatrix,
)
from .factor import moore_penrose
from .imjm import ImCoreParams, JmCoreParams, im_core, jm_core
from .matio import MatrixParseError, ParsedMatrix, matrix_to_obj, parse_matrix, to_csv, to_json
from .numfield import Mat, Tolerance
from .spectral import index
from .verify import (
    CORE,
    CORE_EP,
    DMP,
    DRAZIN,
    GROUP,
    MOORE_PENROSE,
    ONE_THREE,
    ONE_TWO_THREE,
    OUTER,
    TWO_THREE,
    im_core_tag,
    jm_core_tag,
    verify,
)

EXIT_OK = 0
EXIT_INCONSISTENT = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4
EXIT_VERIFY = 5

BACKEND_ENV = "GENCORE_DEFAULT_BACKEND"

INVERSES = ("mp", "group", "drazin", "core", "core-ep", "dmp", "im-core", "jm-core")
VERIFY_ONLY = ("outer", "one-three", "two-three", "one-two-three")
ALGORITHMS = tuple(a.value for a in Algorithm)

_FIXED_TAGS = {
    "mp": MOORE_PENROSE,
    "group": GROUP,
    "drazin": DRAZIN,
    "core": CORE,
    "core-ep": CORE_EP,
    "dmp": DMP,
    "outer": OUTER,
    "one-three": ONE_THREE,
    "two-three": TWO_THREE,
    "one-two-three": ONE_TWO_THREE,
}


class UsageError(GenInverseError, ValueError):
    """Flags that parse but do not make a valid request."""


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (Inconsistent, IndexTooLarge)):
        return EXIT_INCONSISTENT
    if isinstance(
        exc,
        (ConvergenceFailure, RankDecisionAmbiguous, SingularGram, SingularMatrix, NilpotentInput),
    ):
        return EXIT_NUMERIC
    if isinstance(exc, (MatrixParseError, DimensionMismatch, BackendUnsupported, UsageError,
                        KeyError, ValueError, OSError)):
        return EXIT_INPUT
    return EXIT_NUMERIC


@dataclass
class RunConfig:
    inverse: str
    i: int | None = None
    m: int | None = None
    j: int | None = None
    backend: str | None = None
    algorithm: str | None = None
    tol: Tolerance = field(default_factory=Tolerance)

    def params(self) -> dict:
        if self.inverse == "im-core":
            return {"i": self.i, "m": self.m}
        if self.inverse == "jm-core":
            return {"j": self.j, "m": self.m}
        return {}

    def check(self):
        need = {"im-core": ("i", "m"), "jm-core": ("j", "m")}.get(self.inverse, ())
        for name in need:
            if getattr(self, name) is None:
                raise UsageError(f"--inverse {self.inverse} needs --{name}")
        for name in ("i", "m", "j"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise UsageError(f"--{name} must be a positive integer")

    def tag(self):
        if self.inverse == "im-core":
            return im_core_tag(self.i, self.m)
        if self.inverse == "jm-core":
            return jm_core_tag(self.j, self.m)
        return _FIXED_TAGS[self.inverse]


@dataclass(frozen=True)
class Source:
    """A matrix still in literal form plus whether it came from a fixture."""

    parsed: ParsedMatrix | None = None
    fixture: str | None = None
    label: str = ""

    def load(self, exact: bool) -> Mat:
        if self.fixture is not None:
            return fixtures.get(self.fixture, exact=exact)
        return self.parsed.to_mat(exact)

    @property
    def rational(self) -> bool:
        return self.fixture is not None or self.parsed.rational


def read_source(path: str | None, fixture: str | None) -> Source:
    if fixture is not None:
        if fixture not in fixtures.FIXTURES:
            raise UsageError(f"unknown fixture {fixture!r}; known: {', '.join(fixtures.FIXTURES)}")
        return Source(fixture=fixture, label=fixture)
    if path is None:
        raise UsageError("give --input FILE or --fixture NAME")
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return Source(parsed=parse_matrix(text), label=path)


def choose_backend(flag: str | None, sources) -> str:
    """``--backend`` wins, then rational input or fixtures force exact, then the env var."""
    if flag:
        return flag
    if any(s.rational for s in sources):
        return "exact"
    env = os.environ.get(BACKEND_ENV, "").strip().lower()
    if env:
        if env not in ("float", "exact"):
            raise UsageError(f"{BACKEND_ENV} must be 'float' or 'exact', got {env!r}")
        return env
    return "float"


def _drazin_alg(name: str | None) -> Algorithm:
    if name in (None, Algorithm.DEFINITION.value, Algorithm.RANK_CHAIN.value):
        return Algorithm.RANK_CHAIN
    if name == Algorithm.CORE_NILPOTENT.value:
        return Algorithm.CORE_NILPOTENT
    raise UsageError(f"algorithm {name!r} is not available for this inverse")


def compute_inverse(A: Mat, cfg: RunConfig):
    """Return ``(X, extra)``; ``extra`` holds consistency details for the new inverses."""
    cfg.check()
    tol = cfg.tol
    kind = cfg.inverse
    if kind == "mp":
        if cfg.algorithm in (None, Algorithm.DEFINITION.value):
            return moore_penrose(A, tol), {}
        if cfg.algorithm == Algorithm.RANK_CHAIN.value:
            return moore_penrose(A, tol, method="product"), {}
        raise UsageError(f"algorithm {cfg.algorithm!r} is not available for mp")
    if not A.is_square:
        raise DimensionMismatch(f"--inverse {kind} needs a square matrix, got {A.rows}x{A.cols}")
    info = index(A, tol)
    if kind in ("im-core", "core-ep"):
        alg = Algorithm(cfg.algorithm or Algorithm.DEFINITION.value)
        if kind == "core-ep":
            return core_ep(A, tol, alg, info), {}
        res = im_core(A, ImCoreParams(cfg.i, cfg.m), tol, alg, info)
    elif kind == "jm-core":
        if cfg.algorithm not in (None, Algorithm.DEFINITION.value):
            raise UsageError("jm-core is computed by substitution only; drop --algorithm")
        res = jm_core(A, JmCoreParams(cfg.j, cfg.m), tol, info)
    else:
        alg = _drazin_alg(cfg.algorithm)
        if kind == "drazin":
            return drazin(A, tol, alg, info), {}
        if kind == "dmp":
            return dmp(A, tol, alg, info), {}
        if kind == "group":
            return group_inverse(A, tol, info), {}
        return core_inverse(A, tol, info), {}
    extra = {"consistent": res.consistent, "witness": res.witness, "residuals": res.residuals}
    if not res.consistent:
        raise Inconsistent(res.witness, extra)
    return res.inverse, extra


def _error_record(exc: BaseException) -> dict:
    rec = {"status": "error", "error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, Inconsistent):
        rec["status"] = "inconsistent"
        if isinstance(exc.witness, dict):
            rec.update(exc.witness)
    return rec


def run_compute(src: Source, cfg: RunConfig):
    """One compute request as ``(exit_code, record)``; never raises library errors."""
    record = {"input": src.label, "inverse": cfg.inverse, "params": cfg.params()}
    try:
        backend = choose_backend(cfg.backend, [src])
        record["backend"] = backend
        A = src.load(backend == "exact")
        X, extra = compute_inverse(A, cfg)
        record.update(extra)
        record["status"] = "ok"
        record["result"] = matrix_to_obj(X)
        record["verify"] = verify(A, X, cfg.tag(), cfg.tol).to_dict()
        return EXIT_OK, record, X
    except (GenInverseError, ValueError, KeyError, OSError) as exc:
        record.update(_error_record(exc))
        return exit_code_for(exc), record, None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def _write(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config(args) -> RunConfig:
    tol = Tolerance(
        rank_rel=args.tol_rank,
        eq_rel=args.tol_eq if args.tol_eq is not None else Tolerance().eq_rel,
    )
    return RunConfig(
        inverse=args.inverse,
        i=args.i,
        m=args.m,
        j=args.j,
        backend=args.backend,
        algorithm=args.algorithm,
        tol=tol,
    )


def cmd_compute(args) -> int:
    cfg = _config(args)
    code, record, X = run_compute(read_source(args.input, args.fixture), cfg)
    if X is not None and args.matrix_only:
        _write(args.output, to_csv(X) if args.format == "csv" else to_json(X))
    else:
        _write(args.output, _dump(record))
    if code:
        print(f"gencore: {record.get('message', record.get('status'))}", file=sys.stderr)
    return code


def cmd_index(args) -> int:
    src = read_source(args.input, args.fixture)
    backend = choose_backend(args.backend, [src])
    tol = Tolerance(rank_rel=args.tol_rank)
    A = src.load(backend == "exact")
    info = index(A, tol)
    _write(args.output, _dump({"backend": backend, "index": info.k, "rank_chain": list(info.rank_chain)}))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _config(args)
    if cfg.inverse not in VERIFY_ONLY:
        cfg.check()
    src = read_source(args.input, args.fixture)
    cand = read_source(args.candidate, None)
    backend = choose_backend(args.backend, [src, cand])
    exact = backend == "exact"
    A, X = src.load(exact), cand.load(exact)
    report = verify(A, X, cfg.tag(), cfg.tol)
    out = report.to_text() + "\n" if args.text else _dump(report.to_dict())
    _write(args.output, out)
    return EXIT_OK if report.overall else EXIT_VERIFY


def cmd_fixtures(args) -> int:
    if args.show:
        if args.show not in fixtures.FIXTURES:
            raise UsageError(f"unknown fixture {args.show!r}")
        A = fixtures.get(args.show)
        _write(args.output, to_csv(A) if args.format == "csv" else to_json(A))
        return EXIT_OK
    lines = []
    for f in fixtures.FIXTURES.values():
        lines.append(f"{f.name:<9} {len(f.rows)}x{len(f.rows[0])}  {f.about}\n")
    _write(args.output, "".join(lines))
    return EXIT_OK


def cmd_batch(args) -> int:
    cfg = _config(args)

    def one(path):
        try:
            src = read_source(path, None)
        except (GenInverseError, ValueError, OSError) as exc:
            rec = {"input": path, "inverse": cfg.inverse, "params": cfg.params()}
            rec.update(_error_record(exc))
            return exit_code_for(exc), rec
        code, rec, _ = run_compute(src, cfg)
        return code, rec

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(one, args.inputs))
    _write(args.output, "".join(_dump(rec) for _, rec in results))
    return max((code for code, _ in results), default=EXIT_OK)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad flags; 2 is taken, so report usage errors as 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _nonneg_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gencore", description="Generalized matrix inverses with cross-checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def source(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--input", help="matrix file (JSON or CSV); '-' reads stdin")
        g.add_argument("--fixture", help="built-in matrix, see 'gencore fixtures'")

    def common(p, kinds):
        p.add_argument("--inverse", required=True, choices=kinds)
        p.add_argument("--i", type=_positive_int)
        p.add_argument("--m", type=_positive_int)
        p.add_argument("--j", type=_positive_int)
        p.add_argument("--backend", choices=("float", "exact"))
        p.add_argument("--algorithm", choices=ALGORITHMS)
        p.add_argument("--tol-rank", type=_nonneg_float, help="relative singular-value cutoff")
        p.add_argument("--tol-eq", type=_nonneg_float, help="relative residual threshold")
        p.add_argument("--output", help="write here instead of stdout")

    p = sub.add_parser("compute", help="compute one inverse")
    source(p)
    common(p, INVERSES)
    p.add_argument("--matrix-only", action="store_true", help="write just the inverse as a matrix file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("index", help="Drazin index and rank chain")
    source(p)
    p.add_argument("--backend", choices=("float", "exact"))
    p.add_argument("--tol-rank", type=_nonneg_float)
    p.add_argument("--output")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("verify", help="check a candidate inverse against a definition")
    source(p)
    common(p, INVERSES + VERIFY_ONLY)
    p.add_argument("--candidate", required=True, help="matrix file holding the candidate X")
    p.add_argument("--text", action="store_true", help="line-oriented report instead of JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fixtures", help="list built-in matrices")
    p.add_argument("--show", metavar="NAME", help="print one fixture as a matrix file")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("batch", help="compute one inverse for many inputs, one JSON line each")
    common(p, INVERSES)
    p.add_argument("--jobs", type=_positive_int, default=4)
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (GenInverseError, ValueError, KeyError, OSError) as exc:
        code = exit_code_for(exc)
        print(f"gencore: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
