"""Acceptance criteria 1-8, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL ...`` line straight to the
terminal, even under captured output.  Run with::

    python3 -m pytest tests/test_acceptance.py -v
"""

from functools import lru_cache

import numpy as np
import pytest

from conftest import fifteenths
from gencore import fixtures
from gencore.classical import Algorithm, core_ep_power, drazin
from gencore.cli import main
from gencore.corpus import exact_corpus, float_corpus
from gencore.factor import moore_penrose
from gencore.imjm import ImCoreParams, JmCoreParams, im_core, jm_core
from gencore.matio import parse_matrix, to_json
from gencore.numfield import Mat, matpow
from gencore.spectral import index
from gencore.verify import DRAZIN, MOORE_PENROSE, check_lemma24_25, is_ep, verify
from identity_suite import identity_checks

FLOAT_COUNT = 200
EXACT_COUNT = 12
FIXTURE_NAMES = list(fixtures.FIXTURES)


@lru_cache(maxsize=None)
def float_samples():
    # n <= 12, index <= 4, cond(D) <= 1e3
    return float_corpus(FLOAT_COUNT, seed=2024, n_max=12, k_max=4, d_cond=1e3)


@lru_cache(maxsize=None)
def identity_samples():
    # n <= 12, index <= 4, cond(D) <= 10
    return float_corpus(FLOAT_COUNT, seed=2026, n_max=12, k_max=4)


@lru_cache(maxsize=None)
def exact_samples():
    return exact_corpus(EXACT_COUNT, seed=2025, n_max=6, k_max=4)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def test_criterion_1_exact_fixture(report):
    A = fixtures.get("ex4_6")
    A2 = matpow(A, 2)
    A2p = moore_penrose(A2)
    checks = {
        "(A^2)+": A2p == fifteenths([[2, -1, 0], [2, -1, 0], [2, -1, 0]]),
        "A^D = A^2": drazin(A) == A2,
        "A(A^2)+": A @ A2p == fifteenths([[10, -5, 0], [-4, 2, 0], [0, 0, 0]]),
        "A^2(A^2)+": A2 @ A2p == fifteenths([[12, -6, 0], [-6, 3, 0], [0, 0, 0]]),
        "(2,1)-core inconsistent": not jm_core(A, JmCoreParams(2, 1)).consistent,
    }
    failed = [name for name, ok in checks.items() if not ok]
    report(1, not failed, f"{len(checks) - len(failed)}/{len(checks)} exact equalities" + (f"; failed {failed}" if failed else ""))


def test_criterion_2_inconsistency(report):
    shift2 = fixtures.get("ex3_4")
    bad = [m for m in (1, 2, 3) if im_core(shift2, ImCoreParams(1, m)).consistent]
    r = jm_core(fixtures.get("ex4_5"), JmCoreParams(3, 1))
    zero_ok = r.consistent and r.inverse.is_zero()
    ok = not bad and zero_ok
    report(2, ok, f"<1,m> on ex3_4 inconsistent for m=1..3: {not bad}; (3,1) on ex4_5 solved by 0: {zero_ok}")


def test_criterion_3_route_agreement(report):
    worst = 0.0
    float_bad = []
    routes = list(Algorithm)
    for s in float_samples():
        info = index(s.A)
        for i, m in ((max(info.k, 1), 1), (info.k + 1, 2)):
            outs = [im_core(s.A, ImCoreParams(i, m), alg=a, info=info).require() for a in routes]
            for a in range(len(outs)):
                for b in range(a + 1, len(outs)):
                    diff = (outs[a] - outs[b]).fro_norm()
                    bound = 1e-8 * (1 + max(outs[a].fro_norm(), outs[b].fro_norm()))
                    worst = max(worst, diff / bound * 1e-8)
                    if diff > bound:
                        float_bad.append((s.label, routes[a].value, routes[b].value))
    exact_bad = []
    exact_routes = [a for a in routes if a is not Algorithm.HS_RECURSIVE]
    for s in exact_samples():
        info = index(s.A)
        for m in (1, 2):
            outs = [core_ep_power(s.A, m, alg=a, info=info) for a in exact_routes]
            if not all(o == outs[0] for o in outs[1:]):
                exact_bad.append(s.label)
    ok = not float_bad and not exact_bad
    report(
        3,
        ok,
        f"float {len(float_samples())} matrices, worst scaled gap {worst:.1e} (limit 1e-8), "
        f"{len(float_bad)} disagreements; exact {len(exact_samples())} matrices, {len(exact_bad)} mismatches",
    )


def test_criterion_4_identity_suite(report):
    failures = []
    worst = 0.0
    total = 0
    inputs = [fixtures.get(n) for n in FIXTURE_NAMES]
    inputs += [s.A for s in exact_samples()]
    inputs += [s.A for s in identity_samples()]
    for A in inputs:
        for label, ok, rel in identity_checks(A):
            total += 1
            if not A.exact:
                worst = max(worst, rel)
            if not ok:
                failures.append(label)
    report(
        4,
        not failures,
        f"{total} identity checks on {len(inputs)} matrices, worst float residual {worst:.1e}, {len(failures)} failures",
    )


def test_criterion_5_lemma_suite(report):
    bad = []
    count = 0
    inputs = [fixtures.get(n) for n in FIXTURE_NAMES] + [s.A for s in exact_samples()]
    for A in inputs:
        k = max(index(A).k, 1)
        rep = check_lemma24_25(A, drazin(A), k, 3)
        count += len(rep.entries)
        if not rep.overall or any(e.residual != 0.0 for e in rep.entries):
            bad.append(rep.tag)
    report(5, not bad, f"{count} exact entries on {len(inputs)} matrices, {len(bad)} nonzero")


def _axiom_samples(rng, count):
    out = []
    for t in range(count):
        rows, cols = (int(x) for x in rng.integers(1, 13, 2))
        if t % 2:
            cols = rows
        r = int(rng.integers(0, min(rows, cols) + 1))
        a = rng.standard_normal((rows, r)) + 1j * rng.standard_normal((rows, r))
        b = rng.standard_normal((r, cols)) + 1j * rng.standard_normal((r, cols))
        out.append(Mat(a @ b))
    return out


def test_criterion_6_axioms(report):
    rng = np.random.default_rng(606)
    mats = _axiom_samples(rng, 250) + [s.A for s in float_corpus(250, seed=607)]
    bad = []
    worst = 0.0
    for A in mats:
        pairs = [(moore_penrose(A), MOORE_PENROSE)]
        if A.is_square:
            pairs.append((drazin(A), DRAZIN))
        base = 1 + A.fro_norm()
        for X, tag in pairs:
            rep = verify(A, X, tag)
            for e in rep.entries:
                rel = e.raw / base ** e.degree
                worst = max(worst, rel)
                if not e.passed or rel > 1e-10:
                    bad.append((tag.name, e.label))
    report(6, not bad, f"{len(mats)} matrices, worst raw/(1+|A|)^deg {worst:.1e} (limit 1e-10), {len(bad)} failures")


def _unitary(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_criterion_7_ep_spot_check(report):
    rng = np.random.default_rng(707)
    hits, misses, tried = 0, 0, 0
    while hits < 20 and tried < 400:
        tried += 1
        n = int(rng.integers(2, 8))
        lam = rng.choice([1.0, -1.0, 0.0, 1j, 2.0], n)
        lam[0] = rng.choice([1.0, -1.0])
        if rng.random() < 0.5:
            U = _unitary(rng, n)
            A = U @ np.diag(lam) @ U.conj().T
        else:
            P = rng.standard_normal((n, n))
            A = P @ np.diag(lam) @ np.linalg.inv(P)
        A = Mat(A)
        X = im_core(A, ImCoreParams(1, 1)).inverse
        if X is None or (X - A).fro_norm() > 1e-8 * (1 + A.fro_norm()):
            continue
        hits += 1
        if not is_ep(A):
            misses += 1
    ok = hits == 20 and misses == 0
    report(7, ok, f"{hits} matrices with <1,1>-core = A found in {tried} draws, {hits - misses} of them EP")


def _cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_criterion_8_cli(report, capsys, tmp_path):
    pinv = tmp_path / "pinv.csv"
    pinv.write_text("2/15,-1/15,0\n2/15,-1/15,0\n2/15,-1/15,0\n")
    wrong = tmp_path / "wrong.json"
    A = fixtures.get("ex4_6")
    wrong.write_text(to_json(A @ moore_penrose(matpow(A, 2))))
    ambiguous = tmp_path / "amb.csv"
    ambiguous.write_text("1,0\n0,1e-12\n")
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    cases = [
        (0, ["compute", "--fixture", "ex4_6_sq", "--inverse", "mp", "--backend", "exact"]),
        (0, ["index", "--fixture", "ex4_5"]),
        (0, ["verify", "--fixture", "ex4_6_sq", "--candidate", str(pinv), "--inverse", "mp"]),
        (2, ["compute", "--fixture", "ex3_4", "--inverse", "im-core", "--i", "1", "--m", "1"]),
        (2, ["compute", "--fixture", "ex4_6", "--inverse", "jm-core", "--j", "2", "--m", "1"]),
        (3, ["compute", "--input", str(ragged), "--inverse", "mp"]),
        (3, ["compute", "--fixture", "ex4_6", "--inverse", "im-core", "--m", "1"]),
        (4, ["compute", "--input", str(ambiguous), "--inverse", "drazin"]),
        (5, ["verify", "--fixture", "ex4_6", "--candidate", str(wrong), "--inverse", "jm-core", "--j", "2", "--m", "1"]),
    ]
    wrong_codes = []
    for want, argv in cases:
        got, _ = _cli(capsys, *argv)
        if got != want:
            wrong_codes.append((argv[0], argv[-1], want, got))
    trips = 0
    for name in FIXTURE_NAMES:
        _, text = _cli(capsys, "fixtures", "--show", name)
        path = tmp_path / f"{name}.json"
        path.write_text(text)
        for backend in ("exact", "float"):
            _, out = _cli(capsys, "compute", "--input", str(path), "--inverse", "mp", "--matrix-only", "--backend", backend)
            trips += to_json(parse_matrix(out).to_mat(backend == "exact")) == out
        trips += to_json(parse_matrix(text).to_mat(True)) == text
    want_trips = 3 * len(FIXTURE_NAMES)
    ok = not wrong_codes and trips == want_trips
    report(
        8,
        ok,
        f"{len(cases) - len(wrong_codes)}/{len(cases)} exit codes as expected, {trips}/{want_trips} bit-exact JSON round trips"
        + (f"; wrong {wrong_codes}" if wrong_codes else ""),
    )
