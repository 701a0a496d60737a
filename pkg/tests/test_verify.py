import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exact, fifteenths
from gencore.classical import drazin
from gencore.corpus import float_corpus
from gencore.errors import DimensionMismatch
from gencore.factor import moore_penrose
from gencore.numfield import Mat, Tolerance, matpow
from gencore.spectral import power_range_projector
from gencore.verify import (
    DRAZIN,
    GROUP,
    MOORE_PENROSE,
    ONE_THREE,
    ONE_TWO_THREE,
    OUTER,
    TWO_THREE,
    DefinitionTag,
    check_lemma24_25,
    im_core_tag,
    is_ep,
    is_projector_onto_power_range,
    jm_core_tag,
    verify,
)
from strategies import exact_matrices, float_matrices

PRINTED_PINV = [[2, -1, 0], [2, -1, 0], [2, -1, 0]]


class TestTags:
    def test_unknown(self):
        with pytest.raises(ValueError):
            DefinitionTag("Weird")

    def test_params_required(self):
        with pytest.raises(ValueError):
            DefinitionTag("ImCore")
        assert str(im_core_tag(2, 1)) == "ImCore(2, 1)"


class TestVerify:
    def test_printed_pseudoinverse(self, ex4_6_sq):
        report = verify(ex4_6_sq, fifteenths(PRINTED_PINV), MOORE_PENROSE)
        assert report.overall
        assert len(report.entries) == 4
        assert all(e.residual == 0.0 for e in report.entries)

    def test_zero_drazin_of_nilpotent(self, ex3_4, ex4_5):
        assert verify(ex3_4, Mat.zeros(2, 2, exact=True), DRAZIN).overall
        assert verify(ex4_5.to_float(), Mat.zeros(3, 3), DRAZIN).overall

    def test_perturbed_pseudoinverse_fails(self, rng):
        A = Mat(rng.standard_normal((4, 3)))
        X = moore_penrose(A) + Mat(rng.standard_normal((3, 4)))
        report = verify(A, X, MOORE_PENROSE)
        assert not report.overall
        assert not report.entry("AXA = A").passed

    def test_exact_residual_positive_rational(self, ex4_6_sq):
        wrong = fifteenths([[2, -1, 0], [2, -1, 0], [2, -1, 1]])
        report = verify(ex4_6_sq, wrong, MOORE_PENROSE)
        assert not report.overall
        assert all(e.residual == 0.0 or e.residual > 0 for e in report.entries)

    def test_shape_mismatch(self, ex4_6):
        with pytest.raises(DimensionMismatch):
            verify(ex4_6, Mat.zeros(2, 3, exact=True), MOORE_PENROSE)
        with pytest.raises(DimensionMismatch):
            verify(Mat.zeros(2, 3), Mat.zeros(3, 2), DRAZIN)

    def test_group_on_index_two(self, ex3_4):
        report = verify(ex3_4, Mat.zeros(2, 2, exact=True), GROUP)
        assert not report.overall and report.note == "ind(A) = 2"

    def test_wrong_jm_candidate(self, ex4_6):
        A2 = matpow(ex4_6, 2)
        cand = ex4_6 @ moore_penrose(A2)
        assert not verify(ex4_6, cand, jm_core_tag(2, 1)).overall

    def test_im_core_candidate(self, ex4_6):
        X = fifteenths([[12, -6, 0], [-6, 3, 0], [0, 0, 0]])
        assert verify(ex4_6, X, im_core_tag(2, 1)).overall
        assert verify(ex4_6, X, im_core_tag(2, 2)).overall  # A^D is idempotent here
        assert not verify(ex4_6, Mat.identity(3, exact=True), im_core_tag(2, 1)).overall

    def test_serialization(self, ex4_6_sq):
        report = verify(ex4_6_sq, fifteenths(PRINTED_PINV), MOORE_PENROSE)
        obj = json.loads(report.to_json())
        assert obj["overall"] is True and obj["tag"] == "MoorePenrose"
        assert [e["equation"] for e in obj["entries"]][0] == "AXA = A"
        assert report.to_text().splitlines()[0] == "MoorePenrose: PASS"

    @given(exact_matrices())
    def test_exact_pseudoinverse_verifies(self, A):
        X = moore_penrose(A)
        for tag in (MOORE_PENROSE, OUTER, ONE_THREE, TWO_THREE, ONE_TWO_THREE):
            assert verify(A, X, tag).overall

    @given(float_matrices())
    def test_float_pseudoinverse_verifies(self, A):
        assert verify(A, moore_penrose(A), MOORE_PENROSE).overall

    @given(float_matrices(), st.floats(1e-16, 1e-2), st.floats(1e-16, 1e-2))
    def test_monotone_in_tolerance(self, A, t1, t2):
        loose, tight = max(t1, t2), min(t1, t2)
        rng = np.random.default_rng(0)
        X = moore_penrose(A) + Mat(1e-9 * rng.standard_normal((A.cols, A.rows)))
        a = verify(A, X, MOORE_PENROSE, Tolerance(eq_rel=loose))
        b = verify(A, X, MOORE_PENROSE, Tolerance(eq_rel=tight))
        for ea, eb in zip(a.entries, b.entries):
            assert ea.residual == eb.residual
            assert ea.passed or not eb.passed


class TestPowerIdentities:
    def test_example(self, ex4_6):
        report = check_lemma24_25(ex4_6, drazin(ex4_6), 2, 3)
        assert report.overall
        assert len(report.entries) == 2 + 6 * 3 + 1

    def test_nonsingular(self):
        A = exact([[1, 2], [3, 4]])
        assert check_lemma24_25(A, drazin(A), 1, 2).overall

    def test_hypotheses_failed(self, ex4_6):
        report = check_lemma24_25(ex4_6, Mat.zeros(3, 3, exact=True), 2, 2)
        assert not report.overall
        assert report.note == "hypotheses failed"


class TestPredicates:
    def test_is_ep(self, ex3_4, rng):
        H = rng.standard_normal((3, 3))
        assert is_ep(Mat(H + H.T))
        assert not is_ep(ex3_4)
        Q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        assert is_ep(Mat(Q))

    @pytest.mark.parametrize("sample", float_corpus(20, seed=61), ids=lambda s: s.label)
    def test_projector_on_corpus(self, sample):
        A = sample.A
        k = max(sample.k, 1)
        Ak = matpow(A, k)
        assert is_projector_onto_power_range(Ak @ moore_penrose(Ak, rank=sample.r), A, k)
        assert is_projector_onto_power_range(power_range_projector(A, k), A, k)

    def test_projector_trivial(self, ex4_6):
        A = exact([[1, 2], [3, 4]])
        assert is_projector_onto_power_range(Mat.identity(2, exact=True), A, 2)
        assert not is_projector_onto_power_range(Mat.zeros(2, 2, exact=True), A, 1)
        assert not is_projector_onto_power_range(Mat.identity(3, exact=True), ex4_6, 2)
        assert not is_projector_onto_power_range(Mat.identity(2, exact=True), ex4_6, 2)
