import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fdp.errors import CollinearityError, DomainError, IndicatorError, ParseError, SampleSizeError
from fdp.indicators import (
    AuditOpinion,
    JonesCoefficients,
    JonesInputRow,
    OpinionPost,
    accrual_earnings_management,
    company_opinion_score,
    dap_by_company,
    encode_audit_opinion,
    fit_jones,
    jones_design,
    lexicon_sentiment,
    load_accounting,
    load_lexicon,
    load_posts,
    non_manipulable_accruals,
    parse_audit_opinion,
    post_influence,
    total_accruals,
)

PLANTED = (2.0, 0.3, 0.1)


def exact_rows(rng, n=12, coeffs=PLANTED, delta_ar=0.0):
    """Rows whose TA/A equals the planted regression with no residual."""
    a1, a2, a3 = coeffs
    rows = []
    for _ in range(n):
        A = rng.uniform(50, 500)
        drev = rng.uniform(-40, 80)
        ppe = rng.uniform(10, 300)
        ta = a1 + a2 * drev + a3 * ppe  # TA/A * A
        ocf = rng.uniform(-50, 50)
        rows.append(JonesInputRow(A, ocf + ta, ocf, drev, delta_ar, ppe))
    return rows


def normal_equations(rows):
    X, y = jones_design(rows)
    return np.linalg.solve(X.T @ X, X.T @ y)


class TestAuditOpinion:
    def test_encoding(self):
        assert encode_audit_opinion(AuditOpinion.STANDARD_UNQUALIFIED) == 0
        assert encode_audit_opinion(AuditOpinion.OTHER) == 1

    def test_parsing(self):
        assert encode_audit_opinion("qualified with emphasis") == 1
        assert parse_audit_opinion("Standard Unqualified") is AuditOpinion.STANDARD_UNQUALIFIED
        assert parse_audit_opinion("unqualified with emphasis of matter") is AuditOpinion.OTHER
        assert parse_audit_opinion("adverse") is AuditOpinion.OTHER

    def test_unknown_string(self):
        with pytest.raises(IndicatorError, match="banana"):
            parse_audit_opinion("banana")


class TestTotalAccruals:
    @pytest.mark.parametrize("ni,ocf,expected", [(100, 100, 0), (150, 100, 50), (-20, 30, -50)])
    def test_examples(self, ni, ocf, expected):
        assert total_accruals(JonesInputRow(1.0, ni, ocf, 0, 0, 0)) == expected

    def test_positive_assets(self):
        with pytest.raises(DomainError):
            JonesInputRow(0.0, 1, 1, 1, 1, 1)


class TestFitJones:
    def test_recovers_planted(self):
        rows = exact_rows(np.random.default_rng(3))
        c = fit_jones(rows)
        np.testing.assert_allclose([c.a1, c.a2, c.a3], PLANTED, atol=1e-9, rtol=0)
        np.testing.assert_allclose([c.a1, c.a2, c.a3], normal_equations(rows), atol=1e-9, rtol=0)

    def test_matches_normal_equations_on_noisy_rows(self):
        rng = np.random.default_rng(11)
        rows = [JonesInputRow(rng.uniform(50, 500), *rng.normal(0, 30, size=5)) for _ in range(40)]
        c = fit_jones(rows)
        np.testing.assert_allclose([c.a1, c.a2, c.a3], normal_equations(rows), rtol=1e-8)

    def test_identical_rows_collinear(self):
        rows = [JonesInputRow(100, 5, 2, 10, 1, 40)] * 12
        with pytest.raises(CollinearityError):
            fit_jones(rows)

    def test_too_few_rows(self):
        rows = exact_rows(np.random.default_rng(0), n=5)
        with pytest.raises(SampleSizeError):
            fit_jones(rows, min_rows=10)

    @given(st.integers(0, 10_000))
    def test_residuals_orthogonal_to_regressors(self, seed):
        rng = np.random.default_rng(seed)
        rows = [JonesInputRow(rng.uniform(10, 1000), *rng.normal(0, 50, size=5)) for _ in range(25)]
        c = fit_jones(rows)
        X, y = jones_design(rows)
        resid = y - X @ np.array([c.a1, c.a2, c.a3])
        for j in range(3):
            scale = np.linalg.norm(X[:, j]) * max(np.linalg.norm(y), 1.0)
            assert abs(np.dot(resid, X[:, j])) < 1e-8 * scale


class TestAccruals:
    def test_nda_examples(self):
        row = JonesInputRow(100, 0, 0, 50, 10, 60)
        assert non_manipulable_accruals(JonesCoefficients(0, 0, 0), row) == 0
        assert non_manipulable_accruals(JonesCoefficients(1, 1, 1), row) == pytest.approx(1.01, abs=1e-15)
        row2 = JonesInputRow(200, 0, 0, 20, 0, 100)
        assert non_manipulable_accruals(JonesCoefficients(*PLANTED), row2) == pytest.approx(0.09, abs=1e-15)

    def test_dap_direct(self):
        # TA/A = 0.15; NDA with a1 only = 10/100 = 0.10
        row = JonesInputRow(100, 20, 5, 0, 0, 0)
        assert accrual_earnings_management(row, JonesCoefficients(10, 0, 0)) == pytest.approx(0.05, abs=1e-15)

    def test_exact_fit_gives_zero_dap(self):
        rows = exact_rows(np.random.default_rng(5))
        c = fit_jones(rows)
        for r in rows:
            assert abs(accrual_earnings_management(r, c)) < 1e-9

    def test_receivables_shift(self):
        rows = exact_rows(np.random.default_rng(7))
        c = fit_jones(rows)
        # same regressors as an in-sample row, but A=100 and dAR=10
        a1, a2, a3 = PLANTED
        drev, ppe = 30.0, 50.0
        ta = a1 + a2 * drev + a3 * ppe
        row = JonesInputRow(100.0, ta, 0.0, drev, 10.0, ppe)
        assert accrual_earnings_management(row, c) == pytest.approx(0.03, abs=1e-9)


class TestOpinion:
    @pytest.mark.parametrize("looks,comments,expected", [(16, 4, 4.0), (0, 0, 0.0), (81, 9, 6.0)])
    def test_influence(self, looks, comments, expected):
        assert post_influence(looks, comments) == expected

    def test_influence_domain(self):
        with pytest.raises(DomainError):
            post_influence(-1, 0)
        with pytest.raises(DomainError):
            OpinionPost(0.1, 2.5, 0)

    @given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 1000), st.integers(0, 1000))
    def test_influence_monotone(self, looks, comments, dl, dc):
        assert post_influence(looks + dl, comments + dc) >= post_influence(looks, comments)

    def test_lexicon_examples(self):
        lex = {"good": 1, "bad": -1}
        assert lexicon_sentiment(["good", "good", "bad"], lex) == pytest.approx(1 / 3, abs=1e-15)
        assert lexicon_sentiment(["meh"], lex) == 0.0
        assert lexicon_sentiment(["bad"], lex) == -1.0

    @given(st.lists(st.sampled_from(["up", "down", "flat", "x"]), max_size=30))
    def test_lexicon_bounded(self, tokens):
        s = lexicon_sentiment(tokens, {"up": 1, "down": -1, "flat": -1})
        assert -1.0 <= s <= 1.0

    def test_company_score_examples(self):
        assert company_opinion_score([OpinionPost(0.5, 16, 4)]) == 2.0
        assert company_opinion_score([]) == 0.0
        posts = [OpinionPost(1.0, 16, 4), OpinionPost(-1.0, 81, 9)]
        assert company_opinion_score(posts) == -2.0
        assert company_opinion_score(posts, normalize=True) == pytest.approx(-0.2)

    @given(st.lists(st.tuples(st.floats(-1, 1), st.integers(0, 10**4), st.integers(0, 10**3)), max_size=10),
           st.lists(st.tuples(st.floats(-1, 1), st.integers(0, 10**4), st.integers(0, 10**3)), max_size=10))
    def test_company_score_additive(self, a, b):
        pa = [OpinionPost(*t) for t in a]
        pb = [OpinionPost(*t) for t in b]
        total = company_opinion_score(pa + pb)
        assert total == pytest.approx(company_opinion_score(pa) + company_opinion_score(pb),
                                      rel=1e-12, abs=1e-9)


class TestFiles:
    def test_lexicon_and_posts(self, tmp_path):
        lex_path = tmp_path / "lex.txt"
        lex_path.write_text("# polarity list\ngood 1\nbad -1\n", encoding="utf-8")
        lex = load_lexicon(lex_path)
        assert lex == {"good": 1, "bad": -1}
        posts_path = tmp_path / "posts.csv"
        posts_path.write_text("id,sentiment,looks,comments\nA,good good bad,16,4\nB,bad,0,9\n",
                              encoding="utf-8")
        posts = load_posts(posts_path, lexicon=lex)
        assert company_opinion_score(posts["A"]) == pytest.approx(4 / 3)
        assert company_opinion_score(posts["B"]) == -3.0

    def test_scored_posts_range(self, tmp_path):
        path = tmp_path / "posts.csv"
        path.write_text("id,sentiment,looks,comments\nA,1.5,1,1\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_posts(path)

    def test_lexicon_bad_polarity(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("good 2\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_lexicon(path)

    def test_accounting_blank_cells(self, tmp_path):
        rows = exact_rows(np.random.default_rng(2), n=11)
        lines = ["id,total_assets_prev,operating_profit,operating_cash_flow,delta_revenue,"
                 "delta_receivables,fixed_assets_closing,audit_opinion"]
        for i, r in enumerate(rows):
            lines.append(f"C{i},{r.total_assets_prev!r},{r.operating_profit!r},"
                         f"{r.operating_cash_flow!r},{r.delta_revenue!r},0.0,"
                         f"{r.fixed_assets_closing!r},standard unqualified")
        lines.append("CX,100,,1,1,1,1,qualified")
        path = tmp_path / "acct.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        recs = load_accounting(path)
        assert recs["CX"].jones is None and recs["CX"].audit_opinion == "qualified"
        dap = dap_by_company(recs)
        assert "CX" not in dap
        assert max(abs(v) for v in dap.values()) < 1e-9
        assert math.isfinite(sum(dap.values()))
