import math

import pytest

import _mlfpp as m


def test_mittag_leffler_reduces_to_exp():
    for x in (-3.0, -1.0, 0.0, 0.5, 2.0):
        assert m.mittag_leffler(1.0, x) == pytest.approx(math.exp(x), rel=1e-12)


def test_cdf_quantile_roundtrip():
    for alpha in (0.1, 0.5, 0.9):
        q = m.quantile(0.8, 50.0, alpha)
        assert m.cdf(0.8, 50.0, q) == pytest.approx(alpha, abs=1e-9)


def test_pdf_matches_log_pdf():
    x = 12.5
    assert math.log(m.pdf(0.7, 10.0, x)) == pytest.approx(m.log_pdf(0.7, 10.0, x))


def test_sample_deterministic():
    a = m.sample(0.8, 50.0, 100, seed=42)
    b = m.sample(0.8, 50.0, 100, seed=42)
    assert a == b
    assert min(a) > 0.0


def test_estimate_recovers_parameters():
    data = m.sample(0.8, 50.0, 2000, seed=5)
    for method in ("lm", "qb", "ml"):
        r = m.estimate(method, data)
        assert r["converged"]
        assert r["beta"] == pytest.approx(0.8, abs=0.05)
        assert r["sigma"] == pytest.approx(50.0, rel=0.15)


def test_estimate_rejects_bad_method():
    with pytest.raises(Exception):
        m.estimate("nope", [1.0, 2.0, 3.0])


def test_fit_seasonal_shape():
    data = m.sample(0.9, 40.0, 400, seed=9)
    days = [(i % 365) + 1 for i in range(len(data))]
    fit = m.fit_seasonal(data, days, 46.0, "lm")
    assert len(fit) == 365
    ok = [d for d in fit if d["beta"] is not None]
    assert len(ok) == 365
    assert all(0.0 < d["beta"] <= 1.0 for d in ok)
