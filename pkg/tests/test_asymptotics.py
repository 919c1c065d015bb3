from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from hypercat.asymptotics import (
    GrowthEstimate,
    RealSeq,
    accelerate,
    conjectured_constants,
    estimate_growth,
)
from hypercat.errors import PrecisionError, ValidationError
from hypercat.series import hypercat_sequence


def context(bits=512):
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def exact(seq):
    return RealSeq.of([Fraction(v) for v in seq], 1)


def test_constant():
    for k in (0, 2, 8, 16):
        out = accelerate(exact([Fraction(7, 3)] * 30), k)
        assert set(out.values) == {Fraction(7, 3)}
        assert out.start_index == 1 + k


def test_one_plus_inverse():
    seq = exact([1 + Fraction(1, n) for n in range(1, 60)])
    out = accelerate(seq, 8)
    assert set(out.values) == {1}  # 1/n is annihilated outright for k >= 1


def test_decay_rate():
    seq = exact([1 + Fraction(1, n) + Fraction(1, n**10) for n in range(1, 200)])
    out = accelerate(seq, 8)
    errs = [abs(out.at(n) - 1) for n in (50, 100, 198)]
    assert errs[0] > errs[1] > errs[2]
    # degree -9-ish decay: doubling n divides the error by roughly 2^9 or more
    assert errs[0] / errs[1] > 2**8


@given(
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=1, max_size=8),
    st.fractions(min_value=-5, max_value=5, max_denominator=9),
)
def test_annihilates_polynomial_over_n_k(coeffs, c0):
    k = 8
    coeffs = coeffs[:k]
    seq = exact(
        [c0 + sum(c * n**i for i, c in enumerate(coeffs)) / Fraction(n) ** k for n in range(1, 40)]
    )
    assert set(accelerate(seq, k).values) == {c0}


@given(
    st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=20, max_size=20),
    st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=20, max_size=20),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)
def test_linearity(a, b, x, y):
    lhs = accelerate(exact([x * p + y * q for p, q in zip(a, b)]), 4).values
    ra, rb = accelerate(exact(a), 4).values, accelerate(exact(b), 4).values
    assert list(lhs) == [x * p + y * q for p, q in zip(ra, rb)]


def test_floating_matches_exact():
    vals = [1 + Fraction(1, n) + Fraction(3, n**20) for n in range(1, 80)]
    ctx = context()
    ex = accelerate(exact(vals), 16)
    fl = accelerate(RealSeq(tuple(ctx.mpf(v.numerator) / v.denominator for v in vals), 1), 16)
    for a, b in zip(ex.values, fl.values):
        assert abs(ctx.mpf(a.numerator) / a.denominator - b) < ctx.mpf(2) ** -300


def test_precision_error():
    seq = RealSeq(tuple(mpmath.mpf(1) / n for n in range(1, 60)), 1, precision_bits=80)
    with pytest.raises(PrecisionError):
        accelerate(seq, 16)


def test_validation():
    with pytest.raises(ValidationError):
        accelerate(exact([1, 2, 3]), 4)
    with pytest.raises(ValidationError):
        accelerate(exact([1] * 10), 3)
    with pytest.raises(ValidationError):
        RealSeq((Fraction(1), mpmath.mpf(1)))
    with pytest.raises(ValidationError):
        RealSeq((mpmath.inf,))
    with pytest.raises(ValidationError):
        estimate_growth(2, 10, k=16)
    with pytest.raises(ValidationError):
        GrowthEstimate(1, 1, 1, terms_used=5, accel_power=8)


def test_conjectured():
    c2 = conjectured_constants(2)
    assert c2.A == 2 and c2.rho == mpmath.mpf(-1) / 2
    assert abs(c2.K_m - mpmath.e ** 1.5) < 1e-15
    assert abs(c2.K - 2 * mpmath.e ** 1.5 / mpmath.sqrt(mpmath.pi)) < 1e-15
    c3 = conjectured_constants(3)
    assert c3.A == mpmath.mpf(9) / 2 and c3.rho == -1
    assert abs(c3.K_m - 2 / mpmath.mpf(3) ** 1.5) < 1e-15
    c4 = conjectured_constants(4)
    assert abs(c4.A - mpmath.mpf(32) / 3) < 1e-15 and c4.rho == mpmath.mpf(-3) / 2
    assert abs(c4.K_m - 3 * mpmath.sqrt(2) / 32) < 1e-15
    c5 = conjectured_constants(5)
    assert abs(c5.K_m - 2 * 6 / mpmath.mpf(5) ** 3.5) < 1e-15
    c1 = conjectured_constants(1)
    assert c1.A == 4 and c1.rho == mpmath.mpf(-3) / 2 and c1.K_m is None
    assert c1.terms_used is None and c1.accel_power is None


def test_m2_paper_digits():
    # reference digits are truncated, so compare prefixes
    est = estimate_growth(2, 100)
    assert mpmath.nstr(est.A, 30).startswith("2.0000000000068961809")
    assert mpmath.nstr(-est.rho, 30).startswith("0.499999997726715")
    assert abs(est.A - 2) < 1e-8 and abs(-est.rho - 0.5) < 1e-6


def test_m2_constant_200_terms():
    est = estimate_growth(2, 200)
    assert mpmath.nstr(est.K, 30).startswith("5.05704458036912766")
    assert abs(est.K - conjectured_constants(2).K) < 1e-4


def test_m1_classical():
    est = estimate_growth(1, 100)
    conj = conjectured_constants(1)
    assert abs(est.A - 4) < 1e-20
    assert abs(est.rho + 1.5) < 1e-20
    assert abs(est.K - conj.K) < 1e-20


@pytest.mark.parametrize("m", [3, 4, 5])
def test_consistency_small_m(m):
    values = hypercat_sequence(m, 60)
    conj = conjectured_constants(m)
    errs = [abs(estimate_growth(m, t, values=values).A - conj.A) for t in (30, 60)]
    assert errs[1] < errs[0] and errs[1] < 1e-6
    est = estimate_growth(m, 60, values=values)
    assert abs(est.rho - conj.rho) < 1e-4
    assert abs(est.K_m - conj.K_m) < 1e-4
