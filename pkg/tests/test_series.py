import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hypercat.errors import ConsistencyError, ValidationError
from hypercat.series import (
    FormalSeries,
    F_series,
    block_partition_count,
    colored_tree_series,
    ell_h_series,
    f_and_F,
    homog_dim,
    hypercat_coeff,
    hypercat_sequence,
    relation_residual,
    solve_f,
)
from hypercat.tours import hypercatalan
from oracles import brute_uniform_partitions

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=7)


def series(order):
    return st.lists(fractions, min_size=order + 1, max_size=order + 1).map(
        lambda cs: FormalSeries.of(cs, order)
    )


# -- arithmetic -----------------------------------------------------------------


@given(series(6), series(6))
def test_add_sub(f, g):
    assert (f + g) - g == f
    assert f + g == g + f


@given(series(6), series(6))
def test_mul_is_convolution(f, g):
    prod = f * g
    for n in range(7):
        assert prod[n] == sum(f[i] * g[n - i] for i in range(n + 1))


@given(series(5), series(5))
def test_compose_against_powers(f, g):
    g = g - g[0]
    direct = FormalSeries.of([f[0]], 5)
    power = FormalSeries.of([1], 5)
    for i in range(1, 6):
        power = power * g
        direct = direct + power * f[i]
    assert f.compose(g) == direct == f(g)


def test_truncation_and_validation():
    a = FormalSeries.of([1, 2, 3, 4], 3)
    b = FormalSeries.of([1, 1], 1)
    assert (a * b).order == 1
    assert a.shift(2).coeffs == (0, 0, 1, 2)
    with pytest.raises(ValidationError):
        a.compose(FormalSeries.of([1, 1], 3))
    with pytest.raises(ValidationError):
        FormalSeries(2, (Fraction(1),))


# -- combinatorial helpers -------------------------------------------------------


def test_block_partition_examples():
    assert block_partition_count(2, 4) == 3
    assert block_partition_count(4, 8) == 35
    assert block_partition_count(3, 5) == 0
    assert block_partition_count(5, 0) == 1


@pytest.mark.parametrize("m,k", [(1, 4), (2, 6), (3, 6), (2, 8), (4, 8), (3, 7)])
def test_block_partition_brute(m, k):
    assert block_partition_count(m, k) == brute_uniform_partitions(k, m)


def test_homog_dim():
    assert all(homog_dim(1, g) == 1 for g in range(10))
    assert homog_dim(2, 4) == 5
    assert homog_dim(2, 2) == 3
    # monomial count by brute force
    for r in range(1, 4):
        for g in range(6):
            mons = sum(1 for e in itertools.product(range(g + 1), repeat=r) if sum(e) == g)
            assert homog_dim(r, g) == mons


def test_ell_h():
    ell, h = ell_h_series(1, 6)
    assert all(c == 1 for c in ell.coeffs) and all(c == 1 for c in h.coeffs)
    ell, h = ell_h_series(2, 4)
    assert list(h.coeffs) == [1, 1, 3, 15, 105]
    assert list(ell.coeffs[:4]) == [1, 3, 15, 105]


# -- solver -------------------------------------------------------------------------


def test_f2():
    assert list(solve_f(2, 5).coeffs) == [0, 1, 3, 24, 267, 3546]


def test_f1_is_x_F1():
    f, F = f_and_F(1, 10)
    assert f == F  # F is stored with the extra factor x already


def test_F_examples():
    assert list(F_series(2, 5).coeffs[1:]) == [1, 1, 6, 57, 678]
    assert list(F_series(1, 5).coeffs[1:]) == [1, 1, 2, 5, 14]
    assert F_series(4, 3)[3] == 70


@given(st.integers(1, 9))
def test_low_coefficients(m):
    f = solve_f(m, 3)
    assert f[0] == 0 and f[1] == 1


def test_colored_tree_catalan():
    ones = FormalSeries.of([1] * 12, 11)
    pa, _ = colored_tree_series(ones)
    assert pa == F_series(1, 11)


@pytest.mark.parametrize("m", range(1, 9))
def test_relation(m):
    f, F = f_and_F(m, 60)
    assert not any(relation_residual(f, F).coeffs)


@pytest.mark.parametrize("m", range(1, 5))
def test_gf_matches_tree_sum(m):
    assert hypercat_sequence(m, 10) == [hypercatalan(n, m) for n in range(11)]


def test_fault_breaks_relation():
    bad = lambda m, k: block_partition_count(m, k) + 1  # noqa: E731
    f, F = f_and_F(2, 20, wm=bad)
    assert any(relation_residual(f, F).coeffs)


def test_coeff_extraction():
    F = F_series(3, 4)
    assert hypercat_coeff(F, 3) == 860
    with pytest.raises(ValidationError):
        hypercat_coeff(F, 4)
    half = FormalSeries.of([0, Fraction(1, 2)], 2)
    with pytest.raises(ConsistencyError):
        hypercat_coeff(half, 0)


def test_fast_path_matches_fractions():
    # a non-integral phi takes the Fraction path; compare with plain fixed-point iteration
    phi = [Fraction(c, 2) for c in ell_h_series(2, 8)[0].coeffs]
    pa, _ = colored_tree_series(FormalSeries.of(phi, 8))
    direct = FormalSeries.x(8)
    for _ in range(8):
        direct = FormalSeries.of(phi, 8).compose(direct).shift()
    assert pa == direct
    assert pa[2] == phi[0] * phi[1]
