import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hypercat.errors import BudgetExceeded, ValidationError
from hypercat.gluing import (
    Gluing,
    GWeightPolynomial,
    NPolynomial,
    bell_polynomials,
    enumerate_gluings,
    moment_series,
    trace_polynomial,
    vertex_classes,
)
from hypercat.series import block_partition_count
from hypercat.tours import hypercatalan

A2 = "g1^2 + g2"
A4 = "g1^4 + 6*g1^2*g2 + 4*g1*g3 + 3*g2^2 + g4"
A6 = (
    "g1^6 + 15*g1^4*g2 + 20*g1^3*g3 + 45*g1^2*g2^2 + 15*g1^2*g4"
    " + 60*g1*g2*g3 + 6*g1*g5 + 15*g2^3 + 15*g2*g4 + 10*g3^2 + g6"
)
KNOWN = {
    (1, 4): "2*N^3 + N",
    (1, 6): "5*N^4 + 10*N^2",
    (1, 8): "14*N^5 + 70*N^3 + 21*N",
    (2, 4): "N^2",
    (2, 8): "6*N^3 + 21*N^2 + 8*N",
    (2, 12): "57*N^4 + 715*N^3 + 2991*N^2 + 2012*N",
}
BELL = [1, 1, 2, 5, 15, 52, 203, 877]


def bell_number(n):
    """B_n from the triangle recurrence, independent of the polynomial code."""
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def test_gluing_counts():
    assert sum(1 for _ in enumerate_gluings(4, 1)) == 3
    assert sum(1 for _ in enumerate_gluings(8, 2)) == 35
    assert sum(1 for _ in enumerate_gluings(4, 2)) == 1
    assert list(enumerate_gluings(0, 3)) == [Gluing(0, 6, ())]


@pytest.mark.parametrize("r,m", [(6, 1), (8, 1), (12, 2), (12, 3)])
def test_gluings_are_partitions(r, m):
    gs = list(enumerate_gluings(r, m))
    assert len(gs) == len(set(gs)) == block_partition_count(2 * m, r)
    assert gs == list(enumerate_gluings(r, m))  # deterministic


def test_divisibility():
    with pytest.raises(ValidationError):
        list(enumerate_gluings(6, 2))
    with pytest.raises(ValidationError):
        trace_polynomial(1, 5)
    with pytest.raises(ValidationError):
        Gluing(4, 2, ((0, 1), (1, 2)))


def test_vertex_classes():
    (square,) = enumerate_gluings(4, 2)
    assert vertex_classes(square) == 2
    by_blocks = {g.blocks: vertex_classes(g) for g in enumerate_gluings(4, 1)}
    assert by_blocks == {((0, 1), (2, 3)): 3, ((0, 3), (1, 2)): 3, ((0, 2), (1, 3)): 1}
    hexagon = [vertex_classes(g) for g in enumerate_gluings(6, 1)]
    assert hexagon.count(4) == 5


@pytest.mark.parametrize("r", [2, 4, 6, 8, 10])
def test_m1_is_plain_vertex_sum(r):
    """For pairings the trace polynomial is the sum of N^v over gluings."""
    counts = {}
    for g in enumerate_gluings(r, 1):
        v = vertex_classes(g)
        counts[v] = counts.get(v, 0) + 1
    assert trace_polynomial(1, r) == NPolynomial.of(counts)


@pytest.mark.parametrize("key", sorted(KNOWN))
def test_known_polynomials(key):
    m, r = key
    assert str(trace_polynomial(m, r)) == KNOWN[key]


@pytest.mark.parametrize("m,r", [(1, 0), (1, 2), (1, 10), (1, 12), (2, 0), (2, 4), (3, 6), (3, 12)])
def test_value_at_one_and_leading(m, r):
    p = trace_polynomial(m, r)
    assert p(1) == block_partition_count(2 * m, r)
    assert p.degree == r // (2 * m) + 1
    assert p.leading_coefficient == hypercatalan(r // (2 * m), m)


def test_max_vertices_from_alternating_identification():
    # the alternating pattern reaches the leading degree with multiplicity C_d
    for m, r in [(1, 8), (2, 8), (3, 12)]:
        d = r // (2 * m)
        vs = [vertex_classes(g) for g in enumerate_gluings(r, m)]
        assert max(vs) == d + 1
        assert vs.count(d + 1) == hypercatalan(d, m)


@pytest.mark.parametrize("m,r", [(1, 10), (2, 8), (2, 12), (3, 12), (4, 8)])
def test_memo_matches_direct_expansion(m, r):
    assert trace_polynomial(m, r) == trace_polynomial(m, r, method="expand")


@pytest.mark.parametrize("method", ["memo", "expand"])
def test_budget(method):
    with pytest.raises(BudgetExceeded):
        trace_polynomial(2, 12, method=method, budget=100)
    with pytest.raises(BudgetExceeded):
        trace_polynomial(2, 12, method=method, time_limit=0)
    with pytest.raises(ValidationError):
        trace_polynomial(2, 8, method="guess")


def test_npolynomial_format():
    assert str(NPolynomial.of({3: 6, 2: 21, 1: 8})) == "6*N^3 + 21*N^2 + 8*N"
    assert str(NPolynomial.of({1: 1})) == "N"
    assert str(NPolynomial.of({2: 1, 0: -3})) == "N^2 - 3"
    assert str(NPolynomial.of({})) == "0"
    assert NPolynomial.of({2: 0, 1: 4}).terms == ((1, 4),)


# -- moment series --------------------------------------------------------------


def test_bell_numbers():
    ys = bell_polynomials(7)
    assert [y([1] * 8) for y in ys] == BELL == [bell_number(n) for n in range(8)]


@given(st.integers(0, 7))
def test_bell_weighted_degree(n):
    y = bell_polynomials(n)[n]
    assert y.weighted_degrees() == ({n} if n else {0})


def test_moment_examples():
    ms1 = moment_series(1, 6)
    assert ms1[2] == GWeightPolynomial.parse(A2).scale(Fraction(1, 2))
    assert ms1[4] == GWeightPolynomial.parse(A4).scale(Fraction(1, 8))
    assert ms1[6] == GWeightPolynomial.parse(A6).scale(Fraction(1, 48))
    assert len(GWeightPolynomial.parse(A6).terms) == 11
    assert all(not ms1[n].terms for n in (1, 3, 5))
    ms2 = moment_series(2, 8)
    assert ms2[8].coeffs[(0, 0, 0, 2)] == Fraction(35, 1152)
    assert ms2[4].scale(24) == ms1[4].scale(8)  # A_4 = B_4
    assert ms2[8].scale(1152).coeffs[(8,)] == 1


@given(st.integers(1, 4), st.integers(0, 12))
def test_moment_series_shape(m, n):
    c = moment_series(m, n)[n]
    if n % (2 * m):
        assert not c.terms
    else:
        d = n // (2 * m)
        assert c.weighted_degrees() == ({n} if n else {0})
        assert c([1] * 12) * math.factorial(2 * m) ** d * math.factorial(d) == bell_number(n)


def test_g_weight_parse_and_str():
    p = GWeightPolynomial.parse("35/1152*g4^2 + g1 - 2*g2")
    assert p.coeffs == {(0, 0, 0, 2): Fraction(35, 1152), (1,): 1, (0, 1): -2}
    assert GWeightPolynomial.parse(str(p)) == p
    assert str(GWeightPolynomial.parse(A4)) == A4
