"""Truncated power series and the generating-function route to C_n^(m).

Index convention: ``F_series(m, order)`` holds ``sum_n C_n^(m) x^(n+1)``,
so ``C_n^(m)`` sits at ``x^(n+1)``.  Use :func:`hypercat_coeff` or
:func:`hypercat_sequence` and the shift never leaks out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConsistencyError, ValidationError

# the composed residual check is cubic in the order; beyond this it is skipped
RESIDUAL_CHECK_MAX_ORDER = 64


def _frac(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


@dataclass(frozen=True)
class FormalSeries:
    """Coefficients of x^0..x^order, exact rationals."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValidationError(
                f"series of order {self.order} needs {self.order + 1} coefficients"
            )

    @classmethod
    def of(cls, coeffs: Sequence, order: int | None = None) -> FormalSeries:
        """Build from a coefficient list, zero-padding or truncating to ``order``."""
        if order is None:
            order = max(len(coeffs) - 1, 0)
        cs = [_frac(c) for c in coeffs[: order + 1]]
        cs += [Fraction(0)] * (order + 1 - len(cs))
        return cls(order, tuple(cs))

    @classmethod
    def x(cls, order: int) -> FormalSeries:
        return cls.of([0, 1], order)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i <= self.order else Fraction(0)

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries.of([self.coeffs[0] + other, *self.coeffs[1:]], self.order)
        order = min(self.order, other.order)
        return FormalSeries.of([self[i] + other[i] for i in range(order + 1)], order)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries(self.order, tuple(c * other for c in self.coeffs))
        order = min(self.order, other.order)
        out = [Fraction(0)] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if a:
                for j in range(order + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return FormalSeries(order, tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> FormalSeries:
        """Multiply by x^k, keeping the same order."""
        return FormalSeries.of([0] * k + list(self.coeffs), self.order)

    def compose(self, inner: FormalSeries) -> FormalSeries:
        """self(inner), by Horner's rule; ``inner`` must have zero constant term."""
        if inner[0] != 0:
            raise ValidationError("composition needs an inner series with zero constant term")
        order = min(self.order, inner.order)
        acc = FormalSeries.of([self.coeffs[order]], order)
        for c in reversed(self.coeffs[:order]):
            acc = acc * inner + c
        return acc

    __call__ = compose

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)


def block_partition_count(m: int, k: int) -> int:
    """W_m(k): partitions of a k-set into blocks of size m."""
    if m < 1 or k < 0:
        raise ValidationError(f"need m >= 1 and k >= 0, got m={m}, k={k}")
    if k % m:
        return 0
    d = k // m
    return math.factorial(k) // (math.factorial(m) ** d * math.factorial(d))


def homog_dim(r: int, g: int) -> int:
    """Dimension of degree-g homogeneous polynomials in r variables."""
    if r < 1 or g < 0:
        raise ValidationError(f"need r >= 1 and g >= 0, got r={r}, g={g}")
    return math.comb(r - 1 + g, r - 1)


WmFunc = Callable[[int, int], int]


def ell_h_series(
    m: int, order: int, *, wm: WmFunc = block_partition_count
) -> tuple[FormalSeries, FormalSeries]:
    """The colour series (ell_m, h_m) for non-root and root vertices.

    ``wm`` replaces W_m; it exists so that verification runs can be fed a
    deliberately wrong block count.
    """
    ell = [wm(m, d * m) * homog_dim(m, d * m) for d in range(order + 1)]
    h = [wm(m, d * m) for d in range(order + 1)]
    return FormalSeries.of(ell, order), FormalSeries.of(h, order)


def _powers_of_solution(phi: Sequence, order: int) -> tuple[list, list[list]]:
    """Solve P = x * phi(P) one coefficient at a time.

    Returns the coefficients of P and a table ``pw[d][j] = [x^j] P^d`` for
    ``0 <= d, j <= order``.  Each new coefficient of P only needs earlier
    ones, so one pass fixes them all.
    """
    zero = phi[0] * 0
    f = [zero] * (order + 1)
    pw = [[zero] * (order + 1) for _ in range(order + 1)]
    pw[0][0] = zero + 1
    for j in range(1, order + 1):
        col = j - 1
        for d in range(1, col + 1):
            prev = pw[d - 1]
            pw[d][col] = sum((f[i] * prev[col - i] for i in range(1, col - d + 2)), zero)
        f[j] = sum((phi[d] * pw[d][col] for d in range(min(j, len(phi)))), zero)
    for d in range(1, order + 1):
        prev = pw[d - 1]
        pw[d][order] = sum((f[i] * prev[order - i] for i in range(1, order - d + 2)), zero)
    return f, pw


def _coefficients(series: FormalSeries) -> list:
    if series.is_integral():
        return [c.numerator for c in series.coeffs]
    return list(series.coeffs)


def colored_tree_series(
    a: FormalSeries, b: FormalSeries | None = None, order: int | None = None
) -> tuple[FormalSeries, FormalSeries | None]:
    """Generating functions of coloured plane trees.

    P_A solves P_A = x A(P_A); if ``b`` is given, P_{A,B} = x B(P_A) colours
    the root by ``b`` instead.
    """
    if order is None:
        order = a.order
    if order < 1:
        raise ValidationError("order must be >= 1")
    phi = _coefficients(FormalSeries.of(a.coeffs, order))
    f, pw = _powers_of_solution(phi, order)
    pa = FormalSeries.of(f, order)
    if b is None:
        return pa, None
    psi = _coefficients(FormalSeries.of(b.coeffs, order))
    zero = psi[0] * 0
    shifted = [zero] + [
        sum((psi[d] * pw[d][n] for d in range(n + 1)), zero) for n in range(order)
    ]
    return pa, FormalSeries.of(shifted, order)


def _check_residual(f: FormalSeries, ell: FormalSeries) -> None:
    if f.order > RESIDUAL_CHECK_MAX_ORDER:
        return
    residual = ell.compose(f).shift() - f
    if any(residual.coeffs):
        raise ConsistencyError("f_m does not satisfy f = x ell(f)")


def solve_f(m: int, order: int, *, wm: WmFunc = block_partition_count) -> FormalSeries:
    """The series f_m with f_m = x ell_m(f_m), to x^order."""
    if m < 1 or order < 1:
        raise ValidationError(f"need m >= 1 and order >= 1, got m={m}, order={order}")
    ell, _ = ell_h_series(m, order, wm=wm)
    f, _ = colored_tree_series(ell, order=order)
    _check_residual(f, ell)
    return f


def f_and_F(
    m: int, order: int, *, wm: WmFunc = block_partition_count
) -> tuple[FormalSeries, FormalSeries]:
    """(f_m, F_m) to x^order, sharing one solve."""
    if m < 1 or order < 1:
        raise ValidationError(f"need m >= 1 and order >= 1, got m={m}, order={order}")
    ell, h = ell_h_series(m, order, wm=wm)
    f, F = colored_tree_series(ell, h, order)
    _check_residual(f, ell)
    return f, F


def F_series(m: int, order: int, *, wm: WmFunc = block_partition_count) -> FormalSeries:
    """sum_n C_n^(m) x^(n+1), computed as F_m = x h_m(f_m), to x^order."""
    return f_and_F(m, order, wm=wm)[1]


def hypercat_coeff(F: FormalSeries, n: int) -> int:
    """C_n^(m) read off F_m (the coefficient of x^(n+1))."""
    if not 0 <= n < F.order:
        raise ValidationError(f"C_{n} needs a series of order > {n}, have {F.order}")
    c = F[n + 1]
    if c.denominator != 1:
        raise ConsistencyError(f"coefficient C_{n} = {c} is not an integer")
    return c.numerator


def hypercat_sequence(m: int, n_max: int, **kwargs) -> list[int]:
    """[C_0^(m), ..., C_{n_max}^(m)] via the generating function."""
    F = F_series(m, n_max + 1, **kwargs)
    return [hypercat_coeff(F, n) for n in range(n_max + 1)]


def relation_residual(f: FormalSeries, F: FormalSeries) -> FormalSeries:
    """f^2 - x F + x with F = sum C_n x^n, identically zero to the truncation order.

    ``F`` is passed in the shifted form returned by :func:`F_series`, which
    already carries the factor x.
    """
    return f * f - F + FormalSeries.x(min(f.order, F.order))
