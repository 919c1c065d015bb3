"""Growth constants of C_n^(m) by difference-operator acceleration.

If a_n ~ C_0 + C_1/n + C_2/n^2 + ..., then b_n = nabla^k(n^k a_n)/k! keeps
C_0 and pushes every other term down to O(n^(-k-1)).  The sequences fed
in are kept as exact fractions wherever no logarithm or irrational power
is involved, and only the final value is rounded.

The growth ansatz is C_n^(m) ~ K A^n (n!)^(m-1) n^rho.  The conjectured
closed form writes the same thing as

    K_m * A^(n+1) (n!)^(m-1) / (pi n)^((m-1)/2),

so K = K_m * A / pi^((m-1)/2); both numbers are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .errors import PrecisionError, ValidationError
from .series import hypercat_sequence

DEFAULT_PRECISION_BITS = 512
DEFAULT_ACCEL_POWER = 16
# bits kept in reserve when judging cancellation in a floating accelerate
GUARD_BITS = 64


def _context(bits: int) -> mpmath.ctx_mp.MPContext:
    if bits < 53:
        raise ValidationError(f"precision must be at least 53 bits, got {bits}")
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class RealSeq:
    """a_start, a_(start+1), ...; entries are all Fractions or all mpf."""

    values: tuple
    start_index: int = 0
    precision_bits: int = DEFAULT_PRECISION_BITS

    def __post_init__(self):
        if self.start_index < 0:
            raise ValidationError("start_index must be >= 0")
        kinds = {isinstance(v, Fraction) for v in self.values}
        if len(kinds) > 1:
            raise ValidationError("mixing exact and floating values")
        if not all(isinstance(v, Fraction) or mpmath.isfinite(v) for v in self.values):
            raise ValidationError("sequence values must be finite")

    @classmethod
    def of(cls, values: Sequence, start_index: int = 0, precision_bits: int = DEFAULT_PRECISION_BITS):
        vals = tuple(
            Fraction(v) if isinstance(v, (int, Fraction)) else v for v in values
        )
        return cls(vals, start_index, precision_bits)

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    def __len__(self):
        return len(self.values)

    def at(self, n: int):
        return self.values[n - self.start_index]

    @property
    def last(self):
        return self.values[-1]

    def to_mpf(self, ctx=None):
        ctx = ctx or _context(self.precision_bits)
        return [_to_mpf(v, ctx) for v in self.values]


def _to_mpf(v, ctx):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / v.denominator
    return ctx.mpf(v)


def accelerate(seq: RealSeq, k: int = DEFAULT_ACCEL_POWER) -> RealSeq:
    """b_N = sum_j (-1)^j binom(k, j) (N-j)^k a_(N-j) / k!, for N >= start + k.

    This is the k-th difference of n^k a_n / k!, labeled by its last index.
    Exact input gives exact output.  With floating input a PrecisionError is
    raised when the alternating sum cancels more bits than the working
    precision can spare.
    """
    if k < 0 or k % 2:
        raise ValidationError(f"acceleration power must be even and >= 0, got {k}")
    if len(seq) <= k:
        raise ValidationError(f"need more than {k} terms, have {len(seq)}")
    weights = [(-1) ** j * math.comb(k, j) for j in range(k + 1)]
    kfact = math.factorial(k)
    start = seq.start_index
    if seq.exact:
        out = []
        for i in range(k, len(seq)):
            N = start + i
            s = sum(w * (N - j) ** k * seq.values[i - j] for j, w in enumerate(weights))
            out.append(Fraction(s) / kfact)
        return RealSeq(tuple(out), start + k, seq.precision_bits)
    ctx = _context(seq.precision_bits)
    vals = seq.to_mpf(ctx)
    out = []
    budget = seq.precision_bits - GUARD_BITS
    for i in range(k, len(vals)):
        N = start + i
        terms = [w * ctx.mpf(N - j) ** k * vals[i - j] for j, w in enumerate(weights)]
        s = ctx.fsum(terms)
        biggest = max(abs(t) for t in terms)
        if biggest and (not s or ctx.log(biggest / abs(s), 2) > budget):
            raise PrecisionError(
                f"acceleration at n={N} cancels more than {budget} bits; raise the precision"
            )
        out.append(s / kfact)
    return RealSeq(tuple(out), start + k, seq.precision_bits)


@dataclass(frozen=True)
class GrowthEstimate:
    """C_n^(m) ~ K A^n (n!)^(m-1) n^rho, with K = K_m A / pi^((m-1)/2).

    ``terms_used`` and ``accel_power`` are None for closed-form values.
    """

    A: object
    rho: object
    K: object
    terms_used: int | None = None
    accel_power: int | None = None
    K_m: object = None

    def __post_init__(self):
        if self.terms_used is not None and self.accel_power is not None:
            if self.terms_used < self.accel_power + 2:
                raise ValidationError("terms_used must be at least accel_power + 2")


def conjectured_constants(m: int, precision_bits: int = DEFAULT_PRECISION_BITS) -> GrowthEstimate:
    """Closed-form A, rho, K (and K_m for m >= 2)."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    ctx = _context(precision_bits)
    if m == 1:
        return GrowthEstimate(A=ctx.mpf(4), rho=ctx.mpf(-3) / 2, K=1 / ctx.sqrt(ctx.pi))
    A = ctx.mpf(m ** (m - 1)) / math.factorial(m - 1)
    rho = -ctx.mpf(m - 1) / 2
    if m == 2:
        K_m = ctx.exp(ctx.mpf(3) / 2)
    else:
        lead, first = (2, 2) if m % 2 else (ctx.sqrt(2), 3)
        prod = math.prod(math.comb(j, 2) for j in range(first, m, 2))
        K_m = lead * prod / ctx.power(m, ctx.mpf(2 * m - 3) / 2)
    K = K_m * A / ctx.power(ctx.pi, ctx.mpf(m - 1) / 2)
    return GrowthEstimate(A=A, rho=rho, K=K, K_m=K_m)


def _normalised(values: Sequence[int], m: int) -> list[Fraction]:
    """C_n / (n!)^(m-1)."""
    out = []
    fact = 1
    for n, c in enumerate(values):
        if n:
            fact *= n
        out.append(Fraction(c, fact ** (m - 1)))
    return out


def estimate_growth(
    m: int,
    terms: int,
    k: int = DEFAULT_ACCEL_POWER,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    *,
    values: Sequence[int] | None = None,
) -> GrowthEstimate:
    """Empirical A, rho and K from C_0..C_terms.

    ``terms`` is the last index used, so ``terms=100`` reads 101 values.
    A comes from the exact ratios a_(n+1)/a_n (labeled n), rho from the
    log-ratio sequence after dividing out the conjectured A^n, and K from
    C_n n^(-rho) / A^n (n!)^(m-1) with the conjectured A and rho.  ``values`` may supply the
    C_n directly; otherwise they come from the generating function.
    """
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if terms < k + 8:
        raise ValidationError(f"need at least k + 8 = {k + 8} terms, got {terms}")
    if values is None:
        values = hypercat_sequence(m, terms)
    elif len(values) <= terms:
        raise ValidationError(f"C_0..C_{terms} requested, {len(values)} values supplied")
    values = list(values[: terms + 1])
    count = terms + 1
    ctx = _context(precision_bits)
    conj = conjectured_constants(m, precision_bits)
    a = _normalised(values, m)

    ratios = RealSeq.of([a[n + 1] / a[n] for n in range(count - 1)], 0, precision_bits)
    A = _to_mpf(accelerate(ratios, k).last, ctx)

    A_exact = Fraction(m ** (m - 1), math.factorial(m - 1)) if m > 1 else Fraction(4)
    logs = [ctx.log(_to_mpf(a[n] / A_exact**n, ctx)) for n in range(count)]
    slopes = [
        (logs[n + 1] - logs[n]) / (ctx.log(n + 1) - ctx.log(n)) for n in range(1, count - 1)
    ]
    rho = _to_mpf(accelerate(RealSeq(tuple(slopes), 1, precision_bits), k).last, ctx)

    rho_exact = Fraction(-(m - 1), 2) if m > 1 else Fraction(-3, 2)
    if rho_exact.denominator == 1:
        scaled = RealSeq.of(
            [a[n] / A_exact**n * Fraction(n) ** -rho_exact.numerator for n in range(1, count)],
            1,
            precision_bits,
        )
    else:
        scaled = RealSeq(
            tuple(
                _to_mpf(a[n] / A_exact**n, ctx) * ctx.power(n, -ctx.mpf(rho_exact.numerator) / 2)
                for n in range(1, count)
            ),
            1,
            precision_bits,
        )
    K = _to_mpf(accelerate(scaled, k).last, ctx)
    K_m = None
    if m > 1:
        K_m = K * ctx.power(ctx.pi, ctx.mpf(m - 1) / 2) / conj.A
    return GrowthEstimate(A=A, rho=rho, K=K, terms_used=terms, accel_power=k, K_m=K_m)
