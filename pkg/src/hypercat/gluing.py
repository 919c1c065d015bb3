"""Polygon gluings into 2m-blocks, trace polynomials and moment series.

Polygon sides are numbered 0..r-1 clockwise; side ``e`` runs from corner
``e`` to corner ``e+1 (mod r)``.

``trace_polynomial`` expands the formal matrix integral of Tr X^r.  With
moments W_2m(k) the only non-vanishing cumulant is the 2m-th, so the r
matrix entries are grouped into blocks of 2m sides, and each block must
carry a single index pair {a, b}.  A block on the diagonal (a == b) has
weight 1.  An off-diagonal block has weight 1 when the number of its sides
read as (a, b) has the parity of m, and 0 otherwise.  Each block then
contributes a signed sum of corner identifications:

* one oriented identification per admissible orientation pattern (side j
  aligned with or against the first side of the block, the aligned count
  congruent to m mod 2), weight +1 each; there are 2^(2m-2) of them;
* the collapsed identification (all 2m sides become one loop), weight
  -(2^(2m-2) - 1), which corrects the diagonal index choices counted once
  per pattern above.

For m = 1 the collapsed term has weight zero and the single pattern is the
usual orientable pairing.  The alternating pattern used by
:func:`vertex_classes` is always admissible and is the one that reaches the
maximal number of corner classes.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterator, Mapping

from .errors import BudgetExceeded, ValidationError
from .series import block_partition_count

DEFAULT_GLUING_BUDGET = 10**8


@dataclass(frozen=True)
class Gluing:
    r: int
    block_size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = sorted(e for b in self.blocks for e in b)
        if seen != list(range(self.r)):
            raise ValidationError("blocks must partition the polygon sides")
        if any(len(b) != self.block_size for b in self.blocks):
            raise ValidationError(f"every block must have {self.block_size} sides")


def _check_divisible(r: int, m: int) -> None:
    if m < 1 or r < 0:
        raise ValidationError(f"need m >= 1 and r >= 0, got m={m}, r={r}")
    if r % (2 * m):
        raise ValidationError(f"2m = {2 * m} does not divide r = {r}")


def _partitions(edges: list[int], size: int) -> Iterator[list[tuple[int, ...]]]:
    if not edges:
        yield []
        return
    first, rest = edges[0], edges[1:]
    for others in combinations(rest, size - 1):
        taken = set(others)
        remainder = [e for e in rest if e not in taken]
        for tail in _partitions(remainder, size):
            yield [(first, *others), *tail]


def enumerate_gluings(r: int, m: int) -> Iterator[Gluing]:
    """All W_2m(r) partitions of the sides into 2m-blocks, deterministic order."""
    _check_divisible(r, m)
    for blocks in _partitions(list(range(r)), 2 * m):
        yield Gluing(r, 2 * m, tuple(blocks))


class _RollbackUnionFind:
    """Union-find without path compression so unions can be undone."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.classes = n
        self.history: list[int] = []

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.classes -= 1
        self.history.append(b)

    def mark(self) -> int:
        return len(self.history)

    def rollback(self, mark: int) -> None:
        while len(self.history) > mark:
            b = self.history.pop()
            a = self.parent[b]
            self.size[a] -= self.size[b]
            self.parent[b] = b
            self.classes += 1


def _ends(e: int, r: int) -> tuple[int, int]:
    return e, (e + 1) % r


def vertex_classes(g: Gluing) -> int:
    """Corner classes after the alternating identification of every block.

    Sides of a block, in clockwise order, alternate orientation starting
    clockwise; all orientation-start corners are merged, and likewise all
    orientation-end corners.
    """
    uf = _RollbackUnionFind(g.r)
    for b in g.blocks:
        starts, ends = [], []
        for j, e in enumerate(sorted(b)):
            s, t = _ends(e, g.r)
            if j % 2:
                s, t = t, s
            starts.append(s)
            ends.append(t)
        for s in starts[1:]:
            uf.union(starts[0], s)
        for t in ends[1:]:
            uf.union(ends[0], t)
    return uf.classes


def _block_options(block: tuple[int, ...], r: int, m: int) -> list[tuple[int, list[tuple[int, int]]]]:
    """(weight, unions) for every identification a block contributes."""
    ends = [_ends(e, r) for e in block]
    s0, t0 = ends[0]
    options = []
    for flips in product((0, 1), repeat=len(block) - 1):
        aligned = len(block) - sum(flips)
        if aligned % 2 != m % 2:
            continue
        unions = []
        for (s, t), flip in zip(ends[1:], flips):
            if flip:
                s, t = t, s
            unions += [(s0, s), (t0, t)]
        options.append((1, unions))
    collapsed_weight = 1 - len(options)
    if collapsed_weight:
        corners = [c for st in ends for c in st]
        options.append((collapsed_weight, [(corners[0], c) for c in corners[1:]]))
    return options


@dataclass(frozen=True)
class NPolynomial:
    """Integer polynomial in N, stored as (exponent, coefficient) pairs, descending."""

    terms: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, coeffs: Mapping[int, int]) -> NPolynomial:
        return cls(tuple(sorted(((e, c) for e, c in coeffs.items() if c), reverse=True)))

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return self.terms[0][0] if self.terms else -1

    @property
    def leading_coefficient(self) -> int:
        return self.terms[0][1] if self.terms else 0

    def __call__(self, N):
        return sum(c * N**e for e, c in self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (e, c) in enumerate(self.terms):
            sign = "-" if c < 0 else "+"
            c = abs(c)
            mono = "" if e == 0 else ("N" if e == 1 else f"N^{e}")
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            if i == 0:
                out.append(f"-{body}" if sign == "-" else body)
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)


class _Meter:
    """Counts expansion terms against a budget and an optional deadline."""

    def __init__(self, budget: int, time_limit: float | None):
        self.budget = budget
        self.time_limit = time_limit
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.terms = 0

    def tick(self) -> None:
        self.terms += 1
        if self.terms > self.budget:
            raise BudgetExceeded(f"more than {self.budget} expansion terms")
        if self.deadline is not None and not self.terms % 4096 and time.monotonic() > self.deadline:
            raise BudgetExceeded(
                f"time limit of {self.time_limit} s reached after {self.terms} terms"
            )


def _expand(m: int, r: int, meter: _Meter) -> dict[int, int]:
    """Every gluing times every identification choice, via rollback union-find."""
    size = 2 * m
    acc: dict[int, int] = {}
    uf = _RollbackUnionFind(r)
    options_cache: dict[tuple[int, ...], list] = {}

    def place(remaining: list[int], weight: int):
        if not remaining:
            acc[uf.classes] = acc.get(uf.classes, 0) + weight
            meter.tick()
            return
        first, rest = remaining[0], remaining[1:]
        for others in combinations(rest, size - 1):
            block = (first, *others)
            taken = set(others)
            remainder = [e for e in rest if e not in taken]
            opts = options_cache.get(block)
            if opts is None:
                opts = options_cache[block] = _block_options(block, r, m)
            for w, unions in opts:
                mark = uf.mark()
                for a, b in unions:
                    uf.union(a, b)
                place(remainder, weight * w)
                uf.rollback(mark)

    place(list(range(r)), 1)
    return acc


def _side_patterns(m: int) -> list[tuple[int, list[tuple[tuple[int, int], tuple[int, int]]]]]:
    """_block_options on abstract sides: unions of (side, 0=start/1=end) corners."""
    size = 2 * m
    options = []
    for flips in product((0, 1), repeat=size - 1):
        if (size - sum(flips)) % 2 != m % 2:
            continue
        unions = []
        for i, f in enumerate(flips, start=1):
            unions += [((0, 0), (i, f)), ((0, 1), (i, 1 - f))]
        options.append((1, unions))
    collapsed_weight = 1 - len(options)
    if collapsed_weight:
        corners = [(i, c) for i in range(size) for c in (0, 1)]
        options.append((collapsed_weight, [(corners[0], x) for x in corners[1:]]))
    return options


def _memoized(m: int, r: int, meter: _Meter) -> dict[int, int]:
    """Same sum, memoized on the sides still to be glued.

    The admissible patterns are closed under reordering the sides of a
    block, so what remains to be summed depends only on the multiset of
    (start class, end class) pairs of the unglued sides, not on where they
    sit on the polygon.  States are tuples of such pairs with classes
    renumbered by first appearance.
    """
    size = 2 * m
    patterns = _side_patterns(m)
    memo: dict[tuple, dict[int, int]] = {}

    def solve(sides: tuple[tuple[int, int], ...], k: int) -> dict[int, int]:
        if not sides:
            return {0: 1}
        hit = memo.get(sides)
        if hit is not None:
            return hit
        out: dict[int, int] = {}
        n = len(sides)
        for others in combinations(range(1, n), size - 1):
            block = [sides[0]] + [sides[i] for i in others]
            taken = set(others)
            rest = [sides[i] for i in range(1, n) if i not in taken]
            for w, unions in patterns:
                meter.tick()
                parent = list(range(k))
                live = k
                for (i, a), (j, b) in unions:
                    x = block[i][a]
                    while parent[x] != x:
                        x = parent[x]
                    y = block[j][b]
                    while parent[y] != y:
                        y = parent[y]
                    if x != y:
                        parent[y] = x
                        live -= 1
                renum: dict[int, int] = {}
                nxt = []
                for s, t in rest:
                    while parent[s] != s:
                        s = parent[s]
                    while parent[t] != t:
                        t = parent[t]
                    nxt.append((renum.setdefault(s, len(renum)), renum.setdefault(t, len(renum))))
                closed = live - len(renum)  # classes no unglued side touches
                for e, c in solve(tuple(nxt), len(renum)).items():
                    out[e + closed] = out.get(e + closed, 0) + w * c
        memo[sides] = out
        return out

    return solve(tuple(_ends(e, r) for e in range(r)), r)


def trace_polynomial(
    m: int,
    r: int,
    *,
    method: str = "memo",
    budget: int = DEFAULT_GLUING_BUDGET,
    time_limit: float | None = None,
    check: bool = True,
) -> NPolynomial:
    """P_2m(N, r): the formal matrix integral of Tr X^r as a polynomial in N.

    ``method="expand"`` walks all W_2m(r) gluings times the
    (2^(2m-2) + 1)^(r/2m) identification choices; ``"memo"`` (default)
    shares the work between gluings that leave equivalent unglued sides.
    ``budget`` caps the expansion terms visited and ``time_limit`` the
    wall-clock seconds; either raises BudgetExceeded.  With ``check`` the
    value at N = 1 is compared with W_2m(r) and the leading term with
    C^(m)_{r/2m} N^(r/2m + 1).
    """
    _check_divisible(r, m)
    if method not in ("memo", "expand"):
        raise ValidationError(f"unknown method {method!r}")
    if r == 0:
        return NPolynomial.of({1: 1})
    size = 2 * m
    meter = _Meter(budget, time_limit)
    acc = (_memoized if method == "memo" else _expand)(m, r, meter)
    poly = NPolynomial.of(acc)
    if check:
        from .tours import hypercatalan

        if poly(1) != block_partition_count(size, r):
            raise AssertionError(f"P_{size}(1, {r}) = {poly(1)} != W_{size}({r})")
        d = r // size
        if poly.degree != d + 1 or poly.leading_coefficient != hypercatalan(d, m):
            raise AssertionError(f"leading term of P_{size}(N, {r}) is not C_{d}^({m}) N^{d + 1}")
    return poly


# -- moment series ------------------------------------------------------------


Monomial = tuple[int, ...]  # exponents of g_1, g_2, ...; trailing zeros dropped


def _strip(key) -> Monomial:
    key = list(key)
    while key and key[-1] == 0:
        key.pop()
    return tuple(key)


@dataclass(frozen=True)
class GWeightPolynomial:
    """Polynomial in g_1, g_2, ... with rational coefficients."""

    terms: tuple[tuple[Monomial, Fraction], ...]

    @classmethod
    def of(cls, coeffs: Mapping) -> GWeightPolynomial:
        merged: dict[Monomial, Fraction] = {}
        for k, c in coeffs.items():
            k = _strip(k)
            merged[k] = merged.get(k, Fraction(0)) + Fraction(c)
        width = max((len(k) for k in merged), default=0)
        items = [(k, c) for k, c in merged.items() if c]
        items.sort(key=lambda kc: kc[0] + (0,) * (width - len(kc[0])), reverse=True)
        return cls(tuple(items))

    @classmethod
    def parse(cls, text: str) -> GWeightPolynomial:
        """Read sums like ``"g1^2 + 3*g2 + 35/1152*g4^2"``."""
        coeffs: dict[Monomial, Fraction] = {}
        for term in text.replace(" ", "").replace("-", "+-").split("+"):
            if not term:
                continue
            coef = Fraction(1)
            exps: dict[int, int] = {}
            for factor in term.split("*"):
                if factor.lstrip("-").startswith("g"):
                    if factor.startswith("-"):
                        coef = -coef
                        factor = factor[1:]
                    var, _, power = factor[1:].partition("^")
                    exps[int(var)] = exps.get(int(var), 0) + int(power or 1)
                else:
                    coef *= Fraction(factor)
            key = [0] * max(exps, default=0)
            for i, e in exps.items():
                key[i - 1] = e
            coeffs[tuple(key)] = coeffs.get(tuple(key), Fraction(0)) + coef
        return cls.of(coeffs)

    @property
    def coeffs(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    def __add__(self, other: GWeightPolynomial) -> GWeightPolynomial:
        acc = self.coeffs
        for k, c in other.terms:
            acc[k] = acc.get(k, Fraction(0)) + c
        return GWeightPolynomial.of(acc)

    def scale(self, c) -> GWeightPolynomial:
        return GWeightPolynomial.of({k: v * c for k, v in self.terms})

    def times_g(self, j: int) -> GWeightPolynomial:
        """Multiply by the variable g_j."""
        out = {}
        for k, c in self.terms:
            key = list(k) + [0] * max(0, j - len(k))
            key[j - 1] += 1
            out[tuple(key)] = c
        return GWeightPolynomial.of(out)

    def weighted_degrees(self) -> set[int]:
        return {sum((i + 1) * e for i, e in enumerate(k)) for k, _ in self.terms}

    def __call__(self, g):
        """Evaluate with ``g[i]`` standing for g_(i+1)."""
        total = Fraction(0)
        for k, c in self.terms:
            term = c
            for i, e in enumerate(k):
                term *= Fraction(g[i]) ** e
            total += term
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.terms:
            mono = "*".join(
                f"g{i + 1}" if e == 1 else f"g{i + 1}^{e}" for i, e in enumerate(k) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def bell_polynomials(n_max: int) -> list[GWeightPolynomial]:
    """Complete exponential Bell polynomials Y_0..Y_n_max.

    Y_(n+1) = sum_k binom(n, k) g_(k+1) Y_(n-k).
    """
    ys = [GWeightPolynomial.of({(): 1})]
    for n in range(n_max):
        nxt = GWeightPolynomial.of({})
        for k in range(n + 1):
            nxt = nxt + ys[n - k].times_g(k + 1).scale(math.comb(n, k))
        ys.append(nxt)
    return ys


def moment_series(m: int, order: int) -> list[GWeightPolynomial]:
    """Coefficients of t^0..t^order in the 2m-block expectation of exp(S(tx)).

    The coefficient of t^n is Y_n / ((2m)!^d d!) when n = 2md, else zero.
    """
    if m < 1 or order < 0:
        raise ValidationError(f"need m >= 1 and order >= 0, got m={m}, order={order}")
    ys = bell_polynomials(order)
    size = 2 * m
    out = []
    for n, y in enumerate(ys):
        if n % size:
            out.append(GWeightPolynomial.of({}))
        else:
            d = n // size
            out.append(y.scale(Fraction(1, math.factorial(size) ** d * math.factorial(d))))
    return out
