"""Closed walks covering each tree edge 2m times, and the tree-sum route to C_n^(m).

A tour of multiplicity ``m`` on a tree starts and ends at one vertex and
crosses every edge exactly ``2m`` times; on a tree that forces ``m``
crossings in each direction.  Counting them goes through the BEST theorem
on the balanced digraph with ``m`` arcs each way per edge: rooted spanning
arborescences number ``m**(edges)`` and the arc orderings are divided out
by ``(m!)**(2*edges)``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BudgetExceeded, ConsistencyError, ValidationError
from .trees import FreeTree, catalog

DEFAULT_STEP_BUDGET = 10**8


@dataclass(frozen=True)
class TourCount:
    total: int
    per_vertex: tuple[int, ...]


def _arc_orderings(t: FreeTree, m: int) -> tuple[int, int]:
    """(numerator, denominator) of m**edges * prod((m d - 1)!) / (m!)**(2 edges)."""
    edges = t.n - 1
    num = m**edges
    for d in t.degrees:
        num *= math.factorial(m * d - 1)
    return num, math.factorial(m) ** (2 * edges)


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise ConsistencyError(f"{what}: {num}/{den} is not an integer")
    return q


def _check_m(m: int) -> None:
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")


def tour_total(t: FreeTree, m: int) -> int:
    """Number of tours over all start vertices: 2 n m^(n+1) prod (m d(v) - 1)! / (m!)^(2n).

    The single-vertex tree has exactly one (empty) tour.
    """
    _check_m(m)
    if t.n == 1:
        return 1
    num, den = _arc_orderings(t, m)
    return _exact_div(2 * m * (t.n - 1) * num, den, "tour total")


def tour_count_at(t: FreeTree, v: int, m: int) -> int:
    """Number of tours that start at vertex ``v``.

    Same BEST argument as :func:`tour_total`, multiplying by the ``m d(v)``
    arcs leaving ``v`` instead of all ``2mn`` arcs.
    """
    _check_m(m)
    if not 0 <= v < t.n:
        raise ValidationError(f"vertex {v} out of range for a tree on {t.n} vertices")
    if t.n == 1:
        return 1
    num, den = _arc_orderings(t, m)
    return _exact_div(m * t.degrees[v] * num, den, "tour count")


def tour_counts(t: FreeTree, m: int) -> TourCount:
    per_vertex = tuple(tour_count_at(t, v, m) for v in range(t.n))
    return TourCount(total=sum(per_vertex), per_vertex=per_vertex)


def _edge_index(t: FreeTree) -> list[list[tuple[int, int]]]:
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(t.n)]
    for e, (u, w) in enumerate(t.edges):
        nbrs[u].append((w, e))
        nbrs[w].append((u, e))
    return nbrs


def brute_force_tours(
    t: FreeTree, v: int, m: int, *, budget: int = DEFAULT_STEP_BUDGET
) -> int:
    """Count tours from ``v`` by exhaustive search over remaining edge budgets.

    Every edge starts with 2m allowed crossings in either direction.  States
    ``(position, remaining budgets)`` are memoised, so the search visits each
    reachable state once; ``budget`` bounds the number of state expansions.
    """
    _check_m(m)
    if not 0 <= v < t.n:
        raise ValidationError(f"vertex {v} out of range for a tree on {t.n} vertices")
    nbrs = _edge_index(t)
    memo: dict[tuple[int, tuple[int, ...]], int] = {}
    steps = 0

    def count(pos: int, remaining: tuple[int, ...]) -> int:
        nonlocal steps
        key = (pos, remaining)
        if key in memo:
            return memo[key]
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"brute-force tour search exceeded {budget} steps")
        if not any(remaining):
            result = int(pos == v)
        else:
            result = 0
            for w, e in nbrs[pos]:
                if remaining[e]:
                    nxt = remaining[:e] + (remaining[e] - 1,) + remaining[e + 1 :]
                    result += count(w, nxt)
        memo[key] = result
        return result

    return count(v, (2 * m,) * (t.n - 1))


def enumerate_tours(t: FreeTree, v: int, m: int) -> Iterator[tuple[int, ...]]:
    """Yield every tour from ``v`` as a vertex sequence of length 2m(n-1)+1."""
    _check_m(m)
    nbrs = _edge_index(t)
    remaining = [2 * m] * (t.n - 1)
    walk = [v]
    left = 2 * m * (t.n - 1)

    def extend():
        nonlocal left
        if left == 0:
            if walk[-1] == v:
                yield tuple(walk)
            return
        for w, e in nbrs[walk[-1]]:
            if remaining[e]:
                remaining[e] -= 1
                left -= 1
                walk.append(w)
                yield from extend()
                walk.pop()
                left += 1
                remaining[e] += 1

    yield from extend()


def _contribution(args: tuple[Sequence[int], int, int]) -> Fraction:
    code, aut, m = args
    return Fraction(tour_total(FreeTree.from_code(code, check=False), m), aut)


def hypercatalan(n: int, m: int, *, cache_path=None, jobs: int = 1) -> int:
    """C_n^(m) as the automorphism-weighted tour sum over trees on n+1 vertices."""
    _check_m(m)
    if n < 0:
        raise ValidationError(f"n must be >= 0, got {n}")
    if n == 0:
        return 1
    records = catalog(n + 1, cache_path)
    if jobs > 1:
        work = [(t.parent_code, aut, m) for t, aut in records]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_contribution, work, chunksize=64))
        total = sum(parts, Fraction(0))
    else:
        total = sum((Fraction(tour_total(t, m), aut) for t, aut in records), Fraction(0))
    if total.denominator != 1:
        raise ConsistencyError(f"C_{n}^({m}) tree sum is not an integer: {total}")
    return total.numerator
