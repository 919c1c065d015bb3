"""Cross-checks between the independent routes to C_n^(m).

Each check returns a :class:`CheckResult`; :func:`run_battery` runs them in
a fixed order.  ``faults`` switches on deliberate defects so that the
failure path of the battery itself can be tested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .gluing import trace_polynomial
from .plane import (
    MLabeling,
    admissible_labelings,
    alpha,
    beta,
    canonical_tour,
    enumerate_plane_trees,
    hypercatalan_via_labelings,
    TourWord,
)
from .series import block_partition_count, f_and_F, hypercat_coeff, relation_residual
from .tours import brute_force_tours, enumerate_tours, hypercatalan, tour_count_at
from .trees import enumerate_free_trees

FAULTS = {
    "wm-off-by-one": lambda m, k: block_partition_count(m, k) + 1,
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}" + (
            f": {self.detail}" if self.detail else ""
        )

    def record(self) -> str:
        return json.dumps({"check": self.name, "failures": self.failures[:5]}, sort_keys=True)


@dataclass(frozen=True)
class Bounds:
    """Desk-scale limits for the battery."""

    ms: tuple[int, ...] = (1, 2, 3, 4)
    n_max: int = 10
    labeling_product: int = 8
    tour_vertices: int = 7
    tour_ms: tuple[int, ...] = (1, 2)
    gluing_r: int = 12
    relation_order: int = 60
    relation_ms: tuple[int, ...] = tuple(range(1, 9))
    roundtrip: tuple[tuple[int, int], ...] = ((1, 5), (2, 4))  # (m, max vertices)


def _wm(faults) -> Callable | None:
    for f in faults:
        if f in FAULTS:
            return FAULTS[f]
    return None


def check_tree_vs_gf(bounds: Bounds, faults=()) -> CheckResult:
    wm = _wm(faults)
    kw = {"wm": wm} if wm else {}
    bad = []
    for m in bounds.ms:
        _, F = f_and_F(m, bounds.n_max + 1, **kw)
        for n in range(bounds.n_max + 1):
            try:
                g = hypercat_coeff(F, n)
            except Exception as exc:  # non-integral coefficient under a fault
                bad.append({"m": m, "n": n, "error": str(exc)})
                continue
            t = hypercatalan(n, m)
            if g != t:
                bad.append({"m": m, "n": n, "tree": str(t), "gf": str(g)})
    return CheckResult(
        "tree-sum = generating function",
        not bad,
        f"n <= {bounds.n_max}, m in {list(bounds.ms)}",
        bad,
    )


def check_tree_vs_labelings(bounds: Bounds) -> CheckResult:
    bad = []
    pairs = 0
    for m in bounds.ms:
        for n in range(bounds.n_max + 1):
            if n * m > bounds.labeling_product:
                break
            pairs += 1
            lab, tree = hypercatalan_via_labelings(n, m), hypercatalan(n, m)
            if lab != tree:
                bad.append({"m": m, "n": n, "tree": str(tree), "labelings": str(lab)})
    return CheckResult(
        "tree-sum = labeled plane trees",
        not bad,
        f"{pairs} pairs with nm <= {bounds.labeling_product}",
        bad,
    )


def check_tours(bounds: Bounds) -> CheckResult:
    bad = []
    cases = 0
    for m in bounds.tour_ms:
        for nv in range(1, bounds.tour_vertices + 1):
            for t in enumerate_free_trees(nv):
                for v in range(t.n):
                    cases += 1
                    closed, brute = tour_count_at(t, v, m), brute_force_tours(t, v, m)
                    if closed != brute:
                        bad.append({"tree": str(t), "v": v, "m": m, "closed": closed, "brute": brute})
    return CheckResult(
        "closed-form tours = exhaustive search",
        not bad,
        f"{cases} (tree, vertex, m) cases, <= {bounds.tour_vertices} vertices",
        bad,
    )


def check_gluing(bounds: Bounds) -> CheckResult:
    bad = []
    polys = 0
    for m in (1, 2):
        for r in range(0, bounds.gluing_r + 1, 2 * m):
            polys += 1
            p = trace_polynomial(m, r, check=False)
            d = r // (2 * m)
            if p(1) != block_partition_count(2 * m, r):
                bad.append({"m": m, "r": r, "at_1": p(1)})
            if p.degree != d + 1 or p.leading_coefficient != hypercatalan(d, m):
                bad.append({"m": m, "r": r, "leading": str(p)})
    return CheckResult(
        "trace polynomials: leading coefficient and value at N=1",
        not bad,
        f"{polys} polynomials, r <= {bounds.gluing_r}",
        bad,
    )


def check_relation(bounds: Bounds, faults=()) -> CheckResult:
    wm = _wm(faults)
    kw = {"wm": wm} if wm else {}
    bad = []
    for m in bounds.relation_ms:
        try:
            f, F = f_and_F(m, bounds.relation_order, **kw)
        except Exception as exc:
            bad.append({"m": m, "error": str(exc)})
            continue
        res = relation_residual(f, F)
        nz = [i for i, c in enumerate(res.coeffs) if c]
        if nz:
            bad.append({"m": m, "first_nonzero": nz[0]})
    return CheckResult(
        "f^2 - xF + x = 0",
        not bad,
        f"order {bounds.relation_order}, m <= {max(bounds.relation_ms)}",
        bad,
    )


def roundtrip_failures(m: int, max_vertices: int) -> tuple[int, list]:
    """Check beta(alpha(T, w)) ~ (T, w) and alpha(beta(P, L)) = (P, L)."""
    bad = []
    cases = 0
    for nv in range(2, max_vertices + 1):
        for t in enumerate_free_trees(nv):
            for v in range(t.n):
                for walk in enumerate_tours(t, v, m):
                    cases += 1
                    w = TourWord(walk)
                    pt, lab = alpha(t, w, m)
                    t2, w2 = beta(pt, lab)
                    if t2 != t or canonical_tour(t, w2) != canonical_tour(t, w):
                        bad.append({"tree": str(t), "walk": list(walk)})
        for pt in enumerate_plane_trees((nv - 1) * m + 1):
            for lab in admissible_labelings(pt, m):
                cases += 1
                t2, w2 = beta(pt, lab)
                back = alpha(t2, w2, m)
                if back != (pt, MLabeling.of(m, lab.blocks)):
                    bad.append({"plane": pt.dyck().steps, "blocks": [list(b) for b in lab.blocks]})
    return cases, bad


def check_roundtrips(bounds: Bounds) -> CheckResult:
    bad = []
    cases = 0
    for m, nv in bounds.roundtrip:
        c, b = roundtrip_failures(m, nv)
        cases += c
        bad += b
    spans = ", ".join(f"m={m} up to {nv} vertices" for m, nv in bounds.roundtrip)
    return CheckResult("alpha/beta roundtrips", not bad, f"{cases} cases ({spans})", bad)


def three_routes(n: int, m: int, faults=()) -> CheckResult:
    """C_n^(m) by the tree sum, the generating function and the labeling count."""
    wm = _wm(faults)
    kw = {"wm": wm} if wm else {}
    tree = hypercatalan(n, m)
    try:
        gf = str(hypercat_coeff(f_and_F(m, n + 1, **kw)[1], n))
    except Exception as exc:
        gf = f"error ({exc})"
    lab = hypercatalan_via_labelings(n, m)
    ok = gf == str(tree) == str(lab)
    detail = f"C_{n}^({m}) = {tree} (tree sum), {gf} (generating function), {lab} (labelings)"
    failures = [] if ok else [{"n": n, "m": m, "tree": str(tree), "gf": gf, "labelings": str(lab)}]
    return CheckResult("three routes agree", ok, detail, failures)


def run_battery(bounds: Bounds = Bounds(), faults=()) -> list[CheckResult]:
    results = [
        check_tree_vs_gf(bounds, faults),
        check_tree_vs_labelings(bounds),
        check_tours(bounds),
        check_gluing(bounds),
        check_relation(bounds, faults),
        check_roundtrips(bounds),
    ]
    for m in bounds.ms:
        n = min(bounds.n_max, bounds.labeling_product // m)
        results.append(three_routes(n, m, faults))
    return results
