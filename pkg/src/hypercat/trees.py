"""Unlabeled free trees: generation, canonical forms, automorphism orders.

Trees are stored as canonical level sequences: the depths of the vertices in
preorder when the tree is rooted at a centroid and every vertex lists its
child subtrees in decreasing lexicographic order of their own level
sequences.  For bicentroidal trees the centroid giving the larger sequence
wins.  Two trees are isomorphic exactly when their codes agree, and vertex
``i`` of a tree always means the ``i``-th vertex of its code.
"""

from __future__ import annotations

import math
import os
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import CacheFormatError, ValidationError

CACHE_HEADER = "#hypercat-trees v1 n={n} canon=centroid"
_HEADER_RE = re.compile(r"^#hypercat-trees v1 n=(\d+) canon=centroid$")


@dataclass(frozen=True)
class FreeTree:
    """An unlabeled tree in canonical form.

    ``parent_code`` is the canonical level sequence (see module docstring);
    ``degrees[i]`` is the degree of vertex ``i``.
    """

    n: int
    parent_code: tuple[int, ...]
    degrees: tuple[int, ...] = field(compare=False, repr=False)

    @classmethod
    def from_code(cls, code: Sequence[int], *, check: bool = True) -> FreeTree:
        code = tuple(int(c) for c in code)
        _check_level_sequence(code)
        parents = _parents_from_levels(code)
        deg = [0] * len(code)
        for v, p in enumerate(parents):
            if p >= 0:
                deg[v] += 1
                deg[p] += 1
        tree = cls(len(code), code, tuple(deg))
        if check:
            canon, _ = canonicalize(len(code), tree.edges)
            if canon.parent_code != code:
                raise ValidationError(f"level sequence {code} is not canonical")
        return tree

    @cached_property
    def parents(self) -> tuple[int, ...]:
        """Parent of each vertex in the canonical rooting; -1 for the root."""
        return tuple(_parents_from_levels(self.parent_code))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parents) if p >= 0]

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    @property
    def edge_count(self) -> int:
        return self.n - 1

    @cached_property
    def aut_order(self) -> int:
        return automorphism_order(self)

    def __str__(self):
        return f"FreeTree(n={self.n}, code={','.join(map(str, self.parent_code))})"


def _check_level_sequence(code: Sequence[int]) -> None:
    if not code or code[0] != 0:
        raise ValidationError(f"level sequence must start with 0: {tuple(code)}")
    for prev, cur in zip(code, code[1:]):
        if cur < 1 or cur > prev + 1:
            raise ValidationError(f"invalid level sequence {tuple(code)}")


def _parents_from_levels(code: Sequence[int]) -> list[int]:
    last_at: list[int] = []
    parents = []
    for v, lev in enumerate(code):
        parents.append(last_at[lev - 1] if lev > 0 else -1)
        del last_at[lev:]
        last_at.append(v)
    return parents


def _children_codes(code: Sequence[int]) -> list[tuple[int, ...]]:
    """Split a rooted level sequence into its child subtrees (each re-based at 0)."""
    out: list[list[int]] = []
    for lev in code[1:]:
        if lev == 1:
            out.append([])
        out[-1].append(lev - 1)
    return [tuple(c) for c in out]


def _attach(children: Iterable[Sequence[int]]) -> tuple[int, ...]:
    kids = sorted((tuple(c) for c in children), reverse=True)
    return (0,) + tuple(lev + 1 for kid in kids for lev in kid)


# -- canonical forms -------------------------------------------------------


def _adjacency(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    count = 0
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
        count += 1
    if count != n - 1:
        raise ValidationError(f"a tree on {n} vertices needs {n - 1} edges, got {count}")
    return adj


def _bfs(adj: Sequence[Sequence[int]], root: int) -> tuple[list[int], list[int]]:
    parent = [-2] * len(adj)
    parent[root] = -1
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if parent[w] == -2:
                parent[w] = u
                order.append(w)
                queue.append(w)
    if len(order) != len(adj):
        raise ValidationError("edge set is not connected")
    return order, parent


def centroids(adj: Sequence[Sequence[int]]) -> list[int]:
    """The one or two vertices whose removal leaves components of size <= n/2."""
    n = len(adj)
    order, parent = _bfs(adj, 0)
    size = [1] * n
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    result = []
    for v in range(n):
        biggest = n - size[v]
        for w in adj[v]:
            if w != parent[v]:
                biggest = max(biggest, size[w])
        if 2 * biggest <= n:
            result.append(v)
    return result


def _rooted_canonical(adj, root) -> tuple[tuple[int, ...], list[int]]:
    order, parent = _bfs(adj, root)
    forms: dict[int, tuple[tuple[int, ...], list[int]]] = {}
    for v in reversed(order):
        kids = sorted(
            (forms.pop(w) for w in adj[v] if w != parent[v]),
            key=lambda f: f[0],
            reverse=True,
        )
        levels = (0,) + tuple(lev + 1 for code, _ in kids for lev in code)
        verts = [v] + [x for _, vs in kids for x in vs]
        forms[v] = (levels, verts)
    return forms[root]


def canonicalize(
    n: int, edges: Iterable[tuple[Hashable, Hashable]]
) -> tuple[FreeTree, dict]:
    """Canonical form of an arbitrary tree.

    Vertices may be any hashables.  Returns the :class:`FreeTree` and a map
    from the input vertex names to canonical vertex indices.  For trees with
    symmetries the map is one of several valid choices.
    """
    edges = list(edges)
    names: dict = {}
    for u, v in edges:
        names.setdefault(u, len(names))
        names.setdefault(v, len(names))
    if n == 1 and not names:
        return FreeTree(1, (0,), (0,)), {}
    if len(names) != n:
        raise ValidationError(f"expected {n} vertices, edges mention {len(names)}")
    adj = _adjacency(n, ((names[u], names[v]) for u, v in edges))
    best = max(_rooted_canonical(adj, c) for c in centroids(adj))
    code, verts = best
    position = {v: i for i, v in enumerate(verts)}
    tree = FreeTree.from_code(code, check=False)
    return tree, {name: position[i] for name, i in names.items()}


# -- automorphisms ---------------------------------------------------------


def _subtree_ends(code: Sequence[int]) -> list[int]:
    ends = [len(code)] * len(code)
    stack: list[int] = []
    for i, lev in enumerate(code):
        while stack and code[stack[-1]] >= lev:
            ends[stack.pop()] = i
        stack.append(i)
    return ends


def automorphism_order(t: FreeTree) -> int:
    """|Aut(t)|, computed on the canonical rooted form.

    At every vertex the orders of the child subtrees multiply, and each
    family of k mutually isomorphic children contributes k!.  A bicentroidal
    tree with isomorphic halves has one extra factor 2 for the swap.
    """
    code = t.parent_code
    ends = _subtree_ends(code)
    parents = t.parents
    children: list[list[int]] = [[] for _ in range(t.n)]
    for v, p in enumerate(parents):
        if p >= 0:
            children[p].append(v)

    def sub(v):
        base = code[v]
        return tuple(lev - base for lev in code[v : ends[v]])

    aut = [1] * t.n
    for v in reversed(range(t.n)):
        acc = 1
        for c in children[v]:
            acc *= aut[c]
        for k in Counter(sub(c) for c in children[v]).values():
            acc *= math.factorial(k)
        aut[v] = acc
    order = aut[0]
    if t.n % 2 == 0 and t.n > 0:
        for c in children[0]:
            if ends[c] - c == t.n // 2:
                rest = (0,) + code[1:c] + code[ends[c] :]
                if sub(c) == rest:
                    order *= 2
                break
    return order


def automorphisms(t: FreeTree) -> Iterator[tuple[int, ...]]:
    """All automorphisms of ``t`` as permutation tuples, by backtracking.

    Exponential in general; intended for small trees and for checking
    :func:`automorphism_order`.
    """
    adj = [set(a) for a in t.adjacency]
    order, _ = _bfs(t.adjacency, 0)
    image = [-1] * t.n
    used = [False] * t.n

    def extend(i):
        if i == t.n:
            yield tuple(image)
            return
        v = order[i]
        for w in range(t.n):
            if used[w] or t.degrees[w] != t.degrees[v]:
                continue
            ok = True
            for u in adj[v]:
                if image[u] >= 0 and image[u] not in adj[w]:
                    ok = False
                    break
            if not ok:
                continue
            image[v], used[w] = w, True
            yield from extend(i + 1)
            image[v], used[w] = -1, False

    yield from extend(0)


# -- generation ------------------------------------------------------------


def _bh_successor(seq: list[int]) -> list[int] | None:
    """Beyer-Hedetniemi successor of a canonical rooted level sequence."""
    p = len(seq) - 1
    while p > 0 and seq[p] == 1:
        p -= 1
    if p == 0:
        return None
    q = p - 1
    while seq[q] != seq[p] - 1:
        q -= 1
    out = list(seq)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


@lru_cache(maxsize=None)
def rooted_codes(k: int) -> tuple[tuple[int, ...], ...]:
    """Canonical level sequences of all rooted trees on ``k`` vertices, descending."""
    seq: list[int] | None = list(range(k))
    out = []
    while seq is not None:
        out.append(tuple(seq))
        seq = _bh_successor(seq)
    return tuple(out)


def _join_halves(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    at_a = _attach(_children_codes(a) + [b])
    at_b = _attach(_children_codes(b) + [a])
    return max(at_a, at_b)


def enumerate_free_trees(n: int) -> Iterator[FreeTree]:
    """Yield each unlabeled tree on ``n`` vertices exactly once.

    Unicentroidal trees are assembled as a root carrying a non-increasing
    multiset of rooted subtrees of size < n/2; bicentroidal trees as an
    unordered pair of rooted halves of size n/2.  The order is deterministic.
    """
    if n < 1:
        raise ValidationError(f"trees need at least one vertex, got n={n}")
    if n == 1:
        yield FreeTree(1, (0,), (0,))
        return
    limit = (n - 1) // 2
    pool = sorted((c for s in range(1, limit + 1) for c in rooted_codes(s)), reverse=True)
    sizes = [len(c) for c in pool]

    def pick(start, remaining, chosen):
        if remaining == 0:
            yield chosen
            return
        for i in range(start, len(pool)):
            if sizes[i] <= remaining:
                chosen.append(pool[i])
                yield from pick(i, remaining - sizes[i], chosen)
                chosen.pop()

    for kids in pick(0, n - 1, []):
        code = (0,) + tuple(lev + 1 for kid in kids for lev in kid)
        yield FreeTree.from_code(code, check=False)

    if n % 2 == 0:
        halves = rooted_codes(n // 2)
        for i, a in enumerate(halves):
            for b in halves[i:]:
                yield FreeTree.from_code(_join_halves(a, b), check=False)


# -- catalog and cache -----------------------------------------------------


def format_record(t: FreeTree, aut: int) -> str:
    return f"{t.n} {','.join(map(str, t.parent_code))} {aut}"


def write_catalog(path, n: int, records: Iterable[tuple[FreeTree, int]]) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(CACHE_HEADER.format(n=n) + "\n")
        for t, aut in records:
            fh.write(format_record(t, aut) + "\n")
    os.replace(tmp, path)


def read_catalog(path, n: int) -> list[tuple[FreeTree, int]]:
    """Parse a catalog cache; any malformed line raises :class:`CacheFormatError`."""
    path = Path(path)
    with open(path, encoding="ascii", newline="") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CacheFormatError(path, 1, "empty cache file")
    match = _HEADER_RE.match(lines[0])
    if not match:
        raise CacheFormatError(path, 1, f"bad header {lines[0]!r}")
    if int(match.group(1)) != n:
        raise CacheFormatError(path, 1, f"header is for n={match.group(1)}, wanted n={n}")
    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 3:
            raise CacheFormatError(path, lineno, f"expected 3 fields: {line!r}")
        try:
            size = int(parts[0])
            code = tuple(int(x) for x in parts[1].split(","))
            aut = int(parts[2])
        except ValueError:
            raise CacheFormatError(path, lineno, f"non-integer field: {line!r}") from None
        if size != n or len(code) != n:
            raise CacheFormatError(path, lineno, f"record is not a tree on {n} vertices")
        if aut < 1:
            raise CacheFormatError(path, lineno, f"automorphism order must be >= 1: {aut}")
        try:
            t = FreeTree.from_code(code)
        except ValidationError as exc:
            raise CacheFormatError(path, lineno, str(exc)) from None
        t.__dict__["aut_order"] = aut
        records.append((t, aut))
    return records


def catalog(n: int, cache_path=None) -> Iterator[tuple[FreeTree, int]]:
    """All trees on ``n`` vertices with their automorphism orders.

    With ``cache_path`` an existing cache is read (and must parse cleanly);
    a missing one is written after computing.
    """
    if n < 1:
        raise ValidationError(f"trees need at least one vertex, got n={n}")
    if cache_path is not None and Path(cache_path).exists():
        yield from read_catalog(cache_path, n)
        return
    records = [(t, t.aut_order) for t in enumerate_free_trees(n)]
    if cache_path is not None:
        write_catalog(cache_path, n, records)
    yield from records
