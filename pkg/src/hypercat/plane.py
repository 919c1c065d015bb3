"""Plane trees, Dyck paths, ballot sequences and admissible m-labelings.

Plane tree vertices are numbered in preorder with the root at 0.  An
m-labeling is stored as its partition of the non-root vertices into blocks,
so relabelings that merely permute label names are identical by
construction.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence, Union

from .errors import BudgetExceeded, ValidationError
from .trees import FreeTree, automorphisms, canonicalize

UP, DOWN = "U", "D"
DEFAULT_TREE_BUDGET = 10**6


@dataclass(frozen=True)
class DyckPath:
    steps: str

    def __post_init__(self):
        height = 0
        for s in self.steps:
            if s not in (UP, DOWN):
                raise ValidationError(f"Dyck steps must be U or D, got {s!r}")
            height += 1 if s == UP else -1
            if height < 0:
                raise ValidationError(f"Dyck path {self.steps} goes below the axis")
        if height:
            raise ValidationError(f"Dyck path {self.steps} does not return to the axis")


@dataclass(frozen=True)
class BallotSequence:
    terms: tuple[int, ...]

    def __post_init__(self):
        partial = 0
        for a in self.terms:
            if a not in (1, -1):
                raise ValidationError(f"ballot entries must be +-1, got {a}")
            partial += a
            if partial < 0:
                raise ValidationError(f"ballot sequence {self.terms} has a negative partial sum")
        if partial:
            raise ValidationError(f"ballot sequence {self.terms} does not sum to 0")


@dataclass(frozen=True)
class PlaneTree:
    """Ordered rooted tree; ``children[v]`` lists v's children left to right."""

    children: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.children)

    @property
    def root(self) -> int:
        return 0

    @classmethod
    def from_dyck(cls, path: DyckPath | str) -> PlaneTree:
        steps = path.steps if isinstance(path, DyckPath) else DyckPath(path).steps
        children: list[list[int]] = [[]]
        stack = [0]
        for s in steps:
            if s == UP:
                v = len(children)
                children.append([])
                children[stack[-1]].append(v)
                stack.append(v)
            else:
                stack.pop()
        return cls(tuple(tuple(c) for c in children))

    @property
    def parent(self) -> tuple[int, ...]:
        par = [-1] * self.k
        for v, kids in enumerate(self.children):
            for c in kids:
                par[c] = v
        return tuple(par)

    @property
    def level(self) -> tuple[int, ...]:
        lev = [0] * self.k
        for v in range(1, self.k):
            lev[v] = lev[self.parent[v]] + 1
        return tuple(lev)

    def levels(self) -> list[list[int]]:
        """Vertices grouped by level, each group in preorder."""
        out: list[list[int]] = []
        for v, lev in enumerate(self.level):
            while len(out) <= lev:
                out.append([])
            out[lev].append(v)
        return out

    def dyck(self) -> DyckPath:
        steps: list[str] = []

        def visit(v):
            for c in self.children[v]:
                steps.append(UP)
                visit(c)
                steps.append(DOWN)

        visit(0)
        return DyckPath("".join(steps))

    def traversal(self) -> list[int]:
        """Full preorder walk, returning to each parent after every subtree."""
        walk = [0]

        def visit(v):
            for c in self.children[v]:
                walk.append(c)
                visit(c)
                walk.append(v)

        visit(0)
        return walk


Encoding = Union[PlaneTree, DyckPath, BallotSequence]


def to_dyck(x: Encoding) -> DyckPath:
    if isinstance(x, DyckPath):
        return x
    if isinstance(x, PlaneTree):
        return x.dyck()
    if isinstance(x, BallotSequence):
        return DyckPath("".join(UP if a == 1 else DOWN for a in x.terms))
    raise TypeError(f"cannot convert {type(x).__name__}")


def to_ballot(x: Encoding) -> BallotSequence:
    if isinstance(x, BallotSequence):
        return x
    return BallotSequence(tuple(1 if s == UP else -1 for s in to_dyck(x).steps))


def to_plane_tree(x: Encoding) -> PlaneTree:
    if isinstance(x, PlaneTree):
        return x
    return PlaneTree.from_dyck(to_dyck(x))


def convert(x: Encoding) -> tuple[Encoding, Encoding]:
    """The two other encodings of ``x``, in the order plane tree, Dyck path, ballot."""
    all3 = (to_plane_tree(x), to_dyck(x), to_ballot(x))
    return tuple(e for e in all3 if type(e) is not type(x))  # type: ignore[return-value]


def dyck_words(half: int) -> Iterator[str]:
    """Dyck words with ``half`` up-steps, lexicographic with U before D."""

    def build(prefix, ups, downs):
        if ups == downs == half:
            yield "".join(prefix)
            return
        if ups < half:
            prefix.append(UP)
            yield from build(prefix, ups + 1, downs)
            prefix.pop()
        if downs < ups:
            prefix.append(DOWN)
            yield from build(prefix, ups, downs + 1)
            prefix.pop()

    yield from build([], 0, 0)


def enumerate_plane_trees(k: int) -> Iterator[PlaneTree]:
    if k < 1:
        raise ValidationError(f"plane trees need at least one vertex, got k={k}")
    for word in dyck_words(k - 1):
        yield PlaneTree.from_dyck(word)


def dyck_slabs(path: DyckPath) -> list[tuple[int, int]]:
    """Slabs of a Dyck path in order of their up-steps, as (level, parent slab).

    A slab is bounded by an up-step from height k-1 to k and its matching
    down-step; its parent is the slab directly beneath it (-1 at level 1).
    """
    slabs: list[tuple[int, int]] = []
    open_: list[int] = []
    for s in path.steps:
        if s == UP:
            slabs.append((len(open_) + 1, open_[-1] if open_ else -1))
            open_.append(len(slabs) - 1)
        else:
            open_.pop()
    return slabs


def ballot_pairs(seq: BallotSequence) -> list[tuple[int, int, int, int]]:
    """Pairs (i, j, level, parent pair) of a ballot sequence, 1-based indices.

    ``j`` is the first index after ``i`` whose entry is -1 with partial sum
    s_j = s_i - 1; the level is s_i.  The parent is the enclosing pair one
    level down, or -1.
    """
    a = seq.terms
    partial = []
    s = 0
    for x in a:
        s += x
        partial.append(s)
    pairs = []
    for i, x in enumerate(a):
        if x != 1:
            continue
        j = next(
            j for j in range(i + 1, len(a)) if a[j] == -1 and partial[j] == partial[i] - 1
        )
        pairs.append((i + 1, j + 1, partial[i]))
    out = []
    for i, j, lev in pairs:
        parent = -1
        for idx, (pi, pj, plev) in enumerate(pairs):
            if plev == lev - 1 and pi < i and pj > j:
                parent = idx
        out.append((i, j, lev, parent))
    return out


# -- labelings ----------------------------------------------------------------


@dataclass(frozen=True)
class MLabeling:
    """Partition of the non-root vertices into blocks of size m."""

    m: int
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, m: int, blocks) -> MLabeling:
        return cls(m, tuple(sorted(tuple(sorted(b)) for b in blocks)))

    def block_of(self) -> dict[int, int]:
        return {v: i for i, b in enumerate(self.blocks) for v in b}


def uniform_partitions(items: Sequence[int], m: int) -> Iterator[list[tuple[int, ...]]]:
    """Set partitions of ``items`` into blocks of size m, each exactly once."""
    if not items:
        yield []
        return
    if len(items) % m:
        return
    first, rest = items[0], items[1:]
    for others in combinations(rest, m - 1):
        chosen = set(others)
        remainder = [x for x in rest if x not in chosen]
        for tail in uniform_partitions(remainder, m):
            yield [(first, *others), *tail]


def _child_groups(pt: PlaneTree, blocks) -> list[list[int]] | None:
    groups = [[c for v in b for c in pt.children[v]] for b in blocks]
    return groups


def admissible_labelings(pt: PlaneTree, m: int) -> Iterator[MLabeling]:
    """Every admissible m-labeling of ``pt``.

    Works top-down: the children of each block at one level must be split
    into m-blocks among themselves, which is exactly the condition that
    vertices whose children share a block share a block themselves.
    """
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if any(len(lv) % m for lv in pt.levels()[1:]):
        return

    def descend(blocks, acc):
        groups = [g for g in _child_groups(pt, blocks) if g]
        if not groups:
            yield MLabeling.of(m, acc)
            return
        if any(len(g) % m for g in groups):
            return

        def combine(i, chosen):
            if i == len(groups):
                yield from descend(chosen, acc + chosen)
                return
            for part in uniform_partitions(groups[i], m):
                yield from combine(i + 1, chosen + part)

        yield from combine(0, [])

    yield from descend([(0,)], [])


def count_admissible_labelings(pt: PlaneTree, m: int) -> int:
    """N_m(pt), the number of admissible m-labelings."""
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if m == 1:
        return 1
    if any(len(lv) % m for lv in pt.levels()[1:]):
        return 0

    def descend(blocks) -> int:
        groups = [g for g in _child_groups(pt, blocks) if g]
        if not groups:
            return 1
        if any(len(g) % m for g in groups):
            return 0
        total = 0

        def combine(i, chosen):
            nonlocal total
            if i == len(groups):
                total += descend(chosen)
                return
            for part in uniform_partitions(groups[i], m):
                combine(i + 1, chosen + part)

        combine(0, [])
        return total

    return descend([(0,)])


def is_admissible(pt: PlaneTree, lab: MLabeling) -> bool:
    m = lab.m
    covered = sorted(v for b in lab.blocks for v in b)
    if covered != list(range(1, pt.k)):
        return False
    level = pt.level
    parent = pt.parent
    block = lab.block_of()
    block[0] = -1
    for b in lab.blocks:
        if len(b) != m or len({level[v] for v in b}) != 1:
            return False
        if len({block[parent[v]] for v in b}) != 1:
            return False
    return True


def hypercatalan_via_labelings(
    n: int, m: int, *, budget: int = DEFAULT_TREE_BUDGET
) -> int:
    """C_n^(m) as the number of admissibly m-labeled plane trees on nm+1 vertices."""
    if n < 0 or m < 1:
        raise ValidationError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    total = 0
    for count, pt in enumerate(enumerate_plane_trees(n * m + 1), start=1):
        if count > budget:
            raise BudgetExceeded(f"more than {budget} plane trees on {n * m + 1} vertices")
        total += count_admissible_labelings(pt, m)
    return total


# -- the bijection between tours and labeled plane trees ----------------------


@dataclass(frozen=True)
class TourWord:
    vertices: tuple[int, ...]

    @property
    def start(self) -> int:
        return self.vertices[0]

    def validate(self, t: FreeTree, m: int) -> None:
        w = self.vertices
        if len(w) != 2 * m * (t.n - 1) + 1:
            raise ValidationError(f"a tour needs {2 * m * (t.n - 1) + 1} vertices, got {len(w)}")
        if w[0] != w[-1]:
            raise ValidationError("tour does not return to its start")
        adj = t.adjacency
        used: dict[frozenset, int] = {}
        for a, b in zip(w, w[1:]):
            if b not in adj[a]:
                raise ValidationError(f"{a} and {b} are not adjacent")
            e = frozenset((a, b))
            used[e] = used.get(e, 0) + 1
        if len(used) != t.n - 1 or any(c != 2 * m for c in used.values()):
            raise ValidationError(f"tour must use every edge exactly {2 * m} times")


def _distances(t: FreeTree, source: int) -> list[int]:
    dist = [-1] * t.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in t.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def alpha(t: FreeTree, w: TourWord, m: int | None = None) -> tuple[PlaneTree, MLabeling]:
    """Turn a tour into an admissibly m-labeled plane tree on nm+1 vertices.

    Steps away from the start vertex become up-steps of the Dyck word.  The
    plane-tree vertex created by an up-step is labeled by the tree vertex the
    tour steps onto, so each tree vertex other than the start labels one
    block of m plane-tree vertices.
    """
    edges = t.n - 1
    if m is None:
        if edges == 0:
            raise ValidationError("m cannot be inferred for the single-vertex tree")
        m = (len(w.vertices) - 1) // (2 * edges)
    w.validate(t, m)
    dist = _distances(t, w.start)
    children: list[list[int]] = [[]]
    stack = [0]
    owner: dict[int, list[int]] = {}
    for a, b in zip(w.vertices, w.vertices[1:]):
        if dist[b] > dist[a]:
            v = len(children)
            children.append([])
            children[stack[-1]].append(v)
            stack.append(v)
            owner.setdefault(b, []).append(v)
        else:
            stack.pop()
    pt = PlaneTree(tuple(tuple(c) for c in children))
    lab = MLabeling.of(m, owner.values())
    if not is_admissible(pt, lab):
        raise AssertionError("alpha produced an inadmissible labeling")
    return pt, lab


def beta(pt: PlaneTree, lab: MLabeling) -> tuple[FreeTree, TourWord]:
    """Collapse each block to a vertex and read the tour off the preorder walk."""
    if not is_admissible(pt, lab):
        raise ValidationError("labeling is not admissible for this plane tree")
    block = {v: i + 1 for i, b in enumerate(lab.blocks) for v in b}
    block[0] = 0
    nverts = len(lab.blocks) + 1
    parent = pt.parent
    quotient = {frozenset((block[parent[v]], block[v])) for v in range(1, pt.k)}
    if len(quotient) != nverts - 1:
        raise AssertionError("quotient of an admissible labeling is not a tree")
    if nverts == 1:
        return FreeTree(1, (0,), (0,)), TourWord((0,))
    tree, rename = canonicalize(nverts, (tuple(e) for e in quotient))
    walk = TourWord(tuple(rename[block[v]] for v in pt.traversal()))
    walk.validate(tree, lab.m)
    return tree, walk


def canonical_tour(t: FreeTree, w: TourWord) -> TourWord:
    """Smallest image of ``w`` under Aut(t): a representative of its class."""
    return TourWord(min(tuple(sigma[v] for v in w.vertices) for sigma in automorphisms(t)))
