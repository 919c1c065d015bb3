"""Brute-force reference implementations, deliberately independent of the package."""

import itertools


def ahu_min(n, edges):
    """Isomorphism invariant: smallest rooted AHU string over all roots."""
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)

    def enc(v, p):
        return "(" + "".join(sorted(enc(w, v) for w in adj[v] if w != p)) + ")"

    return min(enc(r, -1) for r in range(n))


def grown_classes(n):
    """Trees on n vertices up to isomorphism, by adding leaves and deduplicating."""
    classes = {ahu_min(1, []): []}
    for k in range(1, n):
        nxt = {}
        for edges in classes.values():
            for v in range(k):
                e = edges + [(v, k)]
                nxt.setdefault(ahu_min(k + 1, e), e)
        classes = nxt
    return classes


def brute_aut(t):
    edges = {frozenset(e) for e in t.edges}
    return sum(
        1
        for p in itertools.permutations(range(t.n))
        if all(frozenset((p[a], p[b])) in edges for a, b in t.edges)
    )


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first], *part]
        for i in range(len(part)):
            yield part[:i] + [[first, *part[i]]] + part[i + 1 :]


def brute_uniform_partitions(k, m):
    """Count all set partitions of range(k) whose blocks all have size m."""
    return sum(all(len(b) == m for b in p) for p in set_partitions(list(range(k))))
