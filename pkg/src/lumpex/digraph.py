"""Directed graphs on dense integer vertices, and the reachability primitives
every criterion in this package leans on."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Digraph:
    """Vertices are 0..n-1. Edges are ordered pairs; self-loops allowed, no
    multi-edges (the set representation makes duplicates impossible)."""

    n: int
    edges: frozenset

    def __post_init__(self):
        edges = frozenset((int(y), int(yp)) for y, yp in self.edges)
        for y, yp in edges:
            if not (0 <= y < self.n and 0 <= yp < self.n):
                raise ValueError(f"edge ({y}, {yp}) out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        """Edges in lexicographic (y, y') order; fixes vector layouts elsewhere."""
        return sorted(self.edges)

    def successors(self) -> list[list[int]]:
        adj = [[] for _ in range(self.n)]
        for y, yp in sorted(self.edges):
            adj[y].append(yp)
        return adj

    def out_degree(self, y: int) -> int:
        return sum(1 for e in self.edges if e[0] == y)


def _reaches_all(adj_masks: list[int], full: int) -> bool:
    seen = 1  # start from vertex 0
    frontier = 1
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj_masks[low.bit_length() - 1]
            m ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def strongly_connected(g: Digraph) -> bool:
    """True iff every vertex reaches every other vertex along directed edges.

    A single vertex counts as strongly connected (vacuous reachability), so
    induced subgraphs of singleton classes behave uniformly.
    """
    n = g.n
    if n <= 1:
        return True
    fwd = [0] * n
    rev = [0] * n
    for y, yp in g.edges:
        fwd[y] |= 1 << yp
        rev[yp] |= 1 << y
    full = (1 << n) - 1
    return _reaches_all(fwd, full) and _reaches_all(rev, full)


def scc(g: Digraph) -> list[set]:
    """Strongly connected components (Tarjan), sorted by smallest member so
    test snapshots stay stable."""
    adj = g.successors()
    n = g.n
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    next_index = 0
    comps = []

    for root in range(n):
        if index[root] is not None:
            continue
        # explicit call stack of (vertex, next neighbour position)
        call = [(root, 0)]
        while call:
            v, i = call.pop()
            if i == 0:
                index[v] = low[v] = next_index
                next_index += 1
                stack.append(v)
                on_stack[v] = True
            else:
                # just returned from the child explored at position i-1
                low[v] = min(low[v], low[adj[v][i - 1]])
            descended = False
            while i < len(adj[v]):
                w = adj[v][i]
                i += 1
                if index[w] is None:
                    call.append((v, i))
                    call.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.add(w)
                    if w == v:
                        break
                comps.append(comp)
    return sorted(comps, key=min)


def induced_subgraph(g: Digraph, keep) -> tuple[Digraph, dict]:
    """Subgraph on `keep`, relabeled to 0..|keep|-1 in ascending original
    order. The relabeling map (old -> new) is returned so callers can
    translate edges back; no hidden state."""
    keep = set(keep)
    if not keep <= set(range(g.n)):
        raise ValueError("keep must be a subset of the vertex set")
    relabel = {old: new for new, old in enumerate(sorted(keep))}
    edges = frozenset(
        (relabel[y], relabel[yp]) for y, yp in g.edges if y in keep and yp in keep
    )
    return Digraph(len(keep), edges), relabel


def remove_edges(g: Digraph, removed) -> Digraph:
    removed = frozenset((int(y), int(yp)) for y, yp in removed)
    if not removed <= g.edges:
        raise ValueError("can only remove edges that are present")
    return Digraph(g.n, g.edges - removed)
