"""Lumping maps, lumped graphs, the block-row-sum lumpability test, the
merging-block taxonomy, and generators for standard families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import Digraph, strongly_connected

LUMPABLE_TOL = 1e-8


class VacuousFamilyError(ValueError):
    """The family over this graph and lumping map contains no matrix at all."""


@dataclass(frozen=True)
class LumpingMap:
    """State-to-class assignment. kappa[y] is the class of state y; must be
    surjective onto 0..num_classes-1."""

    kappa: tuple
    num_classes: int

    def __post_init__(self):
        kappa = tuple(int(c) for c in self.kappa)
        object.__setattr__(self, "kappa", kappa)
        if set(kappa) != set(range(self.num_classes)):
            raise ValueError("lumping map must be surjective onto 0..num_classes-1")

    @property
    def num_states(self) -> int:
        return len(self.kappa)

    def class_members(self) -> list[list[int]]:
        members = [[] for _ in range(self.num_classes)]
        for y, x in enumerate(self.kappa):
            members[x].append(y)
        return members

    def class_sizes(self) -> tuple:
        return tuple(len(m) for m in self.class_members())


@dataclass(frozen=True)
class LumpedStructure:
    """The image graph on classes plus the class sizes."""

    lumped_graph: Digraph
    class_sizes: tuple


@dataclass(frozen=True)
class BlockProfile:
    """Combinatorial census of one family.

    merging_rows maps each lumped edge (x, x') to the rows y of class x with
    two or more edges into class x'. U is the set of lumped edges with at
    least one non-merging row; R is the set of edges lying in merging rows;
    s counts edges per (row, target class); anchors picks one edge per row
    of each lumped edge, rows distinct.
    """

    merging_rows: dict
    U: frozenset
    R: frozenset
    s: dict
    anchors: dict
    multi_row_merging: tuple


def lumped_graph(g: Digraph, k: LumpingMap) -> LumpedStructure:
    if len(k.kappa) != g.n:
        raise ValueError("lumping map must cover every vertex of the graph")
    kappa = k.kappa
    edges = frozenset((kappa[y], kappa[yp]) for y, yp in g.edges)
    return LumpedStructure(Digraph(k.num_classes, edges), k.class_sizes())


def is_nonvacuous(g: Digraph, k: LumpingMap) -> bool:
    """A family holds at least one matrix iff the graph is strongly connected
    and, for every lumped edge (x, x'), every row of class x has at least one
    edge into class x'. Necessity is the row-sum condition itself; sufficiency
    comes from the uniform-type matrix (see uniform_type_matrix)."""
    if len(k.kappa) != g.n:
        raise ValueError("lumping map must cover every vertex of the graph")
    if not strongly_connected(g):
        return False
    kappa = k.kappa
    # class-hit mask per row; rows of one class must agree for completeness
    hit = [0] * g.n
    for y, yp in g.edges:
        hit[y] |= 1 << kappa[yp]
    if any(h == 0 for h in hit):
        # unreachable for n >= 2 (strong connectivity), covers the edgeless
        # single vertex: a row without edges admits no stochastic row
        return False
    for members in k.class_members():
        first = hit[members[0]]
        for y in members[1:]:
            if hit[y] != first:
                return False
    return True


def block_profile(g: Digraph, k: LumpingMap) -> BlockProfile:
    if not is_nonvacuous(g, k):
        raise VacuousFamilyError("block profile requires a non-vacuous family")
    kappa = k.kappa
    members = k.class_members()
    targets = {}  # (y, x') -> sorted target states
    for y, yp in sorted(g.edges):
        targets.setdefault((y, kappa[yp]), []).append(yp)
    s = {key: len(t) for key, t in targets.items()}

    lumped = lumped_graph(g, k).lumped_graph
    merging_rows = {}
    anchors = {}
    U = set()
    R = set()
    for x, xp in sorted(lumped.edges):
        rows = members[x]
        merged = frozenset(y for y in rows if s.get((y, xp), 0) >= 2)
        merging_rows[(x, xp)] = merged
        if merged != frozenset(rows):
            U.add((x, xp))
        for y in merged:
            R.update((y, yp) for yp in targets[(y, xp)])
        # one edge per row, smallest target; completeness guarantees existence
        anchors[(x, xp)] = tuple((y, targets[(y, xp)][0]) for y in rows)
    multi_row = tuple(
        b for b in sorted(merging_rows) if merging_rows[b] and len(members[b[0]]) >= 2
    )
    return BlockProfile(
        merging_rows=merging_rows,
        U=frozenset(U),
        R=frozenset(R),
        s=s,
        anchors=anchors,
        multi_row_merging=multi_row,
    )


def block_row_sums(P, k: LumpingMap) -> np.ndarray:
    """n x num_classes matrix of row sums over each target class."""
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    out = np.zeros((n, k.num_classes))
    for x, members in enumerate(k.class_members()):
        out[:, x] = P[:, members].sum(axis=1)
    return out


def lumpability_violation(P, k: LumpingMap) -> float:
    """Largest absolute spread (max minus min) of block row sums within any
    class-by-class block."""
    sums = block_row_sums(P, k)
    worst = 0.0
    for members in k.class_members():
        rows = sums[members, :]
        spread = rows.max(axis=0) - rows.min(axis=0)
        worst = max(worst, float(spread.max()))
    return worst


def is_lumpable_matrix(P, k: LumpingMap, tol: float = LUMPABLE_TOL) -> bool:
    """Row-sum lumpability test: within each block, all row sums must agree.

    Tolerance is relative to the largest row sum in that block, so the test is
    scale-free and works for non-stochastic edge functions too. Use
    lumpability_violation for the absolute magnitude.
    """
    sums = block_row_sums(P, k)
    for members in k.class_members():
        rows = sums[members, :]
        top = rows.max(axis=0)
        spread = top - rows.min(axis=0)
        for xp in range(k.num_classes):
            if top[xp] > 0 and spread[xp] > tol * top[xp]:
                return False
    return True


def push_forward(P, k: LumpingMap, tol: float = LUMPABLE_TOL) -> np.ndarray:
    """The lumped matrix: entry (x, x') is the row sum over class x' taken
    from the first row of class x (all rows agree under lumpability)."""
    if not is_lumpable_matrix(P, k, tol):
        raise ValueError("push_forward needs a lumpable matrix")
    sums = block_row_sums(P, k)
    first_rows = [members[0] for members in k.class_members()]
    return sums[first_rows, :]


def uniform_type_matrix(g: Digraph, k: LumpingMap) -> np.ndarray:
    """The canonical member of a non-vacuous family: mass split uniformly over
    out-blocks, then uniformly over each row's edges into the target class.
    Block row sums are 1/outdeg by construction, hence exactly lumpable."""
    prof = block_profile(g, k)
    kappa = k.kappa
    lumped = lumped_graph(g, k).lumped_graph
    outdeg = [lumped.out_degree(x) for x in range(k.num_classes)]
    P = np.zeros((g.n, g.n))
    for y, yp in g.edges:
        P[y, yp] = 1.0 / (outdeg[kappa[y]] * prof.s[(y, kappa[yp])])
    return P


def random_lumpable_matrix(g: Digraph, k: LumpingMap, rng) -> np.ndarray:
    """Sample a positive lumpable stochastic matrix supported exactly on the
    edge set: block-row sums drawn uniformly on the simplex per class, split
    Dirichlet-style inside each row block."""
    kappa = k.kappa
    lumped = lumped_graph(g, k).lumped_graph
    out_classes = lumped.successors()
    block_mass = {}
    for x in range(k.num_classes):
        mass = rng.dirichlet(np.ones(len(out_classes[x])))
        for xp, q in zip(out_classes[x], mass):
            block_mass[(x, xp)] = q
    targets = {}
    for y, yp in sorted(g.edges):
        targets.setdefault((y, kappa[yp]), []).append(yp)
    P = np.zeros((g.n, g.n))
    for (y, xp), cols in targets.items():
        split = rng.dirichlet(np.ones(len(cols)))
        P[y, cols] = block_mass[(kappa[y], xp)] * split
    return P


def random_lumpable_function(g: Digraph, k: LumpingMap, rng) -> np.ndarray:
    """Sample a positive lumpable edge function (not stochastic): each block
    gets its own positive row-sum level, shared by every row of the block."""
    kappa = k.kappa
    lumped = lumped_graph(g, k).lumped_graph
    level = {b: rng.uniform(0.2, 3.0) for b in lumped.edges}
    targets = {}
    for y, yp in sorted(g.edges):
        targets.setdefault((y, kappa[yp]), []).append(yp)
    F = np.zeros((g.n, g.n))
    for (y, xp), cols in targets.items():
        split = rng.dirichlet(np.ones(len(cols)))
        F[y, cols] = level[(kappa[y], xp)] * split
    return F


def hudson_expansion(base: Digraph) -> tuple[Digraph, LumpingMap]:
    """Sliding-window lift: states are the edges of the base graph, an edge
    joins (x1, x2) to (x1', x2') iff x2 = x1', and each state lumps to its
    second coordinate. The result never has a multi-row merging block."""
    if not base.edges:
        raise ValueError("base graph needs at least one edge")
    if not strongly_connected(base):
        raise ValueError("base graph must be strongly connected")
    states = base.sorted_edges()
    index = {e: i for i, e in enumerate(states)}
    edges = frozenset(
        (index[(x1, x2)], index[(x1p, x2p)])
        for (x1, x2) in states
        for (x1p, x2p) in states
        if x2 == x1p
    )
    kappa = tuple(x2 for (_, x2) in states)
    return Digraph(len(states), edges), LumpingMap(kappa, base.n)


def complete_family(n_states: int, k: LumpingMap | None = None) -> Digraph:
    """All n^2 ordered pairs. The lumping map never changes the edge set; the
    parameter is accepted for signature symmetry with the other generators."""
    edges = frozenset((y, yp) for y in range(n_states) for yp in range(n_states))
    return Digraph(n_states, edges)
