"""Layered decision procedure with certificates, plus the growth (chain,
monotonicity) and diagonal-stability utilities."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .digraph import Digraph, induced_subgraph, remove_edges, strongly_connected
from .dimension import dimensional_criterion, simplified_necessary
from .lumping import (
    BlockProfile,
    LumpingMap,
    VacuousFamilyError,
    block_profile,
    is_nonvacuous,
    lumped_graph,
)

E_FAMILY = "e-family"
NOT_E_FAMILY = "not-e-family"

RULE_DEGENERATE = "degenerate"
RULE_NO_MULTI_ROW = "no-multi-row-merging"
RULE_LAZY_CYCLE = "lazy-cycle"
RULE_REDUNDANT = "redundant-merging-block"
RULE_SIMPLIFIED = "simplified-inequality"
RULE_DIMENSIONAL = "dimensional-criterion"

REDUNDANT = "redundant"
NOT_REDUNDANT = "not-redundant"
UNKNOWN = "unknown"

DEFAULT_SUBSET_BUDGET = 2**16


@dataclass(frozen=True)
class Verdict:
    decision: str  # E_FAMILY or NOT_E_FAMILY
    rule: str
    certificate: object = None


@dataclass(frozen=True)
class Redundancy:
    status: str  # REDUNDANT, NOT_REDUNDANT or UNKNOWN
    kept_classes: tuple | None = None


def is_degenerate(k: LumpingMap) -> bool:
    """One class, or one state per class: the family question trivializes."""
    return k.num_classes in (1, k.num_states)


def no_multi_row_criterion(profile: BlockProfile):
    """Sufficient condition: no merging block spanning a class of two or more
    rows means the family is an e-family."""
    if profile.multi_row_merging:
        return None
    return Verdict(E_FAMILY, RULE_NO_MULTI_ROW, {"multi_row_merging_blocks": []})


def lazy_cycle_criterion(g: Digraph, k: LumpingMap):
    """Sufficient condition: all within-class edges are self-loops and the
    off-diagonal lumped graph is one directed cycle through every class."""
    kappa = k.kappa
    for y, yp in g.edges:
        if kappa[y] == kappa[yp] and y != yp:
            return None
    lumped = lumped_graph(g, k).lumped_graph
    off = sorted((x, xp) for x, xp in lumped.edges if x != xp)
    m = k.num_classes
    if len(off) != m:
        return None
    succ = {}
    for x, xp in off:
        if x in succ:
            return None
        succ[x] = xp
    if set(succ) != set(range(m)):
        return None
    cycle = [0]
    cur = 0
    for _ in range(m):
        cur = succ[cur]
        cycle.append(cur)
    if cur != 0 or len(set(cycle[:-1])) != m:
        return None
    return Verdict(E_FAMILY, RULE_LAZY_CYCLE, {"cycle": cycle})


def _connected_without_block(g, k, kept, block):
    members = k.class_members()
    keep_states = sorted(y for x in kept for y in members[x])
    sub, relabel = induced_subgraph(g, keep_states)
    x0, x0p = block
    doomed = {
        (relabel[y], relabel[yp])
        for y, yp in g.edges
        if y in relabel and yp in relabel and k.kappa[y] == x0 and k.kappa[yp] == x0p
    }
    return strongly_connected(remove_edges(sub, doomed))


def is_redundant_block(
    g: Digraph, k: LumpingMap, block, budget: int = DEFAULT_SUBSET_BUDGET
) -> Redundancy:
    """Does some union of classes containing the block stay strongly connected
    once the block's edges are dropped?

    Search order: the full class set first (the frequent cheap hit), then
    subsets containing both block classes by increasing size. The budget caps
    how many subsets are examined; running out yields UNKNOWN, never a wrong
    answer.
    """
    block = (int(block[0]), int(block[1]))
    lumped = lumped_graph(g, k).lumped_graph
    if block not in lumped.edges:
        raise ValueError(f"block {block} is not an edge of the lumped graph")
    m = k.num_classes
    required = sorted(set(block))
    rest = [x for x in range(m) if x not in block]

    candidates = [tuple(range(m))]
    for size in range(len(required), m):
        for extra in combinations(rest, size - len(required)):
            candidates.append(tuple(sorted(required + list(extra))))

    examined = 0
    for kept in candidates:
        if examined >= budget:
            return Redundancy(UNKNOWN)
        examined += 1
        if _connected_without_block(g, k, kept, block):
            return Redundancy(REDUNDANT, kept)
    return Redundancy(NOT_REDUNDANT)


def redundant_merging_criterion(
    g: Digraph, k: LumpingMap, budget: int = DEFAULT_SUBSET_BUDGET
):
    """Necessary-condition layer: a multi-row merging block that is redundant
    rules out an e-family. Inconclusive when no such block is found within
    budget."""
    prof = block_profile(g, k)
    for block in prof.multi_row_merging:
        result = is_redundant_block(g, k, block, budget)
        if result.status == REDUNDANT:
            certificate = {"block": block, "kept_classes": result.kept_classes}
            return Verdict(NOT_E_FAMILY, RULE_REDUNDANT, certificate)
    return None


def decide(g: Digraph, k: LumpingMap, budget: int = DEFAULT_SUBSET_BUDGET) -> Verdict:
    """Layered classification. Cheap combinatorial layers first; the exact
    rank criterion is the always-conclusive floor, so a budget cut can only
    cost time, never correctness."""
    if is_degenerate(k):
        certificate = {"num_states": k.num_states, "num_classes": k.num_classes}
        return Verdict(E_FAMILY, RULE_DEGENERATE, certificate)
    if not is_nonvacuous(g, k):
        raise VacuousFamilyError(
            "family is vacuous: the graph must be strongly connected and every "
            "row of every lumped block needs at least one edge"
        )
    prof = block_profile(g, k)
    layers = (
        lambda: no_multi_row_criterion(prof),
        lambda: lazy_cycle_criterion(g, k),
        lambda: redundant_merging_criterion(g, k, budget),
        lambda: simplified_necessary(g, k),
    )
    for layer in layers:
        verdict = layer()
        if verdict is not None:
            return verdict
    report = dimensional_criterion(g, k)
    decision = E_FAMILY if report.is_e_family else NOT_E_FAMILY
    return Verdict(decision, RULE_DIMENSIONAL, report)


def _as_edge_set(edges):
    return frozenset((int(y), int(yp)) for y, yp in edges)


def chain(e_small, e_big, k: LumpingMap) -> list[frozenset]:
    """Grow the small edge set into the big one through non-vacuous steps.

    Each consecutive pair differs by either a single edge inside an existing
    block (edge-link) or a whole fresh non-merging block, one edge per row
    (block-link). New blocks are laid down first using the big family's
    anchor edges, then the leftover edges follow in lexicographic order.
    """
    small = _as_edge_set(e_small)
    big = _as_edge_set(e_big)
    if not small <= big:
        raise ValueError("the small edge set must be contained in the big one")
    n = k.num_states
    g_small = Digraph(n, small)
    g_big = Digraph(n, big)
    for g in (g_small, g_big):
        if not is_nonvacuous(g, k):
            raise VacuousFamilyError("both chain endpoints must be non-vacuous")

    kappa = k.kappa
    blocks_small = {(kappa[y], kappa[yp]) for y, yp in small}
    blocks_big = {(kappa[y], kappa[yp]) for y, yp in big}
    prof_big = block_profile(g_big, k)

    steps = [small]
    current = set(small)
    for block in sorted(blocks_big - blocks_small):
        current.update(prof_big.anchors[block])
        steps.append(frozenset(current))
    for edge in sorted(big - current):
        current.add(edge)
        steps.append(frozenset(current))
    return steps


def chain_length(e_small, e_big, k: LumpingMap) -> int:
    """Closed-form number of links: one per extra edge in an existing block,
    and per fresh block one link plus one per edge beyond its row count."""
    small = _as_edge_set(e_small)
    big = _as_edge_set(e_big)
    kappa = k.kappa
    sizes = k.class_sizes()
    blocks_small = {(kappa[y], kappa[yp]) for y, yp in small}
    per_block = {}
    for y, yp in big:
        per_block.setdefault((kappa[y], kappa[yp]), set()).add((y, yp))
    total = 0
    for block, edges in per_block.items():
        if block in blocks_small:
            total += len(edges - small)
        else:
            total += 1 + len(edges) - sizes[block[0]]
    return total


def check_monotone_pair(e_small, e_big, k: LumpingMap) -> bool:
    """Test harness for the monotonicity guarantee: growing the edge set can
    only lose the e-family property, never create it. True means consistent."""
    small = _as_edge_set(e_small)
    big = _as_edge_set(e_big)
    if not small <= big:
        raise ValueError("the small edge set must be contained in the big one")
    n = k.num_states
    big_verdict = decide(Digraph(n, big), k)
    if big_verdict.decision != E_FAMILY:
        return True
    small_verdict = decide(Digraph(n, small), k)
    return small_verdict.decision == E_FAMILY


def strip_diagonal_blocks(g: Digraph, k: LumpingMap) -> Digraph:
    """Drop every diagonal block that consists of self-loops only; the
    verdict of decide() is unchanged by this. Refuses when the removal would
    leave a vacuous family."""
    kappa = k.kappa
    doomed = set()
    for x in range(k.num_classes):
        block = {(y, yp) for y, yp in g.edges if kappa[y] == x and kappa[yp] == x}
        if block and all(y == yp for y, yp in block):
            doomed |= block
    if not doomed:
        return g
    stripped = remove_edges(g, doomed)
    if not is_nonvacuous(stripped, k):
        raise ValueError(
            "removing the self-loop blocks would leave a vacuous family"
        )
    return stripped
