"""Integer bases for the log-lumpable cone and the shift-field space, the
dimension formulas, and the complete exact-rank criterion."""

from __future__ import annotations

from dataclasses import dataclass

from . import exact
from .digraph import Digraph
from .lumping import LumpingMap, VacuousFamilyError, block_profile, is_nonvacuous, lumped_graph

# reference vertex for the shift-field basis; any vertex works, 0 is fixed
ROOT_STATE = 0


@dataclass(frozen=True)
class DimensionReport:
    manifold_dim: int
    span_dim: int
    n_dim: int
    ehull_sum_dim: int
    target: int
    is_e_family: bool

    def as_dict(self) -> dict:
        return {
            "manifold_dim": self.manifold_dim,
            "span_dim": self.span_dim,
            "n_dim": self.n_dim,
            "ehull_sum_dim": self.ehull_sum_dim,
            "target": self.target,
            "is_e_family": self.is_e_family,
        }


def n_basis(g: Digraph) -> list[list[int]]:
    """Basis of the space of edge functions of the form f(y') - f(y) + c:
    the all-ones vector, plus one difference indicator per vertex other than
    the reference vertex. |Y| vectors, linearly independent on a strongly
    connected graph."""
    edges = g.sorted_edges()
    vectors = [[1] * len(edges)]
    for y0 in range(g.n):
        if y0 == ROOT_STATE:
            continue
        vectors.append(
            [(1 if yp == y0 else 0) - (1 if y == y0 else 0) for y, yp in edges]
        )
    return vectors


def cone_basis(g: Digraph, k: LumpingMap) -> list[list[int]]:
    """Indicator basis spanning the log-lumpable cone's direction space: the
    anchor-set indicator of every block with a non-merging row, plus a
    single-edge indicator for every edge lying in a merging row."""
    prof = block_profile(g, k)
    edges = g.sorted_edges()
    index = {e: i for i, e in enumerate(edges)}
    vectors = []
    for block in sorted(prof.U):
        vec = [0] * len(edges)
        for e in prof.anchors[block]:
            vec[index[e]] = 1
        vectors.append(vec)
    for e in sorted(prof.R):
        vec = [0] * len(edges)
        vec[index[e]] = 1
        vectors.append(vec)
    return vectors


def _block_size_sum(g: Digraph, k: LumpingMap) -> int:
    lumped = lumped_graph(g, k)
    sizes = lumped.class_sizes
    return sum(sizes[x] for x, _ in lumped.lumped_graph.edges)


def manifold_dim(g: Digraph, k: LumpingMap) -> int:
    """Dimension of the family as a manifold:
    |E| - sum of |S_x| over lumped edges + |D| - |X|."""
    if not is_nonvacuous(g, k):
        raise VacuousFamilyError("manifold dimension needs a non-vacuous family")
    lumped = lumped_graph(g, k)
    return (
        len(g.edges) - _block_size_sum(g, k) + len(lumped.lumped_graph.edges) - k.num_classes
    )


def span_dim(g: Digraph, k: LumpingMap) -> int:
    """|U| + |R|; equals the rank of cone_basis."""
    prof = block_profile(g, k)
    return len(prof.U) + len(prof.R)


def ehull_dim(g: Digraph, k: LumpingMap) -> int:
    """Exact rank of cone basis and shift-field basis taken together."""
    return exact.rank(cone_basis(g, k) + n_basis(g))


def target_dim(g: Digraph, k: LumpingMap) -> int:
    """The rank that an e-family must reach:
    |E| + |Y| + |D| - |X| - sum of |S_x| over lumped edges."""
    if not is_nonvacuous(g, k):
        raise VacuousFamilyError("target dimension needs a non-vacuous family")
    lumped = lumped_graph(g, k)
    return (
        len(g.edges)
        + g.n
        + len(lumped.lumped_graph.edges)
        - k.num_classes
        - _block_size_sum(g, k)
    )


def dimensional_criterion(g: Digraph, k: LumpingMap) -> DimensionReport:
    """The complete criterion: the family is an e-family iff the combined
    rank equals the target. Always conclusive on non-vacuous input."""
    ehull = ehull_dim(g, k)
    target = target_dim(g, k)
    return DimensionReport(
        manifold_dim=manifold_dim(g, k),
        span_dim=span_dim(g, k),
        n_dim=g.n,
        ehull_sum_dim=ehull,
        target=target,
        is_e_family=ehull == target,
    )


def simplified_inequality(g: Digraph, k: LumpingMap) -> tuple[int, int]:
    """(lhs, rhs) of the counting shortcut; lhs > rhs rules out an e-family
    without any rank computation."""
    prof = block_profile(g, k)
    lumped = lumped_graph(g, k)
    num_blocks = len(lumped.lumped_graph.edges)
    lhs = _block_size_sum(g, k)
    rhs = (
        (num_blocks - len(prof.U))
        + (g.n - k.num_classes)
        + (len(g.edges) - len(prof.R))
    )
    return lhs, rhs


def simplified_necessary(g: Digraph, k: LumpingMap):
    """Necessary-condition shortcut. Returns a not-e-family verdict when the
    counting inequality fires, None when inconclusive."""
    # imported here to avoid an import cycle with criteria
    from .criteria import NOT_E_FAMILY, RULE_SIMPLIFIED, Verdict

    lhs, rhs = simplified_inequality(g, k)
    if lhs > rhs:
        return Verdict(NOT_E_FAMILY, RULE_SIMPLIFIED, {"lhs": lhs, "rhs": rhs})
    return None
