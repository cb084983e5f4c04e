"""Numerical non-membership certificates: pairs of in-family matrices whose
log-affine combination, rescaled back to stochastic form, is no longer
lumpable."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .digraph import Digraph
from .lumping import (
    LumpingMap,
    block_profile,
    is_lumpable_matrix,
    lumpability_violation,
    lumped_graph,
    random_lumpable_matrix,
    uniform_type_matrix,
)
from .spectral import ConvergenceError, e_geodesic_point

DEFAULT_SEED = 29
DEFAULT_BUDGET = 500
DEFAULT_TOL = 1e-6
MEMBERSHIP_TOL = 1e-10
ETA_CONSTRAINT_TOL = 1e-12
T_GRID = (-2.0, -1.0, 0.25, 0.5, 0.75, 1.0, 2.0)


@dataclass(frozen=True)
class Witness:
    p0: np.ndarray
    p1: np.ndarray
    t: float
    violation: float


def _merging_row_data(g, k, prof, block):
    x0, x0p = block
    y_star = min(prof.merging_rows[block])
    targets = sorted(yp for y, yp in g.edges if y == y_star and k.kappa[yp] == x0p)
    out_degree = lumped_graph(g, k).lumped_graph.out_degree(x0)
    constraint = 2.0 / (out_degree * len(targets))
    return y_star, targets, constraint


def merging_pair_construction(
    g: Digraph, k: LumpingMap, block, eta_a: float, eta_b: float
):
    """The two matrices that certify absence of log-affinity at a multi-row
    merging block.

    Both start from the uniform-type matrix; in the smallest merging row the
    mass on the two smallest targets is reshuffled to (eta_a, eta_b) in one
    matrix and (eta_b, eta_a) in the other. The block row sum is unchanged,
    so both stay exactly lumpable and stochastic.
    """
    prof = block_profile(g, k)
    block = (int(block[0]), int(block[1]))
    if block not in prof.multi_row_merging:
        raise ValueError(f"block {block} is not multi-row merging")
    y_star, targets, constraint = _merging_row_data(g, k, prof, block)
    if not 0.0 < eta_a < eta_b:
        raise ValueError("need 0 < eta_a < eta_b")
    if abs((eta_a + eta_b) - constraint) > ETA_CONSTRAINT_TOL:
        raise ValueError(
            f"eta_a + eta_b must equal {constraint!r} to preserve the block row sum"
        )
    base = uniform_type_matrix(g, k)
    ya, yb = targets[0], targets[1]
    p0 = base.copy()
    p0[y_star, ya] = eta_a
    p0[y_star, yb] = eta_b
    p1 = base.copy()
    p1[y_star, ya] = eta_b
    p1[y_star, yb] = eta_a
    return p0, p1


def _witness_if_violated(k, p0, p1, t, tol):
    try:
        point = e_geodesic_point(p0, p1, t)
    except ConvergenceError:
        # extreme extrapolations can stall the power iteration; a probe that
        # cannot be normalized reliably is just skipped, never reported
        return None
    violation = lumpability_violation(point, k)
    if violation > tol:
        return Witness(p0, p1, float(t), violation)
    return None


def search_witness(
    g: Digraph,
    k: LumpingMap,
    budget: int = DEFAULT_BUDGET,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
):
    """Best-effort witness search; finding none proves nothing.

    Constructive pairs at the midpoint are tried first, once per multi-row
    merging block. After that, random lumpable pairs are scanned over a small
    t-grid until the budget runs out. Fully reproducible for a fixed seed.
    """
    prof = block_profile(g, k)  # raises on vacuous input
    for block in prof.multi_row_merging:
        _, _, constraint = _merging_row_data(g, k, prof, block)
        p0, p1 = merging_pair_construction(
            g, k, block, constraint / 3.0, 2.0 * constraint / 3.0
        )
        found = _witness_if_violated(k, p0, p1, 0.5, tol)
        if found is not None:
            return found
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        p0 = random_lumpable_matrix(g, k, rng)
        p1 = random_lumpable_matrix(g, k, rng)
        for t in T_GRID:
            found = _witness_if_violated(k, p0, p1, t, tol)
            if found is not None:
                return found
    return None


def _in_family(P, g: Digraph, k: LumpingMap) -> bool:
    P = np.asarray(P, dtype=float)
    n = g.n
    if P.shape != (n, n):
        return False
    support = {(int(y), int(yp)) for y, yp in zip(*np.nonzero(P > 0))}
    if support != set(g.edges) or np.any(P < 0):
        return False
    if np.max(np.abs(P.sum(axis=1) - 1.0)) > MEMBERSHIP_TOL:
        return False
    return is_lumpable_matrix(P, k, MEMBERSHIP_TOL)


def verify_witness(g: Digraph, k: LumpingMap, w: Witness, tol: float = DEFAULT_TOL) -> bool:
    """Independent re-check: both endpoints are family members and the
    recomputed geodesic point breaks lumpability by more than tol. Never
    raises; anything that cannot be recomputed is simply not a witness."""
    if not (_in_family(w.p0, g, k) and _in_family(w.p1, g, k)):
        return False
    try:
        point = e_geodesic_point(w.p0, w.p1, w.t)
    except ConvergenceError:
        return False
    return lumpability_violation(point, k) > tol
