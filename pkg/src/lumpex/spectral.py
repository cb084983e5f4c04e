"""Dense nonnegative matrix numerics: dominant eigenpairs, the stochastic
rescaling they induce, and log-affine combinations of edge functions.

Everything here is double precision; exact reasoning lives in the exact
module.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .digraph import Digraph, strongly_connected

CONVERGENCE_TOL = 1e-14
RESIDUAL_REL_TOL = 1e-10
WEIGHT_SUM_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """Power iteration ran out of budget; the input is pathologically
    conditioned for this solver."""


class PFEigenpair(NamedTuple):
    rho: float
    v: np.ndarray  # positive, normalized to sum 1


def _support_graph(F: np.ndarray) -> Digraph:
    ys, yps = np.nonzero(F)
    return Digraph(F.shape[0], frozenset(zip(ys.tolist(), yps.tolist())))


def pf_eigenpair(F) -> PFEigenpair:
    """Dominant (largest modulus) eigenvalue and right eigenvector of a
    nonnegative matrix with strongly connected support.

    Power iteration on F + c*I with c = max row sum; the positive diagonal
    makes the iteration converge even for periodic support patterns.
    """
    F = np.asarray(F, dtype=float)
    n = F.shape[0]
    if F.ndim != 2 or F.shape != (n, n):
        raise ValueError("expected a square matrix")
    if not np.all(np.isfinite(F)) or np.any(F < 0):
        raise ValueError("entries must be finite and nonnegative")
    if not strongly_connected(_support_graph(F)):
        raise ValueError("support must be strongly connected")

    shift = float(F.sum(axis=1).max())
    A = F + shift * np.eye(n)
    v = np.full(n, 1.0 / n)
    lam = shift
    cap = 100 * n * n
    for _ in range(cap):
        w = A @ v
        lam = float(w.sum())  # Av is positive and v sums to 1
        w /= lam
        done = float(np.max(np.abs(w - v))) < CONVERGENCE_TOL
        v = w
        if done:
            break
    else:
        raise ConvergenceError(f"power iteration did not settle in {cap} steps")

    rho = lam - shift
    residual = float(np.max(np.abs(F @ v - rho * v)))
    if not rho > 0 or residual > RESIDUAL_REL_TOL * rho:
        raise ConvergenceError(
            f"eigenpair residual {residual:.3e} exceeds {RESIDUAL_REL_TOL:.0e} * rho"
        )
    return PFEigenpair(rho, v)


def s_normalize(F) -> np.ndarray:
    """Rescale a nonnegative irreducible matrix into the unique stochastic
    matrix with the same support and eigenvector-conjugate rows:
    P(y,y') = F(y,y') v(y') / (rho v(y)). Idempotent on stochastic input."""
    F = np.asarray(F, dtype=float)
    rho, v = pf_eigenpair(F)
    P = F * v[None, :] / (rho * v[:, None])
    # rows sum to 1 up to solver residue; wash that out
    P /= P.sum(axis=1, keepdims=True)
    return P


def log_combination(mats, weights) -> np.ndarray:
    """Entry-wise exp of the affine combination of logs over the shared
    support. Weights must sum to 1."""
    if len(mats) == 0:
        raise ValueError("need at least one matrix")
    if len(mats) != len(weights):
        raise ValueError("one weight per matrix")
    total = float(sum(weights))
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    mats = [np.asarray(M, dtype=float) for M in mats]
    support = mats[0] > 0
    for M in mats[1:]:
        if not np.array_equal(M > 0, support):
            raise ValueError("matrices must share one support")
    acc = np.zeros(support.sum())
    for M, w in zip(mats, weights):
        acc += w * np.log(M[support])
    out = np.zeros_like(mats[0])
    out[support] = np.exp(acc)
    return out


def e_geodesic_point(P0, P1, t: float) -> np.ndarray:
    """Point at parameter t on the log-affine line through P0 and P1,
    rescaled back to a stochastic matrix. t may be any real; t=0 and t=1
    return the endpoints."""
    P0 = np.asarray(P0, dtype=float)
    P1 = np.asarray(P1, dtype=float)
    support = P0 > 0
    if not np.array_equal(P1 > 0, support):
        raise ValueError("geodesic endpoints must share one support")
    G = np.zeros_like(P0)
    G[support] = np.exp((1.0 - t) * np.log(P0[support]) + t * np.log(P1[support]))
    return s_normalize(G)
