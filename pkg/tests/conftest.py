import itertools
from dataclasses import dataclass

import numpy as np
import pytest

from lumpex.census import _admissible_relabelings, _key_int, canonical_lumping
from lumpex.digraph import Digraph, _reaches_all
from lumpex.families import bundled_family
from lumpex.lumping import LumpingMap, is_nonvacuous


@pytest.fixture(scope="session")
def ex1():
    return bundled_family("ex1")


@pytest.fixture(scope="session")
def ex2():
    return bundled_family("ex2")


@pytest.fixture(scope="session")
def exlc():
    return bundled_family("exlc")


@pytest.fixture(scope="session")
def ex6():
    return bundled_family("ex6")


def random_family(rng, n_lo=2, n_hi=6, density=0.4):
    """Random non-vacuous family: a Hamiltonian cycle guarantees strong
    connectivity, extra edges are sprinkled in, and completeness is then
    repaired by adding one edge per missing (row, class) hit."""
    n = int(rng.integers(n_lo, n_hi + 1))
    m = int(rng.integers(2, n)) if n > 2 else 2
    while True:
        kappa = tuple(int(c) for c in rng.integers(0, m, size=n))
        if len(set(kappa)) == m:
            break
    k = LumpingMap(kappa, m)

    order = list(rng.permutation(n))
    edges = {(order[i], order[(i + 1) % n]) for i in range(n)}
    for y in range(n):
        for yp in range(n):
            if rng.random() < density:
                edges.add((y, yp))

    members = k.class_members()
    hit = [set() for _ in range(n)]
    for y, yp in edges:
        hit[y].add(kappa[yp])
    for x, rows in enumerate(members):
        wanted = set().union(*(hit[y] for y in rows))
        for y in rows:
            for xp in wanted - hit[y]:
                edges.add((y, members[xp][0]))

    g = Digraph(n, frozenset(edges))
    assert is_nonvacuous(g, k)
    return g, k


def random_families(seed, count, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_family(rng, **kwargs) for _ in range(count)]


def surjective_lumpings(n, num_classes):
    """Every onto assignment of n states to num_classes labeled classes."""
    return [
        assign
        for assign in itertools.product(range(num_classes), repeat=n)
        if len(set(assign)) == num_classes
    ]


def mask_edges(mask, n):
    """Adjacency bits in row-major order, highest bit first (the census
    convention), decoded to an edge tuple."""
    top = n * n - 1
    return tuple(
        (y, yp)
        for y in range(n)
        for yp in range(n)
        if mask >> (top - (y * n + yp)) & 1
    )


@dataclass(frozen=True)
class SweepData:
    kappas: tuple
    units: tuple  # (kappa, edges, labeled multiplicity), one per class
    labeled_total: int
    sampled_labeled: tuple  # every 97th labeled family, labels kept as-is
    pools: dict  # canonical lumping -> tuple of non-vacuous masks
    ground_masks: tuple  # no empty row and strongly connected support


@pytest.fixture(scope="session")
def four_state_sweep():
    """Every labeled non-vacuous 4-state family with 2 or 3 classes,
    deduplicated into one representative per relabeling class.  Shared by
    the rank checks and the consistency sweeps, so it is built once and the
    inner loop stays bit-level cheap."""
    n = 4
    full = (1 << n) - 1
    kappas = tuple(surjective_lumpings(n, 2) + surjective_lumpings(n, 3))

    ground = []
    ground_rows = {}
    for mask in range(1 << (n * n)):
        rows = [(mask >> (n * (n - 1 - y))) & full for y in range(n)]
        if not all(rows):
            continue
        fwd = [0] * n
        rev = [0] * n
        for y in range(n):
            for yp in range(n):
                if rows[y] >> (n - 1 - yp) & 1:
                    fwd[y] |= 1 << yp
                    rev[yp] |= 1 << y
        if _reaches_all(fwd, full) and _reaches_all(rev, full):
            ground.append(mask)
            ground_rows[mask] = rows

    ground_edge_list = {mask: mask_edges(mask, n) for mask in ground}

    units = {}
    labeled_total = 0
    sampled = []
    pools = {}
    for kappa in kappas:
        m = max(kappa) + 1
        k = LumpingMap(kappa, m)
        members = k.class_members()
        class_bits = [
            sum(1 << (n - 1 - y) for y in members[x]) for x in range(m)
        ]
        shape = tuple(sorted(len(ms) for ms in members))
        sigmas = _admissible_relabelings(k)
        is_canon = kappa == canonical_lumping(shape).kappa
        if is_canon:
            pools[kappa] = []
        for mask in ground:
            rows = ground_rows[mask]
            ok = True
            for ms in members:
                first = None
                for y in ms:
                    sig = tuple(1 if rows[y] & cb else 0 for cb in class_bits)
                    if first is None:
                        first = sig
                    elif sig != first:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            labeled_total += 1
            edges = ground_edge_list[mask]
            if labeled_total % 97 == 0:
                sampled.append((kappa, edges))
            if is_canon:
                pools[kappa].append(mask)
            key = (shape, min(_key_int(edges, s, n) for s in sigmas))
            entry = units.get(key)
            if entry is None:
                units[key] = [kappa, edges, 1]
            else:
                entry[2] += 1

    return SweepData(
        kappas=kappas,
        units=tuple((k_, e, c) for k_, e, c in units.values()),
        labeled_total=labeled_total,
        sampled_labeled=tuple(sampled),
        pools={k_: tuple(v) for k_, v in pools.items()},
        ground_masks=tuple(ground),
    )
