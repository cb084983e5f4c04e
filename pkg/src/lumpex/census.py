"""Exhaustive classification of small families up to relabeling.

Two families are the same up to relabeling when a bijection of states maps
one edge set onto the other while sending classes onto classes of equal
size. The canonical key below is a complete invariant for that relation, so
a census is a dict keyed by it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .criteria import E_FAMILY, Verdict, decide
from .digraph import Digraph, _reaches_all
from .lumping import LumpingMap

MAX_CENSUS_STATES = 5


@dataclass(frozen=True)
class FamilyClass:
    """One relabeling class: its key, a concrete member, the shared verdict,
    and how many raw edge sets collapse into it."""

    canonical_key: str
    representative: Digraph
    verdict: Verdict
    class_size: int


def canonical_lumping(class_sizes) -> LumpingMap:
    """Classes sorted by size, states numbered class by class."""
    sizes = sorted(int(s) for s in class_sizes)
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("class sizes must be positive")
    kappa = tuple(x for x, size in enumerate(sizes) for _ in range(size))
    return LumpingMap(kappa, len(sizes))


def _admissible_relabelings(k: LumpingMap) -> list[tuple]:
    """All state bijections onto the canonical numbering for this size
    multiset: classes may trade places only with classes of equal size, and
    members permute freely inside a class."""
    members = k.class_members()
    sizes = [len(m) for m in members]
    canonical = canonical_lumping(sizes)
    slots = canonical.class_members()

    by_size = {}
    for x, size in enumerate(sizes):
        by_size.setdefault(size, []).append(x)
    slot_by_size = {}
    for b, slot in enumerate(slots):
        slot_by_size.setdefault(len(slot), []).append(b)

    # per size bucket: all ways to assign source classes to target blocks
    buckets = sorted(by_size)
    assignments = [[]]
    for size in buckets:
        sources = by_size[size]
        extended = []
        for prefix in assignments:
            for perm in permutations(slot_by_size[size]):
                extended.append(prefix + list(zip(sources, perm)))
        assignments = extended

    maps = []
    for assignment in assignments:
        partial = [[]]
        for x, b in assignment:
            src, dst = members[x], slots[b]
            extended = []
            for prefix in partial:
                for perm in permutations(dst):
                    extended.append(prefix + list(zip(src, perm)))
            partial = extended
        for pairs in partial:
            sigma = [0] * k.num_states
            for y, image in pairs:
                sigma[y] = image
            maps.append(tuple(sigma))
    return maps


def _key_int(edges, sigma, n: int) -> int:
    # bit n*n-1-(y*n+y') so integer order matches string order of the key
    top = n * n - 1
    total = 0
    for y, yp in edges:
        total |= 1 << (top - (sigma[y] * n + sigma[yp]))
    return total


def canonical_form(g: Digraph, k: LumpingMap) -> str:
    """Lexicographically smallest row-major adjacency string over all
    admissible relabelings. Equal strings iff same family up to relabeling."""
    if len(k.kappa) != g.n:
        raise ValueError("lumping map must cover every vertex of the graph")
    edges = g.sorted_edges()
    best = min(_key_int(edges, sigma, g.n) for sigma in _admissible_relabelings(k))
    return format(best, f"0{g.n * g.n}b")


def _fast_nonvacuous(rows, class_bits, member_lists, n: int) -> bool:
    """Same predicate as lumping.is_nonvacuous, on raw row masks (state y' at
    bit n-1-y', matching the canonical key layout) so the census loop never
    builds a Digraph for vacuous edge sets."""
    if not all(rows):
        return False
    fwd = [0] * n
    rev = [0] * n
    for y in range(n):
        rest = rows[y]
        while rest:
            low = rest & -rest
            yp = n - 1 - (low.bit_length() - 1)
            fwd[y] |= 1 << yp
            rev[yp] |= 1 << y
            rest ^= low
    full = (1 << n) - 1
    if n > 1 and not (_reaches_all(fwd, full) and _reaches_all(rev, full)):
        return False
    hit = [0] * n
    for y in range(n):
        for x, bits in enumerate(class_bits):
            if rows[y] & bits:
                hit[y] |= 1 << x
    for members in member_lists:
        first = hit[members[0]]
        if any(hit[y] != first for y in members[1:]):
            return False
    return True


def enumerate_families(n_states: int, class_sizes) -> tuple[LumpingMap, list[FamilyClass]]:
    """Every non-vacuous edge set over n_states grouped up to relabeling.

    Walks all 2**(n^2) edge sets, so five states is the hard ceiling (and
    already takes a while)."""
    n = int(n_states)
    if n < 1 or n > MAX_CENSUS_STATES:
        raise ValueError(f"census covers 1 to {MAX_CENSUS_STATES} states")
    k = canonical_lumping(class_sizes)
    if k.num_states != n:
        raise ValueError("class sizes must sum to the number of states")
    sigmas = _admissible_relabelings(k)
    member_lists = k.class_members()
    class_bits = [
        sum(1 << (n - 1 - y) for y in members) for members in member_lists
    ]
    top = n * n - 1
    full_row = (1 << n) - 1

    groups = {}  # canonical int -> [count, representative mask]
    for mask in range(1 << (n * n)):
        rows = [(mask >> (n * (n - 1 - y))) & full_row for y in range(n)]
        if not _fast_nonvacuous(rows, class_bits, member_lists, n):
            continue
        edges = [
            (y, yp)
            for y in range(n)
            for yp in range(n)
            if mask >> (top - (y * n + yp)) & 1
        ]
        key = min(_key_int(edges, sigma, n) for sigma in sigmas)
        entry = groups.get(key)
        if entry is None:
            groups[key] = [1, mask]
        else:
            entry[0] += 1

    families = []
    for key in sorted(groups):
        count, mask = groups[key]
        edges = frozenset(
            (y, yp)
            for y in range(n)
            for yp in range(n)
            if mask >> (top - (y * n + yp)) & 1
        )
        g = Digraph(n, edges)
        families.append(
            FamilyClass(
                canonical_key=format(key, f"0{n * n}b"),
                representative=g,
                verdict=decide(g, k),
                class_size=count,
            )
        )
    return k, families


def classify_three_state() -> dict:
    """The complete three-state census for class sizes {1, 2}, cross-checked
    against the bundled reference grids."""
    from .families import bundled_family  # deferred: families loads fixtures

    k, families = enumerate_families(3, (1, 2))
    e_keys = {f.canonical_key for f in families if f.verdict.decision == E_FAMILY}
    if len(families) != 26 or len(e_keys) != 12:
        raise RuntimeError(
            f"three-state census drifted: {len(families)} classes, "
            f"{len(e_keys)} e-families (expected 26 and 12)"
        )
    grid_keys = set()
    for i in range(1, 13):
        gg, kk = bundled_family(f"grid-{i:02d}")
        grid_keys.add(canonical_form(gg, kk))
    if grid_keys != e_keys:
        raise RuntimeError("three-state e-family keys do not match the reference grids")
    return {
        "num_states": 3,
        "class_sizes": [1, 2],
        "num_classes": len(families),
        "num_e_families": len(e_keys),
        "classes": [
            {
                "key": f.canonical_key,
                "class_size": f.class_size,
                "decision": f.verdict.decision,
                "rule": f.verdict.rule,
            }
            for f in families
        ],
    }
