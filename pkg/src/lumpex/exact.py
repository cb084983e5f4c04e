"""Exact rank computation over the integers.

Fraction-free (Bareiss) elimination on Python big ints: no rational
normalization, no floating-point rank pitfalls. Vectors are plain sequences
of ints indexed by a fixed edge order.
"""

from __future__ import annotations


def rank(vectors) -> int:
    """Exact rank of the span of the given integer vectors."""
    rows = [[int(a) for a in v] for v in vectors]
    if not rows:
        return 0
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("vectors must share one dimension")

    prev = 1
    r = 0
    for c in range(width):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rrc = rows[r][c]
        for i in range(r + 1, len(rows)):
            ric = rows[i][c]
            ri = rows[i]
            rr = rows[r]
            # Bareiss step: the division by the previous pivot is exact
            for j in range(c + 1, width):
                ri[j] = (rrc * ri[j] - ric * rr[j]) // prev
            ri[c] = 0
        prev = rrc
        r += 1
        if r == len(rows):
            break
    return r


def in_span(v, basis) -> bool:
    """True iff v lies in the integer span of the basis (over the rationals)."""
    basis = list(basis)
    return rank(basis + [list(v)]) == rank(basis)
