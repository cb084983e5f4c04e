"""Input documents for families and the bundled example fixtures.

A family document is a JSON object holding the lumping map plus either an
explicit edge list or a +/0 pattern grid. The bundled fixtures under data/
use the pattern form; their names double as CLI shortcuts.
"""

from __future__ import annotations

import json
from importlib import resources

from .digraph import Digraph
from .lumping import LumpingMap

BUNDLED_NAMES = ("ex1", "ex2", "exlc", "ex6") + tuple(
    f"grid-{i:02d}" for i in range(1, 13)
)


def _decode_lumping(doc: dict, n: int) -> LumpingMap:
    lumping = doc.get("lumping")
    if not isinstance(lumping, list) or not all(isinstance(c, int) for c in lumping):
        raise ValueError("'lumping' must be a list of class indices")
    if len(lumping) != n:
        raise ValueError(f"lumping covers {len(lumping)} states, graph has {n}")
    if any(c < 0 for c in lumping):
        raise ValueError("class indices must be non-negative")
    return LumpingMap(tuple(lumping), max(lumping) + 1)


def decode_document(doc: dict) -> tuple[Digraph, LumpingMap]:
    if not isinstance(doc, dict):
        raise ValueError("family document must be a JSON object")
    has_pattern = "pattern" in doc
    has_edges = "edges" in doc
    if has_pattern == has_edges:
        raise ValueError("document needs exactly one of 'pattern' or 'edges'")

    if has_pattern:
        pattern = doc["pattern"]
        if not isinstance(pattern, list) or not pattern:
            raise ValueError("'pattern' must be a non-empty list of rows")
        n = len(pattern)
        edges = set()
        for y, row in enumerate(pattern):
            if not isinstance(row, str) or len(row) != n:
                raise ValueError(f"pattern row {y} must be a string of length {n}")
            for yp, ch in enumerate(row):
                if ch == "+":
                    edges.add((y, yp))
                elif ch != "0":
                    raise ValueError(f"pattern row {y} has {ch!r}; use '+' or '0'")
        return Digraph(n, frozenset(edges)), _decode_lumping(doc, n)

    n = doc.get("num_states")
    if not isinstance(n, int) or n < 1:
        raise ValueError("edge-list documents need a positive 'num_states'")
    raw = doc["edges"]
    if not isinstance(raw, list):
        raise ValueError("'edges' must be a list of [y, y'] pairs")
    edges = set()
    for e in raw:
        if (
            not isinstance(e, (list, tuple))
            or len(e) != 2
            or not all(isinstance(v, int) for v in e)
        ):
            raise ValueError(f"bad edge entry {e!r}; expected [y, y']")
        edges.add((e[0], e[1]))
    return Digraph(n, frozenset(edges)), _decode_lumping(doc, n)


def encode_document(g: Digraph, k: LumpingMap) -> dict:
    """Pattern-form document; decode_document(encode_document(g, k)) == (g, k)."""
    rows = [
        "".join("+" if (y, yp) in g.edges else "0" for yp in range(g.n))
        for y in range(g.n)
    ]
    return {"lumping": list(k.kappa), "pattern": rows}


def bundled_family(name: str) -> tuple[Digraph, LumpingMap]:
    key = name.strip().lower()
    if key not in BUNDLED_NAMES:
        raise ValueError(f"no bundled family named {name!r}")
    text = resources.files("lumpex").joinpath("data", f"{key}.json").read_text("utf-8")
    return decode_document(json.loads(text))
