"""Command line front end: family documents in, verdicts and certificates out.

Exit status contract: 0 on success, 1 on malformed input, 2 when the family
is vacuous. Reports are JSON (--json) or a human table echoing the pattern
grid with class-block separators.
"""

from __future__ import annotations

import argparse
import json
import os
import pathlib
import sys
import time

from .census import enumerate_families
from .criteria import chain, chain_length, decide, is_degenerate
from .digraph import Digraph
from .dimension import DimensionReport, cone_basis, dimensional_criterion, n_basis
from .families import BUNDLED_NAMES, bundled_family, decode_document, encode_document
from .lumping import (
    LumpingMap,
    VacuousFamilyError,
    block_profile,
    lumped_graph,
)
from .witness import DEFAULT_BUDGET, DEFAULT_SEED, DEFAULT_TOL, search_witness, verify_witness

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VACUOUS = 2
SEED_ENV_VAR = "LUMPEX_SEED"


def parse_family(text: str):
    """JSON document, or the plain-text shorthand: '#' starts a comment, the
    first payload line lists the class of every state, each following line is
    one +/0 pattern row."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return decode_document(json.loads(text))
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty family document")
    try:
        lumping = [int(tok) for tok in lines[0].replace(",", " ").split()]
    except ValueError:
        raise ValueError(
            f"first line must list the class of every state, got {lines[0]!r}"
        ) from None
    rows = [line.replace(" ", "") for line in lines[1:]]
    return decode_document({"lumping": lumping, "pattern": rows})


def _load_family(ref: str):
    path = pathlib.Path(ref)
    if path.is_file():
        return parse_family(path.read_text("utf-8"))
    if ref.strip().lower() in BUNDLED_NAMES:
        return bundled_family(ref)
    raise ValueError(f"{ref!r} is neither a readable file nor a bundled family name")


def _jsonable(value):
    if isinstance(value, DimensionReport):
        return value.as_dict()
    if isinstance(value, dict):
        return {str(key): _jsonable(v) for key, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [_jsonable(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, float):
        return float(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    return str(value)


def _class_letter(x: int) -> str:
    return chr(ord("a") + x) if x < 26 else f"c{x}"


def _blocks_summary(g, k):
    prof = block_profile(g, k)
    lumped = lumped_graph(g, k).lumped_graph
    return {
        "lumped_edges": [list(e) for e in lumped.sorted_edges()],
        "U": [list(b) for b in sorted(prof.U)],
        "R": [list(e) for e in sorted(prof.R)],
        "multi_row_merging": [list(b) for b in prof.multi_row_merging],
        "counts": {
            "D": len(lumped.edges),
            "U": len(prof.U),
            "R": len(prof.R),
        },
    }


def _base_report(ref: str, g, k) -> dict:
    family = encode_document(g, k)
    family["source"] = ref
    family["num_states"] = g.n
    family["num_classes"] = k.num_classes
    return {"schema_version": SCHEMA_VERSION, "family": family}


def _emit(report: dict, args, human) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


def format_grid(g: Digraph, k: LumpingMap) -> list[str]:
    """Pattern grid with states grouped by class, pipes between column blocks
    and dashes between row blocks."""
    order = sorted(range(g.n), key=lambda y: (k.kappa[y], y))
    groups = []
    for y in order:
        x = k.kappa[y]
        if groups and groups[-1][0] == x:
            groups[-1][1].append(y)
        else:
            groups.append((x, [y]))
    width = max(len(str(y)) for y in order)
    left = width + 2  # "0 a"

    def row_cells(y):
        parts = []
        for _, members in groups:
            parts.append(
                " ".join(
                    ("+" if (y, yp) in g.edges else "0").rjust(width)
                    for yp in members
                )
            )
        return " | ".join(parts)

    header = " | ".join(
        " ".join(str(yp).rjust(width) for yp in members) for _, members in groups
    )
    lines = [" " * left + "   " + header]
    dash = "-" * (left + 3 + len(header))
    lines.append(dash)
    for i, (x, members) in enumerate(groups):
        if i:
            lines.append(dash)
        for y in members:
            label = f"{str(y).rjust(width)} {_class_letter(x)}"
            lines.append(f"{label}   {row_cells(y)}")
    return lines


def _family_header(ref: str, g, k) -> list[str]:
    members = k.class_members()
    classes = ", ".join(
        f"{_class_letter(x)} = {{{', '.join(str(y) for y in m)}}}"
        for x, m in enumerate(members)
    )
    return [
        f"family {ref}: {g.n} states, {k.num_classes} classes ({classes})",
        "",
        *format_grid(g, k),
        "",
    ]


def _block_name(b) -> str:
    return f"({_class_letter(b[0])},{_class_letter(b[1])})"


def _cmd_check(args) -> None:
    g, k = _load_family(args.family)
    t0 = time.perf_counter()
    verdict = decide(g, k, budget=args.budget)
    dims = None
    blocks = None
    if not is_degenerate(k):
        dims = dimensional_criterion(g, k)
        blocks = _blocks_summary(g, k)
    elapsed = time.perf_counter() - t0

    report = _base_report(args.family, g, k)
    report.update(
        verdict=verdict.decision,
        rule=verdict.rule,
        certificate=_jsonable(verdict.certificate),
        dimensions=dims.as_dict() if dims is not None else None,
        blocks=blocks,
        witness=None,
        timing={"seconds": round(elapsed, 6)},
    )

    human = _family_header(args.family, g, k)
    human.append(f"verdict: {verdict.decision}")
    human.append(f"rule: {verdict.rule}")
    if dims is not None:
        human.append(
            f"dimensions: manifold {dims.manifold_dim}, e-hull sum {dims.ehull_sum_dim}, "
            f"target {dims.target}"
        )
    if blocks is not None:
        merging = ", ".join(_block_name(b) for b in blocks["multi_row_merging"]) or "none"
        counts = blocks["counts"]
        human.append(
            f"blocks: |D| = {counts['D']}, |U| = {counts['U']}, |R| = {counts['R']}, "
            f"multi-row merging: {merging}"
        )
    human.append(f"time: {elapsed:.3f} s")
    _emit(report, args, human)


def _cmd_dims(args) -> None:
    g, k = _load_family(args.family)
    dims = dimensional_criterion(g, k)
    report = _base_report(args.family, g, k)
    report["dimensions"] = dims.as_dict()
    human = _family_header(args.family, g, k)
    for key, value in sorted(dims.as_dict().items()):
        human.append(f"{key}: {value}")
    _emit(report, args, human)


def _matrix_lines(rows) -> list[str]:
    return ["  " + " ".join(str(v).rjust(2) for v in row) for row in rows]


def _cmd_basis(args) -> None:
    g, k = _load_family(args.family)
    cone = cone_basis(g, k)
    nb = n_basis(g)
    report = _base_report(args.family, g, k)
    report.update(
        edge_order=[list(e) for e in g.sorted_edges()],
        cone_basis=cone,
        n_basis=nb,
    )
    human = _family_header(args.family, g, k)
    human.append(f"edge order: {g.sorted_edges()}")
    human.append(f"cone basis ({len(cone)} vectors):")
    human.extend(_matrix_lines(cone))
    human.append(f"translation-kernel basis ({len(nb)} vectors):")
    human.extend(_matrix_lines(nb))
    _emit(report, args, human)


def _witness_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _cmd_witness(args) -> None:
    g, k = _load_family(args.family)
    seed = _witness_seed(args)
    t0 = time.perf_counter()
    found = search_witness(g, k, budget=args.budget, tol=args.tol, seed=seed)
    elapsed = time.perf_counter() - t0

    report = _base_report(args.family, g, k)
    human = _family_header(args.family, g, k)
    if found is None:
        report["witness"] = None
        human.append(f"no witness found (budget {args.budget}, seed {seed})")
    else:
        verified = verify_witness(g, k, found, tol=args.tol)
        report["witness"] = {
            "t": found.t,
            "violation": float(found.violation),
            "verified": verified,
            "p0": [[float(v) for v in row] for row in found.p0],
            "p1": [[float(v) for v in row] for row in found.p1],
        }
        state = "verified" if verified else "FAILED VERIFICATION"
        human.append(
            f"witness found: t = {found.t}, violation {found.violation:.3e} ({state})"
        )
    report["timing"] = {"seconds": round(elapsed, 6)}
    human.append(f"time: {elapsed:.3f} s")
    _emit(report, args, human)


def _parse_sizes(text: str) -> tuple:
    try:
        sizes = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"--sizes wants comma-separated integers, got {text!r}") from None
    if not sizes:
        raise ValueError("--sizes must name at least one class")
    return sizes


def _cmd_census(args) -> None:
    sizes = _parse_sizes(args.sizes)
    t0 = time.perf_counter()
    k, families = enumerate_families(args.states, sizes)
    elapsed = time.perf_counter() - t0
    num_e = sum(1 for f in families if f.verdict.decision == "e-family")
    report = {
        "schema_version": SCHEMA_VERSION,
        "num_states": args.states,
        "class_sizes": sorted(sizes),
        "num_classes": len(families),
        "num_e_families": num_e,
        "classes": [
            {
                "key": f.canonical_key,
                "class_size": f.class_size,
                "decision": f.verdict.decision,
                "rule": f.verdict.rule,
            }
            for f in families
        ],
        "timing": {"seconds": round(elapsed, 6)},
    }
    human = [
        f"census: {args.states} states, class sizes {sorted(sizes)}",
        f"{len(families)} classes, {num_e} e-families",
        "",
        f"{'key':<{args.states * args.states}}  {'size':>4}  {'verdict':<12}  rule",
    ]
    for f in families:
        human.append(
            f"{f.canonical_key}  {f.class_size:>4}  {f.verdict.decision:<12}  {f.verdict.rule}"
        )
    human.append("")
    human.append(f"time: {elapsed:.3f} s")
    _emit(report, args, human)


def _cmd_chain(args) -> None:
    g_small, k_small = _load_family(args.small)
    g_big, k_big = _load_family(args.big)
    if k_small != k_big:
        raise ValueError("the two families must share one lumping map")
    steps = chain(g_small.edges, g_big.edges, k_small)
    length = chain_length(g_small.edges, g_big.edges, k_small)
    report = {
        "schema_version": SCHEMA_VERSION,
        "small": args.small,
        "big": args.big,
        "length": length,
        "steps": [[list(e) for e in sorted(step)] for step in steps],
    }
    human = [f"chain from {args.small} to {args.big}: {length} links"]
    for i in range(1, len(steps)):
        added = sorted(steps[i] - steps[i - 1])
        human.append(f"  link {i}: add {', '.join(str(e) for e in added)}")
    _emit(report, args, human)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lumpex",
        description=(
            "Decide whether the lumpable stochastic matrices over a connection "
            "graph form an exponential family, with certificates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def family_arg(p):
        p.add_argument(
            "family",
            help=f"family file (JSON or pattern text) or one of: {', '.join(BUNDLED_NAMES)}",
        )

    def json_flag(p):
        p.add_argument("--json", action="store_true", help="machine-readable report")

    p = sub.add_parser("check", help="full layered verdict with certificate")
    family_arg(p)
    p.add_argument("--budget", type=int, default=2**16, help="subset budget for the redundancy layer")
    json_flag(p)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("dims", help="dimension counts and the exact-rank criterion")
    family_arg(p)
    json_flag(p)
    p.set_defaults(handler=_cmd_dims)

    p = sub.add_parser("basis", help="integer basis matrices for the span and kernel")
    family_arg(p)
    json_flag(p)
    p.set_defaults(handler=_cmd_basis)

    p = sub.add_parser("witness", help="search for a geodesic-escape witness")
    family_arg(p)
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="violation threshold")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="random pairs to try")
    json_flag(p)
    p.set_defaults(handler=_cmd_witness)

    p = sub.add_parser("census", help="classify every family of a given shape")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--sizes", required=True, help="comma-separated class sizes, e.g. 1,2")
    json_flag(p)
    p.set_defaults(handler=_cmd_census)

    p = sub.add_parser("chain", help="stepwise growth between two nested families")
    p.add_argument("small", help="smaller family (file or bundled name)")
    p.add_argument("big", help="larger family (file or bundled name)")
    json_flag(p)
    p.set_defaults(handler=_cmd_chain)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 2 on usage errors; 2 is reserved for vacuous
        # families here, so usage problems are plain input errors
        return EXIT_OK if not err.code else EXIT_INPUT
    try:
        args.handler(args)
    except VacuousFamilyError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VACUOUS
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def run(command: str, args: list[str]) -> int:
    """Programmatic entry point mirroring the shell interface."""
    return main([command, *args])


def script() -> None:
    sys.exit(main())
