"""``gig`` command line.

Exit codes: 0 success, 1 verification mismatch, 2 input error,
3 closed form used outside its grid-size domain, 4 resource cap.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import factorial
from pathlib import Path

from . import exact, oracle
from .digraph import Labeling, build_gig, components, sinks
from .errors import DomainError, GigError, InputError, ResourceCapError
from .lattice import GridDims, LatticePath, parse_coords, parse_dims
from .montecarlo import SimulationConfig, simulate
from .verify import run_checks

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_DOMAIN, EXIT_CAP = 0, 1, 2, 3, 4


def json_rational(q: Fraction) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def read_rational(obj: dict) -> Fraction:
    den = int(obj["den"])
    if den == 0:
        raise InputError("rational with zero denominator")
    return Fraction(int(obj["num"]), den)


def _coord_json(c) -> list[int]:
    return [c[0], c[1]]


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# --- labeling files ----------------------------------------------------------


def parse_labeling_text(text: str) -> Labeling:
    """Parse a comma-separated grid (row 1 first) or a ``build --format json`` document."""
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
            return Labeling.from_rows(doc["labels"])
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"malformed JSON labeling: {exc}") from None
    rows = []
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            raise InputError(f"line {lineno}: blank line inside the grid")
        row = []
        for colno, token in enumerate(line.split(","), start=1):
            try:
                row.append(int(token.strip()))
            except ValueError:
                raise InputError(
                    f"line {lineno}, column {colno}: {token.strip()!r} is not an integer"
                ) from None
        if rows and len(row) != len(rows[0]):
            raise InputError(
                f"line {lineno}: {len(row)} values, expected {len(rows[0])} like line 1"
            )
        rows.append(row)
    if not rows:
        raise InputError("labeling file is empty")
    return Labeling.from_rows(rows)


def read_labeling(path: str) -> Labeling:
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_labeling_text(text)


def to_dot(lab: Labeling) -> str:
    g = build_gig(lab)
    sink_set = sinks(g)
    lines = ["digraph GIG {", "  node [shape=circle];"]
    for c in lab.dims.cells():
        attrs = f'label="{lab.label(c)}", pos="{c.col - 1},{lab.dims.m - c.row}!"'
        if c in sink_set:
            attrs += ", shape=doublecircle, sink=true"
        lines.append(f'  "{c}" [{attrs}];')
    for u, v in g.edges():
        lines.append(f'  "{u}" -> "{v}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(lab: Labeling) -> dict:
    g = build_gig(lab)
    return {
        "dims": [lab.dims.m, lab.dims.n],
        "labels": lab.rows(),
        "edges": [
            {"from": _coord_json(u), "to": _coord_json(v),
             "from_label": lab.label(u), "to_label": lab.label(v)}
            for u, v in sorted(g.edges())
        ],
        "sinks": [_coord_json(c) for c in sorted(sinks(g))],
        "components": [
            {"sink": _coord_json(comp.sink), "size": comp.size}
            for comp in components(g)
        ],
    }


# --- events --------------------------------------------------------------------


def parse_event(spec: str) -> oracle.Event:
    """``path:r,c r,c ...``, ``sinks:r,c ...`` or ``connect:r,c r,c``."""
    kind, sep, body = spec.partition(":")
    if not sep:
        raise InputError(f"event {spec!r} must look like kind:coordinates")
    coords = parse_coords(body)
    kind = kind.strip().lower()
    if kind == "path":
        return oracle.PathEvent(coords)
    if kind == "sinks":
        return oracle.SinksEvent(coords)
    if kind == "connect":
        if len(coords) != 2:
            raise InputError("connect events take exactly two coordinates")
        return oracle.ConnectedEvent(*coords)
    raise InputError(f"unknown event kind {kind!r} (expected path, sinks or connect)")


def _check_event(ev: oracle.Event, dims: GridDims) -> None:
    for c in getattr(ev, "vertices", ()) or getattr(ev, "path", ()):
        dims.require(c)
    for c in (getattr(ev, "source", None), getattr(ev, "target", None)):
        if c is not None:
            dims.require(c)


# --- subcommands ---------------------------------------------------------------


def cmd_build(args) -> int:
    lab = read_labeling(args.labels)
    if args.format == "dot":
        sys.stdout.write(to_dot(lab))
    else:
        _emit(to_json(lab))
    return EXIT_OK


def cmd_path_prob(args) -> int:
    dims = parse_dims(args.dims)
    path = LatticePath(parse_coords(args.path))
    _emit(json_rational(exact.path_probability(path, dims)))
    return EXIT_OK


def cmd_sinks(args) -> int:
    dims = parse_dims(args.dims)
    if args.moments:
        out = {"dims": [dims.m, dims.n], "expected": json_rational(exact.expected_sinks(dims))}
        out["variance_by_pairs"] = json_rational(exact.variance_sinks_by_pairs(dims))
        try:
            out["variance_closed"] = json_rational(exact.variance_sinks_closed(dims))
        except DomainError:
            out["variance_closed"] = {"domain": "requires m,n >= 6"}
        _emit(out)
        return EXIT_OK
    verts = parse_coords(args.vertices)
    for v in verts:
        dims.require(v)
    out = {
        "dims": [dims.m, dims.n],
        "vertices": [_coord_json(v) for v in verts],
        "probability": json_rational(exact.multi_sink_probability(verts, dims)),
    }
    adjacent = [
        (a, b) for i, a in enumerate(verts) for b in verts[i + 1:]
        if abs(a.row - b.row) + abs(a.col - b.col) == 1
    ]
    if adjacent:
        a, b = adjacent[0]
        out["warning"] = f"{a} and {b} are lattice neighbours and cannot both be sinks"
    _emit(out)
    return EXIT_OK


def cmd_bounds(args) -> int:
    dims = parse_dims(args.dims)
    out: dict = {"dims": [dims.m, dims.n],
                 "component_size_bound": json_rational(exact.component_size_bound(dims))}
    if args.connect:
        coords = parse_coords(args.connect)
        if len(coords) != 2:
            raise InputError("--connect takes exactly two coordinates")
        cb = exact.connectivity_lower_bound(coords[0], coords[1], dims, cap=args.path_cap)
        out["connectivity"] = {
            "from": _coord_json(coords[0]),
            "to": _coord_json(coords[1]),
            "shortest_length": cb.shortest_length,
            "path_count": cb.path_count,
            "min_path_prob": json_rational(cb.min_path_prob),
            "count_times_min": json_rational(cb.count_times_min),
            "sum_over_paths": json_rational(cb.sum_over_paths),
        }
    if args.series_eps is not None:
        try:
            eps = Fraction(args.series_eps)
        except ValueError:
            raise InputError(f"--series-eps must be a number, got {args.series_eps!r}") from None
        sb = exact.series_bound(eps)
        out["series"] = {
            "eps": json_rational(eps),
            "truncated_value": json_rational(sb.truncated_value),
            "tail_bound": json_rational(sb.tail_bound),
            "certified_upper": json_rational(sb.certified_upper),
            "certified_upper_float": float(sb.certified_upper),
            "terms_used": sb.terms_used,
            "inner_terms": sb.inner_terms,
        }
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    dims = parse_dims(args.dims)
    report = run_checks(dims)
    if args.json:
        _emit(report.to_dict())
    else:
        sys.stdout.write(report.render())
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_enumerate(args) -> int:
    dims = parse_dims(args.dims)
    events = [parse_event(e) for e in args.events or []]
    for ev in events:
        _check_event(ev, dims)
    st = oracle.exact_statistics(dims)
    out = {
        "dims": [dims.m, dims.n],
        "labelings": str(factorial(dims.size)),
        "expected_sinks": json_rational(st.expected_sinks),
        "variance_sinks": json_rational(st.variance_sinks),
        "sink_count_pmf": {str(k): json_rational(p) for k, p in sorted(st.sink_count_pmf.items())},
        "expected_max_component": json_rational(st.expected_max_component),
        "expected_component_size_per_sink": json_rational(st.expected_component_size_per_sink),
        "conditional_component_size": {
            str(c): json_rational(q) for c, q in st.conditional_component_size.items()
        },
        "events": {},
    }
    for ev in events:
        res = oracle.enumerate_event(dims, ev)
        out["events"][ev.name] = {
            "favorable": str(res.favorable),
            "total": str(res.total),
            "probability": json_rational(res.probability),
        }
    _emit(out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    dims = parse_dims(args.dims)
    events = [parse_event(e) for e in args.events or []]
    for ev in events:
        _check_event(ev, dims)
    cfg = SimulationConfig(dims, args.trials, args.seed, args.shards)
    _emit(simulate(cfg, events).to_dict())
    return EXIT_OK


# --- entry point -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gig",
        description="Exact probabilities, enumeration and simulation for GIG digraphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="render the digraph of a labeling file")
    p.add_argument("--labels", required=True, metavar="FILE",
                   help="comma-separated rows (row 1 on top) or a JSON export")
    p.add_argument("--format", choices=("dot", "json"), default="json")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("path-prob", help="exact probability that a directed path occurs")
    p.add_argument("--dims", required=True, metavar="MxN")
    p.add_argument("--path", required=True, help='e.g. "2,1 2,2 1,2"')
    p.set_defaults(func=cmd_path_prob)

    p = sub.add_parser("sinks", help="joint sink probability or sink-count moments")
    p.add_argument("--dims", required=True, metavar="MxN")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--vertices", help='e.g. "1,1 3,3"')
    group.add_argument("--moments", action="store_true")
    p.set_defaults(func=cmd_sinks)

    p = sub.add_parser("bounds", help="connectivity and component-size bounds")
    p.add_argument("--dims", required=True, metavar="MxN")
    p.add_argument("--connect", metavar='"r,c r,c"')
    p.add_argument("--series-eps", metavar="E")
    p.add_argument("--path-cap", type=int, default=exact.DEFAULT_PATH_CAP)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="check every closed form against full enumeration")
    p.add_argument("--dims", required=True, metavar="MxN")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="exact statistics over all labelings")
    p.add_argument("--dims", required=True, metavar="MxN")
    p.add_argument("--events", action="append", metavar="KIND:COORDS",
                   help="path:..., sinks:... or connect:a b (repeatable)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("simulate", help="seeded Monte Carlo estimates")
    p.add_argument("--dims", required=True, metavar="MxN")
    p.add_argument("--trials", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--events", action="append", metavar="KIND:COORDS",
                   help="path:..., sinks:... or connect:a b (repeatable)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"gig: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"gig: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ResourceCapError as exc:
        print(f"gig: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except GigError as exc:
        print(f"gig: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
