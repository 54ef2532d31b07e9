"""Command line front end.

Every subcommand reads a cone (and possibly a Poisson structure) from JSON,
calls into the library and prints a JSON report.  Exit status is 0 on
success, 1 on a domain error (with ``{"error": ...}`` on stdout) and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import closedform, hodge, poisson, quantize
from .hilbert import _surface_parameters, generators, hilbert_basis
from .toric import Cone, ConeError


class DomainError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"malformed JSON in {path}: {exc.msg} at line {exc.lineno} column {exc.colno}") from exc


def _load_cone(path: str) -> Cone:
    data = _read_json(path)
    try:
        return Cone.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"cone JSON needs 'lattice_rank' and 'rays': {exc}") from exc


def _load_poisson(path: str) -> poisson.PoissonStructure:
    try:
        return poisson.PoissonStructure.from_dict(_read_json(path))
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise DomainError(f"invalid Poisson JSON: {exc}") from exc


def _parse_degree(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"degree must be comma separated integers, got {text!r}")


def _parse_box(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        lo, sep, hi = part.partition("..")
        if not sep:
            raise argparse.ArgumentTypeError(f"box ranges look like lo..hi, got {part!r}")
        try:
            out.append((int(lo), int(hi)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"box bounds must be integers, got {part!r}")
    return out


def _pad(cone: Cone, R: Sequence[int]) -> tuple[int, ...]:
    if len(R) == cone.n and cone.torus_rank:
        R = tuple(R) + (0,) * cone.torus_rank
    if len(R) != cone.ambient_rank:
        raise DomainError(f"degree has {len(R)} entries, lattice rank is {cone.ambient_rank}")
    return tuple(R)


def _degrees(cone: Cone, args) -> list[tuple[int, ...]]:
    if args.degree_box is not None:
        box = args.degree_box
        if len(box) != cone.n:
            raise DomainError(f"degree box has {len(box)} ranges, cone dimension is {cone.n}")
        return [_pad(cone, R) for R in hodge.box(box)]
    try:
        return [_pad(cone, R) for R in hodge.candidate_degrees(cone)]
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def _rat(x: Fraction) -> str:
    return str(x)


# -- subcommands -------------------------------------------------------------------


def cmd_analyze(args) -> dict:
    cone = _load_cone(args.cone)
    gd = cone.gorenstein_data
    dm = quantize.degree_map(cone)
    out = {
        "cone": cone.to_dict(),
        "dual_rays": [list(u) for u in cone.dual_rays],
        "face_counts": {str(p): len(cone.faces(p)) for p in range(cone.n + 1)},
        "smooth_codimension": cone.smooth_codimension,
        "q_gorenstein": gd is not None,
        "canonical_degree": list(gd.canonical_degree) if gd else None,
        "gorenstein_index": gd.gor_index if gd else None,
        "class_group": dm.class_group,
    }
    if cone.n <= 4:
        out["hilbert_basis_size"] = len(hilbert_basis(cone))
    return out


def cmd_hilbert(args) -> dict:
    cone = _load_cone(args.cone)
    return {"hilbert_basis": [list(e) for e in hilbert_basis(cone)]}


def _t_dims_or_error(cone, R, k, indices=None):
    try:
        return hodge.t_dims(cone, None, R, k, indices)
    except hodge.TheoremRangeError as exc:
        raise DomainError(str(exc)) from exc


def cmd_t1(args) -> dict:
    cone = _load_cone(args.cone)
    R = _pad(cone, args.degree)
    indices = [args.hodge_index] if args.hodge_index else None
    deg = hodge.Degree(R, args.sense)
    dims = _t_dims_or_error(cone, deg, args.k, indices)
    return {"degree": list(R), "sense": args.sense, "k": args.k, "dims": dims.to_json()}


def cmd_scan(args) -> dict:
    cone = _load_cone(args.cone)
    degrees = _degrees(cone, args)
    if args.k > cone.smooth_codimension:
        raise DomainError(f"k={args.k} beyond smooth codimension {cone.smooth_codimension}; theorem inapplicable")
    table = hodge.scan_degrees(cone, None, [hodge.Degree(R, args.sense) for R in degrees], args.k)
    return {"table": [{"degree": list(d.R), "dims": v.to_json()} for d, v in table]}


def _oracle(cone: Cone):
    nq = _surface_parameters(cone)
    if nq is not None:
        return "surface", lambda R, i: closedform.surface_t1(nq[0], nq[1], R, i)
    if cone.n == 3 and cone.torus_rank == 0:
        try:
            closedform.ray_cycle(cone)
            if cone.smooth_codimension >= 2:
                return "threefold", lambda R, i: closedform.threefold_t1(cone, R, i)
        except ValueError:
            pass
    return "planar", lambda R, i: closedform.planar_t1(cone, None, R, i)


def cmd_oracle_compare(args) -> dict:
    cone = _load_cone(args.cone)
    degrees = _degrees(cone, args)
    name, fn = _oracle(cone)
    rows = []
    indices = range(1, cone.ambient_rank + 1)
    for R in degrees:
        exact = _t_dims_or_error(cone, R, 1)
        row = {"degree": list(R), "hodge": exact.to_json()}
        try:
            closed = {str(i): fn(R, i) for i in indices}
            row["closedform"] = closed
            row["equal"] = closed == exact.to_json()
        except ValueError as exc:
            b = {str(i): closedform.t1_bounds(cone, None, R, i) for i in indices}
            row["bounds"] = {i: {"lower": v.lower, "upper": v.upper, "raw_lower": v.raw_lower, "raw_upper": v.raw_upper} for i, v in b.items()}
            row["equal"] = None
            row["note"] = str(exc)
        rows.append(row)
    return {"oracle": name, "rows": rows, "all_equal": all(r["equal"] is not False for r in rows)}


def cmd_poisson_check(args) -> dict:
    cone = _load_cone(args.cone)
    p = _load_poisson(args.poisson)
    wd = poisson.well_defined_check(p, cone)
    rep = poisson.jacobi_check(p, cone, None, extra_samples=args.samples, seed=args.seed)
    return {"well_defined": wd, "jacobi": rep.to_dict(), "seed": args.seed}


def cmd_quantize(args) -> dict:
    cone = _load_cone(args.cone)
    p = _load_poisson(args.poisson)
    if any(any(R) for R, _ in p.components):
        raise DomainError("only degree-0 Poisson structures are quantized; supply an MC element for other degrees")
    if not poisson.well_defined_check(p, cone):
        raise DomainError("Poisson structure is not well defined on this cone")
    lifted = quantize.lift_poisson(p, cone, None, samples=args.samples, seed=args.seed)
    F = lifted.components[0][1]
    for _, extra in lifted.components[1:]:
        F = quantize.Matrix([[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(F.data, extra.data)], F.cols)
    S = quantize.reduce_star(quantize.moyal_star(F, args.order), cone)
    gens = generators(cone, hilbert_basis(cone))
    pairs = [(a, b) for a in gens for b in gens]
    report = quantize.mc_check(S, cone, None, args.order, samples=args.samples, seed=args.seed)
    return {
        "lift_frame": lifted.to_dict(),
        "F": [[_rat(x) for x in row] for row in F.data],
        "star_samples": quantize.star_samples(S, pairs),
        "mc_report": report.to_dict(),
        "seed": args.seed,
    }


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torichodge", description="Hodge pieces of T^1 for affine toric varieties.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, degree=False, box=False, seeded=False):
        sp.add_argument("--cone", required=True, help="cone JSON file")
        sp.add_argument("--output", help="write the JSON report here instead of stdout")
        if degree:
            sp.add_argument("--degree", required=True, type=_parse_degree, help="comma separated, e.g. 2,2 (use --degree=-1,2 for negatives)")
        if box:
            sp.add_argument("--degree-box", type=_parse_box, help="lo..hi per coordinate, e.g. -3..3,-3..3")
        if seeded:
            sp.add_argument("--samples", type=int, default=1000, help="random samples")
            sp.add_argument("--seed", type=int, default=0, help="random seed")

    sp = sub.add_parser("analyze", help="cone summary")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("hilbert", help="Hilbert basis")
    common(sp)
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("t1", help="dimensions at one degree")
    common(sp, degree=True)
    sp.add_argument("--hodge-index", type=int, help="only this Hodge index i")
    sp.add_argument("--k", type=int, default=1, help="cohomological position (default 1)")
    sp.add_argument("--sense", choices=[hodge.MINUS, hodge.PLUS], default=hodge.MINUS)
    sp.set_defaults(func=cmd_t1)

    sp = sub.add_parser("scan", help="nonzero dimensions over a degree box")
    common(sp, box=True)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--sense", choices=[hodge.MINUS, hodge.PLUS], default=hodge.MINUS)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("oracle-compare", help="closed formulas against exact ranks")
    common(sp, box=True)
    sp.set_defaults(func=cmd_oracle_compare)

    sp = sub.add_parser("poisson-check", help="well-definedness and Jacobi identity")
    common(sp, seeded=True)
    sp.add_argument("--poisson", required=True, help="Poisson JSON file")
    sp.set_defaults(func=cmd_poisson_check)

    sp = sub.add_parser("quantize", help="lift, quantize and verify a degree-0 structure")
    common(sp, seeded=True)
    sp.add_argument("--poisson", required=True, help="Poisson JSON file")
    sp.add_argument("--order", type=int, default=4, help="truncation order K")
    sp.set_defaults(func=cmd_quantize)
    return parser


def _emit(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = args.func(args)
    except (DomainError, ConeError, ValueError) as exc:
        _emit({"error": str(exc)}, None)
        return 1
    _emit(payload, args.output)
    return 0


def main() -> None:
    sys.exit(run())
