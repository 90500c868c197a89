"""``diagcut`` command line.

Exit status: 0 success or verified, 1 not found or not verified, 2 bad
input.  Every numeric run option can also be set through a ``DIAGCUT_``
environment variable (``DIAGCUT_SEED=7``); flags win over the environment.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import RunConfig
from .cutting import dumps, loads, search_cut_proof, verify
from .cutting.search import CUT_FAMILIES
from .diagram import parse_diagram, triangle
from .errors import DiagcutError
from .homogeneous import dumps_records, hh_campaign, summary_table
from .interp import LinearSystem, exact_dimension, generic_dimension, parse_mults, random_rational_points
from .render import render_ascii, render_certificate_ascii, render_certificate_svg, render_svg

OK, NOT_FOUND, BAD_INPUT = 0, 1, 2


def _run_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field-prime", type=int, dest="prime", help="prime modulus for rank checks")
    p.add_argument("--trials", type=int, help="random specializations per rank check")
    p.add_argument("--seed", type=int, help="seed for random points")
    p.add_argument("--depth", type=int, help="maximum number of nested cuts")
    p.add_argument("--jobs", type=int, help="worker processes for the campaign")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", type=Path, help="write the main artifact here")
    return p


def _system_options(p: argparse.ArgumentParser) -> None:
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--d", type=int, help="use the full triangle of degree d")
    where.add_argument("--diagram", help="diagram as columns a^u,... or a point list")
    p.add_argument("--mults", required=True, help="multiplicities, e.g. 7x6,6x4,1")


def build_parser() -> argparse.ArgumentParser:
    common = _run_options()
    parser = argparse.ArgumentParser(prog="diagcut", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[common], help="dimension of a linear system")
    _system_options(p)
    p.add_argument("--exact", action="store_true", help="also evaluate at random rational points")

    p = sub.add_parser("prove", parents=[common], help="search for a cut certificate")
    _system_options(p)
    p.add_argument(
        "--cut-family",
        choices=("auto", *CUT_FAMILIES),
        default="auto",
        help="candidate cut slopes; auto tries standard then extended",
    )

    p = sub.add_parser("verify", parents=[common], help="check a certificate file")
    p.add_argument("certificate", type=Path)

    p = sub.add_parser("hh", parents=[common], help="homogeneous speciality campaign")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--d-max", type=int, required=True)

    p = sub.add_parser("render", parents=[common], help="draw a diagram or certificate")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--diagram")
    src.add_argument("--certificate", type=Path)
    p.add_argument("--svg", action="store_true", help="SVG instead of ASCII")
    return parser


def make_config(args, environ=None) -> RunConfig:
    config = RunConfig().with_env(environ)
    updates = {
        name: getattr(args, name)
        for name in ("prime", "trials", "seed", "depth", "jobs")
        if getattr(args, name, None) is not None
    }
    return replace(config, **updates) if updates else config


def _system(args) -> LinearSystem:
    diagram = triangle(args.d) if args.d is not None else parse_diagram(args.diagram)
    return LinearSystem(diagram, parse_mults(args.mults))


def _emit(args, text: str) -> None:
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)


def cmd_dim(args, config: RunConfig) -> int:
    system = _system(args)
    res = generic_dimension(system, config.trials, config.seed, config.prime)
    exact = None
    if args.exact:
        import random

        pts = random_rational_points(len(system.mults), random.Random(config.seed))
        exact = exact_dimension(system, pts, config.exact_cap)
    if args.format == "json":
        obj = res.to_json()
        if exact is not None:
            obj["exact"] = exact.value
        _emit(args, json.dumps(obj, sort_keys=True) + "\n")
        return OK
    lines = [
        f"system:    {system.describe()}",
        f"dim:       {res.value}",
        f"certainty: {res.certainty}",
        f"vdim:      {res.vdim}",
        f"edim:      {res.edim}",
        f"seed:      {res.seed}",
    ]
    if res.error_bound is not None:
        lines.append(f"error:     <= {res.error_bound:.3g}")
    if exact is not None:
        lines.append(f"exact:     {exact.value}")
    _emit(args, "\n".join(lines) + "\n")
    return OK


def cmd_prove(args, config: RunConfig) -> int:
    system = _system(args)
    families = ("standard", "extended") if args.cut_family == "auto" else (args.cut_family,)
    cert = None
    for family in families:
        cert = search_cut_proof(system, config.depth, family, config)
        if cert is not None:
            break
    if cert is None:
        print(f"no certificate for {system.describe()} within depth {config.depth}", file=sys.stderr)
        return NOT_FOUND
    _emit(args, dumps(cert, indent=1) + "\n")
    return OK


def cmd_verify(args, config: RunConfig) -> int:
    cert = loads(args.certificate.read_text())
    report = verify(cert, config)
    if args.format == "json":
        text = json.dumps(
            {
                "verified": report.verified,
                "system": report.system.to_json(),
                "nodes": report.node_count,
                "leaves": dict(sorted(report.leaves.items())),
                "failure_path": list(report.failure_path),
                "failure_reason": report.failure_reason,
                "detail": report.detail,
            },
            sort_keys=True,
        )
    else:
        text = report.conclusion()
    print(text)
    return OK if report.verified else NOT_FOUND


def cmd_hh(args, config: RunConfig) -> int:
    records = hh_campaign(args.m_max, args.d_max, config)
    if args.out is not None:
        args.out.write_text(dumps_records(records))
    if args.format == "json" and args.out is None:
        sys.stdout.write(dumps_records(records))
    else:
        print(summary_table(records))
    return NOT_FOUND if any(r.discrepancy for r in records) else OK


def cmd_render(args, config: RunConfig) -> int:
    if args.certificate is not None:
        cert = loads(args.certificate.read_text())
        text = render_certificate_svg(cert) if args.svg else render_certificate_ascii(cert)
    else:
        d = parse_diagram(args.diagram)
        text = render_svg(d) if args.svg else render_ascii(d)
    _emit(args, text)
    return OK


COMMANDS = {"dim": cmd_dim, "prove": cmd_prove, "verify": cmd_verify, "hh": cmd_hh, "render": cmd_render}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = make_config(args)
        return COMMANDS[args.command](args, config)
    except (DiagcutError, ValueError, OSError) as exc:
        print(f"diagcut: error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
