"""Command line front end.

    crackfgm run <config>
    crackfgm case <config> [--n N] [--ca C] [--psi DEG] [--tc TC] [--tm TM] ...
    crackfgm modeshape <config> --case-id K --mode M [--res R]

Exit status is 0 when every case succeeds, 2 when some cases failed and 1 on
configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .studies import (
    ConfigError,
    export_mode_shape,
    override_case,
    parse_config,
    run_case,
    run_study,
    write_outputs,
)


def _finish(config, rows) -> int:
    results, table = write_outputs(config, rows)
    failed = sum(1 for r in rows if r.error)
    print(f"wrote {results} and {table} ({len(rows)} rows, {failed} failed cases)")
    return 2 if failed else 0


def cmd_run(args) -> int:
    config = parse_config(args.config)
    if args.out:
        config.output_dir = args.out
    return _finish(config, run_study(config))


def cmd_case(args) -> int:
    config = parse_config(args.config)
    if args.out:
        config.output_dir = args.out
    config = override_case(
        config, n=args.n, ca=args.ca, psi=args.psi, tc=args.tc, tm=args.tm,
        a_b=args.a_b, a_h=args.a_h, bc=args.bc.upper() if args.bc else None,
    )
    if args.modes:
        config.n_modes = args.modes
    return _finish(config, run_study(config))


def cmd_modeshape(args) -> int:
    config = parse_config(args.config)
    if args.out:
        config.output_dir = args.out
    cases = config.cases()
    if not 0 <= args.case_id < len(cases):
        print(f"case id {args.case_id} out of range 0..{len(cases) - 1}", file=sys.stderr)
        return 1
    config.n_modes = max(config.n_modes, args.mode)
    analysis = run_case(config, cases[args.case_id])
    os.makedirs(config.output_dir, exist_ok=True)
    path = os.path.join(config.output_dir, f"mode_{args.case_id}_{args.mode}.txt")
    export_mode_shape(analysis, args.mode, args.res, path)
    if args.mesh:
        analysis.mesh.dump(os.path.join(config.output_dir, f"mesh_{args.case_id}.txt"))
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crackfgm", description="Free vibration of cracked FGM plates")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the full sweep of a configuration")
    p.add_argument("config")
    p.add_argument("--out", help="override output.dir")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("case", help="run one case with overridden parameters")
    p.add_argument("config")
    p.add_argument("--n", type=float, help="gradient index")
    p.add_argument("--ca", type=float, help="crack ratio c/a")
    p.add_argument("--psi", type=float, help="skew angle (deg)")
    p.add_argument("--tc", type=float, help="ceramic surface temperature (K)")
    p.add_argument("--tm", type=float, help="metal surface temperature (K)")
    p.add_argument("--a-b", dest="a_b", type=float)
    p.add_argument("--a-h", dest="a_h", type=float)
    p.add_argument("--bc", choices=["SSSS", "CCCC", "ssss", "cccc"])
    p.add_argument("--modes", type=int)
    p.add_argument("--out", help="override output.dir")
    p.set_defaults(func=cmd_case)

    p = sub.add_parser("modeshape", help="export one mode shape as an x y w grid")
    p.add_argument("config")
    p.add_argument("--case-id", type=int, required=True)
    p.add_argument("--mode", type=int, required=True, help="1-based mode index")
    p.add_argument("--res", type=int, default=41, help="grid points per side")
    p.add_argument("--mesh", action="store_true", help="also dump the mesh")
    p.add_argument("--out", help="override output.dir")
    p.set_defaults(func=cmd_modeshape)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
