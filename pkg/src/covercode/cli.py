"""Command-line front end.

Every artifact written gets a ``<artifact>.manifest`` text file next to it
holding the command, parameters, seed, tool version, file digests and wall
time.  Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__, bounds
from .codes import (
    CodeError,
    covering_density,
    covering_radius,
    direct_sum,
    load_pcm,
    saturation_level,
)
from .construct import ConstructionConfig, ConstructionError, construction_a, greedy_baseline
from .gf import FieldError
from .lift import LiftError, LiftSpec, lift_qm, verify_family
from .pg import GeometryError, pg_space

log = logging.getLogger("covercode")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    pass


def thread_count() -> int:
    """Value of COVERCODE_THREADS (all cores by default).

    Work is single-threaded, so the value never affects outputs.
    """
    raw = os.environ.get("COVERCODE_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"COVERCODE_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("COVERCODE_THREADS must be positive")
    return n


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(artifact: Path, command: str, params: dict, inputs=(), wall: float = 0.0) -> Path:
    lines = ["%covercode-manifest v1", f"command: {command}", f"version: {__version__}"]
    for k in sorted(params):
        lines.append(f"param.{k}: {params[k]}")
    for p in inputs:
        lines.append(f"input: {Path(p).name} sha256={_digest(Path(p))}")
    lines.append(f"output: {artifact.name} sha256={_digest(artifact)}")
    lines.append(f"wall_time: {wall:.3f}")
    out = artifact.with_name(artifact.name + ".manifest")
    out.write_text("\n".join(lines) + "\n")
    return out


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _params(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in ("func",) and v is not None}


# -- subcommands ----------------------------------------------------------


def cmd_bounds(args) -> int:
    if args.what == "constants":
        if args.R is None:
            raise UsageError("bounds constants needs --R")
        lam = bounds.lambda_min(args.R) if args.lam is None else args.lam
        c = bounds.constants(lam, args.R)
        print(f"R: {args.R}")
        print(f"lambda: {lam!r}")
        print(f"D: {c.D!r}")
        print(f"lambda_min: {c.lambda_min!r}")
        print(f"D_min: {c.D_min!r}")
        print(f"Q: {bounds.q_of_lambda(lam, args.R)}")
        print(f"C: {bounds.c_of_lambda(lam, args.R)!r}")
    elif args.what == "table1":
        rows = bounds.DEFAULT_TABLE_ROWS
        if args.R is not None:
            rows = tuple(r for r in rows if r[0] == args.R)
            if not rows:
                raise UsageError(f"no table rows for R={args.R}")
        print("R,lambda,upsilon_E,Q,C,omega_Q0,D")
        for row in bounds.table1(rows):
            lam = "min" if row["lambda_is_min"] else _fmt(row["lambda"])
            om = ";".join(f"{int(k)}:{v:.3f}" for k, v in row["omega_Q0"].items())
            print(f"{row['R']},{lam},{row['upsilon_E']:.3f},{row['Q']},{row['C']:.3f},{om},{row['D']:.3f}")
    elif args.what == "curve":
        if args.R is None or args.lam is None:
            raise UsageError("bounds curve needs --R and --lambda")
        pts = bounds.curve(args.R, args.lam, args.q_from, args.q_to, args.points, args.kind)
        print("q,value,normalized")
        for q, v, nv in pts:
            print(f"{q:.6f},{v:.6f},{nv:.6f}")
    return EXIT_OK


def cmd_construct(args) -> int:
    cfg = ConstructionConfig(q=args.q, R=args.R, lam=args.lam, seed=args.seed, strategy=args.strategy,
                             max_steps=args.max_steps, verify=args.verify)
    try:
        S, rep = construction_a(cfg)
    except ConstructionError as exc:
        if "verification failed" in str(exc):
            raise VerificationFailure(str(exc)) from exc
        raise
    text = rep.to_text()
    print(text, end="")
    if args.out:
        base = Path(args.out)
        pcm = base.with_suffix(".pcm")
        S.to_parity_check().save(pcm)
        report = base.with_suffix(".report")
        report.write_text(text)
        params = _params(args) | {"L": rep.L}
        write_manifest(pcm, "construct", params, wall=rep.wall_time)
        write_manifest(report, "construct", params, wall=rep.wall_time)
    return EXIT_OK


def cmd_baseline(args) -> int:
    t0 = time.perf_counter()
    S = greedy_baseline(args.q, args.R, args.seed, args.sample, verify=True)
    print(f"size: {S.size}")
    print(f"saturation_level: {S.level}")
    if args.out:
        pcm = Path(args.out).with_suffix(".pcm")
        S.to_parity_check().save(pcm)
        write_manifest(pcm, "baseline", _params(args), wall=time.perf_counter() - t0)
    return EXIT_OK


def cmd_verify(args) -> int:
    H = load_pcm(args.file)
    if args.what == "radius":
        rep = covering_radius(H)
        print(rep.radius)
        if args.R is not None and rep.radius > args.R:
            raise VerificationFailure(f"radius {rep.radius} exceeds {args.R}")
        return EXIT_OK
    space = pg_space(H.r - 1, H.field)
    lvl = saturation_level(H.to_points(), space)
    print("none" if lvl is None else lvl)
    if lvl is None:
        raise VerificationFailure("point set does not span the space")
    if args.rho is not None and lvl > args.rho:
        raise VerificationFailure(f"saturation level {lvl} exceeds {args.rho}")
    return EXIT_OK


def cmd_lift(args) -> int:
    t0 = time.perf_counter()
    H0 = load_pcm(args.inp)
    spec = LiftSpec(H0, args.m, args.R, pad_to_paper_length=args.pad)
    H = lift_qm(spec)
    print(f"r: {H.r}")
    print(f"n: {H.n}")
    if args.out:
        out = Path(args.out)
        H.save(out)
        side = out.with_name(out.name + ".lift")
        side.write_text(spec.manifest())
        write_manifest(out, "lift", _params(args), inputs=[args.inp], wall=time.perf_counter() - t0)
    else:
        print(H.dumps(), end="")
    return EXIT_OK


def cmd_family(args) -> int:
    H0 = load_pcm(args.inp)
    try:
        rep = verify_family(H0, range(1, args.m_max + 1), args.R, check_padded=args.padded)
    except LiftError as exc:
        if "radius" in str(exc):
            raise VerificationFailure(str(exc)) from exc
        raise
    print(rep.to_text(), end="")
    return EXIT_OK


def cmd_directsum(args) -> int:
    H = direct_sum(load_pcm(args.a), load_pcm(args.b))
    if args.out:
        out = Path(args.out)
        t0 = time.perf_counter()
        H.save(out)
        write_manifest(out, "directsum", _params(args), inputs=[args.a, args.b], wall=time.perf_counter() - t0)
    else:
        print(H.dumps(), end="")
    return EXIT_OK


def cmd_density(args) -> int:
    d = covering_density(args.n, args.r, args.q, args.R)
    print(f"{d.numerator}/{d.denominator} {float(d)!r}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="covercode", description="Covering codes from saturating sets in PG(R, q).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    b = sub.add_parser("bounds", help="bound constants, table and curves")
    b.add_argument("what", choices=["constants", "table1", "curve"])
    b.add_argument("--R", type=int)
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--q-from", type=float, default=1e3)
    b.add_argument("--q-to", type=float, default=1e12)
    b.add_argument("--points", type=int, default=200)
    b.add_argument("--kind", choices=["decreasing", "constant"], default="decreasing")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("construct", help="run the step-by-step construction")
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--R", type=int, default=3)
    c.add_argument("--lambda", dest="lam", type=float)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--strategy", default="exact", help="exact, sampled:K or random")
    c.add_argument("--max-steps", type=int)
    c.add_argument("--verify", action="store_true", help="oracle-check the result")
    c.add_argument("--out", help="output path prefix (.pcm and .report are written)")
    c.set_defaults(func=cmd_construct)

    g = sub.add_parser("baseline", help="randomized greedy saturating set")
    g.add_argument("--q", type=int, required=True)
    g.add_argument("--R", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sample", type=int, default=64)
    g.add_argument("--out")
    g.set_defaults(func=cmd_baseline)

    v = sub.add_parser("verify", help="oracle checks on a pcm file")
    v.add_argument("what", choices=["sat", "radius"])
    v.add_argument("--file", required=True)
    v.add_argument("--rho", type=int)
    v.add_argument("--R", type=int)
    v.set_defaults(func=cmd_verify)

    lf = sub.add_parser("lift", help="q^m-concatenating lift of a pcm file")
    lf.add_argument("--in", dest="inp", required=True)
    lf.add_argument("--m", type=int, required=True)
    lf.add_argument("--R", type=int, required=True)
    lf.add_argument("--pad", action="store_true")
    lf.add_argument("--out")
    lf.set_defaults(func=cmd_lift)

    f = sub.add_parser("family", help="lift for m = 1..m-max and verify each")
    f.add_argument("--in", dest="inp", required=True)
    f.add_argument("--m-max", type=int, required=True)
    f.add_argument("--R", type=int, required=True)
    f.add_argument("--padded", action="store_true", help="also verify the padded lifts")
    f.set_defaults(func=cmd_family)

    d = sub.add_parser("directsum", help="direct sum of two pcm files")
    d.add_argument("--a", required=True)
    d.add_argument("--b", required=True)
    d.add_argument("--out")
    d.set_defaults(func=cmd_directsum)

    n = sub.add_parser("density", help="covering density of an [n, n-r]_q R code")
    n.add_argument("--n", type=int, required=True)
    n.add_argument("--r", type=int, required=True)
    n.add_argument("--q", type=int, required=True)
    n.add_argument("--R", type=int, required=True)
    n.set_defaults(func=cmd_density)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        thread_count()
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (CodeError, FieldError, GeometryError, LiftError, ConstructionError,
            bounds.BoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
