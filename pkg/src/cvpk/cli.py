"""Command-line front end.

Exit codes: 0 success, 2 invalid arguments, 3 enumeration guard exceeded
without ``--force``, 4 recursion/oracle mismatch.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import __version__, oracle
from .gpb_engine import default_workers, gpb, write_gpb_json
from .kernels import FAMILIES, is_power_of_two, make_kernel
from .pb_analysis import check_swap_precondition, partial_distances
from .pipeline import compute_pb, table3
from .scaling import ScalingConfig, scaling_exponent

log = logging.getLogger("cvpk")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_MISMATCH = 4


@dataclass
class RunManifest:
    command: str
    params: dict
    version: str = __version__
    duration_s: Optional[float] = None
    digest: str = ""

    def as_dict(self) -> dict:
        out = {"command": self.command, "params": self.params, "version": self.version, "digest": self.digest}
        if self.duration_s is not None:
            out["duration_s"] = round(self.duration_s, 3)
        return out


def _digest(payload: str) -> str:
    return "sha256:" + hashlib.sha256(payload.encode()).hexdigest()


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


class _Run:
    """Collects output and wraps JSON payloads with their manifest."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.start = args.t0
        params = {k: v for k, v in sorted(vars(args).items())
                  if k not in ("func", "cmd_name", "t0", "out", "verbose", "with_timing", "threads")}
        self.manifest = RunManifest(args.cmd_name, params)

    def _finish(self, payload: str) -> None:
        self.manifest.digest = _digest(payload)
        elapsed = time.perf_counter() - self.start
        if self.args.with_timing:
            self.manifest.duration_s = elapsed
        log.info("%s finished in %.2fs", self.manifest.command, elapsed)

    def emit_json(self, data: dict) -> None:
        payload = _dumps(data)
        self._finish(payload)
        doc = dict(data)
        doc["manifest"] = self.manifest.as_dict()
        self._write(_dumps(doc) + "\n")

    def emit_text(self, text: str, sidecar: bool = True) -> None:
        self._finish(text)
        self._write(text)
        if sidecar and getattr(self.args, "out", None):
            with open(self.args.out + ".manifest.json", "w") as fh:
                fh.write(_dumps(self.manifest.as_dict()) + "\n")

    def _write(self, text: str) -> None:
        out = getattr(self.args, "out", None)
        if out:
            with open(out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _size(value: str) -> int:
    n = int(value)
    if not is_power_of_two(n):
        raise argparse.ArgumentTypeError(f"{value} is not a power of two")
    return n


def _workers(args) -> int:
    return args.threads if args.threads else default_workers()


def _scaling_cfg(args) -> ScalingConfig:
    return ScalingConfig(grid_size=args.grid, max_iters=args.max_iters, tol=args.tol,
                         interpolation=args.interpolation)


def cmd_kernel_print(args) -> int:
    kernel = make_kernel(args.family, args.size)
    run = _Run(args)
    if args.format == "json":
        run.emit_json({"n": kernel.n, "family": kernel.family, "rows": kernel.row_strings()})
    else:
        run.emit_text(kernel.to_text(), sidecar=False)
    return EXIT_OK


def cmd_gpb(args) -> int:
    n = args.size
    if n < 4:
        raise ValueError("GPB recursion needs size >= 4")
    m = n.bit_length() - 1
    if args.verify_oracle:
        if n > oracle.DEFAULT_GUARD:
            log.error("--verify-oracle only runs within the oracle guard (n <= %d)", oracle.DEFAULT_GUARD)
            return EXIT_GUARD
        rec = gpb(m, workers=_workers(args))
        ref = oracle.gpb_oracle(make_kernel("cvpk", n))
        if rec != ref:
            log.error("recursion and oracle GPB differ at n = %d", n)
            return EXIT_MISMATCH
        log.info("recursion matches oracle at n = %d", n)
    run = _Run(args)
    buf = io.StringIO()
    write_gpb_json(m, buf, workers=_workers(args))
    run.emit_json(json.loads(buf.getvalue()))
    return EXIT_OK


def cmd_pb(args) -> int:
    pb = compute_pb(args.family, args.size, workers=_workers(args), force=args.force)
    run = _Run(args)
    if args.format == "csv":
        run.emit_text(pb.to_csv())
    else:
        run.emit_json(pb.to_dict())
    return EXIT_OK


def cmd_profile(args) -> int:
    pb = compute_pb(args.family, args.size, workers=_workers(args), force=args.force)
    prof = partial_distances(pb)
    run = _Run(args)
    if args.format == "json":
        run.emit_json({
            "n": prof.n,
            "family": args.family,
            "d": list(prof.d),
            "E": float(f"{prof.E:.6g}"),
            "swap_precondition": check_swap_precondition(prof),
        })
    elif args.format == "csv":
        run.emit_text(prof.to_csv())
    else:
        run.emit_text(str(prof) + "\n", sidecar=False)
    return EXIT_OK


def cmd_mu(args) -> int:
    pb = compute_pb(args.family, args.size, workers=_workers(args), force=args.force)
    cfg = _scaling_cfg(args)
    res = scaling_exponent(pb, cfg)
    run = _Run(args)
    data = res.to_dict(pb.n, args.family, cfg)
    data["mu"] = float(f"{res.mu:.6g}")
    run.emit_json(data)
    return EXIT_OK


def cmd_report(args) -> int:
    rows = table3(args.max_size, _scaling_cfg(args), workers=_workers(args))
    run = _Run(args)
    if args.format == "json":
        run.emit_json({"table": "table3", "rows": [r.as_dict() for r in rows]})
        return EXIT_OK
    header = ("n", "E(Q)", "E(Q~)", "mu(Q)", "mu(Q~)", "mu(Qbar)")
    lines = []
    if args.format == "csv":
        lines.append(",".join(("n", "E", "E_swapped", "mu", "mu_swapped", "mu_sorted")))
        for r in rows:
            d = r.as_dict()
            lines.append(",".join("" if d[k] is None else str(d[k]) for k in d))
    else:
        lines.append("{:>6} {:>9} {:>9} {:>7} {:>7} {:>8}".format(*header))
        for r in rows:
            d = r.as_dict()
            lines.append("{:>6} {:>9} {:>9} {:>7} {:>7} {:>8}".format(
                d["n"], d["E"], d["E_swapped"], d["mu"], d["mu_swapped"], d["mu_sorted"] or "-"))
    run.emit_text("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_oracle(args) -> int:
    kernel = make_kernel(args.family, args.size)
    run = _Run(args)
    if args.what == "gpb":
        run.emit_json(oracle.gpb_oracle(kernel, force=args.force).to_dict())
    else:
        run.emit_json(oracle.pb_oracle(kernel, force=args.force).to_dict())
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, out: bool = True) -> None:
    if out:
        p.add_argument("--out", help="write to FILE instead of stdout")
    p.add_argument("--threads", type=int, default=0, help="worker processes (default: $CVPK_THREADS or 1)")
    p.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                   help="progress messages on stderr")


def _add_scaling(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--interpolation", choices=("cubic", "linear"), default="cubic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cvpk", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    parser.add_argument("--with-timing", action="store_true",
                        help="embed wall-clock duration in the manifest (breaks byte-identical output)")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    kp = sub.add_parser("kernel", help="kernel construction")
    ksub = kp.add_subparsers(dest="kernel_cmd", required=True)
    kpp = ksub.add_parser("print", help="print a kernel matrix")
    kpp.add_argument("--family", choices=FAMILIES, required=True)
    kpp.add_argument("--size", type=_size, required=True)
    kpp.add_argument("--format", choices=("txt", "json"), default="txt")
    _add_common(kpp)
    kpp.set_defaults(func=cmd_kernel_print, cmd_name="kernel print")

    gp = sub.add_parser("gpb", help="GPB of Q^(n) by recursion")
    gp.add_argument("--size", type=_size, required=True)
    gp.add_argument("--verify-oracle", action="store_true")
    _add_common(gp)
    gp.set_defaults(func=cmd_gpb, cmd_name="gpb")

    pp = sub.add_parser("pb", help="polarization behaviour")
    pp.add_argument("--family", choices=FAMILIES, required=True)
    pp.add_argument("--size", type=_size, required=True)
    pp.add_argument("--format", choices=("json", "csv"), default="json")
    pp.add_argument("--force", action="store_true")
    _add_common(pp)
    pp.set_defaults(func=cmd_pb, cmd_name="pb")

    fp = sub.add_parser("profile", help="partial distances and polarization rate")
    fp.add_argument("--family", choices=FAMILIES, required=True)
    fp.add_argument("--size", type=_size, required=True)
    fp.add_argument("--format", choices=("txt", "json", "csv"), default="txt")
    fp.add_argument("--force", action="store_true")
    _add_common(fp)
    fp.set_defaults(func=cmd_profile, cmd_name="profile")

    mp = sub.add_parser("mu", help="BEC scaling exponent")
    mp.add_argument("--family", choices=FAMILIES, required=True)
    mp.add_argument("--size", type=_size, required=True)
    mp.add_argument("--force", action="store_true")
    _add_scaling(mp)
    _add_common(mp)
    mp.set_defaults(func=cmd_mu, cmd_name="mu")

    rp = sub.add_parser("report", help="tabulated results")
    rp.add_argument("which", choices=("table3",))
    rp.add_argument("--max-size", type=_size, default=32)
    rp.add_argument("--format", choices=("txt", "csv", "json"), default="txt")
    _add_scaling(rp)
    _add_common(rp)
    rp.set_defaults(func=cmd_report, cmd_name="report table3")

    op = sub.add_parser("oracle", help="brute-force GPB/PB")
    op.add_argument("what", choices=("gpb", "pb"))
    op.add_argument("--size", type=_size, required=True)
    op.add_argument("--family", choices=FAMILIES, default="cvpk")
    op.add_argument("--force", action="store_true")
    _add_common(op)
    op.set_defaults(func=cmd_oracle, cmd_name="oracle")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    args.t0 = time.perf_counter()
    try:
        return args.func(args)
    except oracle.GuardError as exc:
        log.error("%s", exc)
        return EXIT_GUARD
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
