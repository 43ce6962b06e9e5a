"""Command-line front end.

Exit codes: 0 when every requested check is consistent with the conjecture or
theorem being tested, 2 when a certified failure is found, 3 when a result is
undetermined because of a resource cap, 1 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .commands import (
    CONJECTURE2,
    MODES,
    cmd_blacklist,
    cmd_check,
    cmd_count,
    cmd_matrix,
    cmd_scan,
    cmd_verify_proof,
    exit_code,
)
from .errors import InvalidInputError, ParseError, PlethysmError, ResourceLimitError
from .exactlinalg import DEFAULT_MAX_EXACT, DEFAULT_PRIMES, CertPolicy
from .partitions import parse_partition
from .report import envelope, to_csv, to_json
from .tableaux import DEFAULT_MAX_ENUM

log = logging.getLogger("plethysm")

EXIT_OK, EXIT_USAGE, EXIT_FAILURE, EXIT_UNDETERMINED = 0, 1, 2, 3
REPORT_FORMATS = ("json", "csv")
MATRIX_FORMATS = ("mm", "dense")
CONFIG_KEYS = {"primes", "max_enum", "max_exact", "threads", "out", "format", "mode"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def read_config(path: str) -> dict[str, str]:
    """Read a ``key=value`` file (no sections; ``#`` comments allowed)."""
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",))
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror or exc}")
    try:
        parser.read_string("[plethysm]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"bad config {path}: {exc}")
    out = {}
    for key, value in parser["plethysm"].items():
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"unknown config key {key!r} in {path}")
        out[key] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--primes", type=_int_list, default=None,
                        help="comma-separated primes for mod-p rank (default: three 31-bit primes)")
    common.add_argument("--max-enum", type=int, default=None,
                        help=f"cap on enumerated tableaux (default {DEFAULT_MAX_ENUM})")
    common.add_argument("--max-exact", type=int, default=None,
                        help=f"largest dimension for exact elimination (default {DEFAULT_MAX_EXACT})")
    common.add_argument("--format", default=None, help="json or csv; mm or dense for `matrix`")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--threads", type=int, default=None, help="worker threads for scans")
    common.add_argument("--config", default=None, help="key=value file with defaults")
    common.add_argument("--plot", default=None, help="also render a figure to this path")
    common.add_argument("--no-timing", action="store_true",
                        help="zero every elapsed_ms field for byte-identical reruns")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="plethysm", description="Rank checks for tableau orthogonality matrices.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def shape_args(sp):
        sp.add_argument("shape", nargs="?", help='partition such as "[6,2,2,1,1]" or "2x5"')
        sp.add_argument("--shape", dest="shape_flag")

    sp = sub.add_parser("count", parents=[common], help="count horizontal and vertical tableaux")
    shape_args(sp)
    sp = sub.add_parser("check", parents=[common], help="decide a conjecture for one shape")
    shape_args(sp)
    sp.add_argument("--mode", choices=MODES, default=None)
    sp = sub.add_parser("scan", parents=[common], help="check every partition of N")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=MODES, default=None)
    sp.add_argument("--hooks", action="store_true", help="only hook shapes (N-r, 1^r)")
    sp = sub.add_parser("blacklist", parents=[common], help="rank of the Black-List matrix M^{m,n}")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp = sub.add_parser("matrix", parents=[common], help="build and export K_shape or M^{m,n}")
    shape_args(sp)
    sp.add_argument("--m", type=int)
    sp.add_argument("--n", type=int)
    sp = sub.add_parser("verify-proof", parents=[common], help="check the 2 x n full-rank proof")
    sp.add_argument("--n", type=int, required=True)
    return p


def _pick(flag, cfg: dict, key: str, default: int) -> int:
    return flag if flag is not None else int(cfg.get(key, default))


def _settings(args) -> dict:
    cfg = read_config(args.config) if args.config else {}
    try:
        primes = args.primes or (_int_list(cfg["primes"]) if "primes" in cfg else DEFAULT_PRIMES)
        settings = {
            "primes": tuple(primes),
            "max_enum": _pick(args.max_enum, cfg, "max_enum", DEFAULT_MAX_ENUM),
            "max_exact": _pick(args.max_exact, cfg, "max_exact", DEFAULT_MAX_EXACT),
            "threads": _pick(args.threads, cfg, "threads", os.cpu_count() or 1),
            "out": args.out or cfg.get("out"),
            "format": args.format or cfg.get("format"),
            "mode": getattr(args, "mode", None) or cfg.get("mode", CONJECTURE2),
        }
    except (ValueError, argparse.ArgumentTypeError) as exc:
        raise UsageError(f"bad setting: {exc}")
    if settings["mode"] not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    for key in ("threads", "max_enum", "max_exact"):
        if settings[key] < 1:
            raise UsageError(f"{key} must be positive")
    return settings


def _shape(args):
    text = args.shape_flag or args.shape
    if text is None:
        raise UsageError("a shape is required")
    return parse_partition(text)


def _emit(report: dict, fmt: str, out: str | None) -> None:
    text = to_csv(report) if fmt == "csv" else to_json(report)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise PlethysmError(f"cannot write {out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


def run(args) -> int:
    s = _settings(args)
    timing = not args.no_timing
    policy = CertPolicy(primes=s["primes"], max_exact=s["max_exact"])
    start = time.perf_counter()
    cmd = args.command
    fmt = s["format"] or ("mm" if cmd == "matrix" else "json")
    allowed = MATRIX_FORMATS if cmd == "matrix" else REPORT_FORMATS
    if fmt not in allowed:
        raise UsageError(f"--format for {cmd} must be one of {allowed}")
    params: dict = {"primes": list(s["primes"]), "max_enum": s["max_enum"],
                    "max_exact": s["max_exact"], "format": fmt}
    extra: dict = {}
    code = EXIT_OK
    out = s["out"]

    if cmd == "count":
        shape = _shape(args)
        params["shape"] = str(shape)
        results = [cmd_count(shape)]
    elif cmd == "check":
        shape = _shape(args)
        params.update(shape=str(shape), mode=s["mode"])
        verdict = cmd_check(shape, s["mode"], policy=policy, max_enum=s["max_enum"])
        results = [verdict]
        code = exit_code(results)
    elif cmd == "scan":
        params.update(n=args.n, mode=s["mode"], hooks=args.hooks)
        results = cmd_scan(args.n, s["mode"], hooks_only=args.hooks, policy=policy,
                           max_enum=s["max_enum"], threads=s["threads"])
        code = exit_code(results)
        if args.plot:
            from .plotting import plot_scan
            plot_scan([v.to_dict() for v in results], args.plot,
                      title=f"N={args.n} {s['mode']}" + (" (hooks)" if args.hooks else ""))
    elif cmd == "blacklist":
        params.update(m=args.m, n=args.n)
        res = cmd_blacklist(args.m, args.n, policy=policy, max_enum=s["max_enum"])
        results = [res]
        if not (res["rank_equals_I_nm"] and res["equals_K_rectangle"]):
            code = EXIT_FAILURE if res["rank_report"].certified else EXIT_UNDETERMINED
    elif cmd == "matrix":
        if not out:
            raise UsageError("matrix needs --out for the exported file")
        text = args.shape_flag or args.shape
        if text is not None:
            shape = parse_partition(text)
            params["shape"] = str(shape)
            mat, info = cmd_matrix(out, fmt, shape=shape, max_enum=s["max_enum"])
        elif args.m is not None and args.n is not None:
            params.update(m=args.m, n=args.n)
            mat, info = cmd_matrix(out, fmt, mn=(args.m, args.n), max_enum=s["max_enum"])
        else:
            raise UsageError("matrix needs a shape, or --m and --n")
        results = [info]
        out = None
        if args.plot:
            from .plotting import plot_matrix
            plot_matrix(mat.to_array(), args.plot, title=f"{info['kind']} {info['shape']}")
    elif cmd == "verify-proof":
        params["n"] = args.n
        rep = cmd_verify_proof(args.n, policy=policy)
        results = rep.records
        extra["summary"] = rep.summary()
        code = EXIT_OK if rep.passed else EXIT_FAILURE
        if args.plot:
            from .plotting import plot_proof_summary
            plot_proof_summary(rep.summary(), args.plot, title=f"2 x {args.n} proof checks")
    else:  # pragma: no cover - argparse enforces the choices
        raise UsageError(f"unknown command {cmd}")

    if cmd == "matrix":
        fmt = "json"
    elapsed = (time.perf_counter() - start) * 1e3
    _emit(envelope(cmd, params, results, elapsed, timing, **extra), fmt, out)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except (UsageError, ParseError) as exc:
        print(f"plethysm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"plethysm: resource limit: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except InvalidInputError as exc:
        print(f"plethysm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PlethysmError as exc:
        print(f"plethysm: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
