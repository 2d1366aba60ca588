"""``apfoe`` command line.

Exit codes: 0 success, 1 usage error, 2 runtime error. Data goes to stdout
(or ``--out``); diagnostics go to stderr.

Sweep settings come from ``--config`` (JSON with :class:`SweepConfig` field
names) and are then overridden by any flag given explicitly.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import channel, complexity, foe, harness, qam

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; route it through our own code instead
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _offsets(text: str):
    """``min:max:step`` grid or comma list of Hz values."""
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("grid must be min:max:step")
        return {"min": parts[0], "max": parts[1], "step": parts[2]}
    return [float(p) for p in text.split(",")]


def _osnr_list(text: str):
    out = []
    for p in text.split(","):
        out.append(None if p.strip().lower() in ("inf", "none") else float(p))
    return out


def _algorithms(text: str):
    names = [p.strip() for p in text.split(",") if p.strip()]
    for name in names:
        if name not in foe.ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {name!r}")
    return names


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so only explicit flags override the config file
    p.add_argument("--config", type=Path, help="JSON file with SweepConfig fields")
    p.add_argument("--format", dest="qam_format", type=int, choices=qam.SUPPORTED_FORMATS, help="QAM order (default 16)")
    p.add_argument("--symbol-rate", type=float, help="Baud (default 28e9)")
    p.add_argument("--linewidth", type=float, help="per-laser linewidth in Hz (default 100e3)")
    p.add_argument("--algorithms", type=_algorithms, help="comma list (default fft,apfft,czt,zoomfft)")
    p.add_argument("--n1", type=int, help="first-stage size (default 512)")
    p.add_argument("--n2", type=int, help="second-stage size (default 256)")
    p.add_argument("--offsets", type=_offsets, help="min:max:step or comma list in Hz (default -3.5e9:3.5e9:200e6)")
    p.add_argument("--trials", type=int, help="trials per point (default 100)")
    p.add_argument("--seed", type=int, help="master seed (default 0)")
    p.add_argument("--threads", type=int, default=1, help="worker threads; output does not depend on it (default 1)")
    p.add_argument("--out", type=Path, help="CSV output path (default stdout)")


_FLAG_TO_FIELD = {
    "qam_format": "format",
    "symbol_rate": "symbol_rate",
    "linewidth": "linewidth_per_laser",
    "algorithms": "algorithms",
    "n1": "n1",
    "n2": "n2",
    "offsets": "offsets",
    "osnr": "osnr_values",
    "trials": "trials_per_point",
    "seed": "master_seed",
}


def _sweep_config(args) -> harness.SweepConfig:
    data = json.loads(args.config.read_text()) if args.config else {}
    for flag, name in _FLAG_TO_FIELD.items():
        value = getattr(args, flag, None)
        if value is not None:
            data[name] = value
    return harness.SweepConfig.from_dict(data)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="apfoe", description="Frequency offset estimation for M-QAM.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("complexity", help="real-multiplication counts per algorithm")
    p.add_argument("--n1", type=int, action="append", help="repeatable; default both standard rows")
    p.add_argument("--n2", type=int, action="append", help="defaults to n1/2 for each n1")
    p.add_argument("--format", dest="fmt", choices=["table", "json", "csv"], default="table")

    p = sub.add_parser("sweep-offset", help="MSE versus frequency offset (CSV)")
    _add_sweep_flags(p)
    p.add_argument("--osnr", type=_osnr_list, help="single OSNR in dB, or inf for no AWGN (default 30)")

    p = sub.add_parser("sweep-osnr", help="MSE versus OSNR, pooled over offsets (CSV)")
    _add_sweep_flags(p)
    p.add_argument("--osnr", type=_osnr_list, help="comma list of OSNR values in dB")

    p = sub.add_parser("estimate", help="estimate the offset in an IQ file, print JSON")
    p.add_argument("path", type=Path)
    p.add_argument("--algo", choices=foe.ALGORITHMS, default="apfft")
    p.add_argument("--n1", type=int, default=512)
    p.add_argument("--n2", type=int, help="default n1/2")
    p.add_argument("--symbol-rate", type=float, default=28e9)

    p = sub.add_parser("gen-tone", help="write a noise-free QAM or pure-tone IQ fixture")
    p.add_argument("--freq", type=float, required=True, help="carrier offset in Hz")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", type=Path, required=True, help=".iq (binary) or .csv")
    p.add_argument("--symbol-rate", type=float, default=28e9)
    p.add_argument("--qam", type=int, choices=(0, *qam.SUPPORTED_FORMATS), default=0, help="0 = unmodulated tone (default)")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_complexity(args, out) -> None:
    n1s = args.n1 or [n1 for n1, _ in complexity.STANDARD_SETTINGS]
    n2s = args.n2 or [n1 // 2 for n1 in n1s]
    if len(n2s) != len(n1s):
        raise UsageError("give --n2 once per --n1, or not at all")
    reports = [complexity.build_report(a, b) for a, b in zip(n1s, n2s)]
    if args.fmt == "json":
        out.write(json.dumps([r.to_dict() for r in reports], indent=2) + "\n")
    elif args.fmt == "csv":
        cols = list(reports[0].to_dict())
        out.write(",".join(cols) + "\n")
        for r in reports:
            out.write(",".join(str(v) for v in r.to_dict().values()) + "\n")
    else:
        out.write(f"{'N1':>6} {'N2':>6} {'FFT+CZT':>9} {'FFT+Zoom':>9} {'apFFT':>9} {'vs CZT':>7} {'vs Zoom':>7}\n")
        for r in reports:
            out.write(
                f"{r.n1:>6} {r.n2:>6} {r.mul_czt:>9} {r.mul_zoomfft:>9} {r.mul_apfft:>9}"
                f" {r.reduction_vs_czt:>7.1%} {r.reduction_vs_zoomfft:>7.1%}\n"
            )


def _emit(text: str, path: Path | None, out) -> None:
    if path is None:
        out.write(text)
    else:
        path.write_text(text)


def _cmd_sweep_offset(args, out) -> None:
    config = _sweep_config(args)
    rows = harness.sweep_offsets(config, threads=args.threads)
    _emit(harness.to_csv(rows, harness.OFFSET_COLUMNS), args.out, out)


def _cmd_sweep_osnr(args, out) -> None:
    config = _sweep_config(args)
    rows = harness.sweep_osnr(config, threads=args.threads)
    _emit(harness.to_csv(rows, harness.OSNR_COLUMNS), args.out, out)


def _cmd_estimate(args, out) -> None:
    n2 = args.n2 if args.n2 is not None else max(args.n1 // 2, 1)
    params = foe.EstimatorParams(args.n1, n2, 1.0 / args.symbol_rate)
    result = harness.estimate_from_file(args.path, args.algo, params)
    out.write(json.dumps(result.to_dict()) + "\n")


def _cmd_gen_tone(args, out) -> None:
    t_s = 1.0 / args.symbol_rate
    if args.qam:
        seq = qam.generate_symbols(qam.build_constellation(args.qam), args.count, args.seed, t_s)
    else:
        seq = qam.SymbolSequence(np.ones(args.count, dtype=np.complex128), t_s)
    harness.write_iq(args.out, channel.apply_carrier(seq, args.freq).samples)


COMMANDS = {
    "complexity": _cmd_complexity,
    "sweep-offset": _cmd_sweep_offset,
    "sweep-osnr": _cmd_sweep_osnr,
    "estimate": _cmd_estimate,
    "gen-tone": _cmd_gen_tone,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            err.write(parser.format_usage())
            return EXIT_USAGE
        COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(str(exc).rstrip("\n") + "\n")
        return EXIT_USAGE
    except (OSError, ValueError) as exc:
        err.write(f"apfoe: {exc}\n")
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
