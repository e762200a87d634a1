"""``deepzero`` command-line front end.

Exit codes: 0 success, 1 invariant or experiment failure, 2 configuration
error.  Options may also come from a ``key=value`` file given with
``--config``; flags on the command line win.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .deep_zero import IndexSet, seminorm_gram, smallest_eigenvalue
from .errors import ConfigError, DeepZeroError
from .experiments import (
    RECOVER_HEADER,
    SAMPLING_HEADER,
    THETA_HEADER,
    ordered_map,
    recover_demo,
    sampling_row,
    theta_sweep,
)
from .operators import displacement_matrix
from .verify import run_checks

COMMANDS = ("verify", "sampling-sweep", "theta-sweep", "recover-demo", "gram-export")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {
    "beta": 1.0,
    "parity": "even",
    "degrees": (8, 16, 32, 64, 128),
    # |phi_theta| is square integrable only for theta > 1/2
    "thetas": (1.0, 0.8, 0.6, 0.55, 0.51),
    "degree": 16,
    "pad": "auto",
    "tol": None,
    "out": None,
    "format": None,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    beta: float = 1.0
    parity: str = "even"
    degrees: tuple[int, ...] = DEFAULTS["degrees"]
    thetas: tuple[float, ...] = DEFAULTS["thetas"]
    degree: int = 16
    pad: object = "auto"
    tol: Optional[float] = None
    out: Optional[str] = None
    format: str = "csv"
    extra: dict = field(default_factory=dict, compare=False)

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not math.isfinite(self.beta) or self.beta < 0:
            raise ConfigError("beta must be a finite nonnegative number")
        if self.beta == 0 and self.command not in ("verify", "sampling-sweep"):
            raise ConfigError("beta must be positive for experiment commands")
        if self.parity not in ("even", "odd"):
            raise ConfigError("parity must be even or odd")
        if not self.degrees or any(d < 2 for d in self.degrees):
            raise ConfigError("degrees must be a nonempty list of integers >= 2")
        if any(b <= a for a, b in zip(self.degrees, self.degrees[1:])):
            raise ConfigError("degrees must be strictly increasing")
        if not self.thetas or any(not t > 0 for t in self.thetas):
            raise ConfigError("thetas must be a nonempty list of positive numbers")
        if any(b >= a for a, b in zip(self.thetas, self.thetas[1:])):
            raise ConfigError("thetas must be strictly decreasing")
        if self.degree < 2:
            raise ConfigError("degree must be at least 2")
        if self.pad != "auto" and (not isinstance(self.pad, int) or self.pad < 0):
            raise ConfigError("pad must be 'auto' or a nonnegative integer")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        return self

    def echo(self) -> str:
        items = {k: v for k, v in asdict(self).items() if k != "extra"}
        parts = []
        for key in sorted(items):
            val = items[key]
            if isinstance(val, tuple):
                val = ",".join(_fmt(x) for x in val)
            elif isinstance(val, float):
                val = _fmt(val)
            parts.append(f"{key}={val}")
        return "# deepzero " + " ".join(parts)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in str(text).split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"bad integer list {text!r}") from exc


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(s) for s in str(text).split(",") if s.strip())
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _pad(text) -> object:
    if text is None or str(text).strip() == "auto":
        return "auto"
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"bad pad {text!r}") from exc


def _float(text) -> float:
    try:
        return float(text)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad number {text!r}") from exc


def _int(text) -> int:
    try:
        return int(text)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad integer {text!r}") from exc


CONVERTERS = {
    "beta": _float,
    "parity": str,
    "degrees": _int_list,
    "thetas": _float_list,
    "degree": _int,
    "pad": _pad,
    "tol": _float,
    "out": str,
    "format": str,
}


def read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deepzero",
        description="Deep-zero uniqueness, sampling and interpolation experiments in the Fock space.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *opts):
        p.add_argument("--config", help="key=value file; flags override it")
        p.add_argument("--out", help="output file (default: stdout)")
        for opt in opts:
            if opt == "beta":
                p.add_argument("--beta", help="shift of the second point (real, > 0)")
            elif opt == "parity":
                p.add_argument("--parity", choices=("even", "odd"))
            elif opt == "pad":
                p.add_argument("--pad", help="'auto' or a row padding")
            elif opt == "format":
                p.add_argument("--format", choices=("csv", "json"))

    p = sub.add_parser("verify", help="run the invariant suite")
    common(p)
    p.add_argument("--tol", help="replace every residual tolerance")

    p = sub.add_parser("sampling-sweep", help="smallest eigenvalue of the seminorm vs degree")
    common(p, "beta", "parity", "pad")
    p.add_argument("--degrees", help="comma list, strictly increasing")

    p = sub.add_parser("theta-sweep", help="counterexample family of the sampling inequality")
    common(p, "beta")
    p.add_argument("--thetas", help="comma list, strictly decreasing")

    p = sub.add_parser("recover-demo", help="recovery formula on consistent and incompatible data")
    common(p, "beta")

    p = sub.add_parser("gram-export", help="write the seminorm Gram matrix")
    common(p, "beta", "parity", "pad", "format")
    p.add_argument("--degree", help="truncation degree")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    merged: dict = {}
    if getattr(args, "config", None):
        for key, val in read_config_file(args.config).items():
            merged[key] = CONVERTERS[key](val)
    for key, conv in CONVERTERS.items():
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = conv(val)
    for key, val in DEFAULTS.items():
        merged.setdefault(key, val)
    if merged["format"] is None:
        merged["format"] = "json" if args.command == "gram-export" else "csv"
    return RunConfig(command=args.command, **merged).validate()


class _Output:
    """Single writer owning the output stream."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.buf = io.StringIO()

    def write(self, text: str) -> None:
        self.buf.write(text)

    def row(self, values: Sequence) -> None:
        self.buf.write(",".join(_fmt(v) for v in values) + "\n")

    def close(self) -> None:
        data = self.buf.getvalue()
        if self.path is None:
            sys.stdout.write(data)
            sys.stdout.flush()
        else:
            with open(self.path, "w", newline="") as fh:
                fh.write(data)


def _err(msg: str) -> None:
    print(f"deepzero: {msg}", file=sys.stderr)


def cmd_verify(cfg: RunConfig, out: _Output) -> int:
    results = run_checks(cfg.tol)
    out.write(cfg.echo() + "\n")
    for r in results:
        out.write(r.line() + "\n")
    failed = [r for r in results if not r.passed]
    out.write(f"# {len(results) - len(failed)}/{len(results)} checks passed\n")
    if failed:
        _err(f"invariant failed: {failed[0].name}")
        return EXIT_FAIL
    return EXIT_OK


def cmd_sampling_sweep(cfg: RunConfig, out: _Output) -> int:
    def job(n):
        try:
            return sampling_row(n, cfg.beta, cfg.parity, cfg.pad)
        except DeepZeroError as exc:
            return exc

    rows = ordered_map(job, list(cfg.degrees))
    out.write(cfg.echo() + "\n")
    out.row(SAMPLING_HEADER)
    prev = math.inf
    status = EXIT_OK
    for rec in rows:
        if isinstance(rec, Exception):
            out.write(f"# PARTIAL: {rec}\n")
            _err(str(rec))
            return EXIT_FAIL
        out.row(rec.row(SAMPLING_HEADER))
        if rec["lambda_min"] > prev:
            status = EXIT_FAIL
        prev = rec["lambda_min"]
    if status:
        _err("lambda_min increased with the degree")
    return status


def cmd_theta_sweep(cfg: RunConfig, out: _Output) -> int:
    rows = theta_sweep(cfg.beta, cfg.thetas)
    errors = any("error" in r.values for r in rows)
    header = THETA_HEADER + (("error",) if errors else ())
    out.write(cfg.echo() + "\n")
    out.row(header)
    for rec in rows:
        out.row(rec.row(header))
    status = EXIT_OK
    if errors:
        _err("quadrature did not converge for some rows")
        status = EXIT_FAIL
    good = [r for r in rows if "error" not in r.values]
    if any(r["numerator"] > 3 for r in good):
        _err("numerator exceeded 3")
        status = EXIT_FAIL
    if any(b["ratio"] > a["ratio"] for a, b in zip(good, good[1:])):
        _err("ratio increased as theta decreased")
        status = EXIT_FAIL
    if any(r["denominator"] == math.inf for r in good):
        _err("note: ||phi_theta||^2 is infinite for theta <= 1/2 (ratio reported as 0)")
    return status


def cmd_recover_demo(cfg: RunConfig, out: _Output) -> int:
    rows = recover_demo(cfg.beta)
    out.write(cfg.echo() + "\n")
    out.row(RECOVER_HEADER)
    for rec in rows:
        out.row(rec.row(RECOVER_HEADER))
    consistent = [r for r in rows if r["scenario"] == "consistent"]
    bad = [r for r in rows if r["scenario"] == "incompatible"]
    status = EXIT_OK
    if any(r["max_error"] >= 1e-10 or r["masked"] != r["zeros"] for r in consistent):
        _err("recovery of consistent data failed")
        status = EXIT_FAIL
    if not bad[-1]["norm2"] > 10 * bad[0]["norm2"]:
        _err("incompatible data did not show norm growth")
        status = EXIT_FAIL
    return status


def cmd_gram_export(cfg: RunConfig, out: _Output) -> int:
    form = seminorm_gram(IndexSet(cfg.parity), cfg.beta, cfg.degree, cfg.pad)
    lam = smallest_eigenvalue(form.matrix)
    if cfg.format == "json":
        op = displacement_matrix(cfg.beta, form.degree + form.pad, form.degree)
        doc = {
            "config": cfg.echo()[2:],
            "seminorm_form": form.to_dict(),
            "lambda_min": lam,
            "displacement": op.to_dict(),
        }
        out.write(json.dumps(doc, indent=1) + "\n")
    else:
        out.write(cfg.echo() + "\n")
        out.row(("i", "j", "re", "im"))
        m = form.matrix
        for i in range(form.degree):
            for j in range(form.degree):
                out.row((i, j, float(m[i, j].real), float(m[i, j].imag)))
    return EXIT_OK


HANDLERS = {
    "verify": cmd_verify,
    "sampling-sweep": cmd_sampling_sweep,
    "theta-sweep": cmd_theta_sweep,
    "recover-demo": cmd_recover_demo,
    "gram-export": cmd_gram_export,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        _err(str(exc))
        return EXIT_CONFIG
    out = _Output(cfg.out)
    try:
        status = HANDLERS[cfg.command](cfg, out)
    except DeepZeroError as exc:
        out.write(f"# PARTIAL: {exc}\n")
        _err(str(exc))
        status = EXIT_FAIL
    try:
        out.close()
    except OSError as exc:
        _err(f"cannot write output: {exc}")
        return EXIT_CONFIG
    return status


if __name__ == "__main__":
    sys.exit(main())
