"""
Command-line front end, installed as ``sbo``.

Subcommands: ``sample``, ``classify``, ``verify``, ``stats``.  The size
function comes from ``--config FILE`` (descriptor JSON) or from
``--family NAME --param key=value ...``.  Output goes to ``--out`` or stdout,
as CSV (header row, CRLF line ends) or JSON (``schema_version`` 1).

Exit status: 0 on success, 1 when ``verify`` finds a failing identity, 2 on
configuration errors (with a JSON error object on stderr).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import classifier, identities, samplers, stats
from . import sizes as _sizes
from .errors import ConfigError, SizeBiasedError

SCHEMA_VERSION = 1
COMMANDS = ("sample", "classify", "verify", "stats")


@dataclass
class RunConfig:
    command: str
    descriptor: _sizes.SizeFunction | None
    n: int = 10
    replicates: int = 1
    seed: int = 0
    output_path: str | None = None
    format: str = "csv"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.descriptor is None and self.command != "verify":
            raise ConfigError(f"{self.command} needs a size function (--config or --family)")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parse_param(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise ConfigError(f"--param expects key=value, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise ConfigError(f"parameter {key!r} is not a number: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sbo", description="Random orderings of sized items by exponential clocks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--config", help="descriptor JSON file")
    common.add_argument("--family", choices=sorted(_sizes.FAMILIES))
    common.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    common.add_argument("--table", help="comma-separated sizes for explicit_table")
    common.add_argument("--n", type=int, default=10)
    common.add_argument("--replicates", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sample", parents=[common], help="sample arrangements")
    p.add_argument("--method", choices=("exponential", "picks", "insertion", "scatter"), default="exponential")
    p.add_argument("--lehmer", action="store_true", help="write Lehmer codes instead of arrangements")

    sub.add_parser("classify", parents=[common], help="order-type report")

    p = sub.add_parser("verify", parents=[common], help="exact identity suite")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("stats", parents=[common], help="records, inversions and F_n")
    p.add_argument("--method", choices=("exponential", "picks", "insertion"), default="exponential")
    p.add_argument("--theta", type=float, help="compare F_n with t**theta")
    return parser


def _descriptor(args) -> _sizes.SizeFunction | None:
    try:
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                return _sizes.SizeFunction.from_dict(json.load(fh))
        if args.family is None:
            return None
        params = dict(_parse_param(p) for p in args.param)
        table = None
        if args.table:
            table = tuple(float(v) for v in args.table.split(","))
        return _sizes.SizeFunction(args.family, params, table)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    options = {k: v for k, v in vars(args).items() if k in ("method", "lehmer", "trials", "tol", "theta")}
    return RunConfig(
        command=args.command,
        descriptor=_descriptor(args),
        n=args.n,
        replicates=args.replicates,
        seed=args.seed,
        output_path=args.out,
        format=args.format,
        options=options,
    )


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # RFC 4180: CRLF line ends, minimal quoting
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _num(x: float):
    return "inf" if math.isinf(x) else x


def _sample(cfg: RunConfig) -> str:
    desc, n, method = cfg.descriptor, cfg.n, cfg.options.get("method", "exponential")
    base = {"schema_version": SCHEMA_VERSION, "command": "sample", "method": method,
            "descriptor": desc.to_dict(), "n": n, "seed": cfg.seed}
    if method == "scatter":
        draws = samplers.replicate(lambda rng: samplers.sample_poisson_scatter(desc, n, rng), cfg.replicates, cfg.seed, 1)
        if cfg.format == "csv":
            rows = [(r, i + 1, repr(float(s.t[i])), repr(float(s.x[i]))) for r, s in enumerate(draws) for i in range(n)]
            return _csv_text(("replicate", "strip", "t", "x"), rows)
        base["replicates"] = [{"t": s.t.tolist(), "x": s.x.tolist()} for s in draws]
        return _json_text(base)
    if method == "insertion":
        pairs = samplers.replicate(lambda rng: samplers.sample_by_insertion(desc, n, rng), cfg.replicates, cfg.seed, 1)
        orders = [o for o, _ in pairs]
        codes = [c for _, c in pairs]
    else:
        orders = list(samplers.sample_many(method, desc, n, cfg.replicates, cfg.seed, workers=1))
        codes = [stats.lehmer_code(o) for o in orders]
    if cfg.format == "csv":
        if cfg.options.get("lehmer"):
            rows = [(r, i + 1, int(v)) for r, c in enumerate(codes) for i, v in enumerate(c)]
            return _csv_text(("replicate", "index", "rank"), rows)
        rows = [(r, k + 1, int(v)) for r, o in enumerate(orders) for k, v in enumerate(o)]
        return _csv_text(("replicate", "position", "label"), rows)
    base["replicates"] = [
        {"arrangement": [int(v) for v in o], "lehmer_code": [int(v) for v in c]} for o, c in zip(orders, codes)
    ]
    return _json_text(base)


def _classify(cfg: RunConfig) -> str:
    report = classifier.classification_report(cfg.descriptor)
    if cfg.format == "csv":
        return _csv_text(("type", "case", "beta", "heuristic"),
                         [(report["type"], report["case"], report["beta"], str(report["heuristic"]).lower())])
    return _json_text(report)


def _verify(cfg: RunConfig) -> tuple[str, bool]:
    results = identities.run_identity_suite(cfg.options.get("trials", 1000), cfg.seed, cfg.options.get("tol", 1e-10))
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name:<20} max residual {r.max_residual:.3e}", file=sys.stderr)
    ok = all(r.passed for r in results)
    if cfg.format == "csv":
        text = _csv_text(("name", "max_residual", "trials", "tolerance", "passed"),
                         [(r.name, repr(r.max_residual), r.trials, r.tolerance, str(r.passed).lower()) for r in results])
    else:
        text = _json_text({"schema_version": SCHEMA_VERSION, "command": "verify", "seed": cfg.seed,
                           "passed": ok, "identities": [r.to_dict() for r in results]})
    return text, ok


def _stats(cfg: RunConfig) -> str:
    desc, n = cfg.descriptor, cfg.n
    method = cfg.options.get("method", "exponential")
    orders = samplers.sample_many(method, desc, n, cfg.replicates, cfg.seed, workers=1)
    rows = []
    for r, o in enumerate(orders):
        inv = stats.count_inversions(o)
        rows.append((r, n, len(stats.count_records(o)), inv.d_n, inv.normalized))
    if cfg.format == "csv":
        return _csv_text(("replicate", "n", "records", "inversions", "normalized_inversions"),
                         [(r, m, k, d, repr(v)) for r, m, k, d, v in rows])
    grid = stats.steele_grid()
    summary = {
        "mean_records": float(np.mean([row[2] for row in rows])),
        "mean_inversions": float(np.mean([row[3] for row in rows])),
        "mean_normalized_inversions": float(np.mean([row[4] for row in rows])),
    }
    if desc.family == _sizes.GEOMETRIC and desc.params["q"] < 1 and n >= 2:
        summary["expected_inversions"] = stats.expected_inversions(desc, n)
        summary["c_q"] = stats.c_q(desc.params["q"]).value
    steele = {"t": grid.tolist(), "f_n": np.atleast_1d(stats.steele_Fn(desc, n, grid)).tolist()}
    theta = cfg.options.get("theta")
    if theta is not None:
        steele["theta"] = theta
        steele["sup_distance"] = stats.steele_sup_distance(desc, n, theta)
    return _json_text({
        "schema_version": SCHEMA_VERSION, "command": "stats", "method": method,
        "descriptor": desc.to_dict(), "n": n, "seed": cfg.seed, "summary": summary,
        "steele": steele,
        "per_replicate": [
            {"replicate": r, "records": k, "inversions": d, "normalized_inversions": v} for r, _, k, d, v in rows
        ],
    })


def run(cfg: RunConfig) -> int:
    """Execute one configured command; returns the exit status."""
    ok = True
    if cfg.command == "sample":
        text = _sample(cfg)
    elif cfg.command == "classify":
        text = _classify(cfg)
    elif cfg.command == "verify":
        text, ok = _verify(cfg)
    else:
        text = _stats(cfg)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def _error(kind: str, exc: Exception) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": str(exc)}) + "\n")
    return 2


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        return _error("config_error", exc)
    try:
        return run(cfg)
    except (SizeBiasedError, OverflowError) as exc:
        return _error(type(exc).__name__, exc)


if __name__ == "__main__":
    sys.exit(main())
