"""Command line entry point: ``stratx pd|catpd|synth|bench|oracle-check``.

Data goes to ``--out`` (or stdout); diagnostics always go to stderr.

Exit codes: 0 success, 1 oracle mismatch or unexpected failure, 2 bad
input or configuration, 3 too few supported x values for a curve, 4 no
category could be supported.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .catpd import CatStratPDParams, catstratpd
from .data import Dataset, load_csv
from .errors import DataError, InsufficientSupportError, MergeError
from .export import curve_to_csv, curve_to_svg, effect_to_csv, effect_to_svg
from .numpd import StratPDParams, stratpd

EXIT_OK, EXIT_FAIL, EXIT_DATA, EXIT_SUPPORT, EXIT_NO_CATEGORY = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    input: Path
    response: str
    feature: str
    categorical: list[str] = field(default_factory=list)
    min_samples_leaf: int = 10
    min_slopes_per_x: int = 5
    ntrials: int = 1
    max_features: float = 1.0
    seed: int = 0
    out: Optional[Path] = None
    format: str = "csv"

    def validate(self):
        if self.feature == self.response:
            raise DataError(f"feature of interest {self.feature!r} is the response column")
        if self.format not in ("csv", "svg"):
            raise DataError(f"unknown format {self.format!r}")

    @classmethod
    def from_args(cls, a: argparse.Namespace) -> "RunConfig":
        cats = [c.strip() for c in (a.categorical or "").split(",") if c.strip()]
        return cls(Path(a.input), a.response, a.feature, cats, a.min_samples_leaf,
                   getattr(a, "min_slopes_per_x", 5), a.ntrials, a.max_features, a.seed,
                   Path(a.out) if a.out else None, a.format)


def _diag(msg: str):
    print(msg, file=sys.stderr)


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text, encoding="utf-8")


def _load(cfg: RunConfig) -> tuple[Dataset, int]:
    cfg.validate()
    ds = load_csv(cfg.input, cfg.response, cfg.categorical)
    return ds, ds.column_index(cfg.feature)


def cmd_pd(cfg: RunConfig) -> int:
    ds, j = _load(cfg)
    if ds.col_meta[j].is_categorical:
        raise DataError(f"column {cfg.feature!r} is categorical; use the catpd command")
    params = StratPDParams(cfg.min_samples_leaf, cfg.min_slopes_per_x, cfg.ntrials, cfg.max_features, cfg.seed)
    curve = stratpd(ds, j, params)
    text = curve_to_csv(curve) if cfg.format == "csv" else curve_to_svg(curve, cfg.feature, ds.response_name)
    _emit(text, cfg.out)
    _diag(f"ignored_rows={curve.ignored_rows} kept_points={len(curve)}")
    return EXIT_OK


def cmd_catpd(cfg: RunConfig) -> int:
    ds, j = _load(cfg)
    meta = ds.col_meta[j]
    if not meta.is_categorical:
        raise DataError(f"column {cfg.feature!r} is numeric; use the pd command "
                        "or list it in --categorical")
    params = CatStratPDParams(cfg.min_samples_leaf, cfg.ntrials, cfg.max_features, cfg.seed)
    effect = catstratpd(ds, j, params)
    if not effect.supported.any():
        _diag("no category is supported by any leaf")
        return EXIT_NO_CATEGORY
    labels = meta.category_labels
    if cfg.format == "csv":
        text = effect_to_csv(effect, labels)
    else:
        text = effect_to_svg(effect, labels, cfg.feature, ds.response_name)
    _emit(text, cfg.out)
    _diag(f"ignored_rows={effect.ignored_rows} supported_categories={int(effect.supported.sum())}")
    return EXIT_OK


def cmd_synth(a: argparse.Namespace) -> int:
    from .synth import SynthSpec, generate

    ds = generate(SynthSpec(a.kind, a.n, a.sigma, a.seed))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*ds.names, ds.response_name])
    cols = []
    for c, meta in enumerate(ds.col_meta):
        if meta.is_categorical:
            cols.append([meta.category_labels[int(v)] for v in ds.features[:, c]])
        else:
            cols.append([repr(float(v)) for v in ds.features[:, c]])
    cols.append([repr(float(v)) for v in ds.response])
    w.writerows(zip(*cols))
    _emit(buf.getvalue(), Path(a.out) if a.out else None)
    cats = [m.name for m in ds.col_meta if m.is_categorical]
    _diag(f"rows={ds.n} response={ds.response_name} categorical={','.join(cats) or '-'}")
    return EXIT_OK


def cmd_bench(a: argparse.Namespace) -> int:
    from .bench import run_bench

    sizes = [int(s) for s in a.sizes.split(",") if s.strip()] if a.sizes else []
    rows = run_bench(a.kind, sizes, a.min_samples_leaf, a.min_slopes_per_x, a.seed, a.repeats)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "seconds"])
    w.writerows((n, f"{t:.6f}") for n, t in rows)
    _emit(buf.getvalue(), Path(a.out) if a.out else None)
    return EXIT_OK


def cmd_oracle_check(a: argparse.Namespace) -> int:
    from .crosscheck import run_crosscheck

    results = run_crosscheck(a.datasets, a.seed, a.max_n, a.max_p)
    bad = [r for r in results if not r.ok]
    for r in results:
        _diag(f"dataset {r.dataset:3d} {r.kind:11s} n={r.n:3d} p={r.p} "
              f"{'ok' if r.ok else 'MISMATCH'} {r.detail}".rstrip())
    print(f"{len(results) - len(bad)}/{len(results)} datasets match")
    return EXIT_FAIL if bad else EXIT_OK


def _common(p: argparse.ArgumentParser, slopes: bool):
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--response", required=True, help="response column")
    p.add_argument("--feature", required=True, help="feature of interest")
    p.add_argument("--categorical", default="", help="comma-separated categorical columns")
    p.add_argument("--min-samples-leaf", type=int, default=10)
    if slopes:
        p.add_argument("--min-slopes-per-x", type=int, default=5)
    p.add_argument("--ntrials", type=int, default=1)
    p.add_argument("--max-features", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stratx", description="Model-free partial dependence from data.")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("pd", help="partial dependence curve of a numeric feature"), slopes=True)
    _common(sub.add_parser("catpd", help="per-category effect of a categorical feature"), slopes=False)

    from .synth import KINDS
    s = sub.add_parser("synth", help="write a synthetic dataset as CSV")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--n", type=int, default=2000,
                   help="rows (weather: observations per state and day)")
    s.add_argument("--sigma", type=float, default=None, help="noise std-dev")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output file (default: stdout)")

    from .bench import BENCH_KINDS
    b = sub.add_parser("bench", help="time PD computation against row count")
    b.add_argument("--kind", choices=BENCH_KINDS, default="bodyweight")
    b.add_argument("--sizes", default="1000,2000,5000,10000,20000,30000",
                   help="comma-separated ascending row counts")
    b.add_argument("--min-samples-leaf", type=int, default=10)
    b.add_argument("--min-slopes-per-x", type=int, default=5)
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", help="output file (default: stdout)")

    o = sub.add_parser("oracle-check", help="compare fast and reference routes on random small data")
    o.add_argument("--datasets", type=int, default=50)
    o.add_argument("--max-n", type=int, default=200)
    o.add_argument("--max-p", type=int, default=4)
    o.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "pd":
            return cmd_pd(RunConfig.from_args(args))
        if args.command == "catpd":
            return cmd_catpd(RunConfig.from_args(args))
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_oracle_check(args)
    except InsufficientSupportError as e:
        _diag(f"error: {e}")
        return EXIT_SUPPORT
    except (DataError, ValueError) as e:
        _diag(f"error: {e}")
        return EXIT_DATA
    except MergeError as e:
        _diag(f"error: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
