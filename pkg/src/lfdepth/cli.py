"""Command-line interface.

Subcommands: ``estimate`` (run the pipeline on a scene directory),
``eval`` (score a result PFM against ground truth), ``synth`` (render a
synthetic benchmark-layout scene from a JSON spec), ``oracle`` (full-scan
reference line fit) and ``bench`` (multi-scene benchmark table).

Written depth maps are in per-view-step disparity units.  Configuration
files are flat ``key = value`` text; command-line flags override file
values.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .bench import run_benchmark
from .core import (
    DepthMap,
    LightFieldError,
    PipelineConfig,
)
from .linefit import HypothesisGrid, full_scan_oracle
from .metrics import DEFAULT_BADPIX_THRESHOLD, EvalReport, badpix, mse
from .pfm import read_pfm, write_pfm
from .pipeline import run_pipeline
from .scene import load_scene, parse_flat_config, write_scene
from .synthetic import SyntheticSceneSpec

_BOOL_KEYS = {
    "enable_top_bottom",
    "enable_edge_exclusion",
    "literal_lr_check",
    "literal_tb_confidence",
    "force_full_scan",
}
_INT_KEYS = {"p1", "p2", "border_lambda", "median_kernel", "num_paths"}
_FLOAT_KEYS = {"phi", "h", "tau", "sobel_threshold"}
_KEY_ALIASES = {"lambda": "border_lambda"}


def _parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise LightFieldError(f"cannot parse boolean value {text!r}")


def _parse_pattern(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        i, j = chunk.split(",")
        pairs.append((int(i), int(j)))
    return tuple(pairs)


def load_config(path=None, **overrides) -> PipelineConfig:
    """Build a PipelineConfig from an optional flat file plus overrides."""
    values: dict = {}
    if path is not None:
        for key, raw in parse_flat_config(path).items():
            key = _KEY_ALIASES.get(key, key)
            if key in _BOOL_KEYS:
                values[key] = _parse_bool(raw)
            elif key in _INT_KEYS:
                values[key] = int(raw)
            elif key in _FLOAT_KEYS:
                values[key] = float(raw)
            elif key == "census_pattern":
                values[key] = _parse_pattern(raw)
            else:
                raise LightFieldError(f"unknown configuration key {key!r}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig(**values)


def _dump_intermediates(result, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, data in result.intermediates.items():
        if isinstance(data, DepthMap):
            write_pfm(data, out_dir / f"{name}.pfm")
        else:
            write_pfm(np.asarray(data, np.float32), out_dir / f"{name}.pfm")


def _cmd_estimate(args) -> int:
    config = load_config(
        args.config,
        enable_top_bottom=True if args.top_bottom else None,
        enable_edge_exclusion=True if args.edge_exclusion else None,
    )
    scene = load_scene(args.input)
    start = time.perf_counter()
    result = run_pipeline(
        scene.light_field,
        scene.drange,
        config,
        workers=args.threads,
        collect_intermediates=args.dump_intermediates is not None,
    )
    elapsed = time.perf_counter() - start
    write_pfm(result.per_view_depth(), args.output)
    if args.dump_intermediates is not None:
        _dump_intermediates(result, Path(args.dump_intermediates))
    print(result.timing.format_table())
    print(f"border coverage: {result.border_coverage:.3f}")
    print(f"hypothesis evaluations: {result.hypothesis_evals}")
    print(f"wall time: {elapsed:.3f} s")
    print(f"wrote {args.output}")
    return 0


def _cmd_eval(args) -> int:
    result = read_pfm(args.result)
    gt = read_pfm(args.gt)
    mask = None
    if args.mask is not None:
        from PIL import Image

        with Image.open(args.mask) as img:
            mask = np.asarray(img.convert("L")) > 0
    if args.runtime is not None:
        report = EvalReport.from_maps(
            result, gt, runtime_seconds=args.runtime,
            threshold=args.threshold, mask=mask,
        )
        print(report.to_text())
        if args.report is not None:
            Path(args.report).write_text(report.to_json())
    else:
        bp = badpix(result, gt, args.threshold, mask)
        err = mse(result, gt, mask)
        print(f"badpix_percent = {bp:.6f}")
        print(f"mse = {err:.6f}")
        print(f"threshold = {args.threshold}")
        if args.report is not None:
            import json

            Path(args.report).write_text(
                json.dumps(
                    {"badpix_percent": bp, "mse": err, "threshold": args.threshold},
                    indent=2,
                )
            )
    return 0


def _cmd_synth(args) -> int:
    spec = SyntheticSceneSpec.from_json(Path(args.spec).read_text())
    out = write_scene(spec, args.out, seed=args.seed)
    print(f"wrote synthetic scene to {out}")
    return 0


def _cmd_oracle(args) -> int:
    config = load_config(args.config)
    scene = load_scene(args.input)
    grid = HypothesisGrid.from_range(
        scene.drange, scene.light_field.n, config.tau
    )
    start = time.perf_counter()
    depth = full_scan_oracle(scene.light_field, grid, config)
    elapsed = time.perf_counter() - start
    per_view = DepthMap(
        depth.values / np.float32(scene.light_field.n - 1), depth.valid
    )
    write_pfm(per_view, args.output)
    print(f"full scan over {grid.n_hyp + 1} hypotheses took {elapsed:.3f} s")
    print(f"wrote {args.output}")
    return 0


def _cmd_bench(args) -> int:
    config = load_config(args.config)
    table = run_benchmark(
        args.scenes, config, repetitions=args.repetitions, workers=args.threads
    )
    print(table.format_text())
    if args.output is not None:
        Path(args.output).write_text(table.to_json())
        print(f"wrote {args.output}")
    return 1 if table.aborted else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfdepth",
        description="Depth map estimation from 4D light fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="run the depth pipeline on a scene")
    est.add_argument("--input", required=True, help="scene directory")
    est.add_argument("--output", required=True, help="output PFM path")
    est.add_argument("--config", default=None, help="flat key=value config file")
    est.add_argument("--threads", type=int, default=1, help="worker count")
    est.add_argument("--top-bottom", action="store_true",
                     help="also match the vertical extreme views")
    est.add_argument("--edge-exclusion", action="store_true",
                     help="exclude center-view edges from the borders")
    est.add_argument("--dump-intermediates", default=None, metavar="DIR",
                     help="write every intermediate map as PFM into DIR")
    est.set_defaults(func=_cmd_estimate)

    ev = sub.add_parser("eval", help="score a result against ground truth")
    ev.add_argument("--result", required=True)
    ev.add_argument("--gt", required=True)
    ev.add_argument("--threshold", type=float, default=DEFAULT_BADPIX_THRESHOLD)
    ev.add_argument("--runtime", type=float, default=None,
                    help="pipeline runtime in seconds (enables the M metric)")
    ev.add_argument("--mask", default=None, help="evaluation mask PNG")
    ev.add_argument("--report", default=None, help="write a JSON report here")
    ev.set_defaults(func=_cmd_eval)

    sy = sub.add_parser("synth", help="render a synthetic scene")
    sy.add_argument("--spec", required=True, help="JSON scene spec")
    sy.add_argument("--out", required=True, help="output scene directory")
    sy.add_argument("--seed", type=int, default=0)
    sy.set_defaults(func=_cmd_synth)

    orc = sub.add_parser("oracle", help="full-scan reference line fit")
    orc.add_argument("--input", required=True)
    orc.add_argument("--output", required=True)
    orc.add_argument("--config", default=None)
    orc.set_defaults(func=_cmd_oracle)

    be = sub.add_parser("bench", help="benchmark scenes and print a table")
    be.add_argument("--scenes", nargs="+", required=True)
    be.add_argument("--repetitions", type=int, default=3)
    be.add_argument("--threads", type=int, default=1)
    be.add_argument("--config", default=None)
    be.add_argument("--output", default=None, help="structured results JSON")
    be.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LightFieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
