"""Reproducible performance measurement over benchmark-layout scenes.

Each scene is run ``repetitions`` times; quality is asserted identical
across repetitions (the pipeline is deterministic) and timings are reduced
to the per-stage median.  Hypothesis-evaluation counters make the border
speedup auditable: the counted evaluations must equal the border-map sum
exactly, and the analytic lower bound on the full-scan speedup is reported
alongside the measured ratio.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import LightFieldError, PipelineConfig
from .metrics import EvalReport, median_and_average
from .pipeline import PipelineResult, StageTiming, run_pipeline
from .scene import load_scene


class BenchmarkError(LightFieldError):
    pass


@dataclass
class SceneBenchRow:
    name: str
    timing: StageTiming
    report: EvalReport | None
    hypothesis_evals: int
    expected_evals: int
    border_coverage: float
    full_scan_evals: int
    speedup_vs_full_scan: float
    speedup_lower_bound: float
    failed: bool = False
    error: str = ""


@dataclass
class BenchTable:
    rows: list[SceneBenchRow] = field(default_factory=list)
    aborted: bool = False

    def summary(self) -> dict[str, tuple[float, float]]:
        """(median, average) per summary column over successful rows."""
        ok = [r for r in self.rows if not r.failed]
        out: dict[str, tuple[float, float]] = {}
        if not ok:
            return out
        out["runtime_seconds"] = median_and_average(r.timing.total for r in ok)
        scored = [r for r in ok if r.report is not None]
        if scored:
            out["badpix_percent"] = median_and_average(
                r.report.badpix_percent for r in scored
            )
            out["m_metric"] = median_and_average(
                r.report.m_metric for r in scored
            )
        return out

    def format_text(self) -> str:
        header = (
            f"{'scene':<18} {'runtime[s]':>10} {'badpix[%]':>10} "
            f"{'M[%/s]':>10} {'coverage':>9} {'speedup':>8}"
        )
        lines = [header, "-" * len(header)]
        for row in self.rows:
            if row.failed:
                lines.append(f"{row.name:<18} FAILED: {row.error}")
                continue
            bp = f"{row.report.badpix_percent:10.3f}" if row.report else " " * 10
            mm = f"{row.report.m_metric:10.3f}" if row.report else " " * 10
            lines.append(
                f"{row.name:<18} {row.timing.total:10.3f} {bp} {mm} "
                f"{row.border_coverage:9.3f} {row.speedup_vs_full_scan:8.2f}"
            )
        for label, (med, avg) in [
            (name, vals) for name, vals in self.summary().items()
        ]:
            lines.append(f"{label:<18} median {med:10.3f}  average {avg:10.3f}")
        if self.aborted:
            lines.append("! aborted after failure; partial results above")
        return "\n".join(lines)

    def to_json(self) -> str:
        payload = {
            "aborted": self.aborted,
            "rows": [
                {
                    "name": r.name,
                    "failed": r.failed,
                    "error": r.error,
                    "runtime_seconds": r.timing.total,
                    "stage_seconds": r.timing.seconds,
                    "badpix_percent": r.report.badpix_percent if r.report else None,
                    "mse": r.report.mse if r.report else None,
                    "m_metric": r.report.m_metric if r.report else None,
                    "hypothesis_evals": r.hypothesis_evals,
                    "border_coverage": r.border_coverage,
                    "speedup_vs_full_scan": r.speedup_vs_full_scan,
                    "speedup_lower_bound": r.speedup_lower_bound,
                }
                for r in self.rows
            ],
            "summary": {
                k: {"median": v[0], "average": v[1]}
                for k, v in self.summary().items()
            },
        }
        return json.dumps(payload, indent=2)


def speedup_lower_bound(n_hyp: int, border_lambda: int, bordered_fraction: float) -> float:
    """Analytic lower bound on the full-scan/bordered evaluation ratio.

    Bordered pixels evaluate at most ``2 * lambda + 1`` hypotheses and the
    rest the full ``n_hyp + 1``, so the ratio is at least
    ``(N + 1) / (f * (2λ + 1) + (1 - f) * (N + 1))``.
    """
    window = 2 * border_lambda + 1
    full = n_hyp + 1
    denom = bordered_fraction * window + (1.0 - bordered_fraction) * full
    return full / denom


def _bench_result(result: PipelineResult, config: PipelineConfig) -> tuple:
    counts = result.borders.hypothesis_counts()
    expected = int(counts.sum())
    if result.hypothesis_evals != expected:
        raise BenchmarkError(
            f"hypothesis counter {result.hypothesis_evals} does not match "
            f"border accounting {expected}"
        )
    pixels = result.depth.values.size
    full_evals = pixels * (result.grid.n_hyp + 1)
    ratio = full_evals / expected
    bound = speedup_lower_bound(
        result.grid.n_hyp, config.border_lambda, result.border_coverage
    )
    return expected, full_evals, ratio, bound


def run_benchmark(
    scenes,
    config: PipelineConfig | None = None,
    repetitions: int = 3,
    workers: int = 1,
) -> BenchTable:
    """Benchmark the pipeline over a list of scene directories.

    Scenes run sequentially; stage timings are medians over repetitions and
    quality must be identical across repetitions.  The first scene failure
    aborts the run and flags the table as partial.
    """
    if repetitions < 1:
        raise BenchmarkError("repetitions must be at least 1")
    config = config or PipelineConfig()
    table = BenchTable()
    for scene_dir in scenes:
        scene_dir = Path(scene_dir)
        name = scene_dir.name
        try:
            scene = load_scene(scene_dir)
            results = [
                run_pipeline(scene.light_field, scene.drange, config, workers)
                for _ in range(repetitions)
            ]
            base = results[0].depth.values
            for other in results[1:]:
                if not np.array_equal(base, other.depth.values):
                    raise BenchmarkError(f"{name}: output varies across repetitions")
            timing = StageTiming(
                seconds={
                    stage: float(np.median([r.timing.seconds[stage] for r in results]))
                    for stage in results[0].timing.seconds
                },
                total=float(np.median([r.timing.total for r in results])),
                pixels=results[0].timing.pixels,
            )
            result = results[0]
            expected, full_evals, ratio, bound = _bench_result(result, config)
            report = None
            if scene.gt is not None:
                report = EvalReport.from_maps(
                    result.per_view_depth(),
                    scene.gt,
                    runtime_seconds=timing.total,
                    mask=scene.mask,
                )
            table.rows.append(
                SceneBenchRow(
                    name=name,
                    timing=timing,
                    report=report,
                    hypothesis_evals=result.hypothesis_evals,
                    expected_evals=expected,
                    border_coverage=result.border_coverage,
                    full_scan_evals=full_evals,
                    speedup_vs_full_scan=ratio,
                    speedup_lower_bound=bound,
                )
            )
        except LightFieldError as exc:
            table.rows.append(
                SceneBenchRow(
                    name=name,
                    timing=StageTiming(),
                    report=None,
                    hypothesis_evals=0,
                    expected_evals=0,
                    border_coverage=0.0,
                    full_scan_evals=0,
                    speedup_vs_full_scan=0.0,
                    speedup_lower_bound=0.0,
                    failed=True,
                    error=str(exc),
                )
            )
            table.aborted = True
            break
    return table
