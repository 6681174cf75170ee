"""What the stereo prior buys: bordered search versus full scan.

Confident pixels search a window of 2*lambda + 1 = 5 hypotheses instead of
all N + 1; the evaluation counters make the saving exact, and the outputs
stay essentially identical.
"""

import time

import numpy as np

from lfdepth.bench import speedup_lower_bound
from lfdepth.core import PipelineConfig
from lfdepth.linefit import full_scan_oracle
from lfdepth.pipeline import run_pipeline
from lfdepth.scene import per_view_range_to_full
from lfdepth.synthetic import LayerSpec, SyntheticSceneSpec, generate_synthetic

spec = SyntheticSceneSpec(
    n=9, m=9, width=96, height=96,
    layers=(LayerSpec(0.75),), disp_min=-1.0, disp_max=1.0,
)
lf, _ = generate_synthetic(spec, seed=23)
drange = per_view_range_to_full(spec.disp_min, spec.disp_max, spec.n)
config = PipelineConfig()

start = time.perf_counter()
result = run_pipeline(lf, drange, config)
bordered_seconds = time.perf_counter() - start

pixels = lf.height * lf.width
full_evals = pixels * (result.grid.n_hyp + 1)
print(f"hypotheses per pixel: full scan {result.grid.n_hyp + 1}, "
      f"confident window {2 * config.border_lambda + 1}")
print(f"border coverage: {result.border_coverage * 100:.1f}% of pixels")
print(f"evaluations: bordered {result.hypothesis_evals}, full {full_evals}")
ratio = full_evals / result.hypothesis_evals
bound = speedup_lower_bound(
    result.grid.n_hyp, config.border_lambda, result.border_coverage
)
print(f"evaluation reduction: {ratio:.1f}x (analytic lower bound {bound:.1f}x)")

start = time.perf_counter()
oracle = full_scan_oracle(lf, result.grid, config)
full_seconds = time.perf_counter() - start
print(f"wall time: bordered pipeline {bordered_seconds:.2f}s "
      f"(stereo prior included), full scan {full_seconds:.2f}s")

interior = (slice(8, -8), slice(8, -8))
agree = np.mean(result.depth.values[interior] == oracle.values[interior])
print(f"interior agreement with the full scan: {agree * 100:.2f}%")
