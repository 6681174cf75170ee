"""The evaluation metrics and how the quality/runtime trade-off is scored.

The headline metric rewards correctly computed pixels per second: a method
twice as fast tolerates twice the bad pixels at equal score.  Summary rows
over several scenes are medians/averages of per-scene values; averages do
not compose across the division.
"""

import numpy as np

from lfdepth.core import DepthMap
from lfdepth.metrics import badpix, m_metric, median_and_average, mse

rng = np.random.default_rng(0)
gt = DepthMap(rng.uniform(-1, 1, (64, 64)).astype(np.float32),
              np.ones((64, 64), bool))
noisy = DepthMap(gt.values + rng.normal(0, 0.05, (64, 64)).astype(np.float32),
                 gt.valid.copy())

bp = badpix(noisy, gt, threshold=0.07)
print(f"badpix(T=0.07) of a sigma=0.05 noisy map: {bp:.2f}%")
print(f"mse: {mse(noisy, gt):.5f}")
print(f"errors exactly at the threshold do not count: "
      f"{badpix(DepthMap(gt.values + 0.07, gt.valid), gt):.1f}%")

print()
print("quality/runtime scoring, per scene:")
for bad, runtime in [(5.0, 10.0), (5.0, 5.0), (20.0, 1.0)]:
    print(f"  {bad:5.1f}% bad in {runtime:5.1f}s -> {m_metric(bad, runtime):7.2f} %/s")

print()
per_scene_bad = [10.0, 14.0, 12.0, 16.0]
per_scene_time = [5.0, 6.0, 5.5, 7.0]
per_scene_m = [m_metric(b, t) for b, t in zip(per_scene_bad, per_scene_time)]
med, avg = median_and_average(per_scene_m)
composed = m_metric(float(np.mean(per_scene_bad)), float(np.mean(per_scene_time)))
print(f"per-scene metric values: {[f'{m:.2f}' for m in per_scene_m]}")
print(f"median {med:.2f}, average {avg:.2f}")
print(f"metric of the averages would be {composed:.2f} -- not the same thing")
