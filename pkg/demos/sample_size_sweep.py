"""
How many samples does each method need?
=======================================

A small replicated benchmark on the nonlinear network. Sweep points reuse
the same replicate seeds, so the comparison across sample sizes is paired.
Raise ``replicates`` for smoother numbers.
"""

from dpmnet.benchmark import BenchmarkPlan, run_benchmark
from dpmnet.simulate import SimulationConfig

methods = ("cor", "pcor", "reg-pcor", "dcor", "dpm", "reg-dpm", "aracne")
plan = BenchmarkPlan(
    generator="gs",
    methods=methods,
    replicates=5,
    config=SimulationConfig(n=200, noise_sigma=1.0, seed=0),
    sweep_param="samples",
    sweep_values=(30, 50, 100, 200),
)
result = run_benchmark(plan)

print("mean AUPRC (failed replicates excluded)")
print(f"{'n':>5}" + "".join(f"{m:>10}" for m in methods))
for n in plan.points():
    print(f"{n:>5}" + "".join(f"{result.mean(m, 'auprc', n):10.3f}" for m in methods))

###############################################################################
# The full result, with per-replicate values and seeds, serializes to JSON
# and a CSV summary via ``result.write("bench.json", "bench.csv")``.
