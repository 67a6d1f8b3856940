"""
Reconstructing the nonlinear test network
=========================================

Simulate the built-in 11-node network, score all edges with every method,
and compare AUROC/AUPRC against the known skeleton. Finally keep the
reg-dpm edges above 0.12 and label them against the truth.
"""

from dpmnet.evaluate import apply_threshold, evaluate
from dpmnet.methods import score_methods
from dpmnet.simulate import SimulationConfig, gs_functions, gs_topology, simulate_gs

dag, gold = gs_topology()
print("edges and their functions:")
for (a, b), f in gs_functions(dag).items():
    print(f"  {dag.names[a]} -> {dag.names[b]}: {f}")

d, gold = simulate_gs(SimulationConfig(n=200, noise_sigma=1.0, seed=7))
scores = score_methods(d)

print(f"\n{'method':<16}{'AUROC':>8}{'AUPRC':>8}")
for method, m in scores.items():
    ev = evaluate(m, gold)
    print(f"{method:<16}{ev.auroc:8.3f}{ev.auprc:8.3f}")

###############################################################################
# Thresholding gives a concrete network; missed gold edges come last.

print("\nreg-dpm network at |score| >= 0.12")
lam = scores["reg-dpm"].metadata["shrinkage_intensity"]
print(f"(shrinkage intensity {lam:.3f})")
for a, b, s, label in apply_threshold(scores["reg-dpm"], 0.12, gold):
    print(f"  {a:>3} - {b:<3} {s:+.3f} {label}")
