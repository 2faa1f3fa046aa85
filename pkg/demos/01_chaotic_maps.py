"""
The three chaotic maps behind the key material
==============================================

Each map turns a handful of real-valued seeds into a long, key-dependent
stream.  This script iterates all three, shows how fast nearby seeds part
ways, and writes bifurcation / phase-portrait CSV files that any plotting
tool can read.
"""

# %%
import sys
from pathlib import Path

import numpy as np

from qmedshield import chaos, plotdata
from qmedshield.chaos import HenonParams, HybridParams, QuantumLogisticParams

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_output")
out_dir.mkdir(exist_ok=True)

# %% [markdown]
# Henon map: the classic parameters alpha=1.4, beta=0.3 give the strange
# attractor.  Its first 8 x-values after burn-in are ranked to form the
# bit-plane permutation.

# %%
henon = HenonParams(0.3, 0.05)
xy = chaos.henon_sequence(henon, 8)
print("Henon x after burn-in:", np.round(xy[:, 0], 4))
print("bit-plane permutation:", chaos.derive_bitplane_key(henon))
print("key-matrix selector:  ", chaos.derive_selector_key(henon))

# %% [markdown]
# Hybrid logistic-sine map: stays inside [0, 1) for every r in [0.6, 1.2].

# %%
hyb = chaos.hybrid_sequence(HybridParams(0.37, 1.0), 10_000)
print(f"hybrid map: min={hyb.min():.4f} max={hyb.max():.4f} mean={hyb.mean():.4f}")

# %% [markdown]
# Quantum logistic map: three coupled components.  A 1e-10 change in x0
# decorrelates the derived byte stream almost completely.

# %%
a = chaos.quantum_logistic_sequence(QuantumLogisticParams(0.5, 0.05, 0.02), 4096)
b = chaos.quantum_logistic_sequence(QuantumLogisticParams(0.5 + 1e-10, 0.05, 0.02), 4096)
ka = chaos.derive_key_matrix(a[:, 0], w=64, h=64)
kb = chaos.derive_key_matrix(b[:, 0], w=64, h=64)
print(f"key-matrix bytes differing after a 1e-10 seed change: {np.mean(ka != kb):.2%}")
raw_a = chaos.quantum_logistic_sequence(QuantumLogisticParams(0.5, 0.05, 0.02, burn_in=0), 200)
raw_b = chaos.quantum_logistic_sequence(QuantumLogisticParams(0.5 + 1e-10, 0.05, 0.02, burn_in=0), 200)
first = int(np.argmax(np.abs(raw_a[:, 0] - raw_b[:, 0]) > 1e-3))
print(f"without burn-in, the orbits differ by > 1e-3 after {first} steps")

# %% [markdown]
# Plot data.  Load the CSVs in a spreadsheet or with pandas/matplotlib:
# scatter alpha against x for the Henon file, and x/y, y/z, x/z pairs for
# the phase portrait.

# %%
rows = plotdata.bifurcation("henon", 1.0, 1.4, steps=200, keep=100)
(out_dir / "henon_bifurcation.csv").write_text(plotdata.to_csv(rows, ["alpha", "x"]))
phase = plotdata.qlogistic_phase(n=5000)
(out_dir / "qlogistic_phase.csv").write_text(plotdata.to_csv(phase, ["x", "y", "z"]))
print(f"wrote {len(rows)} bifurcation rows and {len(phase)} phase points to {out_dir}/")
