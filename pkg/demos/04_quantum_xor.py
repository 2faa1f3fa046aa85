"""
Certifying the diffusion XOR with a two-qubit simulator
=======================================================

The diffusion stage is described as a small quantum circuit.  A statevector
simulator shows that the circuit computes exactly a classical XOR, which is
what the vectorised implementation uses.
"""

# %%
import numpy as np

from qmedshield import qsim

# %% [markdown]
# Basic gates.  Qubit 0 is the most significant bit of the basis index.

# %%
plus = qsim.apply_gate(qsim.basis_state(0, 1), qsim.H)
print("H|0>      =", np.round(plus, 4))
print("H H |0>   =", np.round(qsim.apply_gate(plus, qsim.H), 4))
print("CNOT|10>  = |{:02b}>".format(qsim.measure_deterministic(qsim.apply_gate(qsim.basis_state(2, 2), qsim.CNOT))))
print("unitary:", {name: qsim.is_unitary(g) for name, g in qsim.GATES.items()})

# %% [markdown]
# Truth table of the per-bit circuit: prepare |k, a>, apply H twice to the
# data qubit, CNOT from key to data, then measure the data qubit.

# %%
for a in (0, 1):
    for k in (0, 1):
        print(f"a={a} k={k} -> {qsim.quantum_xor_bit(a, k)}")

# %% [markdown]
# Byte level: eight independent circuits, compared with numpy XOR.

# %%
rng = np.random.default_rng(1)
img = rng.integers(0, 256, (16, 16), dtype=np.uint8)
km = rng.integers(0, 256, (16, 16), dtype=np.uint8)
sim = np.vectorize(qsim.quantum_xor_byte)(img, km)
print("simulator agrees with vectorised diffusion:", np.array_equal(sim, qsim.diffuse(img, km)))
