"""A small statevector simulator for one- and two-qubit circuits.

Its purpose is narrow: certify that the Hadamard/CNOT diffusion stage reduces
to a deterministic bitwise XOR on computational basis states.  The cipher
itself uses :func:`diffuse`, the classical XOR that the circuit implements.

Qubit 0 is the most significant bit of the basis index, so ``|10>`` is index 2.
"""

from __future__ import annotations

import numpy as np

NORM_TOL = 1e-12
BASIS_TOL = 1e-9

H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
I2 = np.eye(2, dtype=np.complex128)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)

GATES = {"H": H, "X": X, "I": I2, "CNOT": CNOT, "SWAP": SWAP}


class DimensionMismatchError(ValueError):
    pass


class NondeterministicStateError(RuntimeError):
    """Measurement of a non-basis state would not be reproducible."""


def is_unitary(g, tol: float = NORM_TOL) -> bool:
    g = np.asarray(g, dtype=np.complex128)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        return False
    return np.allclose(g @ g.conj().T, np.eye(g.shape[0]), rtol=0.0, atol=tol)


def basis_state(index: int, n_qubits: int) -> np.ndarray:
    if n_qubits not in (1, 2):
        raise DimensionMismatchError("only 1- and 2-qubit registers are supported")
    dim = 1 << n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    s = np.zeros(dim, dtype=np.complex128)
    s[index] = 1.0
    return s


def _n_qubits(state: np.ndarray) -> int:
    dim = state.shape[0]
    if state.ndim != 1 or dim not in (2, 4):
        raise DimensionMismatchError(f"statevector must have length 2 or 4, got {state.shape}")
    return dim.bit_length() - 1


def apply_gate(state, g, targets=None) -> np.ndarray:
    """Apply gate ``g`` to the qubits listed in ``targets``.

    ``targets`` defaults to all qubits for a full-width gate, or qubit 0 for a
    single-qubit gate.  For a two-qubit gate the first target is the control
    (for CNOT) and the order ``(1, 0)`` swaps the roles.
    """
    state = np.asarray(state, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    n = _n_qubits(state)
    k = {2: 1, 4: 2}.get(g.shape[0])
    if g.shape != (g.shape[0], g.shape[0]) or k is None:
        raise DimensionMismatchError(f"unsupported gate shape {g.shape}")
    if targets is None:
        targets = tuple(range(k))
    targets = tuple(int(t) for t in targets)
    if len(targets) != k or len(set(targets)) != k:
        raise DimensionMismatchError(f"gate acts on {k} qubit(s), targets={targets}")
    if any(t < 0 or t >= n for t in targets):
        raise DimensionMismatchError(f"targets {targets} out of range for {n} qubit(s)")

    if k == n:
        full = SWAP @ g @ SWAP if targets == (1, 0) else g
    else:
        full = np.kron(g, I2) if targets[0] == 0 else np.kron(I2, g)
    return full @ state


def norm(state) -> float:
    return float(np.sqrt(np.sum(np.abs(np.asarray(state)) ** 2)))


def measure_deterministic(state) -> int:
    """Return the basis index of a computational basis state.

    Raises NondeterministicStateError unless some amplitude has magnitude
    at least ``1 - BASIS_TOL``.
    """
    amps = np.abs(np.asarray(state, dtype=np.complex128))
    idx = int(np.argmax(amps))
    if amps[idx] < 1.0 - BASIS_TOL:
        raise NondeterministicStateError(
            f"state is not a basis state (largest |amplitude| = {amps[idx]:.6g})"
        )
    return idx


def quantum_xor_bit(a: int, k: int) -> int:
    """XOR two bits with a CNOT: control holds ``k``, target holds ``a``.

    The circuit prepares ``|k, a>``, applies a Hadamard pair to the target
    (``H H = I``), then the CNOT, and measures the target qubit.
    """
    if a not in (0, 1) or k not in (0, 1):
        raise ValueError(f"bits must be 0 or 1, got a={a!r}, k={k!r}")
    s = basis_state((k << 1) | a, 2)
    s = apply_gate(s, H, (1,))
    s = apply_gate(s, H, (1,))
    s = apply_gate(s, CNOT, (0, 1))
    return measure_deterministic(s) & 1


def quantum_xor_byte(a: int, k: int) -> int:
    """Bytewise XOR assembled from eight :func:`quantum_xor_bit` circuits."""
    return sum(quantum_xor_bit((a >> b) & 1, (k >> b) & 1) << b for b in range(8))


def diffuse(img, key) -> np.ndarray:
    """Bitwise XOR of an image with a same-shaped key matrix (self-inverse)."""
    img = np.asarray(img, dtype=np.uint8)
    key = np.asarray(key, dtype=np.uint8)
    if img.shape != key.shape:
        raise DimensionMismatchError(f"image {img.shape} vs key {key.shape}")
    return np.bitwise_xor(img, key)
