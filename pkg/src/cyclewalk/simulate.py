"""Circuit execution: statevector simulation, shot sampling, and exact
density-matrix simulation under the parametrized noise model.

Gate-by-gate amplitude application keeps statevector runs at O(4**w) per
gate; density matrices are dense and limited to width 6.  Noisy runs apply
a depolarizing channel after every gate and a thermal-relaxation channel
over every scheduled idle window, per the noise model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, apply_gate_to_tensor
from .gates import gate_matrix
from .noise import NoiseModel, depolarizing_kraus, thermal_relaxation_kraus
from .transpile import ScheduledCircuit, schedule

__all__ = [
    "Distribution",
    "run_exact",
    "measure_positions",
    "state_to_density",
    "validate_density",
    "run_noisy",
    "readout_distribution",
]

MAX_DENSITY_WIDTH = 6


@dataclass(frozen=True)
class Distribution:
    """Probabilities (or counts) over measured outcomes.

    ``shots`` is None for exact probabilities; otherwise ``outcomes`` holds
    sampled counts summing to ``shots``.
    """

    outcomes: dict[int, float]
    shots: int | None = None

    def probabilities(self) -> dict[int, float]:
        """Outcome map normalized to probabilities."""
        if self.shots is None:
            return dict(self.outcomes)
        if self.shots <= 0:
            raise ValueError("cannot normalize a distribution with zero shots")
        return {k: v / self.shots for k, v in self.outcomes.items()}

    def to_csv(self) -> str:
        header = f"# shots={self.shots if self.shots is not None else 'exact'}"
        lines = [header, "outcome,count_or_prob"]
        for k in sorted(self.outcomes):
            lines.append(f"{k},{self.outcomes[k]!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "Distribution":
        shots: int | None = None
        outcomes: dict[int, float] = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                value = line.split("=", 1)[1].strip()
                shots = None if value == "exact" else int(value)
            elif not line.startswith("outcome"):
                key, val = line.split(",")
                outcomes[int(key)] = float(val)
        return cls(outcomes=outcomes, shots=shots)


def run_exact(circuit: Circuit, initial: np.ndarray) -> np.ndarray:
    """Apply the circuit's gates to a statevector; norm-checked result."""
    dim = 1 << circuit.width
    if initial.shape != (dim,):
        raise ValueError(
            f"initial state has shape {initial.shape}, circuit needs ({dim},)"
        )
    tensor = initial.astype(complex).reshape((2,) * circuit.width)
    for gate in circuit.gates:
        tensor = apply_gate_to_tensor(tensor, gate, circuit.width)
    state = tensor.reshape(dim)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-10:
        raise ArithmeticError(f"statevector norm drifted to {norm}")
    return state


def _marginal_probabilities(
    state: np.ndarray, measured_qubits: tuple[int, ...], width: int
) -> np.ndarray:
    """Probabilities over outcomes sum_i 2**i * bit(measured_qubits[i])."""
    for q in measured_qubits:
        if not 0 <= q < width:
            raise ValueError(f"measured qubit {q} outside width {width}")
    probs = np.abs(state.reshape((2,) * width)) ** 2
    keep = [width - 1 - q for q in measured_qubits]
    drop = tuple(ax for ax in range(width) if ax not in keep)
    marginal = probs.sum(axis=drop) if drop else probs
    # surviving axes come out in increasing original order; realign to `keep`
    remaining = sorted(keep)
    marginal = np.transpose(marginal, [remaining.index(k) for k in keep])
    out = np.zeros(1 << len(measured_qubits))
    for idx in np.ndindex(*([2] * len(measured_qubits))):
        outcome = sum(bit << i for i, bit in enumerate(idx))
        out[outcome] = marginal[idx]
    return out


def measure_positions(
    state: np.ndarray,
    measured_qubits: tuple[int, ...],
    shots: int = 0,
    seed: int | None = None,
) -> Distribution:
    """Measure the given qubits; bit i of the outcome is measured_qubits[i].

    ``shots == 0`` returns exact probabilities; otherwise multinomial counts
    drawn with the given seed.
    """
    width = int(np.log2(state.size))
    probs = _marginal_probabilities(state, tuple(measured_qubits), width)
    if shots == 0:
        return Distribution(outcomes={k: float(p) for k, p in enumerate(probs)})
    if shots < 0:
        raise ValueError(f"shots must be >= 0, got {shots}")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs / probs.sum())
    return Distribution(
        outcomes={k: int(c) for k, c in enumerate(counts)}, shots=shots
    )


# ---------------------------------------------------------------------------
# density-matrix simulation

def state_to_density(state: np.ndarray) -> np.ndarray:
    return np.outer(state, state.conj())


def validate_density(rho: np.ndarray) -> None:
    """Reject arrays that are not unit-trace Hermitian positive matrices."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise ValueError(f"density matrix trace is {np.trace(rho).real}, expected 1")
    if np.linalg.norm(rho - rho.conj().T) > 1e-10:
        raise ValueError("density matrix is not Hermitian")
    smallest = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if smallest < -1e-9:
        raise ValueError(f"density matrix has negative eigenvalue {smallest}")


def _apply_matrix_rows(rho_like: np.ndarray, m: np.ndarray, qubits, width: int):
    """Apply a 2**k matrix to the row index of a (dim, dim) array."""
    k = len(qubits)
    tensor = rho_like.reshape((2,) * width + (rho_like.shape[1],))
    mt = m.reshape((2,) * (2 * k))
    axes = [width - 1 - q for q in qubits]
    moved = np.tensordot(mt, tensor, axes=(list(range(k, 2 * k)), axes))
    moved = np.moveaxis(moved, list(range(k)), axes)
    return moved.reshape(rho_like.shape)


def _apply_kraus(rho: np.ndarray, kraus: list[np.ndarray], qubits, width: int):
    out = np.zeros_like(rho)
    for k in kraus:
        left = _apply_matrix_rows(rho, k, qubits, width)
        out += _apply_matrix_rows(left.conj().T, k, qubits, width).conj().T
    return out


def _check_density(rho: np.ndarray, where: str) -> None:
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-9:
        raise ArithmeticError(f"density trace drifted to {trace} {where}")


def run_noisy(
    circuit: Circuit | ScheduledCircuit,
    initial: np.ndarray,
    nm: NoiseModel,
) -> np.ndarray:
    """Exact channel simulation: unitaries plus depolarizing after each gate
    and thermal relaxation over idle windows.

    Accepts a plain circuit (scheduled greedily here) or a ScheduledCircuit
    whose start times (e.g. with DD pulses inserted) are trusted as given.
    """
    sc = circuit if isinstance(circuit, ScheduledCircuit) else schedule(circuit, nm)
    circ = sc.circuit
    if circ.width > MAX_DENSITY_WIDTH:
        raise ValueError(f"density simulation capped at width {MAX_DENSITY_WIDTH}")
    dim = 1 << circ.width
    if initial.shape != (dim, dim):
        raise ValueError(f"initial density has shape {initial.shape}, need {(dim, dim)}")
    validate_density(initial)

    events: list[tuple[float, int, str, object]] = []
    for seq, (gate, start) in enumerate(zip(circ.gates, sc.start_times)):
        events.append((start, seq, "gate", gate))
    base = len(events)
    for offset, (qubit, t0, t1) in enumerate(sc.idle_windows):
        if t1 - t0 >= nm.dur_idle_unit - 1e-12:
            events.append((t0, base + offset, "idle", (qubit, t1 - t0)))
    events.sort(key=lambda e: (e[0], e[1]))

    rho = initial.astype(complex)
    for _, _, kind, payload in events:
        if kind == "gate":
            gate = payload
            if gate.kind == "BARRIER":
                continue
            u = gate_matrix(gate)
            rho = _apply_matrix_rows(rho, u, gate.qubits, circ.width)
            rho = _apply_matrix_rows(rho.conj().T, u, gate.qubits, circ.width).conj().T
            p = nm.p1 if gate.n_qubits == 1 else nm.p2
            if p > 0.0:
                rho = _apply_kraus(
                    rho, depolarizing_kraus(p, gate.n_qubits), gate.qubits, circ.width
                )
        else:
            qubit, duration = payload
            kraus = thermal_relaxation_kraus(nm.t1, nm.t2, duration)
            if len(kraus) > 1:
                rho = _apply_kraus(rho, kraus, (qubit,), circ.width)
        _check_density(rho, "during noisy run")
    return 0.5 * (rho + rho.conj().T)


def readout_distribution(
    rho: np.ndarray, measured_qubits: tuple[int, ...], nm: NoiseModel
) -> Distribution:
    """Diagonal marginal over the measured qubits with readout bit flips."""
    width = int(np.log2(rho.shape[0]))
    diag = np.real(np.diagonal(rho)).clip(min=0.0)
    probs = _marginal_probabilities(np.sqrt(diag), tuple(measured_qubits), width)
    if nm.readout_flip > 0.0:
        f = nm.readout_flip
        confusion = np.array([[1 - f, f], [f, 1 - f]])
        k = len(measured_qubits)
        full = np.eye(1)
        for _ in range(k):
            full = np.kron(confusion, full)
        probs = full @ probs
    return Distribution(outcomes={k: float(p) for k, p in enumerate(probs)})
