"""Circuit container, exact lowering to a dense unitary, depth analysis and
the line-oriented text serialization.

Execution order is list order: ``gates[0]`` acts first.  Measurement is
circuit metadata (``measured``), not a gate, so lowering stays unitary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import Gate, gate_matrix

__all__ = [
    "Circuit",
    "DepthReport",
    "lower_to_unitary",
    "apply_gate_to_tensor",
    "depth_report",
    "to_text",
    "from_text",
]

MAX_LOWER_WIDTH = 12


class Circuit:
    """An ordered list of gates on ``width`` qubits.

    Append-only; the width is fixed at construction and every appended gate
    is validated against it.  Builders construct a circuit once and callers
    treat it as immutable afterwards.
    """

    def __init__(self, width: int, name: str = "circuit", measured: tuple[int, ...] = ()):
        if width < 1:
            raise ValueError(f"circuit width must be >= 1, got {width}")
        if any(ch.isspace() for ch in name) or not name:
            raise ValueError(f"circuit name must be non-empty without spaces: {name!r}")
        self.width = width
        self.name = name
        self.gates: list[Gate] = []
        self.measured = tuple(measured)
        for q in self.measured:
            if not 0 <= q < width:
                raise ValueError(f"measured qubit {q} outside width {width}")

    def append(self, gate: Gate) -> "Circuit":
        for q in gate.qubits:
            if not 0 <= q < self.width:
                raise ValueError(
                    f"gate {gate.kind} on qubit {q} outside circuit width {self.width}"
                )
        self.gates.append(gate)
        return self

    def add(self, kind: str, *qubits: int, params: tuple[float, ...] = (), matrix=None) -> "Circuit":
        return self.append(Gate(kind, tuple(qubits), tuple(params), matrix))

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __repr__(self) -> str:
        return f"Circuit({self.name!r}, width={self.width}, gates={len(self.gates)})"


def apply_gate_to_tensor(tensor: np.ndarray, gate: Gate, width: int) -> np.ndarray:
    """Apply one gate to a state (or stacked-column) tensor.

    ``tensor`` has shape (2,)*width + rest, with axis 0 the most significant
    qubit (width-1).  Barriers are no-ops.
    """
    if gate.kind == "BARRIER":
        return tensor
    k = gate.n_qubits
    m = gate_matrix(gate).reshape((2,) * (2 * k))
    axes = [width - 1 - q for q in gate.qubits]
    moved = np.tensordot(m, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(moved, list(range(k)), axes)


def lower_to_unitary(circuit: Circuit) -> np.ndarray:
    """Multiply out the circuit into a dense 2**width unitary."""
    if circuit.width > MAX_LOWER_WIDTH:
        raise ValueError(
            f"refusing to lower width {circuit.width} > {MAX_LOWER_WIDTH} to a dense matrix"
        )
    dim = 1 << circuit.width
    tensor = np.eye(dim, dtype=complex).reshape((2,) * circuit.width + (dim,))
    for gate in circuit.gates:
        tensor = apply_gate_to_tensor(tensor, gate, circuit.width)
    return tensor.reshape(dim, dim)


@dataclass(frozen=True)
class DepthReport:
    """Greedy as-soon-as-possible layering of a circuit.

    ``per_layer`` holds gate indices per layer.  Barriers separate layers
    (gates after a barrier cannot share a layer with gates before it on the
    barrier's qubits) and are excluded from all counts.
    """

    depth: int
    counts_1q: int
    counts_2q: int
    per_layer: tuple[tuple[int, ...], ...]


def depth_report(circuit: Circuit) -> DepthReport:
    ready = [0] * circuit.width
    layers: list[list[int]] = []
    n1 = n2 = 0
    for idx, gate in enumerate(circuit.gates):
        if gate.kind == "BARRIER":
            floor = max(ready[q] for q in gate.qubits)
            for q in gate.qubits:
                ready[q] = floor
            continue
        layer = max(ready[q] for q in gate.qubits) + 1
        for q in gate.qubits:
            ready[q] = layer
        while len(layers) < layer:
            layers.append([])
        layers[layer - 1].append(idx)
        if gate.n_qubits == 1:
            n1 += 1
        else:
            n2 += 1
    return DepthReport(
        depth=len(layers),
        counts_1q=n1,
        counts_2q=n2,
        per_layer=tuple(tuple(layer) for layer in layers),
    )


def _format_float(x: float) -> str:
    return repr(float(x))


def to_text(circuit: Circuit, start_times=None) -> str:
    """Serialize to the line format ``KIND q... [params...]``.

    The header carries width, name and the measured qubits.  When
    ``start_times`` is given (one per gate), each line gets an ``@t=``
    annotation, the form used for scheduled circuits.
    """
    header = f"width={circuit.width} name={circuit.name}"
    if circuit.measured:
        header += " measure=" + ",".join(str(q) for q in circuit.measured)
    lines = [header]
    for i, gate in enumerate(circuit.gates):
        parts = [gate.kind] + [str(q) for q in gate.qubits]
        if gate.kind == "UNITARY":
            for entry in gate.matrix.reshape(-1):
                parts.append(_format_float(entry.real))
                parts.append(_format_float(entry.imag))
        else:
            parts.extend(_format_float(p) for p in gate.params)
        if start_times is not None:
            parts.append(f"@t={_format_float(start_times[i])}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    """Parse the serialization produced by :func:`to_text`.

    ``@t=`` annotations are accepted and ignored, so scheduled dumps parse
    back to their plain circuit.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty circuit text")
    fields = dict(item.split("=", 1) for item in lines[0].split())
    if "width" not in fields:
        raise ValueError(f"missing width in header {lines[0]!r}")
    measured = ()
    if fields.get("measure"):
        measured = tuple(int(q) for q in fields["measure"].split(","))
    circuit = Circuit(int(fields["width"]), fields.get("name", "circuit"), measured)
    for line in lines[1:]:
        tokens = [t for t in line.split() if not t.startswith("@t=")]
        kind = tokens[0]
        rest = tokens[1:]
        n_qubits = 2 if kind in ("CP", "ECR") else 1
        if kind == "BARRIER":
            circuit.add(kind, *(int(t) for t in rest))
            continue
        qubits = tuple(int(t) for t in rest[:n_qubits])
        values = [float(t) for t in rest[n_qubits:]]
        if kind == "UNITARY":
            if len(values) != 8:
                raise ValueError(f"UNITARY line needs 8 floats: {line!r}")
            flat = np.array(values[0::2]) + 1j * np.array(values[1::2])
            circuit.add(kind, *qubits, matrix=flat.reshape(2, 2))
        else:
            circuit.add(kind, *qubits, params=tuple(values))
    return circuit
