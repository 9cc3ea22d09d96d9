"""Walk circuits checked against the dense matrix dynamics.

A single Fourier block turns the conditional shift into phase kicks, so a
t-step walk needs one transform, t repetitions of (coin + phases), and one
inverse transform.  The circuit unitary must match the dense walk operator
to machine precision, which is verified here for both cycle sizes, and the
text serialization of the one-step circuit is printed.
"""

import numpy as np

from cyclewalk import (
    build_walk_circuit_3cycle,
    build_walk_circuit_4cycle,
    default_coins,
    lower_to_unitary,
    parrondo_schedule,
    step_operator,
    to_text,
)


def phase_aligned(u, v):
    overlap = np.trace(u.conj().T @ v)
    return np.linalg.norm(u * np.exp(1j * np.angle(overlap)) - v)


def main() -> None:
    for cycle, build in ((4, build_walk_circuit_4cycle), (3, build_walk_circuit_3cycle)):
        sched = parrondo_schedule("AABB", default_coins(cycle), 25)
        worst = 0.0
        for steps in range(0, 26):
            circuit = build(sched, steps)
            dense = np.eye(8, dtype=complex)
            for i in range(steps):
                dense = step_operator(cycle, sched.coin_at(i), "padded") @ dense
            worst = max(worst, phase_aligned(lower_to_unitary(circuit), dense))
        print(f"{cycle}-cycle: worst circuit-vs-matrix deviation over t=0..25: {worst:.2e}")
    print()
    print("One step of the 3-cycle walk in the text format:")
    print(to_text(build_walk_circuit_3cycle(parrondo_schedule("AABB", default_coins(3), 1), 1)))


if __name__ == "__main__":
    main()
