"""Ordered versus chaotic walks on small cycles.

A walk is periodic when some power of its step operator is the identity.
Whether that happens depends on the coin and on the cycle size: the
Hadamard coin revives on the 4- and 8-cycles but never on the 3-cycle,
while specially tuned reflectivities make the 3-cycle periodic too.
"""

import math

from cyclewalk import CoinParams, find_period_eigen, find_period_power, step_operator

CASES = [
    ("Hadamard on the 4-cycle", 4, CoinParams(0.5)),
    ("Hadamard on the 8-cycle", 8, CoinParams(0.5)),
    ("Hadamard on the 3-cycle", 3, CoinParams(0.5)),
    ("r = 2/3 on the 3-cycle", 3, CoinParams(2 / 3)),
    ("r = (5 - sqrt 5)/6 on the 3-cycle", 3, CoinParams((5 - math.sqrt(5)) / 6)),
    ("r = 0.998489 on the 4-cycle", 4, CoinParams(0.998489)),
]


def main() -> None:
    print(f"{'walk':38s} {'period':>7s} {'residual':>10s}")
    for label, cycle, coin in CASES:
        u = step_operator(cycle, coin)
        result = find_period_power(u, t_max=1000, phase_insensitive=True)
        cross = find_period_eigen(u, t_max=1000, phase_insensitive=True)
        assert result.period == cross.period, "period finders disagree"
        period = result.period if result.period is not None else "none"
        print(f"{label:38s} {period!s:>7s} {result.residual:10.2e}")
    print()
    print("'none' means no revival within 1000 steps: a chaotic walk.")
    print("The last row is one of the two coins that the Parrondo demo")
    print("alternates into a periodic walk.")


if __name__ == "__main__":
    main()
