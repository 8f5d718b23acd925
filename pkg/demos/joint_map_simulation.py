"""The two-coordinate digit map in action: seeded exact orbits, the
denominator growth rate against the known classical constant, and
cylinder visit frequencies against their exact areas.

Run:  python3 demos/joint_map_simulation.py [--seed 7] [--n 1500]
"""

import argparse
import random
from fractions import Fraction

from propcf import (
    GOLDEN,
    bits_for_orbit_length,
    birkhoff_cylinder_frequencies,
    cylinder_area_monte_carlo,
    growth_exponent,
    leading_cylinders,
    orbit,
    random_unit_rational,
    to_text,
)

KNOWN_CLASSICAL_RATE = 3.27582


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--n", type=int, default=1500,
                        help="orbit length (default 1500)")
    args = parser.parse_args()

    print("One exact orbit, golden-ratio y")
    print("=" * 58)
    bits = bits_for_orbit_length(args.n)
    rng = random.Random(args.seed)
    x0 = random_unit_rational(rng, bits)
    print(f"  x0: a random rational with a {bits}-bit denominator")
    print(f"  y0: {to_text(GOLDEN)} -- its digits are all 1, so the")
    print("      numerators stay 1 and the orbit walks the classical map.")
    record = orbit(x0, GOLDEN, args.n)
    report = growth_exponent(x0, GOLDEN, args.n, record=record)
    print(f"  steps: {record.steps} of {args.n}"
          f" (truncated: {record.truncated})")
    print(f"  growth estimate q_n^(1/n): {report.estimate:.5f}")
    print(f"  known almost-everywhere rate: {KNOWN_CLASSICAL_RATE}")
    deviation = abs(report.estimate - KNOWN_CLASSICAL_RATE) \
        / KNOWN_CLASSICAL_RATE
    print(f"  deviation: {deviation:.2%}   "
          f"(oscillation {report.oscillation:.4f},"
          f" reliable: {report.reliable})")

    print("\nCylinder visits along the orbit vs. exact areas")
    print("=" * 58)
    freqs = birkhoff_cylinder_frequencies(x0, GOLDEN, args.n)
    print(f"{'cell':>8} {'visits':>8} {'area':>10}")
    shown = 0
    for addr in sorted(freqs, key=lambda c: (c.a, c.b)):
        if shown >= 8:
            break
        print(f"  ({addr.a},{addr.b}) {float(freqs[addr]):>8.4f}"
              f" {float(addr.area):>10.4f}")
        shown += 1
    print("  (visit shares differ from plain areas: one orbit samples the")
    print("   invariant distribution, not the uniform one.)")

    print("\nUniform Monte Carlo measure of the largest cells")
    print("=" * 58)
    rows = cylinder_area_monte_carlo(10**5, args.seed)
    print(f"{'cell':>8} {'measured':>10} {'exact':>10} {'rel.err':>9}")
    for row in rows:
        print(f"  ({row['a']},{row['b']}) {row['frequency']:>10.5f}"
              f" {row['area']:>10.5f} {row['relative_error']:>9.2%}")
    total = sum(Fraction(1, (a + 1) * b * (b + 1))
                for a, b in leading_cylinders(9))
    print(f"  the nine largest cells carry {float(total):.3f}"
          " of the whole square.")


if __name__ == "__main__":
    main()
