"""Three families of expansions driven by the value itself -- numerators
read from the remainder, digits chained into numerators, and a constant
numerator -- and the y that makes the joint map reproduce each one.

Run:  python3 demos/special_families.py [--x 113/355] [--depth 10]
"""

import argparse

from propcf import (
    Rational,
    engel_pairs,
    greedy_y,
    orbit,
    parse_exact,
    sharpness_witness,
    to_text,
    varnum_expand,
    y_of_x,
    y_value_from_digits,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--x", default="113/355",
                        help="value in (0,1) to expand (default 113/355)")
    parser.add_argument("--depth", type=int, default=10)
    args = parser.parse_args()
    x = parse_exact(args.x)
    depth = args.depth

    print(f"Self-reading numerators for x = {to_text(x)}")
    print("=" * 58)
    pairs, tail = varnum_expand(x, depth)
    print(f"  pairs: {pairs}")
    print(f"  tail:  {to_text(tail)}")
    print("  each numerator a is the floor of 1/remainder, which forces")
    print("  a <= b <= a^2 + a - 1:",
          all(a <= b <= a * a + a - 1 for a, b in pairs))

    print("\nChained digits (each digit becomes the next numerator)")
    print("=" * 58)
    pairs, tail = engel_pairs(x, depth)
    print(f"  pairs: {pairs}")
    digits = [b for _, b in pairs]
    print(f"  digits {digits} are nondecreasing:",
          all(b1 <= b2 for b1, b2 in zip(digits, digits[1:])))

    print("\nThe y behind each family")
    print("=" * 58)
    for family in ("varnum", "engel"):
        y_digits = y_of_x(x, family, depth)
        y = y_value_from_digits(y_digits)
        print(f"  {family:>6}: y digits {y_digits}")
        print(f"          y = {to_text(y)} ~ {float(y):.6f}")
        scalar_pairs, _ = (varnum_expand if family == "varnum"
                           else engel_pairs)(x, depth)
        seeded = y_value_from_digits(y_digits, guard=2)
        rec = orbit(x, seeded, len(scalar_pairs))
        print(f"          joint orbit reproduces the expansion:",
              list(rec.digits) == scalar_pairs)

    print("\nConstant numerator 3 via its exact periodic y")
    print("=" * 58)
    y3 = greedy_y(3)
    print(f"  y = {to_text(y3)} has all classical digits equal to 3")
    rec = orbit(x, y3, 6)
    print(f"  orbit digits: {list(rec.digits)}")
    print("  every numerator is 3:", all(a == 3 for a, _ in rec.digits))

    print("\nHow tight is the approximation bound?")
    print("=" * 58)
    eps = Rational(1, 10)
    witness, report = sharpness_witness(2, eps)
    print(f"  a two-digit witness within epsilon = {eps}: {witness}")
    print(f"  numerator excess (must be > 0): {report.numerator_excess}")
    print(f"  tail advantage  (must be > 0): {report.tail_advantage}")
    print("  so no factor smaller than (1+epsilon) can replace the bound.")


if __name__ == "__main__":
    main()
