"""Tour of rational expansions: every way to expand t/s, the length law,
and the determinant identity along one worked example.

Run:  python3 demos/rational_expansions.py [--value 5/6]
"""

import argparse

from propcf import (
    Rational,
    convergents,
    enumerate_rational_expansions,
    expand,
    longest_chain,
    parse_exact,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--value", default="5/6",
                        help="rational in (0,1) to expand (default 5/6)")
    args = parser.parse_args()
    value = parse_exact(args.value)
    if not isinstance(value, Rational):
        raise SystemExit("pick a rational value like 5/6")

    print(f"Every complete expansion of {value}")
    print("=" * 46)
    expansions = enumerate_rational_expansions(value)
    by_length: dict[int, int] = {}
    for e in expansions:
        by_length[len(e)] = by_length.get(len(e), 0) + 1
    for e in sorted(expansions, key=len):
        print(f"  length {len(e)}:  {e}")
    print(f"\n{len(expansions)} expansions;"
          f" lengths {sorted(by_length)} with counts"
          f" {[by_length[k] for k in sorted(by_length)]}")
    print(f"The longest has exactly {value.num} digits -- the numerator of"
          " the reduced fraction, which is the general rule.")

    print("\nThe maximal chain, digit by digit")
    print("=" * 46)
    chain = longest_chain(value.den)
    print(f"  {Rational(value.den - 1, value.den)} -> {chain}")

    print("\nConvergents and the determinant identity")
    print("=" * 46)
    e = expand(value, [4, 3, 2, 1, 1]) if value == Rational(5, 6) \
        else max(expansions, key=len)
    cv = convergents(e)
    sign, product = 1, 1
    print(f"  expansion {e}")
    for n, quot in enumerate(e.quotients, start=1):
        sign, product = -sign, product * quot.a
        det = cv.p(n - 1) * cv.q(n) - cv.p(n) * cv.q(n - 1)
        print(f"  n={n}:  p={cv.p(n):>4}  q={cv.q(n):>4}"
              f"  reduced={str(Rational(cv.p(n), cv.q(n))):>7}"
              f"  p(n-1)q(n)-p(n)q(n-1) = {det:>5}"
              f"  (-1)^n*prod(a) = {sign * product:>5}")
    print("\nThe two last columns agree at every index, and the final")
    print("unreduced pair keeps the full product of numerators in it.")


if __name__ == "__main__":
    main()
