#!/usr/bin/env python3
"""Equidistribution at work, in two guises.

1. Heights of 1 - zeta_n over primitive n-th roots of unity converge to
   log M^+(1 - x) as n grows (the points equidistribute on the circle).
2. Backward orbits of z^2 and z^2 - 2: circle moments and angular star
   discrepancy of the level-n preimage clouds.
"""

from fractions import Fraction

from dynheights.bounds import (preimage_measure_stats,
                               roots_of_unity_height_sequence)
from dynheights.dynamics import DynSystem
from dynheights.mahler import log_mahler_plus
from dynheights.polys import parse_poly


def main():
    psi = parse_poly("1 - x")
    target = log_mahler_plus(psi).log_value
    print(f"log M^+(1 - x) = {target:.10f}")
    print("n (prime)   h(1 - zeta_n)   gap")
    for n in (11, 31, 101, 211, 401, 499, 997):
        h = roots_of_unity_height_sequence(psi, n)
        print(f"{n:9d}   {h:.10f}   {h - target:+.2e}")
    print()

    for expr, a in (("x^2", Fraction(1)), ("x^2 - 2", Fraction(0))):
        S = DynSystem.from_expr(expr)
        print(f"preimages of {a} under {expr}:")
        print("level   points   max |m_k| (k<=8)   star discrepancy")
        for level in (2, 4, 6, 8):
            mu, moments, disc = preimage_measure_stats(S, a, level, 8)
            worst = max(abs(m) for m in moments)
            print(f"{level:5d}   {len(mu.points):6d}   {worst:14.3e}"
                  f"   {disc:.6f}")
        print()


if __name__ == "__main__":
    main()
