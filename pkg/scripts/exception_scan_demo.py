#!/usr/bin/env python3
"""Hunt for the exceptional points of the bound h(x) + h(1-x) >= c.

The bound holds for all algebraic x with at most finitely many
exceptions; this scan enumerates rational and quadratic candidates of
bounded height and finds exactly five points where both x and 1 - x are
roots of unity or degenerate: 0, 1, infinity, and the two primitive 6th
roots of unity.
"""

from dynheights.bounds import pair_bound_power, scan_exceptions
from dynheights.polys import parse_poly


def main():
    psi = parse_poly("1 - x")
    bound = pair_bound_power(1, psi)
    print(f"bound: h(x) + h(1 - x) >= {bound:.10f} outside the scan hits")
    for threshold, quad in ((0.16, False), (0.2406, True)):
        kind = "rational + quadratic" if quad else "rational"
        print(f"\nscan ({kind}), threshold {threshold}, height <= 3:")
        for rec in scan_exceptions(1, psi, threshold, 3.0,
                                   include_quadratic=quad):
            print(f"  {rec['point']:45s}  value {rec['value']:.6f}")


if __name__ == "__main__":
    main()
