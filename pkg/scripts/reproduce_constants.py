#!/usr/bin/env python3
"""Recompute the headline constants of the power-map height bound.

Prints log M(x^2 - x - 1) (golden ratio), log M^+(1 - x), the two-variable
identity log M(1 - x - y), and the resulting lower bound for
h(x) + h(1 - x), each by at least two independent routes.
"""

from dynheights.bounds import energy_arch_power, pair_bound_power
from dynheights.mahler import (height_from_minpoly, log_mahler_plus,
                               mahler_via_quadrature, mahler_via_roots,
                               two_variable_grid_oracle)
from dynheights.polys import parse_poly


def main():
    golden = parse_poly("x^2 - x - 1")
    print("log M(x^2 - x - 1):")
    print(f"  Jensen / roots     {mahler_via_roots(golden).log_value:.15f}")
    print(f"  circle quadrature  "
          f"{mahler_via_quadrature(golden).log_value:.15f}")
    print(f"  height of golden ratio = log M / 2 = "
          f"{height_from_minpoly(golden):.15f}")
    print()

    psi = parse_poly("1 - x")
    mplus = log_mahler_plus(psi)
    grid = two_variable_grid_oracle(psi, 2048, 2048)
    print("log M^+(1 - x) = log M(1 - x - y):")
    print(f"  crossing-split quadrature  {mplus.log_value:.15f}"
          f"  (error estimate {mplus.error_estimate:.1e})")
    print(f"  2-d tensor-grid oracle     {grid:.15f}")
    print()

    print("height bound  h(x) + h(1 - x) >= log M(1 - x - y) / 2:")
    print(f"  bound          {pair_bound_power(1, psi):.15f}")
    print(f"  via energy     "
          f"{energy_arch_power(1, psi) / (2 * 2 * 1 * 1):.15f}")


if __name__ == "__main__":
    main()
