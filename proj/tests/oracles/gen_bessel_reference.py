#!/usr/bin/env python3
"""Writes J1/Y1 reference values on a 1000-point log grid over [1e-3, 1e3].

Values come from mpmath at 40 significant digits, evaluated at the exact
double-precision abscissae that the C++ tests reconstruct.
"""
import sys

import mpmath

mpmath.mp.dps = 40


def main(path):
    n = 1000
    with open(path, "w") as out:
        out.write("x,j1,y1\n")
        for i in range(n):
            x = 10.0 ** (-3.0 + 6.0 * i / (n - 1))
            xm = mpmath.mpf(x)
            j1 = mpmath.besselj(1, xm)
            y1 = mpmath.bessely(1, xm)
            out.write("%s,%s,%s\n" % (repr(x), mpmath.nstr(j1, 25), mpmath.nstr(y1, 25)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "bessel_reference.csv")
