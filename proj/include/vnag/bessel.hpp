#pragma once

namespace vnag {

/// Bessel function of the first kind, order one, for x ≥ 0.
double bessel_j1(double x);

/// Bessel function of the second kind, order one, for x > 0.
double bessel_y1(double x);

struct BesselPair {
  double j1;
  double y1;
};

/// Both functions at once (x > 0); cheaper than two calls in the mid range.
BesselPair bessel_j1y1(double x);

}  // namespace vnag
