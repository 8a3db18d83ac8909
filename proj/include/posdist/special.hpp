#pragma once

// Special functions tuned for the entropy estimators: positive real arguments only,
// with differences evaluated without catastrophic cancellation at large arguments.

namespace posdist::special {

double digamma(double x);
double trigamma(double x);

/// digamma(a) - digamma(b), accurate when a and b are both large and close.
double digamma_diff(double a, double b);

/// lgamma(x + n) - lgamma(x) for x > 0, n >= 0.
double lgamma_diff(double x, double n);

}  // namespace posdist::special
