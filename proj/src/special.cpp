#include "posdist/special.hpp"

#include <cmath>

namespace posdist::special {
namespace {

constexpr double kShift = 10.0;

// digamma(x) - ln(x) for x >= kShift.
double digamma_tail(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    return -0.5 * r -
           r2 * (1.0 / 12 - r2 * (1.0 / 120 - r2 * (1.0 / 252 - r2 * (1.0 / 240 - r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 * (1.0 / 12)))))));
}

// Stirling correction lgamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2] for x >= kShift.
double stirling_tail(double x) {
    const double r = 1.0 / x;
    const double r2 = r * r;
    return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 * (1.0 / 1188 - r2 * (691.0 / 360360 - r2 * (1.0 / 156)))))));
}

}  // namespace

double digamma(double x) {
    double acc = 0.0;
    while (x < kShift) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    return acc + std::log(x) + digamma_tail(x);
}

double trigamma(double x) {
    double acc = 0.0;
    while (x < kShift) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double r = 1.0 / x;
    const double r2 = r * r;
    return acc + r + 0.5 * r2 +
           r * r2 * (1.0 / 6 - r2 * (1.0 / 30 - r2 * (1.0 / 42 - r2 * (1.0 / 30 - r2 * (5.0 / 66 - r2 * (691.0 / 2730 - r2 * (7.0 / 6)))))));
}

double digamma_diff(double a, double b) {
    if (a < kShift || b < kShift) return digamma(a) - digamma(b);
    return std::log1p((a - b) / b) + (digamma_tail(a) - digamma_tail(b));
}

double lgamma_diff(double x, double n) {
    if (n == 0.0) return 0.0;
    if (x < kShift) return std::lgamma(x + n) - std::lgamma(x);
    // (x+n-1/2) ln(x+n) - (x-1/2) ln x - n, rearranged around log1p.
    return (x - 0.5) * std::log1p(n / x) + n * std::log(x + n) - n + (stirling_tail(x + n) - stirling_tail(x));
}

}  // namespace posdist::special
