#include "posdist/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "posdist/error.hpp"
#include "posdist/special.hpp"

namespace posdist {

std::string_view to_string(Estimator estimator) { return estimator == Estimator::nsb ? "nsb" : "plugin"; }

Estimator parse_estimator(std::string_view text) {
    if (text == "nsb") return Estimator::nsb;
    if (text == "plugin") return Estimator::plugin;
    throw ConfigError("unknown entropy estimator '" + std::string(text) + "' (expected nsb or plugin)");
}

EntropyEstimate entropy_plugin(const BlockDistribution& dist) {
    double h = 0.0;
    for (const auto& [idx, p] : dist.entries()) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return EntropyEstimate{std::max(h, 0.0), Estimator::plugin, dist.block_size(), std::nullopt, false};
}

EntropyEstimate entropy_plugin(const BlockCounts& counts) { return entropy_plugin(estimate_distribution(counts)); }

namespace nsb {
namespace {

struct NodeValues {
    double weight;
    double weighted_mean;
    double weighted_second;
};

NodeValues operator+(NodeValues a, const NodeValues& b) {
    return {a.weight + b.weight, a.weighted_mean + b.weighted_mean, a.weighted_second + b.weighted_second};
}
NodeValues operator*(double s, const NodeValues& a) {
    return {s * a.weight, s * a.weighted_mean, s * a.weighted_second};
}

struct Panel {
    double a, b;
    NodeValues value;
    NodeValues error;
};

/// One 61-point Gauss-Kronrod panel on [a, b] of a 3-component integrand.
template <typename F>
Panel gk61(F&& f, double a, double b) {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
    using Gauss = boost::math::quadrature::gauss<double, 30>;
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    NodeValues kronrod{0, 0, 0};
    NodeValues gauss{0, 0, 0};
    const NodeValues f0 = f(mid);
    kronrod = wk[0] * f0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const NodeValues pair = f(mid + half * x[i]) + f(mid - half * x[i]);
        kronrod = kronrod + wk[i] * pair;
        if (i % 2 == 1) gauss = gauss + wg[i / 2] * pair;
    }
    Panel p{a, b, half * kronrod, {}};
    p.error = {std::abs(half * (kronrod.weight - gauss.weight)),
               std::abs(half * (kronrod.weighted_mean - gauss.weighted_mean)),
               std::abs(half * (kronrod.weighted_second - gauss.weighted_second))};
    return p;
}

/// Global adaptive bisection until every component meets the relative tolerance.
template <typename F>
NodeValues integrate_adaptive(F&& f, std::span<const double> breakpoints, double rel_tol, int max_panels = 400) {
    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) panels.push_back(gk61(f, breakpoints[i], breakpoints[i + 1]));
    }
    auto totals = [&] {
        NodeValues v{0, 0, 0}, e{0, 0, 0};
        for (const auto& p : panels) {
            v = v + p.value;
            e = e + p.error;
        }
        return std::pair{v, e};
    };
    while (static_cast<int>(panels.size()) < max_panels) {
        const auto [v, e] = totals();
        const auto ratio = [](double err, double val) { return val != 0.0 ? err / std::abs(val) : 0.0; };
        if (ratio(e.weight, v.weight) <= rel_tol && ratio(e.weighted_mean, v.weighted_mean) <= rel_tol &&
            ratio(e.weighted_second, v.weighted_second) <= rel_tol) {
            return v;
        }
        auto score = [&](const Panel& p) {
            return ratio(p.error.weight, v.weight) + ratio(p.error.weighted_mean, v.weighted_mean) +
                   ratio(p.error.weighted_second, v.weighted_second);
        };
        const auto worst = std::max_element(panels.begin(), panels.end(),
                                            [&](const Panel& x, const Panel& y) { return score(x) < score(y); });
        const double a = worst->a, b = worst->b, m = 0.5 * (a + b);
        *worst = gk61(f, a, m);
        panels.push_back(gk61(f, m, b));
    }
    return totals().first;
}

double evidence_slope(const CountHistogram& hist, double k, double n_total, double beta) {
    double slope = -k * special::digamma_diff(k * beta + n_total, k * beta);
    for (const auto& [c, m] : hist) slope += m * special::digamma_diff(beta + static_cast<double>(c), beta);
    return slope;
}

}  // namespace

CountHistogram histogram(const BlockCounts& counts) {
    std::map<std::uint64_t, double> h;
    for (const auto& [idx, n] : counts.entries()) h[n] += 1.0;
    return CountHistogram(h.begin(), h.end());
}

double prior_entropy(double k, double beta) { return special::digamma_diff(k * beta + 1.0, beta + 1.0); }

double log_evidence(const CountHistogram& hist, double k, double beta) {
    double n_total = 0.0;
    double value = 0.0;
    for (const auto& [c, m] : hist) {
        n_total += m * static_cast<double>(c);
        value += m * special::lgamma_diff(beta, static_cast<double>(c));
    }
    return value - special::lgamma_diff(k * beta, n_total);
}

Moments posterior_moments(const CountHistogram& hist, double k, double beta) {
    double n_total = 0.0, observed = 0.0;
    for (const auto& [c, m] : hist) {
        n_total += m * static_cast<double>(c);
        observed += m;
    }
    const double A = n_total + k * beta;
    const double unobserved = k - observed;
    const double tri_A2 = special::trigamma(A + 2.0);

    double mean = 0.0, p = 0.0, q = 0.0, sum_a2 = 0.0, diag = 0.0;
    auto accumulate = [&](double a, double m) {
        const double d0 = -special::digamma_diff(A + 2.0, a + 1.0);  // psi(a+1) - psi(A+2)
        const double d1 = d0 + 1.0 / (a + 1.0);                       // psi(a+2) - psi(A+2)
        mean += m * (a / A) * (-d0 - 1.0 / (A + 1.0));
        p += m * a * d0;
        q += m * a * a * d0 * d0;
        sum_a2 += m * a * a;
        diag += m * a * (a + 1.0) * (d1 * d1 + special::trigamma(a + 2.0) - tri_A2);
    };
    for (const auto& [c, m] : hist) accumulate(static_cast<double>(c) + beta, m);
    if (unobserved > 0.0) accumulate(beta, unobserved);

    const double cross = (p * p - q) - tri_A2 * (A * A - sum_a2);
    return Moments{mean, (cross + diag) / (A * (A + 1.0))};
}

Result estimate(const CountHistogram& hist, double k) {
    double n_total = 0.0, observed = 0.0;
    for (const auto& [c, m] : hist) {
        n_total += m * static_cast<double>(c);
        observed += m;
    }
    if (n_total < 2.0) throw InsufficientData("NSB needs at least two observations");
    if (observed > k) throw std::invalid_argument("more observed outcomes than the alphabet size");
    if (k <= 1.0) return Result{0.0, 0.0, 0.0};

    const double t_lo = std::log(1e-12 / k);
    const double t_hi = std::log(1e10);
    const double xi_lo = prior_entropy(k, std::exp(t_lo));
    const double xi_hi = prior_entropy(k, std::exp(t_hi));

    // MAP concentration from the sign change of d log p(n|beta) / d beta (evidence is unimodal).
    auto slope_t = [&](double t) { return evidence_slope(hist, k, n_total, std::exp(t)); };
    double t_star;
    if (slope_t(t_lo) <= 0.0) {
        t_star = t_lo;
    } else if (slope_t(t_hi) >= 0.0) {
        t_star = t_hi;
    } else {
        std::uintmax_t iters = 200;
        const auto [l, r] = boost::math::tools::toms748_solve(slope_t, t_lo, t_hi,
                                                              boost::math::tools::eps_tolerance<double>(50), iters);
        t_star = 0.5 * (l + r);
    }
    const double beta_star = std::exp(t_star);
    const double log_ev_star = log_evidence(hist, k, beta_star);
    const double xi_star = prior_entropy(k, beta_star);

    auto beta_of_xi = [&](double xi) {
        if (xi <= xi_lo) return std::exp(t_lo);
        if (xi >= xi_hi) return std::exp(t_hi);
        std::uintmax_t iters = 200;
        const auto [l, r] = boost::math::tools::toms748_solve(
            [&](double t) { return prior_entropy(k, std::exp(t)) - xi; }, t_lo, t_hi,
            boost::math::tools::eps_tolerance<double>(50), iters);
        return std::exp(0.5 * (l + r));
    };
    // Flat prior on xi: the posterior density in xi is the evidence alone.
    auto integrand = [&](double xi) {
        const double beta = beta_of_xi(xi);
        const double w = std::exp(log_evidence(hist, k, beta) - log_ev_star);
        if (!(w > 0.0)) return NodeValues{0, 0, 0};
        const Moments mom = posterior_moments(hist, k, beta);
        return NodeValues{w, w * mom.mean, w * mom.second};
    };

    constexpr double kCutoff = -45.0;
    auto bound = [&](double direction) {
        double step = 1e-9 * (xi_hi - xi_lo);
        while (true) {
            const double xi = xi_star + direction * step;
            if (xi <= xi_lo) return xi_lo;
            if (xi >= xi_hi) return xi_hi;
            if (log_evidence(hist, k, beta_of_xi(xi)) - log_ev_star < kCutoff) return xi;
            step *= 2.0;
        }
    };
    const std::array<double, 3> breaks = {bound(-1.0), xi_star, bound(1.0)};
    const NodeValues total = integrate_adaptive(integrand, breaks, 1e-8);

    const double mean = total.weighted_mean / total.weight;
    const double var = total.weighted_second / total.weight - mean * mean;
    return Result{mean, std::sqrt(std::max(var, 0.0)), beta_star};
}

}  // namespace nsb

EntropyEstimate entropy_nsb(const BlockCounts& counts, double alphabet_size) {
    if (counts.total() == 0) throw EmptyCounts("cannot estimate entropy from zero counts");
    const auto hist = nsb::histogram(counts);
    const auto result = nsb::estimate(hist, alphabet_size);
    EntropyEstimate e;
    e.estimator = Estimator::nsb;
    e.r = counts.block_size();
    e.value = std::clamp(result.mean / std::log(2.0), 0.0, std::log2(alphabet_size));
    e.posterior_std = result.std / std::log(2.0);
    e.no_coincidences = hist.size() == 1 && hist.front().first == 1;
    return e;
}

EntropyEstimate entropy_nsb(const BlockCounts& counts) { return entropy_nsb(counts, counts.space_size()); }

EntropyEstimate estimate_entropy(const BlockCounts& counts, Estimator estimator) {
    return estimator == Estimator::nsb ? entropy_nsb(counts) : entropy_plugin(counts);
}

int r_max(std::uint64_t unigram_total, int alphabet_size) {
    if (alphabet_size < 2) throw std::invalid_argument("r_max needs an alphabet of at least 2 symbols");
    const auto L = static_cast<std::uint64_t>(alphabet_size);
    if (unigram_total < L) {
        throw InsufficientData("N^(1) = " + std::to_string(unigram_total) + " is smaller than the alphabet size " +
                               std::to_string(alphabet_size));
    }
    int r = 0;
    std::uint64_t power = 1;
    while (power <= unigram_total / L) {
        power *= L;
        ++r;
    }
    return std::max(r, 2);
}

int r_max(const BlockCounts& counts_r1, int alphabet_size) { return r_max(counts_r1.total(), alphabet_size); }

}  // namespace posdist
