#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "posdist/ngram.hpp"

namespace posdist {

enum class Estimator { plugin, nsb };

std::string_view to_string(Estimator estimator);
Estimator parse_estimator(std::string_view text);

/// Block entropy in bits.
struct EntropyEstimate {
    double value = 0.0;
    Estimator estimator = Estimator::plugin;
    int r = 0;
    /// NSB only.
    std::optional<double> posterior_std;
    /// NSB: every observed block was seen exactly once, so the estimate is prior-dominated.
    bool no_coincidences = false;
};

/// -sum p log2 p over the support.
EntropyEstimate entropy_plugin(const BlockDistribution& dist);
EntropyEstimate entropy_plugin(const BlockCounts& counts);

/// NSB posterior mean and standard deviation of the entropy (bits) for an alphabet of
/// `alphabet_size` outcomes, most of which may be unobserved. Requires total >= 2.
EntropyEstimate entropy_nsb(const BlockCounts& counts, double alphabet_size);
/// Same, with alphabet size L^r.
EntropyEstimate entropy_nsb(const BlockCounts& counts);

EntropyEstimate estimate_entropy(const BlockCounts& counts, Estimator estimator);

/// Largest r with L^r <= N^(1), never below 2. Throws InsufficientData if N^(1) < L.
int r_max(const BlockCounts& counts_r1, int alphabet_size);
int r_max(std::uint64_t unigram_total, int alphabet_size);

namespace nsb {

/// (count value, number of bins with that count); zero-count bins are implied by the alphabet size.
using CountHistogram = std::vector<std::pair<std::uint64_t, double>>;

CountHistogram histogram(const BlockCounts& counts);

/// Prior expected entropy (nats) of a symmetric Dirichlet(beta) over k outcomes.
double prior_entropy(double k, double beta);

struct Moments {
    double mean = 0.0;    // E[H | n, beta], nats
    double second = 0.0;  // E[H^2 | n, beta], nats^2
};

/// Posterior moments of the entropy under a fixed Dirichlet(beta) prior.
Moments posterior_moments(const CountHistogram& hist, double k, double beta);

/// log evidence p(n | beta) up to a beta-independent constant.
double log_evidence(const CountHistogram& hist, double k, double beta);

struct Result {
    double mean = 0.0;  // nats
    double std = 0.0;   // nats
    double beta_map = 0.0;
};

Result estimate(const CountHistogram& hist, double k);

}  // namespace nsb

}  // namespace posdist
