#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posdist/corpus.hpp"
#include "posdist/ngram.hpp"

namespace posdist {

enum class Metric { jensen_shannon, hellinger };

std::string_view to_string(Metric metric);
/// Accepts "jensen_shannon"/"js" and "hellinger"; throws ConfigError otherwise.
Metric parse_metric(std::string_view text);

/// Square root of the base-2 Jensen-Shannon divergence, in [0, 1]. Throws MismatchedBlockSize.
double js_distance(const BlockDistribution& p, const BlockDistribution& q);
/// sqrt(1/2 sum (sqrt p - sqrt q)^2), in [0, 1]. Throws MismatchedBlockSize.
double hellinger_distance(const BlockDistribution& p, const BlockDistribution& q);
double distance(const BlockDistribution& p, const BlockDistribution& q, Metric metric);

/// Symmetric labelled matrix with zero diagonal, stored row-major.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// Throws DuplicateLabel; values must be n*n, symmetric, zero on the diagonal.
    DistanceMatrix(std::vector<std::string> labels, std::vector<double> values, Metric metric, int r);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::span<const double> values() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * labels_.size() + j]; }
    Metric metric() const noexcept { return metric_; }
    int block_size() const noexcept { return r_; }
    /// Index of a label; throws std::out_of_range.
    std::size_t index_of(std::string_view label) const;
    /// Restriction to the given row indices, in that order.
    DistanceMatrix subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::vector<std::string> labels_;
    std::vector<double> values_;
    Metric metric_ = Metric::jensen_shannon;
    int r_ = 3;
};

using LabelledDistribution = std::pair<std::string, BlockDistribution>;

/// All pairwise distances, each unordered pair computed once. Requires >= 2 entries with a
/// common block size; throws DuplicateLabel and MismatchedBlockSize.
DistanceMatrix build_distance_matrix(std::span<const LabelledDistribution> dists, Metric metric,
                                     unsigned threads = 0);

/// Splits every corpus with sample_corpus, estimates size-r distributions per sample, and
/// returns the sample-by-sample matrix labelled "<language>#<k>".
DistanceMatrix sample_distance_matrix(std::span<const Corpus> group, std::size_t target_tokens, Metric metric,
                                      std::uint64_t seed, int r = 3, std::size_t max_samples = 20,
                                      unsigned threads = 0);

}  // namespace posdist
