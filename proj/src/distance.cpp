#include "posdist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "posdist/error.hpp"
#include "posdist/parallel.hpp"
#include "posdist/random.hpp"

namespace posdist {
namespace {

void check_same_space(const BlockDistribution& p, const BlockDistribution& q) {
    if (p.block_size() != q.block_size() || p.alphabet_size() != q.alphabet_size()) {
        throw MismatchedBlockSize("distributions over blocks of size " + std::to_string(p.block_size()) + " and " +
                                  std::to_string(q.block_size()));
    }
}

// Merge over the union of the two sorted supports; f(p_j, q_j) with a zero for the missing side.
template <typename F>
double merge_sum(const BlockDistribution& p, const BlockDistribution& q, F&& f) {
    const auto a = p.entries();
    const auto b = q.entries();
    std::size_t i = 0, j = 0;
    double sum = 0.0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            sum += f(a[i++].second, 0.0);
        } else if (i == a.size() || b[j].first < a[i].first) {
            sum += f(0.0, b[j++].second);
        } else {
            sum += f(a[i++].second, b[j++].second);
        }
    }
    return sum;
}

double clamp_unit(double d) { return std::clamp(d, 0.0, 1.0); }

}  // namespace

std::string_view to_string(Metric metric) {
    return metric == Metric::jensen_shannon ? "jensen_shannon" : "hellinger";
}

Metric parse_metric(std::string_view text) {
    if (text == "jensen_shannon" || text == "js") return Metric::jensen_shannon;
    if (text == "hellinger") return Metric::hellinger;
    throw ConfigError("unknown metric '" + std::string(text) + "' (expected jensen_shannon or hellinger)");
}

double js_distance(const BlockDistribution& p, const BlockDistribution& q) {
    check_same_space(p, q);
    const double div = merge_sum(p, q, [](double x, double y) {
        const double m = x + y;
        double t = 0.0;
        if (x > 0.0) t += x * std::log2(2.0 * x / m);
        if (y > 0.0) t += y * std::log2(2.0 * y / m);
        return t;
    });
    return clamp_unit(std::sqrt(std::max(0.0, 0.5 * div)));
}

double hellinger_distance(const BlockDistribution& p, const BlockDistribution& q) {
    check_same_space(p, q);
    const double s = merge_sum(p, q, [](double x, double y) {
        const double d = std::sqrt(x) - std::sqrt(y);
        return d * d;
    });
    return clamp_unit(std::sqrt(0.5 * s));
}

double distance(const BlockDistribution& p, const BlockDistribution& q, Metric metric) {
    return metric == Metric::jensen_shannon ? js_distance(p, q) : hellinger_distance(p, q);
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels, std::vector<double> values, Metric metric, int r)
    : labels_(std::move(labels)), values_(std::move(values)), metric_(metric), r_(r) {
    const std::size_t n = labels_.size();
    if (values_.size() != n * n) throw std::invalid_argument("distance matrix values must be n*n");
    std::set<std::string_view> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw DuplicateLabel("duplicate label '" + l + "'");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (values_[i * n + i] != 0.0) throw std::invalid_argument("distance matrix diagonal must be zero");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (values_[i * n + j] != values_[j * n + i]) throw std::invalid_argument("distance matrix must be symmetric");
        }
    }
}

std::size_t DistanceMatrix::index_of(std::string_view label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::out_of_range("label '" + std::string(label) + "' not in distance matrix");
    return static_cast<std::size_t>(it - labels_.begin());
}

DistanceMatrix DistanceMatrix::subset(std::span<const std::size_t> indices) const {
    std::vector<std::string> labels;
    std::vector<double> values;
    labels.reserve(indices.size());
    values.reserve(indices.size() * indices.size());
    for (const std::size_t i : indices) labels.push_back(labels_.at(i));
    for (const std::size_t i : indices)
        for (const std::size_t j : indices) values.push_back((*this)(i, j));
    return DistanceMatrix(std::move(labels), std::move(values), metric_, r_);
}

DistanceMatrix build_distance_matrix(std::span<const LabelledDistribution> dists, Metric metric, unsigned threads) {
    const std::size_t n = dists.size();
    if (n < 2) throw InsufficientData("distance matrix needs at least 2 distributions");
    std::set<std::string_view> seen;
    for (const auto& [label, d] : dists) {
        if (!seen.insert(label).second) throw DuplicateLabel("duplicate label '" + label + "'");
        if (d.block_size() != dists[0].second.block_size() || d.alphabet_size() != dists[0].second.alphabet_size()) {
            throw MismatchedBlockSize("'" + label + "' uses a different block size or alphabet");
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    std::vector<double> values(n * n, 0.0);
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const double d = distance(dists[i].second, dists[j].second, metric);
        values[i * n + j] = d;
        values[j * n + i] = d;
    });
    std::vector<std::string> labels;
    labels.reserve(n);
    for (const auto& [label, d] : dists) labels.push_back(label);
    return DistanceMatrix(std::move(labels), std::move(values), metric, dists[0].second.block_size());
}

DistanceMatrix sample_distance_matrix(std::span<const Corpus> group, std::size_t target_tokens, Metric metric,
                                      std::uint64_t seed, int r, std::size_t max_samples, unsigned threads) {
    if (group.empty()) throw InsufficientData("sample distance matrix needs at least one language");
    std::vector<LabelledDistribution> dists;
    for (const Corpus& c : group) {
        const auto samples = sample_corpus(c, target_tokens, derive_seed(seed, "samples/" + c.language_id), max_samples);
        for (const Corpus& s : samples) dists.emplace_back(s.language_id, estimate_distribution(count_blocks(s, r)));
    }
    return build_distance_matrix(dists, metric, threads);
}

}  // namespace posdist
