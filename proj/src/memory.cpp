#include "posdist/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "posdist/error.hpp"
#include "posdist/parallel.hpp"

namespace posdist {
namespace {

constexpr BlockIndex kDenseRowLimit = BlockIndex{1} << 20;

double plugin_bits(const BlockDistribution& d) { return entropy_plugin(d).value; }

void check_joints(std::span<const BlockDistribution> joints, int u) {
    if (u < 0) throw std::invalid_argument("gain order u must be >= 0");
    if (joints.size() < static_cast<std::size_t>(u + 2)) {
        throw InsufficientData("gain G_" + std::to_string(u) + " needs joints up to size " + std::to_string(u + 2));
    }
    for (std::size_t k = 0; k < joints.size(); ++k) {
        if (joints[k].block_size() != static_cast<int>(k + 1) ||
            joints[k].alphabet_size() != joints[0].alphabet_size()) {
            throw MismatchedBlockSize("joint " + std::to_string(k) + " has the wrong block size or alphabet");
        }
    }
}

}  // namespace

std::vector<double> gains_from_entropies(std::span<const double> h) {
    std::vector<double> g;
    if (h.size() < 2) return g;
    g.reserve(h.size() - 1);
    auto H = [&](std::size_t r) { return r == 0 ? 0.0 : h[r - 1]; };
    for (std::size_t u = 0; u + 2 <= h.size(); ++u) g.push_back(-(H(u + 2) - 2.0 * H(u + 1) + H(u)));
    return g;
}

GainCurve gain_curve(const Corpus& corpus, Estimator estimator, std::optional<int> r_max_override) {
    const int R = r_max_override ? *r_max_override : r_max(corpus.token_count(), corpus.alphabet_size);
    if (R < 2) throw InsufficientData("gain curve needs r_max >= 2");
    GainCurve curve;
    curve.estimator = estimator;
    curve.r_max = R;
    std::vector<double> h;
    for (int r = 1; r <= R; ++r) {
        const BlockCounts counts = count_blocks(corpus, r);
        if (counts.total() < 2) {
            throw InsufficientData(corpus.language_id + ": fewer than 2 blocks of size " + std::to_string(r));
        }
        curve.entropies.push_back(estimate_entropy(counts, estimator));
        h.push_back(curve.entropies.back().value);
    }
    curve.values = gains_from_entropies(h);
    return curve;
}

void check_marginals(std::span<const BlockDistribution> joints, double tolerance) {
    for (std::size_t k = 1; k < joints.size(); ++k) {
        const auto L = static_cast<BlockIndex>(joints[k].alphabet_size());
        const BlockIndex lead = static_cast<BlockIndex>(std::llround(std::pow(static_cast<double>(L), k)));
        std::map<BlockIndex, double> left, right;
        for (const auto& [idx, p] : joints[k].entries()) {
            left[idx / L] += p;
            right[idx % lead] += p;
        }
        for (const auto* marg : {&left, &right}) {
            for (const auto& [idx, p] : *marg) {
                if (std::abs(p - joints[k - 1].probability(idx)) > tolerance) {
                    throw InconsistentMarginals("size-" + std::to_string(k + 1) +
                                                " joint does not marginalize onto the size-" + std::to_string(k) +
                                                " joint");
                }
            }
            for (const auto& [idx, p] : joints[k - 1].entries()) {
                if (p > tolerance && !marg->contains(idx)) {
                    throw InconsistentMarginals("size-" + std::to_string(k) + " joint has mass outside the size-" +
                                                std::to_string(k + 1) + " marginal");
                }
            }
        }
    }
}

double predictability_gain_exact(std::span<const BlockDistribution> joints, int u) {
    check_joints(joints, u);
    check_marginals(joints.first(static_cast<std::size_t>(u + 2)));
    std::vector<double> h;
    for (int r = 1; r <= u + 2; ++r) h.push_back(plugin_bits(joints[static_cast<std::size_t>(r - 1)]));
    return gains_from_entropies(h)[static_cast<std::size_t>(u)];
}

double predictability_gain_kl(std::span<const BlockDistribution> joints, int u) {
    check_joints(joints, u);
    check_marginals(joints.first(static_cast<std::size_t>(u + 2)));
    const auto L = static_cast<BlockIndex>(joints[0].alphabet_size());
    const BlockDistribution& top = joints[static_cast<std::size_t>(u + 1)];  // size u+2
    const BlockDistribution& mid = joints[static_cast<std::size_t>(u)];      // size u+1
    BlockIndex inner = 1;                                                    // L^u
    for (int i = 0; i < u; ++i) inner *= L;
    auto p_inner = [&](BlockIndex idx) { return u == 0 ? 1.0 : joints[static_cast<std::size_t>(u - 1)].probability(idx); };

    // sum p(x_1..x_{u+2}) log2 [ p(x_{u+2} | x_1..x_{u+1}) / p(x_{u+2} | x_2..x_{u+1}) ]
    double sum = 0.0;
    for (const auto& [idx, p] : top.entries()) {
        if (p <= 0.0) continue;
        const double prefix = mid.probability(idx / L);
        const BlockIndex suffix_idx = idx % (inner * L);
        const double suffix = mid.probability(suffix_idx);
        const double middle = p_inner(suffix_idx / L);
        const double fine = p / prefix;
        const double coarse = suffix / middle;
        sum += p * std::log2(fine / coarse);
    }
    return sum;
}

std::optional<TransitionTable::Row> SurrogateModel::Rows::find(BlockIndex context) const {
    if (dense.empty()) return table.row(context);
    if (context >= dense.size() || dense[context] < 0) return std::nullopt;
    return table.row_at(static_cast<std::size_t>(dense[context]));
}

SurrogateModel::SurrogateModel(const Corpus& source, int m) : m_(m), L_(source.alphabet_size) {
    if (m < 0) throw std::invalid_argument("surrogate order must be >= 0");
    const int table_sizes = std::max(m, 1);
    for (int n = 1; n <= table_sizes; ++n) {
        const BlockCounts counts = count_blocks(source, n);
        Table t;
        double acc = 0.0;
        for (const auto& [idx, c] : counts.entries()) {
            t.keys.push_back(idx);
            t.cumulative.push_back(acc += static_cast<double>(c));
        }
        blocks_.push_back(std::move(t));
    }
    if (blocks_[0].keys.empty()) throw EmptyCounts(source.language_id + ": corpus has no tokens");

    modulus_.push_back(1);
    for (int k = 1; k <= m; ++k) modulus_.push_back(modulus_.back() * static_cast<BlockIndex>(L_));

    for (int k = 1; k <= m; ++k) {
        const BlockCounts counts = count_blocks(source, k + 1);
        Rows rows;
        if (counts.total() > 0) rows.table = estimate_transitions(counts);
        if (modulus_[static_cast<std::size_t>(k)] <= kDenseRowLimit) {
            rows.dense.assign(modulus_[static_cast<std::size_t>(k)], -1);
            const auto ctx = rows.table.contexts();
            for (std::size_t i = 0; i < ctx.size(); ++i) rows.dense[ctx[i]] = static_cast<std::int32_t>(i);
        }
        rows_.push_back(std::move(rows));
    }
    if (m >= 1) {
        for (const BlockIndex key : blocks_[static_cast<std::size_t>(m - 1)].keys) {
            if (!rows_.back().find(key)) {
                covers_all_ = false;
                break;
            }
        }
    }
}

BlockIndex SurrogateModel::draw(const Table& t, Rng& rng) const { return t.keys[rng.pick(t.cumulative)]; }

Symbol SurrogateModel::step(BlockIndex context, Rng& rng) const {
    for (int k = m_; k >= 1; --k) {
        const auto row = rows_[static_cast<std::size_t>(k - 1)].find(context % modulus_[static_cast<std::size_t>(k)]);
        if (row) return row->next[rng.pick(row->cumulative)];
    }
    if (blocks_[0].keys.empty()) throw MissingContext("no transition row and no unigram fallback");
    return static_cast<Symbol>(draw(blocks_[0], rng));
}

TagSequence SurrogateModel::generate(std::size_t length, Rng& rng) const {
    TagSequence s(length);
    if (length == 0) return s;
    if (m_ == 0) {
        for (auto& x : s) x = static_cast<Symbol>(draw(blocks_[0], rng));
        return s;
    }
    const std::size_t head = std::min<std::size_t>(length, static_cast<std::size_t>(m_));
    const Table& init = blocks_[head - 1];
    if (init.keys.empty()) {
        throw MissingContext("no observed blocks of size " + std::to_string(head) + " to start a sentence");
    }
    BlockIndex ctx = draw(init, rng);
    const std::vector<Symbol> digits = decode_block(ctx, static_cast<int>(head), L_);
    std::copy(digits.begin(), digits.end(), s.begin());
    const BlockIndex mod = modulus_[static_cast<std::size_t>(m_)];
    for (std::size_t i = head; i < length; ++i) {
        const Symbol z = step(ctx, rng);
        s[i] = z;
        ctx = (ctx * static_cast<BlockIndex>(L_) + z) % mod;
    }
    return s;
}

Corpus SurrogateModel::generate(std::span<const std::size_t> lengths, Rng& rng, std::string language_id) const {
    Corpus c;
    c.language_id = std::move(language_id);
    c.alphabet_size = L_;
    c.sentences.reserve(lengths.size());
    for (const std::size_t n : lengths) c.sentences.push_back(generate(n, rng));
    return c;
}

std::vector<Corpus> generate_surrogates(const SurrogateModel& model, std::span<const std::size_t> sentence_lengths,
                                        int K, std::uint64_t seed) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    std::vector<Corpus> out;
    out.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        Rng rng(derive_seed(seed, "surrogate", static_cast<std::uint64_t>(k)));
        out.push_back(model.generate(sentence_lengths, rng, "surrogate#" + std::to_string(k)));
    }
    return out;
}

MemoryTestResult memory_test(const Corpus& corpus, int m, int K, std::uint64_t seed,
                             const MemoryTestOptions& options) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    const int R = options.r_max ? *options.r_max : r_max(corpus.token_count(), corpus.alphabet_size);
    if (R < m + 2) {
        throw InsufficientData(corpus.language_id + ": r_max = " + std::to_string(R) + " is too small to test m = " +
                               std::to_string(m));
    }

    MemoryTestResult result;
    result.m = m;
    result.K = K;
    result.real = gain_curve(corpus, options.estimator, R);
    result.statistic = result.real.at(m);

    const SurrogateModel model(corpus, m);
    const std::vector<std::size_t> lengths = corpus.sentence_lengths();
    const std::size_t n_u = result.real.values.size();
    std::vector<std::vector<double>> curves(static_cast<std::size_t>(K));
    parallel_for(curves.size(), options.threads, [&](std::size_t k) {
        Rng rng(derive_seed(seed, "surrogate", k));
        const Corpus s = model.generate(lengths, rng, corpus.language_id + "#surrogate");
        curves[k] = gain_curve(s, options.estimator, R).values;
    });

    std::size_t exceed = 0;
    result.surrogate_statistics.reserve(curves.size());
    for (const auto& c : curves) {
        result.surrogate_statistics.push_back(c[static_cast<std::size_t>(m)]);
        if (c[static_cast<std::size_t>(m)] >= result.statistic) ++exceed;
    }
    result.p_value = static_cast<double>(exceed) / static_cast<double>(K);

    result.mean_curve.assign(n_u, 0.0);
    result.std_curve.assign(n_u, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t u = 0; u < n_u; ++u) {
        double mean = 0.0;
        for (const auto& c : curves) mean += c[u];
        mean /= static_cast<double>(K);
        result.mean_curve[u] = mean;
        if (K > 1) {
            double ss = 0.0;
            for (const auto& c : curves) ss += (c[u] - mean) * (c[u] - mean);
            result.std_curve[u] = std::sqrt(ss / static_cast<double>(K - 1));
        }
    }
    result.surrogate_mean = result.mean_curve[static_cast<std::size_t>(m)];
    result.surrogate_std = result.std_curve[static_cast<std::size_t>(m)];
    return result;
}

}  // namespace posdist
