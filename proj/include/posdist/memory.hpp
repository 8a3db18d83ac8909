#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posdist/corpus.hpp"
#include "posdist/entropy.hpp"
#include "posdist/ngram.hpp"
#include "posdist/random.hpp"

namespace posdist {

/// Estimated predictability gains G_u for u = 0..r_max-2, in bits.
struct GainCurve {
    std::vector<double> values;
    /// Block entropies H_1..H_{r_max}; entropies[r-1] is H_r.
    std::vector<EntropyEstimate> entropies;
    Estimator estimator = Estimator::nsb;
    int r_max = 0;

    double at(int u) const { return values.at(static_cast<std::size_t>(u)); }
};

/// G_u = -(H_{u+2} - 2 H_{u+1} + H_u) with H_0 = 0 from block entropies H_1..H_R.
std::vector<double> gains_from_entropies(std::span<const double> block_entropies);

/// Uses block sizes 1..r_max; r_max defaults to the largest size supported by the corpus.
GainCurve gain_curve(const Corpus& corpus, Estimator estimator, std::optional<int> r_max = std::nullopt);

/// Exact gain from stationary joint distributions: joints[r-1] is the size-r joint, r = 1..u+2.
/// Entropy-difference form. Throws InconsistentMarginals if the joints disagree.
double predictability_gain_exact(std::span<const BlockDistribution> joints, int u);
/// Same quantity as a conditional relative entropy between order-(u+1) and order-u predictions.
double predictability_gain_kl(std::span<const BlockDistribution> joints, int u);
/// Throws InconsistentMarginals unless each size-r joint marginalizes onto size r-1 on both ends.
void check_marginals(std::span<const BlockDistribution> joints, double tolerance = 1e-10);

/// Order-m generator fitted to a corpus; used to build surrogate corpora.
class SurrogateModel {
public:
    SurrogateModel(const Corpus& source, int m);

    int order() const noexcept { return m_; }
    int alphabet_size() const noexcept { return L_; }

    /// Lengths <= m are drawn whole from the empirical block distribution of that length;
    /// longer sentences start from an empirical m-block and continue along transition rows.
    /// A context without a row backs off to its longest suffix that has one.
    TagSequence generate(std::size_t length, Rng& rng) const;
    Corpus generate(std::span<const std::size_t> lengths, Rng& rng, std::string language_id = "surrogate") const;

    /// False when some observed m-block has no order-m row, so generation can back off.
    bool covers_all_contexts() const noexcept { return covers_all_; }

private:
    struct Table {
        std::vector<BlockIndex> keys;
        std::vector<double> cumulative;
    };
    struct Rows {
        TransitionTable table;
        std::vector<std::int32_t> dense;  // context -> row index or -1; empty when the space is large
        std::optional<TransitionTable::Row> find(BlockIndex context) const;
    };

    BlockIndex draw(const Table& t, Rng& rng) const;
    Symbol step(BlockIndex context, Rng& rng) const;

    int m_;
    int L_;
    std::vector<Table> blocks_;  // blocks_[n-1]: empirical size-n blocks, n = 1..max(m, 1)
    std::vector<Rows> rows_;     // rows_[k-1]: order-k transitions, k = 1..m
    std::vector<BlockIndex> modulus_;  // L^k for k = 0..m
    bool covers_all_ = true;
};

/// K surrogates of the source's sentence lengths; replicate k uses seed derive_seed(seed, "surrogate", k).
std::vector<Corpus> generate_surrogates(const SurrogateModel& model, std::span<const std::size_t> sentence_lengths,
                                        int K, std::uint64_t seed);

struct MemoryTestOptions {
    Estimator estimator = Estimator::nsb;
    std::optional<int> r_max;
    unsigned threads = 0;
};

struct MemoryTestResult {
    int m = 0;
    int K = 0;
    double statistic = 0.0;       // G_m on the real corpus
    double surrogate_mean = 0.0;  // mean of surrogate G_m
    double surrogate_std = 0.0;   // sample std (K-1) of surrogate G_m; NaN when K = 1
    double p_value = 0.0;         // #{k : G_m^(k) >= G_m} / K
    GainCurve real;
    std::vector<double> mean_curve;  // surrogate mean of G_u for every u
    std::vector<double> std_curve;   // surrogate std of G_u for every u
    std::vector<double> surrogate_statistics;  // G_m of each surrogate, by replicate index
};

/// Tests "memory = m": compares G_m on the corpus with its distribution over K order-m surrogates.
/// Throws InsufficientData if r_max < m + 2.
MemoryTestResult memory_test(const Corpus& corpus, int m, int K, std::uint64_t seed,
                             const MemoryTestOptions& options = {});

}  // namespace posdist
