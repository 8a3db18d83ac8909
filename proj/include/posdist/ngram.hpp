#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "posdist/corpus.hpp"

namespace posdist {

/// Base-L number (i_0, ..., i_{r-1}) with i_0 most significant.
using BlockIndex = std::uint64_t;

/// L^r; throws std::overflow_error when it does not fit in 63 bits.
std::uint64_t block_space_size(int r, int alphabet_size);

/// Throws DigitOutOfRange for digits outside [0, L) and std::invalid_argument for an empty block.
BlockIndex encode_block(std::span<const Symbol> digits, int alphabet_size = kNumTags);
std::vector<Symbol> decode_block(BlockIndex index, int r, int alphabet_size = kNumTags);

/// Sparse occurrence counts of size-r blocks, sorted by block index.
class BlockCounts {
public:
    using Entry = std::pair<BlockIndex, std::uint64_t>;

    BlockCounts(int r, int alphabet_size) : r_(r), alphabet_size_(alphabet_size) {}
    /// Entries may be unsorted and repeated; repeated keys are summed and zero counts dropped.
    BlockCounts(int r, int alphabet_size, std::vector<Entry> entries);

    int block_size() const noexcept { return r_; }
    int alphabet_size() const noexcept { return alphabet_size_; }
    /// N^(r): sum of all counts.
    std::uint64_t total() const noexcept { return total_; }
    std::size_t distinct() const noexcept { return entries_.size(); }
    std::span<const Entry> entries() const noexcept { return entries_; }
    std::uint64_t count(BlockIndex index) const;
    /// L^r as a double (the entropy estimators' alphabet size).
    double space_size() const;

    friend bool operator==(const BlockCounts&, const BlockCounts&) = default;

private:
    int r_;
    int alphabet_size_;
    std::vector<Entry> entries_;
    std::uint64_t total_ = 0;
};

/// Overlapping size-r blocks within each sentence; blocks never cross sentence boundaries.
BlockCounts count_blocks(const Corpus& corpus, int r);
BlockCounts count_blocks(std::span<const TagSequence> sentences, int r, int alphabet_size);

BlockCounts add_counts(const BlockCounts& a, const BlockCounts& b);
/// a - b; throws std::invalid_argument if some count of b exceeds the one in a.
BlockCounts subtract_counts(const BlockCounts& a, const BlockCounts& b);

/// Maximum-likelihood block probabilities n_j / N, sparse and sorted by index.
class BlockDistribution {
public:
    using Entry = std::pair<BlockIndex, double>;

    BlockDistribution(int r, int alphabet_size) : r_(r), alphabet_size_(alphabet_size) {}
    /// Validates nonnegativity and normalization to 1e-12 after merging repeated keys.
    BlockDistribution(int r, int alphabet_size, std::vector<Entry> entries);

    int block_size() const noexcept { return r_; }
    int alphabet_size() const noexcept { return alphabet_size_; }
    std::span<const Entry> entries() const noexcept { return entries_; }
    double probability(BlockIndex index) const;
    std::size_t support_size() const noexcept { return entries_.size(); }

private:
    int r_;
    int alphabet_size_;
    std::vector<Entry> entries_;
};

/// Throws EmptyCounts when counts.total() == 0.
BlockDistribution estimate_distribution(const BlockCounts& counts);

/// Order-u transition rows estimated from size-(u+1) counts. Rows exist only for observed contexts.
class TransitionTable {
public:
    struct Row {
        std::span<const Symbol> next;
        std::span<const double> probability;
        std::span<const double> cumulative;
    };

    int order() const noexcept { return order_; }
    int alphabet_size() const noexcept { return alphabet_size_; }
    std::size_t row_count() const noexcept { return contexts_.size(); }
    std::span<const BlockIndex> contexts() const noexcept { return contexts_; }
    std::optional<Row> row(BlockIndex context) const;
    Row row_at(std::size_t i) const;
    /// p(next | context), 0 when unobserved.
    double probability(BlockIndex context, Symbol next) const;

private:
    friend TransitionTable estimate_transitions(const BlockCounts& counts);

    int order_ = 0;
    int alphabet_size_ = kNumTags;
    std::vector<BlockIndex> contexts_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Symbol> next_;
    std::vector<double> probability_;
    std::vector<double> cumulative_;
};

/// row(context)[z] = n(context z) / sum_v n(context v). Requires r >= 2; throws EmptyCounts.
TransitionTable estimate_transitions(const BlockCounts& counts);

/// Sentence-level subsamples of roughly target_tokens tokens each, drawn without
/// replacement. A sample closes as soon as it reaches target_tokens; drawing stops
/// after max_samples samples or when the remaining sentences cannot reach the target.
/// Throws InsufficientData if not even one sample can be formed.
std::vector<Corpus> sample_corpus(const Corpus& corpus, std::size_t target_tokens, std::uint64_t seed,
                                  std::size_t max_samples = 20);

}  // namespace posdist
