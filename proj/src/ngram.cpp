#include "posdist/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "posdist/error.hpp"
#include "posdist/random.hpp"

namespace posdist {
namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 20;

template <typename Entry>
void sort_and_merge(std::vector<Entry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (out > 0 && entries[out - 1].first == entries[i].first) {
            entries[out - 1].second += entries[i].second;
        } else {
            entries[out++] = entries[i];
        }
    }
    entries.resize(out);
}

void check_block_args(int r, int alphabet_size) {
    if (r < 1) throw std::invalid_argument("block size must be >= 1, got " + std::to_string(r));
    if (alphabet_size < 1 || alphabet_size > 256) throw std::invalid_argument("alphabet size must be in [1, 256]");
}

void check_compatible(const BlockCounts& a, const BlockCounts& b) {
    if (a.block_size() != b.block_size() || a.alphabet_size() != b.alphabet_size()) {
        throw MismatchedBlockSize("block counts differ in block size or alphabet");
    }
}

}  // namespace

std::uint64_t block_space_size(int r, int alphabet_size) {
    check_block_args(r, alphabet_size);
    std::uint64_t size = 1;
    const auto L = static_cast<std::uint64_t>(alphabet_size);
    for (int i = 0; i < r; ++i) {
        if (size > (std::uint64_t{1} << 63) / L) {
            throw std::overflow_error("block index space " + std::to_string(alphabet_size) + "^" + std::to_string(r) +
                                      " does not fit in 63 bits");
        }
        size *= L;
    }
    return size;
}

BlockIndex encode_block(std::span<const Symbol> digits, int alphabet_size) {
    if (digits.empty()) throw std::invalid_argument("cannot encode an empty block");
    block_space_size(static_cast<int>(digits.size()), alphabet_size);
    BlockIndex value = 0;
    for (const Symbol d : digits) {
        if (d >= alphabet_size) {
            throw DigitOutOfRange("digit " + std::to_string(static_cast<int>(d)) + " outside [0, " +
                                  std::to_string(alphabet_size - 1) + "]");
        }
        value = value * static_cast<BlockIndex>(alphabet_size) + d;
    }
    return value;
}

std::vector<Symbol> decode_block(BlockIndex index, int r, int alphabet_size) {
    if (index >= block_space_size(r, alphabet_size)) {
        throw DigitOutOfRange("block index " + std::to_string(index) + " outside the size-" + std::to_string(r) +
                              " index space");
    }
    std::vector<Symbol> digits(static_cast<std::size_t>(r));
    for (int k = r - 1; k >= 0; --k) {
        digits[static_cast<std::size_t>(k)] = static_cast<Symbol>(index % static_cast<BlockIndex>(alphabet_size));
        index /= static_cast<BlockIndex>(alphabet_size);
    }
    return digits;
}

BlockCounts::BlockCounts(int r, int alphabet_size, std::vector<Entry> entries)
    : r_(r), alphabet_size_(alphabet_size), entries_(std::move(entries)) {
    sort_and_merge(entries_);
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0; });
    for (const auto& e : entries_) total_ += e.second;
}

std::uint64_t BlockCounts::count(BlockIndex index) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                     [](const Entry& e, BlockIndex key) { return e.first < key; });
    return it != entries_.end() && it->first == index ? it->second : 0;
}

double BlockCounts::space_size() const { return std::pow(static_cast<double>(alphabet_size_), r_); }

BlockCounts count_blocks(std::span<const TagSequence> sentences, int r, int alphabet_size) {
    const std::uint64_t space = block_space_size(r, alphabet_size);
    const auto L = static_cast<BlockIndex>(alphabet_size);
    const BlockIndex lead = space / L;  // L^(r-1)
    const auto ur = static_cast<std::size_t>(r);

    std::vector<BlockCounts::Entry> entries;
    auto for_each_block = [&](auto&& sink) {
        for (const auto& s : sentences) {
            if (s.size() < ur) continue;
            BlockIndex idx = 0;
            for (std::size_t k = 0; k < ur; ++k) idx = idx * L + s[k];
            sink(idx);
            for (std::size_t k = ur; k < s.size(); ++k) {
                idx = (idx - s[k - ur] * lead) * L + s[k];
                sink(idx);
            }
        }
    };

    if (space <= kDenseLimit) {
        std::vector<std::uint32_t> dense(space, 0);
        for_each_block([&](BlockIndex idx) { ++dense[idx]; });
        for (BlockIndex j = 0; j < space; ++j) {
            if (dense[j]) entries.emplace_back(j, dense[j]);
        }
    } else {
        std::unordered_map<BlockIndex, std::uint64_t> sparse;
        for_each_block([&](BlockIndex idx) { ++sparse[idx]; });
        entries.assign(sparse.begin(), sparse.end());
    }
    return BlockCounts(r, alphabet_size, std::move(entries));
}

BlockCounts count_blocks(const Corpus& corpus, int r) {
    return count_blocks(std::span<const TagSequence>(corpus.sentences), r, corpus.alphabet_size);
}

BlockCounts add_counts(const BlockCounts& a, const BlockCounts& b) {
    check_compatible(a, b);
    std::vector<BlockCounts::Entry> merged(a.entries().begin(), a.entries().end());
    merged.insert(merged.end(), b.entries().begin(), b.entries().end());
    return BlockCounts(a.block_size(), a.alphabet_size(), std::move(merged));
}

BlockCounts subtract_counts(const BlockCounts& a, const BlockCounts& b) {
    check_compatible(a, b);
    std::vector<BlockCounts::Entry> out(a.entries().begin(), a.entries().end());
    std::size_t i = 0;
    for (const auto& [idx, n] : b.entries()) {
        while (i < out.size() && out[i].first < idx) ++i;
        if (i == out.size() || out[i].first != idx || out[i].second < n) {
            throw std::invalid_argument("subtract_counts: subtrahend is not contained in the minuend");
        }
        out[i].second -= n;
    }
    return BlockCounts(a.block_size(), a.alphabet_size(), std::move(out));
}

BlockDistribution::BlockDistribution(int r, int alphabet_size, std::vector<Entry> entries)
    : r_(r), alphabet_size_(alphabet_size), entries_(std::move(entries)) {
    sort_and_merge(entries_);
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
    double sum = 0.0;
    for (const auto& e : entries_) {
        if (!(e.second >= 0.0)) throw std::invalid_argument("negative or NaN probability");
        sum += e.second;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("distribution sums to " + std::to_string(sum) + ", not 1");
    }
}

double BlockDistribution::probability(BlockIndex index) const {
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                                     [](const Entry& e, BlockIndex key) { return e.first < key; });
    return it != entries_.end() && it->first == index ? it->second : 0.0;
}

BlockDistribution estimate_distribution(const BlockCounts& counts) {
    if (counts.total() == 0) throw EmptyCounts("cannot estimate a distribution from zero counts");
    const double total = static_cast<double>(counts.total());
    std::vector<BlockDistribution::Entry> probs;
    probs.reserve(counts.distinct());
    for (const auto& [idx, n] : counts.entries()) probs.emplace_back(idx, static_cast<double>(n) / total);
    return BlockDistribution(counts.block_size(), counts.alphabet_size(), std::move(probs));
}

std::optional<TransitionTable::Row> TransitionTable::row(BlockIndex context) const {
    const auto it = std::lower_bound(contexts_.begin(), contexts_.end(), context);
    if (it == contexts_.end() || *it != context) return std::nullopt;
    return row_at(static_cast<std::size_t>(it - contexts_.begin()));
}

TransitionTable::Row TransitionTable::row_at(std::size_t i) const {
    const auto begin = offsets_[i];
    const auto len = offsets_[i + 1] - begin;
    return Row{std::span<const Symbol>(next_).subspan(begin, len),
               std::span<const double>(probability_).subspan(begin, len),
               std::span<const double>(cumulative_).subspan(begin, len)};
}

double TransitionTable::probability(BlockIndex context, Symbol next) const {
    const auto r = row(context);
    if (!r) return 0.0;
    const auto it = std::lower_bound(r->next.begin(), r->next.end(), next);
    if (it == r->next.end() || *it != next) return 0.0;
    return r->probability[static_cast<std::size_t>(it - r->next.begin())];
}

TransitionTable estimate_transitions(const BlockCounts& counts) {
    if (counts.block_size() < 2) throw std::invalid_argument("transition estimation needs blocks of size >= 2");
    if (counts.total() == 0) throw EmptyCounts("cannot estimate transitions from zero counts");
    TransitionTable table;
    table.order_ = counts.block_size() - 1;
    table.alphabet_size_ = counts.alphabet_size();
    const auto L = static_cast<BlockIndex>(counts.alphabet_size());
    const auto entries = counts.entries();

    std::size_t i = 0;
    while (i < entries.size()) {
        const BlockIndex context = entries[i].first / L;
        std::size_t j = i;
        std::uint64_t row_total = 0;
        while (j < entries.size() && entries[j].first / L == context) row_total += entries[j++].second;
        double running = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            const double p = static_cast<double>(entries[k].second) / static_cast<double>(row_total);
            running += p;
            table.next_.push_back(static_cast<Symbol>(entries[k].first % L));
            table.probability_.push_back(p);
            table.cumulative_.push_back(running);
        }
        table.contexts_.push_back(context);
        table.offsets_.push_back(table.next_.size());
        i = j;
    }
    return table;
}

std::vector<Corpus> sample_corpus(const Corpus& corpus, std::size_t target_tokens, std::uint64_t seed,
                                  std::size_t max_samples) {
    if (target_tokens == 0) throw std::invalid_argument("target_tokens must be positive");
    std::vector<std::size_t> order(corpus.sentences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));

    std::size_t remaining = corpus.token_count();
    std::vector<Corpus> samples;
    std::size_t pos = 0;
    while (samples.size() < max_samples && remaining >= target_tokens) {
        Corpus sample{corpus.language_id + "#" + std::to_string(samples.size()), {}, corpus.alphabet_size};
        std::size_t tokens = 0;
        while (tokens < target_tokens) {
            const auto& s = corpus.sentences[order[pos++]];
            tokens += s.size();
            sample.sentences.push_back(s);
        }
        remaining -= tokens;
        samples.push_back(std::move(sample));
    }
    if (samples.empty()) {
        throw InsufficientData("corpus '" + corpus.language_id + "' has " + std::to_string(corpus.token_count()) +
                               " tokens, fewer than the sample target " + std::to_string(target_tokens));
    }
    return samples;
}

}  // namespace posdist
