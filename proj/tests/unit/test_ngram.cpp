#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "posdist/error.hpp"
#include "posdist/ngram.hpp"
#include "posdist/random.hpp"
#include "posdist/synthetic.hpp"

using namespace posdist;

namespace {

// VERB DET NOUN AUX ADV VERB ADJ NOUN PUNCT VERB ADJ NOUN SCONJ PROPN VERB DET NOUN
const TagSequence kExample{14, 5, 7, 3, 2, 14, 0, 7, 12, 14, 0, 7, 13, 11, 14, 5, 7};

Corpus random_corpus(std::uint64_t seed, int L, std::size_t sentences, std::size_t max_len) {
    Rng rng(seed);
    Corpus c{"rnd", {}, L};
    for (std::size_t i = 0; i < sentences; ++i) {
        TagSequence s(1 + rng.below(max_len));
        for (auto& x : s) x = static_cast<Symbol>(rng.below(static_cast<std::uint64_t>(L)));
        c.sentences.push_back(std::move(s));
    }
    return c;
}

std::map<std::vector<Symbol>, std::uint64_t> brute_counts(const Corpus& c, int r) {
    std::map<std::vector<Symbol>, std::uint64_t> m;
    for (const auto& s : c.sentences)
        for (std::size_t i = 0; i + static_cast<std::size_t>(r) <= s.size(); ++i)
            ++m[std::vector<Symbol>(s.begin() + static_cast<std::ptrdiff_t>(i), s.begin() + static_cast<std::ptrdiff_t>(i) + r)];
    return m;
}

}  // namespace

TEST(BlockIndex, PaperEnumeration) {
    const std::vector<Symbol> a{0, 0, 0}, b{0, 0, 1}, c{14, 14, 14};
    EXPECT_EQ(encode_block(a), 0u);
    EXPECT_EQ(encode_block(b), 1u);
    EXPECT_EQ(encode_block(c), 3374u);
    const std::vector<Symbol> bad{0, 15};
    EXPECT_THROW(encode_block(bad), DigitOutOfRange);
    EXPECT_THROW(decode_block(3375, 3), DigitOutOfRange);
}

TEST(BlockIndex, RoundTrip) {
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const int r = 1 + static_cast<int>(rng.below(8));
        std::vector<Symbol> d(static_cast<std::size_t>(r));
        for (auto& x : d) x = static_cast<Symbol>(rng.below(15));
        EXPECT_EQ(decode_block(encode_block(d), r), d);
    }
    EXPECT_THROW(block_space_size(17, 15), std::overflow_error);
}

TEST(CountBlocks, WorkedExample) {
    const Corpus c{"en", {kExample}, kNumTags};
    const auto u = count_blocks(c, 1);
    EXPECT_EQ(u.count(0), 2u);   // ADJ
    EXPECT_EQ(u.count(14), 4u);  // VERB
    EXPECT_EQ(u.total(), 17u);
    const auto b = count_blocks(c, 2);
    const std::vector<Symbol> det_noun{5, 7};
    EXPECT_EQ(b.count(encode_block(det_noun)), 2u);
    EXPECT_EQ(b.total(), 16u);
    EXPECT_EQ(count_blocks(c, 16).total(), 2u);
    EXPECT_THROW(count_blocks(c, 18), std::overflow_error);
}

TEST(CountBlocks, NeverCrossSentences) {
    const Corpus c{"x", {{1, 2}, {3, 4}}, kNumTags};
    const auto b = count_blocks(c, 2);
    EXPECT_EQ(b.total(), 2u);
    const std::vector<Symbol> cross{2, 3};
    EXPECT_EQ(b.count(encode_block(cross)), 0u);
}

TEST(CountBlocks, MatchesBruteForceDenseAndSparse) {
    const Corpus c = random_corpus(11, 15, 300, 12);
    for (int r : {1, 2, 3, 6, 7}) {
        const auto counts = count_blocks(c, r);
        const auto brute = brute_counts(c, r);
        ASSERT_EQ(counts.distinct(), brute.size()) << "r=" << r;
        std::uint64_t expected_total = 0;
        for (const auto& s : c.sentences) expected_total += s.size() >= static_cast<std::size_t>(r) ? s.size() - r + 1 : 0;
        EXPECT_EQ(counts.total(), expected_total);
        for (const auto& [digits, n] : brute) EXPECT_EQ(counts.count(encode_block(digits)), n);
    }
}

TEST(CountBlocks, AddSubtract) {
    const Corpus a = random_corpus(1, 15, 50, 10), b = random_corpus(2, 15, 40, 10);
    Corpus both = a;
    both.append(b);
    const auto ca = count_blocks(a, 3), cb = count_blocks(b, 3), cab = count_blocks(both, 3);
    EXPECT_EQ(add_counts(ca, cb), cab);
    EXPECT_EQ(subtract_counts(cab, cb), ca);
    EXPECT_THROW(subtract_counts(ca, cab), std::invalid_argument);
}

TEST(Distribution, Normalization) {
    const BlockCounts c(3, kNumTags, {{0, 2}, {1, 2}});
    const auto d = estimate_distribution(c);
    EXPECT_DOUBLE_EQ(d.probability(0), 0.5);
    EXPECT_DOUBLE_EQ(d.probability(1), 0.5);
    EXPECT_EQ(d.probability(2), 0.0);
    const auto single = estimate_distribution(BlockCounts(3, kNumTags, {{42, 7}}));
    EXPECT_EQ(single.probability(42), 1.0);
    EXPECT_THROW(estimate_distribution(BlockCounts(3, kNumTags)), EmptyCounts);
    EXPECT_THROW(BlockDistribution(1, 2, {{0, 0.5}, {1, 0.4}}), std::invalid_argument);
}

TEST(Distribution, UniformSamplingWithinThreeSigma) {
    Rng rng(5);
    Corpus c{"u", {TagSequence(150000)}, kNumTags};
    for (auto& x : c.sentences[0]) x = static_cast<Symbol>(rng.below(15));
    const auto d = estimate_distribution(count_blocks(c, 1));
    const double p = 1.0 / 15.0, sigma = std::sqrt(p * (1 - p) / 150000.0);
    for (int z = 0; z < 15; ++z) EXPECT_NEAR(d.probability(static_cast<BlockIndex>(z)), p, 3 * sigma);
}

TEST(Distribution, MarginalizationConsistency) {
    const Corpus one{"x", {kExample}, kNumTags};
    TagSequence truncated(kExample.begin(), kExample.end() - 1);
    const Corpus head{"x", {truncated}, kNumTags};
    for (int r = 2; r <= 5; ++r) {
        const auto big = estimate_distribution(count_blocks(one, r));
        const auto small = estimate_distribution(count_blocks(head, r - 1));
        std::map<BlockIndex, double> marg;
        for (const auto& [idx, p] : big.entries()) marg[idx / 15] += p;
        ASSERT_EQ(marg.size(), small.support_size());
        for (const auto& [idx, p] : marg) EXPECT_NEAR(p, small.probability(idx), 1e-15);
    }
}

TEST(Transitions, RowsFromCounts) {
    const std::vector<Symbol> dn{5, 7}, da{5, 0};
    const BlockCounts c(2, kNumTags, {{encode_block(dn), 2}, {encode_block(da), 2}});
    const auto t = estimate_transitions(c);
    EXPECT_EQ(t.order(), 1);
    EXPECT_DOUBLE_EQ(t.probability(5, 7), 0.5);
    EXPECT_DOUBLE_EQ(t.probability(5, 0), 0.5);
    EXPECT_FALSE(t.row(6).has_value());
    const auto point = estimate_transitions(BlockCounts(2, kNumTags, {{encode_block(dn), 1}}));
    EXPECT_EQ(point.probability(5, 7), 1.0);
    EXPECT_THROW(estimate_transitions(BlockCounts(2, kNumTags)), EmptyCounts);
    EXPECT_THROW(estimate_transitions(BlockCounts(1, kNumTags, {{0, 1}})), std::invalid_argument);
}

TEST(Transitions, RowsSumToOneAndChainRule) {
    const Corpus c = random_corpus(3, 15, 200, 15);
    const auto counts = count_blocks(c, 3);
    const auto t = estimate_transitions(counts);
    for (std::size_t i = 0; i < t.row_count(); ++i) {
        const auto row = t.row_at(i);
        double s = 0.0;
        for (const double p : row.probability) s += p;
        EXPECT_NEAR(s, 1.0, 1e-12);
        EXPECT_NEAR(row.cumulative.back(), 1.0, 1e-12);
    }
    // p(context) * row(context)[z] = p(context z) with the context marginal taken from the same counts.
    std::map<BlockIndex, double> ctx;
    for (const auto& [idx, n] : counts.entries()) ctx[idx / 15] += static_cast<double>(n);
    for (const auto& [idx, n] : counts.entries()) {
        const double lhs = ctx[idx / 15] / static_cast<double>(counts.total()) *
                           t.probability(idx / 15, static_cast<Symbol>(idx % 15));
        EXPECT_NEAR(lhs, static_cast<double>(n) / static_cast<double>(counts.total()), 1e-15);
    }
}

TEST(Transitions, RecoverKnownChain) {
    Rng rng(17);
    const auto chain = synthetic::random_chain(1, 4, rng);
    const Corpus c = synthetic::sample_corpus(chain, 400000, 10, 30, rng);
    const auto t = estimate_transitions(count_blocks(c, 2));
    std::map<int, double> ctx_n;
    const auto pairs = count_blocks(c, 2);
    for (const auto& [idx, n] : pairs.entries()) ctx_n[static_cast<int>(idx / 4)] += static_cast<double>(n);
    for (int a = 0; a < 4; ++a) {
        for (int z = 0; z < 4; ++z) {
            const double p = chain.probability(static_cast<std::uint64_t>(a), static_cast<Symbol>(z));
            const double sigma = std::sqrt(p * (1 - p) / ctx_n[a]);
            EXPECT_NEAR(t.probability(static_cast<BlockIndex>(a), static_cast<Symbol>(z)), p, 3 * sigma + 1e-12);
        }
    }
}

TEST(SampleCorpus, LargeCorpusGivesTwentySamples) {
    Corpus c{"big", {}, kNumTags};
    Rng rng(1);
    std::size_t total = 0;
    while (total < 250000) {
        c.sentences.push_back(TagSequence(5 + rng.below(30), 1));
        total += c.sentences.back().size();
    }
    const auto samples = sample_corpus(c, 10000, 99);
    ASSERT_EQ(samples.size(), 20u);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        EXPECT_GE(samples[k].token_count(), 10000u);
        EXPECT_EQ(samples[k].language_id, "big#" + std::to_string(k));
    }
    const auto again = sample_corpus(c, 10000, 99);
    for (std::size_t k = 0; k < samples.size(); ++k) EXPECT_EQ(samples[k].sentences, again[k].sentences);
}

TEST(SampleCorpus, SmallCorpusGivesOneSample) {
    Corpus c{"small", {}, kNumTags};
    for (int i = 0; i < 1500; ++i) c.sentences.push_back(TagSequence(10, 2));
    EXPECT_EQ(sample_corpus(c, 10000, 5).size(), 1u);
    Corpus tiny{"tiny", {TagSequence(10, 2)}, kNumTags};
    EXPECT_THROW(sample_corpus(tiny, 10000, 5), InsufficientData);
}
