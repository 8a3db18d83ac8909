#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "posdist/error.hpp"
#include "posdist/memory.hpp"
#include "posdist/synthetic.hpp"

using namespace posdist;

namespace {

synthetic::MarkovChain two_state() { return {1, 2, {0.9, 0.1, 0.2, 0.8}}; }

std::vector<std::size_t> sorted_multiset(const Corpus& c) {
    std::vector<std::size_t> l = c.sentence_lengths();
    std::sort(l.begin(), l.end());
    return l;
}

Corpus relabel(Corpus c) {
    for (auto& s : c.sentences)
        for (auto& x : s) x = static_cast<Symbol>(c.alphabet_size - 1 - x);
    return c;
}

}  // namespace

TEST(ExactGain, IidIsZero) {
    Rng rng(1);
    const auto chain = synthetic::random_chain(0, 4, rng);
    const auto joints = synthetic::exact_block_distributions(chain, 5);
    for (int u = 0; u <= 3; ++u) {
        EXPECT_NEAR(predictability_gain_exact(joints, u), 0.0, 1e-12);
        EXPECT_NEAR(predictability_gain_kl(joints, u), 0.0, 1e-12);
    }
}

TEST(ExactGain, TwoStateChain) {
    const auto joints = synthetic::exact_block_distributions(two_state(), 4);
    EXPECT_NEAR(joints[0].probability(0), 2.0 / 3.0, 1e-14);
    const double g0 = predictability_gain_exact(joints, 0);
    // H(X) - H(X_2 | X_1) with stationary (2/3, 1/3).
    auto h2 = [](double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); };
    EXPECT_NEAR(g0, h2(1.0 / 3.0) - (2.0 / 3.0 * h2(0.1) + 1.0 / 3.0 * h2(0.2)), 1e-12);
    EXPECT_GT(g0, 0.0);
    EXPECT_NEAR(predictability_gain_exact(joints, 1), 0.0, 1e-12);
    EXPECT_NEAR(predictability_gain_kl(joints, 1), 0.0, 1e-12);
    EXPECT_NEAR(predictability_gain_kl(joints, 0), g0, 1e-12);
}

TEST(ExactGain, FormsAgreeAndAreNonnegative) {
    Rng rng(9);
    for (int L = 2; L <= 4; ++L) {
        for (int m = 0; m <= 3; ++m) {
            const auto chain = synthetic::random_chain(m, L, rng, 2.0);
            const auto joints = synthetic::exact_block_distributions(chain, 6);
            for (int u = 0; u <= 3; ++u) {
                const double a = predictability_gain_exact(joints, u);
                EXPECT_NEAR(a, predictability_gain_kl(joints, u), 1e-12);
                EXPECT_GE(a, -1e-12);
                if (u >= m) { EXPECT_NEAR(a, 0.0, 1e-12) << "L=" << L << " m=" << m << " u=" << u; }
            }
        }
    }
}

TEST(ExactGain, InconsistentMarginals) {
    std::vector<BlockDistribution> joints{BlockDistribution(1, 2, {{0, 0.5}, {1, 0.5}}),
                                          BlockDistribution(2, 2, {{0, 0.7}, {3, 0.3}})};
    EXPECT_THROW(predictability_gain_exact(joints, 0), InconsistentMarginals);
    EXPECT_THROW(predictability_gain_exact(std::span(joints).first(1), 0), InsufficientData);
}

TEST(GainCurve, DomainAndIdentity) {
    Rng rng(4);
    const auto chain = synthetic::random_chain(1, 15, rng);
    const Corpus c = synthetic::sample_corpus(chain, 20000, 5, 25, rng);
    const GainCurve g = gain_curve(c, Estimator::plugin);
    EXPECT_EQ(g.r_max, 3);
    ASSERT_EQ(g.values.size(), 2u);
    const double h1 = g.entropies[0].value, h2 = g.entropies[1].value;
    EXPECT_NEAR(g.at(0), 2 * h1 - h2, 1e-12);
    EXPECT_EQ(gain_curve(c, Estimator::plugin, 2).values.size(), 1u);
    Corpus tiny{"t", {{1, 2, 3}}, 15};
    EXPECT_THROW(gain_curve(tiny, Estimator::plugin), InsufficientData);
}

TEST(Surrogates, PreserveLengthsAndDeterminism) {
    Corpus src{"x", {{1, 2, 3, 4, 5}, {2, 3, 4, 5, 6, 7, 1}}, 15};
    const SurrogateModel model(src, 1);
    const auto lengths = src.sentence_lengths();
    const auto a = generate_surrogates(model, lengths, 3, 11);
    const auto b = generate_surrogates(model, lengths, 3, 11);
    ASSERT_EQ(a.size(), 3u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].sentence_lengths(), (std::vector<std::size_t>{5, 7}));
        EXPECT_EQ(a[k].sentences, b[k].sentences);
    }
    EXPECT_THROW(generate_surrogates(model, lengths, 0, 1), std::invalid_argument);
}

TEST(Surrogates, OnlyObservedTransitions) {
    Rng rng(2);
    const auto chain = synthetic::random_chain(2, 6, rng, 3.0);
    const Corpus src = synthetic::sample_corpus(chain, 4000, 1, 12, rng);
    const SurrogateModel model(src, 2);
    const auto seen3 = count_blocks(src, 3);
    const auto seen2 = count_blocks(src, 2);
    const auto seen1 = count_blocks(src, 1);
    const auto out = generate_surrogates(model, src.sentence_lengths(), 5, 3);
    for (const auto& s : out) {
        EXPECT_EQ(sorted_multiset(s), sorted_multiset(src));
        for (const auto& sent : s.sentences) {
            if (sent.size() == 1) { EXPECT_GT(seen1.count(sent[0]), 0u); }
            if (sent.size() >= 2) { EXPECT_GT(seen2.count(encode_block(std::span(sent).first(2), 6)), 0u); }
        }
        if (model.covers_all_contexts()) {
            const auto generated = count_blocks(s, 3);
            for (const auto& [idx, n] : generated.entries()) EXPECT_GT(seen3.count(idx), 0u);
        }
    }
}

TEST(Surrogates, BackoffOnSentenceFinalContext) {
    // Context (1, 2) only occurs at a sentence end, so the order-2 table has no row for it.
    Corpus src{"x", {{0, 1, 2}, {1, 2, 1, 2}}, 3};
    src.sentences[1] = {0, 1, 0, 1};
    src.sentences.push_back({1, 2});
    const SurrogateModel model(src, 2);
    EXPECT_FALSE(model.covers_all_contexts());
    Rng rng(5);
    for (int i = 0; i < 200; ++i) EXPECT_EQ(model.generate(6, rng).size(), 6u);
}

TEST(Surrogates, OrderZeroIsIid) {
    Corpus src{"x", {{0, 0, 0, 1}}, 2};
    const SurrogateModel model(src, 0);
    Rng rng(8);
    std::size_t ones = 0, total = 0;
    for (int i = 0; i < 2000; ++i) {
        for (const Symbol x : model.generate(10, rng)) {
            ones += x;
            ++total;
        }
    }
    EXPECT_NEAR(static_cast<double>(ones) / static_cast<double>(total), 0.25, 0.01);
}

TEST(MemoryTest, SingleSurrogateCounting) {
    Rng rng(6);
    const auto chain = synthetic::random_chain(0, 15, rng);
    const Corpus c = synthetic::sample_corpus(chain, 3000, 5, 20, rng);
    MemoryTestOptions opt;
    opt.estimator = Estimator::plugin;
    opt.threads = 1;
    const auto r = memory_test(c, 0, 1, 77, opt);
    EXPECT_EQ(r.K, 1);
    EXPECT_TRUE(std::isnan(r.surrogate_std));
    EXPECT_EQ(r.p_value, r.surrogate_statistics[0] >= r.statistic ? 1.0 : 0.0);
}

TEST(MemoryTest, ToyOrderTwoNull) {
    Rng rng(12);
    const auto chain = synthetic::random_chain(2, 3, rng, 2.0);
    const Corpus c = synthetic::sample_corpus(chain, 30000, 10, 30, rng);
    MemoryTestOptions opt;
    opt.threads = 1;
    const auto r = memory_test(c, 2, 40, 5, opt);
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
    EXPECT_EQ(r.mean_curve.size(), r.real.values.size());
    EXPECT_NEAR(r.surrogate_mean, 0.0, 5 * r.surrogate_std + 1e-3);
    const auto again = memory_test(c, 2, 40, 5, opt);
    EXPECT_EQ(r.surrogate_statistics, again.surrogate_statistics);
    opt.threads = 3;
    EXPECT_EQ(memory_test(c, 2, 40, 5, opt).surrogate_statistics, r.surrogate_statistics);
}

TEST(MemoryTest, DetectsMemoryAboveNull) {
    Rng rng(13);
    const auto chain = synthetic::random_chain(2, 3, rng, 3.0);
    const Corpus c = synthetic::sample_corpus(chain, 30000, 10, 30, rng);
    MemoryTestOptions opt;
    opt.threads = 1;
    // Order-1 surrogates lack the second-order dependence the data has.
    const auto r = memory_test(c, 1, 30, 5, opt);
    EXPECT_EQ(r.p_value, 0.0);
}

TEST(MemoryTest, RelabelingInvariance) {
    Rng rng(21);
    const auto chain = synthetic::random_chain(1, 15, rng);
    const Corpus c = synthetic::sample_corpus(chain, 8000, 5, 20, rng);
    MemoryTestOptions opt;
    opt.estimator = Estimator::plugin;
    opt.threads = 1;
    const auto direct = memory_test(c, 1, 20, 3, opt);

    // Relabel the corpus and every surrogate the generator produced from it.
    const Corpus rc = relabel(c);
    const double stat = gain_curve(rc, Estimator::plugin).at(1);
    EXPECT_NEAR(stat, direct.statistic, 1e-12);
    const auto surrogates = generate_surrogates(SurrogateModel(c, 1), c.sentence_lengths(), 20, 3);
    std::size_t exceed = 0;
    for (std::size_t k = 0; k < surrogates.size(); ++k) {
        const double g = gain_curve(relabel(surrogates[k]), Estimator::plugin, direct.real.r_max).at(1);
        EXPECT_NEAR(g, direct.surrogate_statistics[k], 1e-12);
        if (g >= stat) ++exceed;
    }
    EXPECT_EQ(static_cast<double>(exceed) / 20.0, direct.p_value);

    Corpus small{"s", {{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 0, 1}}, 15};
    EXPECT_THROW(memory_test(small, 1, 5, 1, opt), InsufficientData);
}
