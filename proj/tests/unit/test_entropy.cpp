#include <gtest/gtest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <random>

#include "posdist/entropy.hpp"
#include "posdist/error.hpp"
#include "posdist/random.hpp"
#include "posdist/special.hpp"

using namespace posdist;

namespace {

BlockCounts draw_counts(std::uint64_t seed, std::uint64_t k, std::size_t n, int r = 1) {
    Rng rng(seed);
    std::vector<BlockCounts::Entry> e;
    e.reserve(n);
    for (std::size_t i = 0; i < n; ++i) e.emplace_back(rng.below(k), 1);
    return BlockCounts(r, 15, std::move(e));
}

}  // namespace

TEST(Special, MatchesBoost) {
    for (double x : {1e-8, 1e-3, 0.1, 0.5, 1.0, 2.5, 9.99, 10.0, 17.3, 1e3, 1e6, 1e12}) {
        EXPECT_NEAR(special::digamma(x), boost::math::digamma(x), 1e-13 * std::max(1.0, std::abs(boost::math::digamma(x))))
            << x;
        EXPECT_NEAR(special::trigamma(x), boost::math::trigamma(x), 1e-13 * boost::math::trigamma(x)) << x;
    }
    for (double a : {0.01, 1.0, 12.0, 1e4}) {
        for (double b : {0.5, 3.0, 50.0, 1e5}) {
            const double ref = boost::math::digamma(a + b) - boost::math::digamma(a);
            EXPECT_NEAR(special::digamma_diff(a + b, a), ref, 1e-12 * std::max(1.0, std::abs(ref)));
            const double lref = std::lgamma(a + b) - std::lgamma(a);
            EXPECT_NEAR(special::lgamma_diff(a, b), lref, 1e-10 * std::max(1.0, std::abs(lref)));
        }
    }
}

TEST(Plugin, Examples) {
    std::vector<BlockDistribution::Entry> uni;
    for (int i = 0; i < 15; ++i) uni.emplace_back(i, 1.0 / 15.0);
    EXPECT_NEAR(entropy_plugin(BlockDistribution(1, 15, uni)).value, std::log2(15.0), 1e-12);
    EXPECT_EQ(entropy_plugin(BlockDistribution(1, 15, {{3, 1.0}})).value, 0.0);
    EXPECT_NEAR(entropy_plugin(BlockDistribution(1, 15, {{0, 0.5}, {1, 0.25}, {2, 0.25}})).value, 1.5, 1e-15);
    EXPECT_FALSE(entropy_plugin(BlockDistribution(1, 15, {{3, 1.0}})).posterior_std.has_value());
}

TEST(Plugin, PermutationInvariant) {
    const BlockDistribution a(1, 15, {{0, 0.1}, {4, 0.6}, {9, 0.3}});
    const BlockDistribution b(1, 15, {{2, 0.6}, {3, 0.3}, {14, 0.1}});
    EXPECT_DOUBLE_EQ(entropy_plugin(a).value, entropy_plugin(b).value);
}

TEST(Plugin, MonotoneInBlockSize) {
    Rng rng(3);
    Corpus c{"x", {}, 15};
    for (int s = 0; s < 300; ++s) {
        TagSequence t(20);
        Symbol prev = 0;
        for (auto& x : t) x = prev = static_cast<Symbol>((prev + rng.below(3)) % 15);
        c.sentences.push_back(t);
    }
    double prev = 0.0;
    for (int r = 1; r <= 6; ++r) {
        const double h = entropy_plugin(count_blocks(c, r)).value;
        EXPECT_GE(h, prev - 1e-9);
        prev = h;
    }
}

TEST(Nsb, PriorEntropy) {
    for (double beta : {1e-6, 0.02, 1.0, 40.0}) {
        const double k = 3375;
        EXPECT_NEAR(nsb::prior_entropy(k, beta), boost::math::digamma(k * beta + 1) - boost::math::digamma(beta + 1),
                    1e-12);
    }
}

TEST(Nsb, FixedBetaMomentsMatchMonteCarlo) {
    const BlockCounts counts(1, 15, {{0, 5}, {1, 2}, {2, 1}, {3, 1}});
    const auto hist = nsb::histogram(counts);
    const double k = 6, beta = 0.7;
    const auto mom = nsb::posterior_moments(hist, k, beta);
    std::mt19937_64 gen(42);
    const double alpha[6] = {5 + beta, 2 + beta, 1 + beta, 1 + beta, beta, beta};
    const int draws = 400000;
    double s1 = 0, s2 = 0;
    for (int d = 0; d < draws; ++d) {
        double g[6], total = 0;
        for (int i = 0; i < 6; ++i) total += g[i] = std::gamma_distribution<double>(alpha[i], 1.0)(gen);
        double h = 0;
        for (double gi : g) {
            const double p = gi / total;
            if (p > 0) h -= p * std::log(p);
        }
        s1 += h;
        s2 += h * h;
    }
    const double mc_mean = s1 / draws, mc_second = s2 / draws;
    const double se = std::sqrt((mc_second - mc_mean * mc_mean) / draws);
    EXPECT_NEAR(mom.mean, mc_mean, 4 * se);
    EXPECT_NEAR(mom.second, mc_second, 8 * se * (2 * mc_mean));
}

TEST(Nsb, LargeSampleUniform) {
    const BlockCounts counts = draw_counts(1, 15, 1000000);
    const auto nsb_est = entropy_nsb(counts);
    EXPECT_NEAR(nsb_est.value, std::log2(15.0), 0.005);
    EXPECT_LT(std::abs(nsb_est.value - entropy_plugin(counts).value), 0.01);
    ASSERT_TRUE(nsb_est.posterior_std.has_value());
    EXPECT_LT(*nsb_est.posterior_std, 0.01);
}

TEST(Nsb, PointMass) {
    const BlockCounts counts(1, 15, {{4, 1000}});
    const auto e = entropy_nsb(counts);
    EXPECT_NEAR(e.value, 0.0, 0.01);
}

TEST(Nsb, WithinRangeAndUndersampledBetterThanPlugin) {
    int better = 0;
    for (int t = 0; t < 20; ++t) {
        const BlockCounts counts = draw_counts(100 + t, 3375, 200, 3);
        const auto e = entropy_nsb(counts);
        EXPECT_GE(e.value, 0.0);
        EXPECT_LE(e.value, std::log2(3375.0) + 1e-12);
        const double truth = std::log2(3375.0);
        if (std::abs(e.value - truth) < std::abs(entropy_plugin(counts).value - truth)) ++better;
    }
    EXPECT_GE(better, 19);
}

TEST(Nsb, NoCoincidencesFlag) {
    std::vector<BlockCounts::Entry> e;
    for (int i = 0; i < 30; ++i) e.emplace_back(i, 1);
    const auto est = entropy_nsb(BlockCounts(3, 15, e));
    EXPECT_TRUE(est.no_coincidences);
    EXPECT_GT(*est.posterior_std, 0.0);
    EXPECT_FALSE(entropy_nsb(BlockCounts(1, 15, {{0, 2}, {1, 1}})).no_coincidences);
}

TEST(Nsb, RequiresTwoObservations) {
    EXPECT_THROW(entropy_nsb(BlockCounts(1, 15, {{0, 1}})), InsufficientData);
    EXPECT_THROW(entropy_nsb(BlockCounts(1, 15)), EmptyCounts);
}

TEST(RMax, Examples) {
    EXPECT_EQ(r_max(10000, 15), 3);
    EXPECT_EQ(r_max(759375, 15), 5);
    EXPECT_EQ(r_max(759374, 15), 4);
    EXPECT_EQ(r_max(15, 15), 2);
    EXPECT_EQ(r_max(BlockCounts(1, 15, {{0, 50625}}), 15), 4);
    EXPECT_THROW(r_max(14, 15), InsufficientData);
}

TEST(Estimator, Parse) {
    EXPECT_EQ(parse_estimator("nsb"), Estimator::nsb);
    EXPECT_EQ(parse_estimator("plugin"), Estimator::plugin);
    EXPECT_EQ(to_string(Estimator::plugin), "plugin");
    EXPECT_THROW(parse_estimator("mle"), ConfigError);
}
