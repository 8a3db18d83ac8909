#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace posdist {

/// Derives an independent stream seed from (master seed, stream name, replicate index).
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream, std::uint64_t index = 0);

/// Thin wrapper over mt19937_64 with platform-independent draws
/// (std::uniform_*_distribution output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform integer in [0, n), n > 0, without modulo bias.
    std::uint64_t below(std::uint64_t n);

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Index drawn from a nondecreasing cumulative weight table (last entry = total).
    std::size_t pick(std::span<const double> cumulative);

private:
    std::mt19937_64 engine_;
};

}  // namespace posdist
