#include "posdist/synthetic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace posdist::synthetic {
namespace {

std::size_t ipow(std::size_t base, int exp) {
    std::size_t v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

// Solves pi P = pi, sum pi = 1 by Gaussian elimination with partial pivoting.
std::vector<double> solve_stationary(const std::vector<double>& P, std::size_t n) {
    // A = P^T - I with the last equation replaced by the normalization row.
    std::vector<double> A(n * n);
    std::vector<double> b(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A[i * n + j] = P[j * n + i] - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < n; ++j) A[(n - 1) * n + j] = 1.0;
    b[n - 1] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r * n + col]) > std::abs(A[pivot * n + col])) pivot = r;
        if (A[pivot * n + col] == 0.0) throw std::runtime_error("chain has no unique stationary distribution");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A[col * n + j], A[pivot * n + j]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = A[r * n + col] / A[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) A[r * n + j] -= f * A[col * n + j];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
        x[i] = s / A[i * n + i];
    }
    for (auto& v : x) v = std::max(v, 0.0);
    const double total = std::accumulate(x.begin(), x.end(), 0.0);
    for (auto& v : x) v /= total;
    return x;
}

}  // namespace

std::size_t MarkovChain::context_count() const { return ipow(static_cast<std::size_t>(alphabet_size), order); }

MarkovChain random_chain(int order, int alphabet_size, Rng& rng, double sharpness) {
    if (order < 0) throw std::invalid_argument("chain order must be >= 0");
    if (alphabet_size < 1 || alphabet_size > 256) throw std::invalid_argument("alphabet size must be in [1, 256]");
    MarkovChain chain{order, alphabet_size, {}};
    const std::size_t L = static_cast<std::size_t>(alphabet_size);
    const std::size_t rows = chain.context_count();
    chain.transition.resize(rows * L);
    for (std::size_t c = 0; c < rows; ++c) {
        double total = 0.0;
        for (std::size_t z = 0; z < L; ++z) {
            const double e = -std::log1p(-rng.uniform());
            const double w = std::pow(e, sharpness);
            chain.transition[c * L + z] = w;
            total += w;
        }
        for (std::size_t z = 0; z < L; ++z) chain.transition[c * L + z] /= total;
    }
    return chain;
}

std::vector<double> stationary_blocks(const MarkovChain& chain) {
    if (chain.order == 0) return {1.0};
    const std::size_t L = static_cast<std::size_t>(chain.alphabet_size);
    const std::size_t n = chain.context_count();
    const std::size_t keep = n / L;  // L^(m-1)

    if (n <= 1024) {
        std::vector<double> P(n * n, 0.0);
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t z = 0; z < L; ++z) P[s * n + (s % keep) * L + z] += chain.transition[s * L + z];
        return solve_stationary(P, n);
    }

    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (int it = 0; it < 100000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s < n; ++s)
            for (std::size_t z = 0; z < L; ++z) next[(s % keep) * L + z] += pi[s] * chain.transition[s * L + z];
        double diff = 0.0;
        for (std::size_t s = 0; s < n; ++s) diff += std::abs(next[s] - pi[s]);
        pi.swap(next);
        if (diff < 1e-15) break;
    }
    return pi;
}

std::vector<BlockDistribution> exact_block_distributions(const MarkovChain& chain, int max_r) {
    if (max_r < 1) throw std::invalid_argument("max_r must be >= 1");
    const std::size_t L = static_cast<std::size_t>(chain.alphabet_size);
    const int m = chain.order;
    const std::size_t ctx_space = chain.context_count();

    std::vector<std::vector<double>> dense;
    dense.reserve(static_cast<std::size_t>(max_r));
    const std::vector<double> pi = stationary_blocks(chain);
    for (int r = 1; r <= max_r; ++r) {
        std::vector<double> p;
        if (r <= m) {
            p.assign(ipow(L, r), 0.0);
            const std::size_t div = ipow(L, m - r);
            for (std::size_t s = 0; s < pi.size(); ++s) p[s / div] += pi[s];
        } else if (r == 1) {
            p.assign(chain.transition.begin(), chain.transition.begin() + static_cast<std::ptrdiff_t>(L));
        } else {
            const auto& prev = r - 1 == m ? pi : dense.back();
            p.assign(prev.size() * L, 0.0);
            for (std::size_t idx = 0; idx < prev.size(); ++idx) {
                if (prev[idx] == 0.0) continue;
                const std::size_t ctx = m == 0 ? 0 : idx % ctx_space;
                for (std::size_t z = 0; z < L; ++z) p[idx * L + z] = prev[idx] * chain.transition[ctx * L + z];
            }
        }
        dense.push_back(std::move(p));
    }

    std::vector<BlockDistribution> out;
    out.reserve(dense.size());
    for (std::size_t k = 0; k < dense.size(); ++k) {
        std::vector<BlockDistribution::Entry> entries;
        for (std::size_t i = 0; i < dense[k].size(); ++i)
            if (dense[k][i] > 0.0) entries.emplace_back(static_cast<BlockIndex>(i), dense[k][i]);
        out.emplace_back(static_cast<int>(k + 1), chain.alphabet_size, std::move(entries));
    }
    return out;
}

Corpus sample_corpus(const MarkovChain& chain, std::size_t total_tokens, std::size_t min_length,
                     std::size_t max_length, Rng& rng, std::string language_id) {
    if (min_length < 1 || max_length < min_length) throw std::invalid_argument("invalid sentence length range");
    const std::size_t L = static_cast<std::size_t>(chain.alphabet_size);
    const std::size_t rows = chain.context_count();
    const std::size_t keep = rows / L;

    std::vector<double> cumulative(chain.transition.size());
    for (std::size_t c = 0; c < rows; ++c) {
        double acc = 0.0;
        for (std::size_t z = 0; z < L; ++z) cumulative[c * L + z] = acc += chain.transition[c * L + z];
    }
    auto row = [&](std::size_t c) { return std::span<const double>(cumulative).subspan(c * L, L); };

    Corpus corpus;
    corpus.language_id = std::move(language_id);
    corpus.alphabet_size = chain.alphabet_size;

    // Stationary start: draw the first m-block, then run the chain across sentence cuts.
    std::vector<Symbol> pending;
    std::size_t state = 0;
    if (chain.order > 0) {
        const std::vector<double> pi = stationary_blocks(chain);
        std::vector<double> cum(pi.size());
        std::partial_sum(pi.begin(), pi.end(), cum.begin());
        state = rng.pick(cum);
        pending = decode_block(state, chain.order, chain.alphabet_size);
    }
    std::size_t pending_pos = 0;
    auto next_symbol = [&]() -> Symbol {
        if (pending_pos < pending.size()) return pending[pending_pos++];
        const auto z = static_cast<Symbol>(rng.pick(row(state)));
        if (chain.order > 0) state = (state % keep) * L + z;
        return z;
    };

    std::size_t produced = 0;
    const std::uint64_t span_len = max_length - min_length + 1;
    while (produced < total_tokens) {
        const std::size_t n = min_length + static_cast<std::size_t>(rng.below(span_len));
        TagSequence s(n);
        for (auto& x : s) x = next_symbol();
        produced += n;
        corpus.sentences.push_back(std::move(s));
    }
    return corpus;
}

}  // namespace posdist::synthetic
