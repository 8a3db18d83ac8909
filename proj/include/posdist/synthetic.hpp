#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "posdist/corpus.hpp"
#include "posdist/ngram.hpp"
#include "posdist/random.hpp"

namespace posdist::synthetic {

/// Homogeneous order-m Markov chain with dense transition rows:
/// transition[context * L + next], context = base-L index of the previous m symbols.
/// Order 0 has a single row (the i.i.d. symbol distribution).
struct MarkovChain {
    int order = 0;
    int alphabet_size = 2;
    std::vector<double> transition;

    std::size_t context_count() const;
    double probability(std::uint64_t context, Symbol next) const {
        return transition[context * static_cast<std::size_t>(alphabet_size) + next];
    }
};

/// Random chain whose rows are normalized powers of uniforms; larger `sharpness`
/// concentrates each row on fewer symbols. `sharpness` = 1 gives flat-Dirichlet rows.
MarkovChain random_chain(int order, int alphabet_size, Rng& rng, double sharpness = 1.0);

/// Stationary distribution over the m-block states (L^m entries; {1} for order 0).
std::vector<double> stationary_blocks(const MarkovChain& chain);

/// Exact stationary joint distributions of sizes 1..max_r (element r-1 has size r).
std::vector<BlockDistribution> exact_block_distributions(const MarkovChain& chain, int max_r);

/// One stationary run of the chain cut into sentences with uniform lengths in
/// [min_length, max_length], until at least total_tokens tokens exist.
Corpus sample_corpus(const MarkovChain& chain, std::size_t total_tokens, std::size_t min_length,
                     std::size_t max_length, Rng& rng, std::string language_id = "synthetic");

}  // namespace posdist::synthetic
