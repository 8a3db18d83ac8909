#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posdist/corpus.hpp"
#include "posdist/ngram.hpp"

namespace posdist {

/// Order-u Markov model of one language's tag sequences.
class LanguageModel {
public:
    /// counts_init: size-max(u,1) block counts; counts_next: size-(u+1) counts (ignored for u = 0).
    /// smoothing > 0 adds that pseudo-count to every block and every transition.
    LanguageModel(std::string language_id, int order, BlockCounts counts_init, BlockCounts counts_next,
                  double smoothing = 0.0);

    const std::string& language_id() const noexcept { return language_id_; }
    int order() const noexcept { return order_; }
    int alphabet_size() const noexcept { return alphabet_size_; }
    double smoothing() const noexcept { return smoothing_; }

    /// log2 p(size-max(u,1) block); -inf when unobserved without smoothing.
    double log2_initial(BlockIndex block) const;
    /// log2 p(next | context) for a size-u context; -inf when unobserved without smoothing.
    double log2_transition(BlockIndex context, Symbol next) const;

    const BlockCounts& initial_counts() const noexcept { return init_; }
    const BlockCounts& transition_counts() const noexcept { return next_; }

private:
    std::string language_id_;
    int order_;
    int alphabet_size_;
    double smoothing_;
    BlockCounts init_;
    BlockCounts next_;
    BlockCounts context_;  // size-u marginal of next_ over its first u symbols
    double init_space_;
};

LanguageModel fit_language_model(const Corpus& corpus, int order, double smoothing = 0.0);

/// u = 0: sum log2 p(x_k). u >= 1: log2 p(x_1..x_u) plus the order-u transition factors.
/// Throws SentenceTooShort for sentences shorter than max(u + 1, 1).
double score_sentence(const LanguageModel& model, std::span<const Symbol> sentence);

/// Unique argmax language id, or nullopt when the best score is shared (including all -inf).
std::optional<std::string> classify(std::span<const Symbol> sentence, std::span<const LanguageModel> models);

struct AccuracyReport {
    std::string language_id;
    int order = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // sample std over repetitions; 0 for a single repetition
    int repetitions = 0;
    int K = 0;
    std::vector<double> accuracies;  // per repetition
};

struct IdentificationOptions {
    std::vector<int> orders{0, 1, 2, 3};
    int K = 1000;
    int repetitions = 10;
    std::size_t length_min = 5;
    std::size_t length_max = 20;
    double smoothing = 0.0;
    unsigned threads = 0;
};

/// Per repetition: hold out K in-range sentences per language, fit every model on the rest,
/// and count a test sentence correct only when its own language strictly outscores all others.
/// Reports are ordered by language, then order. Throws InsufficientData when a corpus has
/// fewer than K eligible sentences.
std::vector<AccuracyReport> run_identification_experiment(std::span<const Corpus> corpora,
                                                          const IdentificationOptions& options,
                                                          std::uint64_t seed);

}  // namespace posdist
