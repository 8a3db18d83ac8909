#include "posdist/markov_id.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "posdist/error.hpp"
#include "posdist/parallel.hpp"
#include "posdist/random.hpp"

namespace posdist {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

BlockCounts context_marginal(const BlockCounts& next) {
    const auto L = static_cast<BlockIndex>(next.alphabet_size());
    std::vector<BlockCounts::Entry> entries;
    entries.reserve(next.distinct());
    for (const auto& [idx, c] : next.entries()) entries.emplace_back(idx / L, c);
    return BlockCounts(next.block_size() - 1, next.alphabet_size(), std::move(entries));
}

}  // namespace

LanguageModel::LanguageModel(std::string language_id, int order, BlockCounts counts_init, BlockCounts counts_next,
                             double smoothing)
    : language_id_(std::move(language_id)),
      order_(order),
      alphabet_size_(counts_init.alphabet_size()),
      smoothing_(smoothing),
      init_(std::move(counts_init)),
      next_(std::move(counts_next)),
      context_(std::max(order, 1), alphabet_size_),
      init_space_(init_.space_size()) {
    if (order < 0) throw std::invalid_argument("model order must be >= 0");
    if (smoothing < 0.0 || !std::isfinite(smoothing)) throw std::invalid_argument("smoothing must be >= 0");
    if (init_.block_size() != std::max(order, 1)) throw MismatchedBlockSize("initial counts have the wrong block size");
    if (order >= 1) {
        if (next_.block_size() != order + 1 || next_.alphabet_size() != alphabet_size_) {
            throw MismatchedBlockSize("transition counts have the wrong block size");
        }
        context_ = context_marginal(next_);
    }
    if (init_.total() == 0 && smoothing_ == 0.0) throw EmptyCounts(language_id_ + ": model fitted on no tokens");
}

double LanguageModel::log2_initial(BlockIndex block) const {
    const double c = static_cast<double>(init_.count(block)) + smoothing_;
    if (c <= 0.0) return kNegInf;
    return std::log2(c / (static_cast<double>(init_.total()) + smoothing_ * init_space_));
}

double LanguageModel::log2_transition(BlockIndex context, Symbol next) const {
    const auto L = static_cast<BlockIndex>(alphabet_size_);
    const double num = static_cast<double>(next_.count(context * L + next)) + smoothing_;
    if (num <= 0.0) return kNegInf;
    const double den = static_cast<double>(context_.count(context)) + smoothing_ * static_cast<double>(L);
    return std::log2(num / den);
}

LanguageModel fit_language_model(const Corpus& corpus, int order, double smoothing) {
    if (order < 0) throw std::invalid_argument("model order must be >= 0");
    BlockCounts init = count_blocks(corpus, std::max(order, 1));
    BlockCounts next = order >= 1 ? count_blocks(corpus, order + 1) : BlockCounts(1, corpus.alphabet_size);
    return LanguageModel(corpus.language_id, order, std::move(init), std::move(next), smoothing);
}

double score_sentence(const LanguageModel& model, std::span<const Symbol> sentence) {
    const int u = model.order();
    const std::size_t need = static_cast<std::size_t>(u + 1);
    if (sentence.size() < need) {
        throw SentenceTooShort("order-" + std::to_string(u) + " scoring needs at least " + std::to_string(need) +
                               " tags, got " + std::to_string(sentence.size()));
    }
    const int L = model.alphabet_size();
    if (u == 0) {
        double s = 0.0;
        for (const Symbol x : sentence) {
            if (x >= L) throw DigitOutOfRange("tag outside the model alphabet");
            s += model.log2_initial(x);
            if (s == kNegInf) return s;
        }
        return s;
    }
    const auto uu = static_cast<std::size_t>(u);
    BlockIndex ctx = encode_block(sentence.first(uu), L);
    double s = model.log2_initial(ctx);
    if (s == kNegInf) return s;
    BlockIndex mod = 1;
    for (int i = 0; i < u; ++i) mod *= static_cast<BlockIndex>(L);
    for (std::size_t k = uu; k < sentence.size(); ++k) {
        if (sentence[k] >= L) throw DigitOutOfRange("tag outside the model alphabet");
        s += model.log2_transition(ctx, sentence[k]);
        if (s == kNegInf) return s;
        ctx = (ctx * static_cast<BlockIndex>(L) + sentence[k]) % mod;
    }
    return s;
}

std::optional<std::string> classify(std::span<const Symbol> sentence, std::span<const LanguageModel> models) {
    if (models.empty()) return std::nullopt;
    double best = kNegInf;
    std::size_t best_i = 0;
    std::size_t ties = 0;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const double s = score_sentence(models[i], sentence);
        if (s > best) {
            best = s;
            best_i = i;
            ties = 1;
        } else if (s == best) {
            ++ties;
        }
    }
    if (best == kNegInf || ties != 1) return std::nullopt;
    return models[best_i].language_id();
}

std::vector<AccuracyReport> run_identification_experiment(std::span<const Corpus> corpora,
                                                          const IdentificationOptions& opt, std::uint64_t seed) {
    if (corpora.size() < 2) throw InsufficientData("identification needs at least 2 languages");
    if (opt.K < 1 || opt.repetitions < 1) throw std::invalid_argument("K and repetitions must be >= 1");
    if (opt.orders.empty()) throw std::invalid_argument("no model orders requested");
    const int max_order = *std::max_element(opt.orders.begin(), opt.orders.end());
    if (*std::min_element(opt.orders.begin(), opt.orders.end()) < 0) throw std::invalid_argument("negative order");
    if (opt.length_min < static_cast<std::size_t>(max_order + 1)) {
        throw SentenceTooShort("minimum test length " + std::to_string(opt.length_min) + " is below order + 1");
    }

    const std::size_t n_lang = corpora.size();
    const std::size_t n_sizes = static_cast<std::size_t>(max_order + 1);
    std::vector<std::vector<std::size_t>> eligible(n_lang);
    std::vector<std::vector<BlockCounts>> full(n_lang);
    for (std::size_t l = 0; l < n_lang; ++l) {
        const Corpus& c = corpora[l];
        for (std::size_t i = 0; i < c.sentences.size(); ++i) {
            const std::size_t n = c.sentences[i].size();
            if (n >= opt.length_min && n <= opt.length_max) eligible[l].push_back(i);
        }
        if (eligible[l].size() < static_cast<std::size_t>(opt.K)) {
            throw InsufficientData(c.language_id + ": " + std::to_string(eligible[l].size()) +
                                   " sentences with length in range, need " + std::to_string(opt.K));
        }
        for (std::size_t r = 1; r <= n_sizes; ++r) full[l].push_back(count_blocks(c, static_cast<int>(r)));
    }

    // acc[rep][lang][order_index]
    const std::size_t n_orders = opt.orders.size();
    std::vector<std::vector<std::vector<double>>> acc(
        static_cast<std::size_t>(opt.repetitions),
        std::vector<std::vector<double>>(n_lang, std::vector<double>(n_orders, 0.0)));

    parallel_for(acc.size(), opt.threads, [&](std::size_t rep) {
        std::vector<std::vector<TagSequence>> tests(n_lang);
        std::vector<std::vector<BlockCounts>> train(n_lang);
        for (std::size_t l = 0; l < n_lang; ++l) {
            const Corpus& c = corpora[l];
            std::vector<std::size_t> pool = eligible[l];
            Rng rng(derive_seed(seed, "identify/" + c.language_id, rep));
            rng.shuffle(std::span<std::size_t>(pool));
            pool.resize(static_cast<std::size_t>(opt.K));
            std::sort(pool.begin(), pool.end());
            for (const std::size_t i : pool) tests[l].push_back(c.sentences[i]);
            for (std::size_t r = 1; r <= n_sizes; ++r) {
                const BlockCounts held = count_blocks(tests[l], static_cast<int>(r), c.alphabet_size);
                train[l].push_back(subtract_counts(full[l][r - 1], held));
            }
        }
        for (std::size_t oi = 0; oi < n_orders; ++oi) {
            const int u = opt.orders[oi];
            std::vector<LanguageModel> models;
            models.reserve(n_lang);
            for (std::size_t l = 0; l < n_lang; ++l) {
                const auto& t = train[l];
                BlockCounts init = t[static_cast<std::size_t>(std::max(u, 1) - 1)];
                BlockCounts next = u >= 1 ? t[static_cast<std::size_t>(u)] : BlockCounts(1, corpora[l].alphabet_size);
                models.emplace_back(corpora[l].language_id, u, std::move(init), std::move(next), opt.smoothing);
            }
            for (std::size_t l = 0; l < n_lang; ++l) {
                std::size_t correct = 0;
                for (const auto& s : tests[l]) {
                    const double own = score_sentence(models[l], s);
                    if (own == kNegInf) continue;
                    bool strict = true;
                    for (std::size_t o = 0; o < n_lang && strict; ++o) {
                        if (o != l && score_sentence(models[o], s) >= own) strict = false;
                    }
                    if (strict) ++correct;
                }
                acc[rep][l][oi] = static_cast<double>(correct) / static_cast<double>(opt.K);
            }
        }
    });

    std::vector<AccuracyReport> reports;
    for (std::size_t l = 0; l < n_lang; ++l) {
        for (std::size_t oi = 0; oi < n_orders; ++oi) {
            AccuracyReport r;
            r.language_id = corpora[l].language_id;
            r.order = opt.orders[oi];
            r.repetitions = opt.repetitions;
            r.K = opt.K;
            for (const auto& rep : acc) r.accuracies.push_back(rep[l][oi]);
            const double n = static_cast<double>(r.accuracies.size());
            r.mean_accuracy = std::accumulate(r.accuracies.begin(), r.accuracies.end(), 0.0) / n;
            if (r.accuracies.size() > 1) {
                double ss = 0.0;
                for (const double a : r.accuracies) ss += (a - r.mean_accuracy) * (a - r.mean_accuracy);
                r.std_accuracy = std::sqrt(ss / (n - 1.0));
            }
            reports.push_back(std::move(r));
        }
    }
    return reports;
}

}  // namespace posdist
