#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "posdist/pos_tag.hpp"

namespace posdist {

/// Symbol values are tag indices in [0, alphabet_size).
using Symbol = std::uint8_t;

/// One sentence as an ordered list of tag indices.
using TagSequence = std::vector<Symbol>;

/// All tagged sentences of one language. alphabet_size is 15 for UD data;
/// synthetic corpora may use smaller alphabets.
struct Corpus {
    std::string language_id;
    std::vector<TagSequence> sentences;
    int alphabet_size = kNumTags;

    std::size_t token_count() const noexcept;
    std::size_t sentence_count() const noexcept { return sentences.size(); }
    std::vector<std::size_t> sentence_lengths() const;

    /// Appends every sentence of `other`; alphabets must match.
    void append(const Corpus& other);
};

/// Keeps corpora with at least `threshold` tokens, preserving order.
std::vector<Corpus> filter_min_tokens(const std::vector<Corpus>& corpora, std::size_t threshold = 10000);

/// Tag-sequence cache: one sentence per line, space-separated tag indices.
void write_tag_cache(std::ostream& out, const Corpus& corpus);
Corpus read_tag_cache(std::istream& in, std::string language_id, int alphabet_size = kNumTags);

}  // namespace posdist
