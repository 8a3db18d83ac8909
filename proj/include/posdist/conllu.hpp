#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "posdist/corpus.hpp"

namespace posdist {

struct ConlluOptions {
    std::string language_id;
    /// Name used in MalformedLine diagnostics.
    std::string source_name = "<stream>";
    /// Drop a trailing PUNCT from every sentence (reproduces the hand-counted example).
    bool strip_final_punct = false;
};

struct ConlluStats {
    std::size_t sentences = 0;
    std::size_t tokens = 0;
    /// Sentences discarded because some token had UPOS `_`.
    std::size_t dropped_untagged = 0;
};

/// Reads CoNLL-U text and keeps column 4 (UPOS) of ordinary token lines.
/// Comments, multiword ranges (`3-4`) and empty nodes (`5.1`) are skipped;
/// sentences left empty are dropped.
Corpus parse_conllu(std::istream& in, const ConlluOptions& options = {}, ConlluStats* stats = nullptr);

Corpus parse_conllu_file(const std::filesystem::path& path, const ConlluOptions& options = {},
                         ConlluStats* stats = nullptr);

}  // namespace posdist
