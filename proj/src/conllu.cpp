#include "posdist/conllu.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <string_view>

#include "posdist/error.hpp"

namespace posdist {
namespace {

constexpr std::size_t kColumns = 10;

struct SentenceBuffer {
    TagSequence tags;
    bool untagged = false;
    bool any_token = false;
};

void flush(SentenceBuffer& buffer, Corpus& corpus, const ConlluOptions& options, ConlluStats& stats) {
    if (buffer.untagged) {
        ++stats.dropped_untagged;
    } else {
        if (options.strip_final_punct && !buffer.tags.empty() && buffer.tags.back() == PosTag::kPunct.index()) {
            buffer.tags.pop_back();
        }
        if (!buffer.tags.empty()) {
            stats.tokens += buffer.tags.size();
            ++stats.sentences;
            corpus.sentences.push_back(std::move(buffer.tags));
        }
    }
    buffer = SentenceBuffer{};
}

}  // namespace

Corpus parse_conllu(std::istream& in, const ConlluOptions& options, ConlluStats* stats_out) {
    Corpus corpus{options.language_id, {}, kNumTags};
    ConlluStats stats;
    SentenceBuffer buffer;
    std::string line;
    std::size_t line_no = 0;
    std::array<std::string_view, kColumns> fields;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush(buffer, corpus, options, stats);
            continue;
        }
        if (line.front() == '#') continue;

        std::string_view rest(line);
        std::size_t n = 0;
        while (true) {
            const auto tab = rest.find('\t');
            if (n == kColumns) {
                throw MalformedLine(options.source_name, line_no, "more than 10 tab-separated columns");
            }
            fields[n++] = rest.substr(0, tab);
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        if (n != kColumns) {
            throw MalformedLine(options.source_name, line_no,
                                "expected 10 tab-separated columns, found " + std::to_string(n));
        }

        const auto id = fields[0];
        if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) continue;

        const auto upos = fields[3];
        buffer.any_token = true;
        if (upos == "_") {
            buffer.untagged = true;
            continue;
        }
        try {
            buffer.tags.push_back(map_upos(upos).index());
        } catch (const UnknownTag& e) {
            throw UnknownTag(e.label(), options.source_name + ":" + std::to_string(line_no));
        }
    }
    flush(buffer, corpus, options, stats);

    if (stats_out) *stats_out = stats;
    return corpus;
}

Corpus parse_conllu_file(const std::filesystem::path& path, const ConlluOptions& options, ConlluStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open treebank " + path.string());
    ConlluOptions opts = options;
    if (opts.source_name == "<stream>") opts.source_name = path.string();
    return parse_conllu(in, opts, stats);
}

}  // namespace posdist
