#include "posdist/corpus.hpp"

#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "posdist/error.hpp"

namespace posdist {

std::size_t Corpus::token_count() const noexcept {
    return std::accumulate(sentences.begin(), sentences.end(), std::size_t{0},
                           [](std::size_t acc, const TagSequence& s) { return acc + s.size(); });
}

std::vector<std::size_t> Corpus::sentence_lengths() const {
    std::vector<std::size_t> lengths;
    lengths.reserve(sentences.size());
    for (const auto& s : sentences) lengths.push_back(s.size());
    return lengths;
}

void Corpus::append(const Corpus& other) {
    if (other.alphabet_size != alphabet_size) {
        throw std::invalid_argument("cannot append corpora over different alphabets");
    }
    sentences.insert(sentences.end(), other.sentences.begin(), other.sentences.end());
}

std::vector<Corpus> filter_min_tokens(const std::vector<Corpus>& corpora, std::size_t threshold) {
    std::vector<Corpus> kept;
    for (const auto& c : corpora) {
        if (c.token_count() >= threshold) kept.push_back(c);
    }
    return kept;
}

void write_tag_cache(std::ostream& out, const Corpus& corpus) {
    std::string line;
    for (const auto& sentence : corpus.sentences) {
        line.clear();
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            if (i) line.push_back(' ');
            line += std::to_string(static_cast<int>(sentence[i]));
        }
        line.push_back('\n');
        out << line;
    }
}

Corpus read_tag_cache(std::istream& in, std::string language_id, int alphabet_size) {
    Corpus corpus{std::move(language_id), {}, alphabet_size};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        TagSequence sentence;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end) {
            while (p < end && *p == ' ') ++p;
            if (p == end) break;
            int value = 0;
            auto [next, ec] = std::from_chars(p, end, value);
            if (ec != std::errc{} || value < 0 || value >= alphabet_size) {
                throw MalformedLine(corpus.language_id + ".tags", line_no, "invalid tag index");
            }
            sentence.push_back(static_cast<Symbol>(value));
            p = next;
        }
        if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

}  // namespace posdist
