#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace posdist {

/// Number of POS categories after folding SYM and X into PUNCT.
inline constexpr int kNumTags = 15;

/// Tag names in index order; index order is alphabetical.
inline constexpr std::array<std::string_view, kNumTags> kTagNames = {
    "ADJ", "ADP", "ADV",  "AUX",  "CCONJ", "DET",   "INTJ", "NOUN",
    "NUM", "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "VERB"};

class PosTag {
public:
    constexpr PosTag() = default;
    /// Throws std::out_of_range for indices outside [0, 14].
    explicit PosTag(int index);

    static PosTag from_name(std::string_view name);

    constexpr std::uint8_t index() const noexcept { return index_; }
    constexpr std::string_view name() const noexcept { return kTagNames[index_]; }

    friend constexpr bool operator==(PosTag, PosTag) = default;

    static const PosTag kPunct;

private:
    std::uint8_t index_ = 0;
};

/// Maps one of the 17 UD UPOS labels onto the 15-tag alphabet (SYM, X -> PUNCT).
/// Throws UnknownTag for anything else, including the `_` placeholder.
PosTag map_upos(std::string_view upos_label);

}  // namespace posdist
