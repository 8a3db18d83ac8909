#include "posdist/pos_tag.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "posdist/error.hpp"

namespace posdist {

const PosTag PosTag::kPunct{12};

PosTag::PosTag(int index) {
    if (index < 0 || index >= kNumTags) {
        throw std::out_of_range("PosTag index " + std::to_string(index) + " outside [0, 14]");
    }
    index_ = static_cast<std::uint8_t>(index);
}

PosTag PosTag::from_name(std::string_view name) {
    const auto it = std::lower_bound(kTagNames.begin(), kTagNames.end(), name);
    if (it == kTagNames.end() || *it != name) {
        throw UnknownTag(std::string(name));
    }
    return PosTag(static_cast<int>(it - kTagNames.begin()));
}

PosTag map_upos(std::string_view upos_label) {
    if (upos_label == "SYM" || upos_label == "X") {
        return PosTag::kPunct;
    }
    return PosTag::from_name(upos_label);
}

}  // namespace posdist
