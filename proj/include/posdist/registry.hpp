#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace posdist {

enum class MorphType { fusional, agglutinative, isolating, isolating_fusional, fusional_agglutinative };

std::string_view to_string(MorphType type);
MorphType parse_morph_type(std::string_view text);

struct LanguageRecord {
    std::string language_id;
    std::string name;
    std::string family;
    std::string group;  // may be empty
    MorphType morph_type = MorphType::fusional;
    double latitude = 0.0;   // degrees, [-90, 90]
    double longitude = 0.0;  // degrees, [-180, 180]
};

/// Language metadata keyed by language_id (unique).
class Registry {
public:
    Registry() = default;
    explicit Registry(std::vector<LanguageRecord> records);

    const std::vector<LanguageRecord>& records() const noexcept { return records_; }
    const LanguageRecord* find(std::string_view language_id) const;
    const LanguageRecord& at(std::string_view language_id) const;
    std::size_t size() const noexcept { return records_.size(); }

private:
    std::vector<LanguageRecord> records_;
};

/// CSV header: language_id,name,family,group,morph_type,latitude,longitude.
/// Throws DuplicateLanguage or CoordinateOutOfRange.
Registry load_registry(const std::filesystem::path& path);
Registry parse_registry(std::string_view csv_text, std::string_view source = "<registry>");
std::string format_registry(const Registry& registry);

/// Path of the registry shipped with the library (67 languages).
std::filesystem::path bundled_registry_path();

}  // namespace posdist
