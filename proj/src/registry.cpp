#include "posdist/registry.hpp"

#include <array>
#include <cmath>
#include <unordered_set>

#include "posdist/error.hpp"
#include "posdist/io.hpp"

#ifndef POSDIST_DATA_DIR
#define POSDIST_DATA_DIR "data"
#endif

namespace posdist {
namespace {

constexpr std::array<std::string_view, 5> kMorphNames = {
    "fusional", "agglutinative", "isolating", "isolating-fusional", "fusional-agglutinative"};

constexpr std::array<std::string_view, 7> kHeader = {"language_id", "name",      "family",   "group",
                                                    "morph_type",  "latitude", "longitude"};

void validate(const LanguageRecord& r) {
    if (!(r.latitude >= -90.0 && r.latitude <= 90.0) || !(r.longitude >= -180.0 && r.longitude <= 180.0)) {
        throw CoordinateOutOfRange("coordinates of '" + r.language_id + "' out of range: " +
                                   io::format_double(r.latitude) + ", " + io::format_double(r.longitude));
    }
}

}  // namespace

std::string_view to_string(MorphType type) { return kMorphNames[static_cast<std::size_t>(type)]; }

MorphType parse_morph_type(std::string_view text) {
    for (std::size_t i = 0; i < kMorphNames.size(); ++i) {
        if (kMorphNames[i] == text) return static_cast<MorphType>(i);
    }
    throw DataError("unknown morphological type '" + std::string(text) + "'");
}

Registry::Registry(std::vector<LanguageRecord> records) : records_(std::move(records)) {
    std::unordered_set<std::string> seen;
    for (const auto& r : records_) {
        validate(r);
        if (!seen.insert(r.language_id).second) {
            throw DuplicateLanguage("duplicate language_id '" + r.language_id + "' in registry");
        }
    }
}

const LanguageRecord* Registry::find(std::string_view language_id) const {
    for (const auto& r : records_) {
        if (r.language_id == language_id) return &r;
    }
    return nullptr;
}

const LanguageRecord& Registry::at(std::string_view language_id) const {
    if (const auto* r = find(language_id)) return *r;
    throw MissingCoordinates("language '" + std::string(language_id) + "' not in registry");
}

Registry parse_registry(std::string_view text, std::string_view source) {
    std::vector<LanguageRecord> records;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto fields = io::split_csv(line);
        if (!header_seen) {
            if (fields.size() != kHeader.size() || !std::equal(kHeader.begin(), kHeader.end(), fields.begin())) {
                throw MalformedLine(std::string(source), line_no, "unexpected registry header");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != kHeader.size()) {
            throw MalformedLine(std::string(source), line_no, "expected 7 fields");
        }
        LanguageRecord r;
        r.language_id = fields[0];
        r.name = fields[1];
        r.family = fields[2];
        r.group = fields[3];
        try {
            r.morph_type = parse_morph_type(fields[4]);
            r.latitude = io::parse_double(fields[5]);
            r.longitude = io::parse_double(fields[6]);
        } catch (const DataError& e) {
            throw MalformedLine(std::string(source), line_no, e.what());
        }
        records.push_back(std::move(r));
    }
    return Registry(std::move(records));
}

Registry load_registry(const std::filesystem::path& path) {
    return parse_registry(io::read_file(path), path.string());
}

std::string format_registry(const Registry& registry) {
    std::string out = "language_id,name,family,group,morph_type,latitude,longitude\n";
    for (const auto& r : registry.records()) {
        out += io::csv_field(r.language_id) + ',' + io::csv_field(r.name) + ',' + io::csv_field(r.family) + ',' +
               io::csv_field(r.group) + ',' + std::string(to_string(r.morph_type)) + ',' +
               io::format_double(r.latitude) + ',' + io::format_double(r.longitude) + '\n';
    }
    return out;
}

std::filesystem::path bundled_registry_path() { return std::filesystem::path(POSDIST_DATA_DIR) / "languages.csv"; }

}  // namespace posdist
