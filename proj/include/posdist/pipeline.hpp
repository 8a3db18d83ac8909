#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "posdist/corpus.hpp"
#include "posdist/distance.hpp"
#include "posdist/entropy.hpp"
#include "posdist/registry.hpp"

namespace posdist {

std::string_view version();

struct RunConfig {
    std::filesystem::path data_dir;
    std::filesystem::path cache_dir;      // empty: <output_dir>/cache
    std::filesystem::path registry_path;  // empty: bundled registry
    std::filesystem::path output_dir = "out";
    std::filesystem::path distance_matrix;  // optional CSV read by cluster and geo instead of recomputing
    int block_size = 3;
    Metric metric = Metric::jensen_shannon;
    Estimator estimator = Estimator::nsb;
    std::size_t min_tokens = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool strip_final_punct = false;
    std::vector<std::string> languages{"de", "is", "pt", "cs"};

    struct {
        int m = 2;
        int K = 1000;
    } memtest;
    struct {
        std::vector<int> orders{0, 1, 2, 3};
        int K = 1000;
        int repetitions = 10;
        std::size_t length_min = 5;
        std::size_t length_max = 20;
        double smoothing = 0.0;
    } identify;
    struct {
        int k_min = 2;
        int k_max = 45;
        std::optional<int> k;  // unset: the silhouette-optimal k
    } cluster;
    struct {
        int permutations = 1000;
        std::set<std::string> exclude{"af"};
        bool log_geo_for_dcor = false;
        std::vector<std::string> focus{"de", "pt", "cs", "eu"};
    } geo;
    struct {
        std::string group = "Germanic";
        std::size_t target_tokens = 10000;
        std::size_t max_samples = 20;
    } samples;

    std::filesystem::path effective_cache_dir() const;
    std::filesystem::path effective_registry_path() const;
};

/// JSON object with the keys of RunConfig; missing keys keep their defaults, unknown keys
/// and mistyped values throw ConfigError.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON; parse_config(format_config(c)) reproduces c.
std::string format_config(const RunConfig& config);

/// Corpora from the tag cache, listed in manifest order (sorted by language id).
std::vector<Corpus> load_cached_corpora(const RunConfig& config, bool apply_min_tokens = true);
Corpus load_cached_corpus(const RunConfig& config, std::string_view language_id);

/// Every subcommand writes its outputs under <output_dir>/<name>/ together with run.json.
/// Progress lines go to `log`.
void cmd_ingest(const RunConfig& config, std::ostream& log);
void cmd_gain(const RunConfig& config, std::ostream& log);
void cmd_memtest(const RunConfig& config, std::ostream& log);
void cmd_identify(const RunConfig& config, std::ostream& log);
void cmd_distances(const RunConfig& config, std::ostream& log);
void cmd_cluster(const RunConfig& config, std::ostream& log);
void cmd_geo(const RunConfig& config, std::ostream& log);
void cmd_group_samples(const RunConfig& config, std::ostream& log);

}  // namespace posdist
