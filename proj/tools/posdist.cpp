// posdist: POS-tag statistics across treebanks.

#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "posdist/error.hpp"
#include "posdist/pipeline.hpp"

namespace {

using posdist::RunConfig;

// Flags parsed before the config file is loaded; unset values do not override it.
struct Overrides {
    std::optional<std::string> data_dir, cache_dir, registry, output_dir, matrix, metric, estimator;
    std::optional<int> r;
    std::optional<std::size_t> min_tokens;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::vector<std::string>> languages;
    bool strip_final_punct = false;

    std::optional<int> m, mem_K;
    std::optional<std::vector<int>> orders;
    std::optional<int> id_K, repetitions;
    std::optional<std::size_t> length_min, length_max;
    std::optional<double> smoothing;
    std::optional<int> k_min, k_max, k;
    std::optional<int> permutations;
    std::optional<std::vector<std::string>> exclude, focus;
    bool log_geo = false;
    std::optional<std::string> group;
    std::optional<std::size_t> target_tokens, max_samples;
};

template <typename T, typename U>
void apply(const std::optional<T>& v, U& target) {
    if (v) target = *v;
}

RunConfig build_config(const std::string& config_path, const Overrides& o) {
    RunConfig c = config_path.empty() ? RunConfig{} : posdist::load_config(config_path);
    apply(o.data_dir, c.data_dir);
    apply(o.cache_dir, c.cache_dir);
    apply(o.registry, c.registry_path);
    apply(o.output_dir, c.output_dir);
    apply(o.matrix, c.distance_matrix);
    if (o.metric) c.metric = posdist::parse_metric(*o.metric);
    if (o.estimator) c.estimator = posdist::parse_estimator(*o.estimator);
    apply(o.r, c.block_size);
    apply(o.min_tokens, c.min_tokens);
    apply(o.seed, c.seed);
    apply(o.threads, c.threads);
    apply(o.languages, c.languages);
    if (o.strip_final_punct) c.strip_final_punct = true;
    apply(o.m, c.memtest.m);
    apply(o.mem_K, c.memtest.K);
    apply(o.orders, c.identify.orders);
    apply(o.id_K, c.identify.K);
    apply(o.repetitions, c.identify.repetitions);
    apply(o.length_min, c.identify.length_min);
    apply(o.length_max, c.identify.length_max);
    apply(o.smoothing, c.identify.smoothing);
    apply(o.k_min, c.cluster.k_min);
    apply(o.k_max, c.cluster.k_max);
    if (o.k) c.cluster.k = *o.k;
    apply(o.permutations, c.geo.permutations);
    if (o.exclude) c.geo.exclude = {o.exclude->begin(), o.exclude->end()};
    apply(o.focus, c.geo.focus);
    if (o.log_geo) c.geo.log_geo_for_dcor = true;
    apply(o.group, c.samples.group);
    apply(o.target_tokens, c.samples.target_tokens);
    apply(o.max_samples, c.samples.max_samples);
    // Re-validate the merged values through the file parser.
    return posdist::parse_config(posdist::format_config(c));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"POS-tag block statistics, language distances and clustering"};
    app.set_version_flag("--version", std::string(posdist::version()));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    Overrides o;
    app.add_option("-c,--config", config_path, "JSON run configuration");
    app.add_option("--data-dir", o.data_dir, "directory searched recursively for .conllu files");
    app.add_option("--cache-dir", o.cache_dir, "tag cache directory (default <output-dir>/cache)");
    app.add_option("--registry", o.registry, "language registry CSV (default: bundled)");
    app.add_option("-o,--output-dir", o.output_dir, "output directory");
    app.add_option("--seed", o.seed, "master seed");
    app.add_option("--threads", o.threads, "worker threads (0 = all cores)");
    app.add_option("--min-tokens", o.min_tokens, "minimum tokens per language");
    app.add_option("-r,--block-size", o.r, "block size for distances");
    app.add_option("--metric", o.metric, "jensen_shannon or hellinger");
    app.add_option("--estimator", o.estimator, "nsb or plugin");
    app.add_option("--languages", o.languages, "language ids")->delimiter(',');

    std::map<std::string, std::function<void(const RunConfig&, std::ostream&)>> commands;
    auto add = [&](const char* name, const char* help, auto fn) {
        commands[name] = fn;
        return app.add_subcommand(name, help);
    };

    auto* ingest = add("ingest", "parse treebanks into the tag cache", posdist::cmd_ingest);
    ingest->add_flag("--strip-final-punct", o.strip_final_punct, "drop a sentence-final PUNCT tag");
    add("gain", "predictability gain curves", posdist::cmd_gain);
    auto* memtest = add("memtest", "surrogate test of the memory hypothesis", posdist::cmd_memtest);
    memtest->add_option("-m,--memory", o.m, "memory m under test");
    memtest->add_option("-K,--surrogates", o.mem_K, "number of surrogates");
    auto* identify = add("identify", "Markov language identification accuracy", posdist::cmd_identify);
    identify->add_option("--orders", o.orders, "model orders")->delimiter(',');
    identify->add_option("-K,--test-sentences", o.id_K, "held-out sentences per language");
    identify->add_option("--repetitions", o.repetitions, "repetitions");
    identify->add_option("--length-min", o.length_min, "shortest test sentence");
    identify->add_option("--length-max", o.length_max, "longest test sentence");
    identify->add_option("--smoothing", o.smoothing, "additive smoothing (0 = none)");
    add("distances", "pairwise language distance matrix", posdist::cmd_distances);
    auto* cluster = add("cluster", "dendrogram, PAM, silhouette sweep and MST", posdist::cmd_cluster);
    cluster->add_option("--matrix", o.matrix, "read this distance CSV instead of the cache");
    cluster->add_option("--k-min", o.k_min, "smallest k in the sweep");
    cluster->add_option("--k-max", o.k_max, "largest k in the sweep");
    cluster->add_option("-k", o.k, "fixed number of clusters");
    auto* geo = add("geo", "linguistic vs geodesic distance correlation", posdist::cmd_geo);
    geo->add_option("--matrix", o.matrix, "read this distance CSV instead of the cache");
    geo->add_option("--permutations", o.permutations, "permutation count");
    geo->add_option("--exclude", o.exclude, "language ids left out")->delimiter(',');
    geo->add_option("--focus", o.focus, "languages with per-language scatters")->delimiter(',');
    geo->add_flag("--log-geo", o.log_geo, "log10 km in the distance correlation");
    auto* samples = add("group-samples", "sample-level distances within a language group", posdist::cmd_group_samples);
    samples->add_option("--group", o.group, "registry group");
    samples->add_option("--target-tokens", o.target_tokens, "tokens per sample");
    samples->add_option("--max-samples", o.max_samples, "samples per language");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const RunConfig config = build_config(config_path, o);
        for (const auto* sub : app.get_subcommands()) commands.at(sub->get_name())(config, std::cerr);
        return 0;
    } catch (const posdist::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const posdist::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
