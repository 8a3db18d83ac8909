#include "posdist/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "posdist/analysis.hpp"
#include "posdist/conllu.hpp"
#include "posdist/error.hpp"
#include "posdist/geo.hpp"
#include "posdist/io.hpp"
#include "posdist/markov_id.hpp"
#include "posdist/memory.hpp"
#include "posdist/random.hpp"
#include "posdist/serialize.hpp"

#ifndef POSDIST_VERSION
#define POSDIST_VERSION "0.0.0"
#endif

namespace posdist {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kManifest = "manifest.json";

template <typename T>
void read_key(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

void read_path(const json& obj, const char* key, fs::path& out) {
    std::string s;
    if (!obj.contains(key)) return;
    read_key(obj, key, s);
    out = s;
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [k, v] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; })) {
            throw ConfigError("unknown config key '" + where + k + "'");
        }
    }
}

const json& section(const json& root, const char* key, std::initializer_list<const char*> keys) {
    static const json empty = json::object();
    if (!root.contains(key)) return empty;
    const json& s = root.at(key);
    reject_unknown(s, keys, std::string(key) + ".");
    return s;
}

fs::path out_dir(const RunConfig& c, const char* name) { return c.output_dir / name; }

std::string manifest_text(const RunConfig& c) {
    const fs::path p = c.effective_cache_dir() / kManifest;
    if (!fs::exists(p)) throw DataError("no tag cache at " + c.effective_cache_dir().string() + "; run ingest first");
    return io::read_file(p);
}

void write_run_record(const RunConfig& c, const char* name, const std::string& manifest) {
    const std::string config_text = format_config(c);
    json run;
    run["command"] = name;
    run["version"] = version();
    run["seed"] = c.seed;
    run["config_hash"] = io::hex64(io::fnv1a(config_text));
    run["manifest_hash"] = manifest.empty() ? json(nullptr) : json(io::hex64(io::fnv1a(manifest)));
    run["config"] = json::parse(config_text);
    io::write_file(out_dir(c, name) / "run.json", run.dump(2) + "\n");
}

Registry load_config_registry(const RunConfig& c) { return load_registry(c.effective_registry_path()); }

std::vector<Corpus> select(const RunConfig& c, const std::vector<std::string>& ids) {
    std::vector<Corpus> out;
    for (const auto& id : ids) out.push_back(load_cached_corpus(c, id));
    return out;
}

DistanceMatrix matrix_for(const RunConfig& c, std::ostream& log) {
    if (!c.distance_matrix.empty()) {
        log << "reading distance matrix " << c.distance_matrix.string() << "\n";
        return distance_matrix_from_csv(io::read_file(c.distance_matrix), c.metric, c.block_size);
    }
    const auto corpora = load_cached_corpora(c);
    std::vector<LabelledDistribution> dists;
    for (const auto& corpus : corpora) {
        dists.emplace_back(corpus.language_id, estimate_distribution(count_blocks(corpus, c.block_size)));
    }
    return build_distance_matrix(dists, c.metric, c.threads);
}

}  // namespace

std::string_view version() { return POSDIST_VERSION; }

fs::path RunConfig::effective_cache_dir() const { return cache_dir.empty() ? output_dir / "cache" : cache_dir; }

fs::path RunConfig::effective_registry_path() const {
    return registry_path.empty() ? bundled_registry_path() : registry_path;
}

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(root,
                   {"data_dir", "cache_dir", "registry_path", "output_dir", "distance_matrix", "block_size", "metric",
                    "estimator", "min_tokens", "seed", "threads", "strip_final_punct", "languages", "memtest",
                    "identify", "cluster", "geo", "samples"},
                   "");
    RunConfig c;
    read_path(root, "data_dir", c.data_dir);
    read_path(root, "cache_dir", c.cache_dir);
    read_path(root, "registry_path", c.registry_path);
    read_path(root, "output_dir", c.output_dir);
    read_path(root, "distance_matrix", c.distance_matrix);
    read_key(root, "block_size", c.block_size);
    if (root.contains("metric")) {
        std::string m;
        read_key(root, "metric", m);
        c.metric = parse_metric(m);
    }
    if (root.contains("estimator")) {
        std::string e;
        read_key(root, "estimator", e);
        c.estimator = parse_estimator(e);
    }
    read_key(root, "min_tokens", c.min_tokens);
    read_key(root, "seed", c.seed);
    read_key(root, "threads", c.threads);
    read_key(root, "strip_final_punct", c.strip_final_punct);
    read_key(root, "languages", c.languages);

    const json& mt = section(root, "memtest", {"m", "K"});
    read_key(mt, "m", c.memtest.m);
    read_key(mt, "K", c.memtest.K);

    const json& id = section(root, "identify", {"orders", "K", "repetitions", "length_min", "length_max", "smoothing"});
    read_key(id, "orders", c.identify.orders);
    read_key(id, "K", c.identify.K);
    read_key(id, "repetitions", c.identify.repetitions);
    read_key(id, "length_min", c.identify.length_min);
    read_key(id, "length_max", c.identify.length_max);
    read_key(id, "smoothing", c.identify.smoothing);

    const json& cl = section(root, "cluster", {"k_min", "k_max", "k"});
    read_key(cl, "k_min", c.cluster.k_min);
    read_key(cl, "k_max", c.cluster.k_max);
    if (cl.contains("k") && !cl.at("k").is_null()) {
        int k = 0;
        read_key(cl, "k", k);
        c.cluster.k = k;
    }

    const json& geo = section(root, "geo", {"permutations", "exclude", "log_geo_for_dcor", "focus"});
    read_key(geo, "permutations", c.geo.permutations);
    read_key(geo, "exclude", c.geo.exclude);
    read_key(geo, "log_geo_for_dcor", c.geo.log_geo_for_dcor);
    read_key(geo, "focus", c.geo.focus);

    const json& sm = section(root, "samples", {"group", "target_tokens", "max_samples"});
    read_key(sm, "group", c.samples.group);
    read_key(sm, "target_tokens", c.samples.target_tokens);
    read_key(sm, "max_samples", c.samples.max_samples);

    if (c.block_size < 1) throw ConfigError("block_size must be >= 1");
    if (c.memtest.K < 1) throw ConfigError("memtest.K must be >= 1");
    if (c.memtest.m < 0) throw ConfigError("memtest.m must be >= 0");
    if (c.identify.K < 1 || c.identify.repetitions < 1) throw ConfigError("identify.K and repetitions must be >= 1");
    if (c.identify.length_min > c.identify.length_max) throw ConfigError("identify.length_min exceeds length_max");
    if (c.identify.smoothing < 0.0) throw ConfigError("identify.smoothing must be >= 0");
    if (c.geo.permutations < 0) throw ConfigError("geo.permutations must be >= 0");
    if (c.samples.target_tokens < 1) throw ConfigError("samples.target_tokens must be >= 1");
    return c;
}

RunConfig load_config(const fs::path& path) {
    if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
    return parse_config(io::read_file(path));
}

std::string format_config(const RunConfig& c) {
    json j;
    j["data_dir"] = c.data_dir.generic_string();
    j["cache_dir"] = c.cache_dir.generic_string();
    j["registry_path"] = c.registry_path.generic_string();
    j["output_dir"] = c.output_dir.generic_string();
    j["distance_matrix"] = c.distance_matrix.generic_string();
    j["block_size"] = c.block_size;
    j["metric"] = to_string(c.metric);
    j["estimator"] = to_string(c.estimator);
    j["min_tokens"] = c.min_tokens;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["strip_final_punct"] = c.strip_final_punct;
    j["languages"] = c.languages;
    j["memtest"] = {{"m", c.memtest.m}, {"K", c.memtest.K}};
    j["identify"] = {{"orders", c.identify.orders},          {"K", c.identify.K},
                     {"repetitions", c.identify.repetitions}, {"length_min", c.identify.length_min},
                     {"length_max", c.identify.length_max},   {"smoothing", c.identify.smoothing}};
    j["cluster"] = {{"k_min", c.cluster.k_min},
                    {"k_max", c.cluster.k_max},
                    {"k", c.cluster.k ? json(*c.cluster.k) : json(nullptr)}};
    j["geo"] = {{"permutations", c.geo.permutations},
                {"exclude", c.geo.exclude},
                {"log_geo_for_dcor", c.geo.log_geo_for_dcor},
                {"focus", c.geo.focus}};
    j["samples"] = {{"group", c.samples.group},
                    {"target_tokens", c.samples.target_tokens},
                    {"max_samples", c.samples.max_samples}};
    return j.dump(2) + "\n";
}

Corpus load_cached_corpus(const RunConfig& c, std::string_view language_id) {
    const fs::path p = c.effective_cache_dir() / (std::string(language_id) + ".tags");
    std::ifstream in(p);
    if (!in) throw DataError("language '" + std::string(language_id) + "' is not in the tag cache " + p.string());
    return read_tag_cache(in, std::string(language_id));
}

std::vector<Corpus> load_cached_corpora(const RunConfig& c, bool apply_min_tokens) {
    const json manifest = json::parse(manifest_text(c));
    std::vector<Corpus> out;
    for (const auto& entry : manifest.at("languages")) {
        out.push_back(load_cached_corpus(c, entry.at("language_id").get<std::string>()));
    }
    return apply_min_tokens ? filter_min_tokens(out, c.min_tokens) : out;
}

void cmd_ingest(const RunConfig& c, std::ostream& log) {
    if (c.data_dir.empty()) throw ConfigError("ingest needs data_dir");
    if (!fs::is_directory(c.data_dir)) throw DataError("data_dir " + c.data_dir.string() + " is not a directory");
    std::map<std::string, std::vector<fs::path>> files;
    for (const auto& e : fs::recursive_directory_iterator(c.data_dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".conllu") continue;
        const std::string stem = e.path().filename().string();
        const std::string id = stem.substr(0, std::min(stem.find('_'), stem.find('.')));
        files[id].push_back(e.path());
    }
    if (files.empty()) throw DataError("found 0 treebanks (.conllu files) under " + c.data_dir.string());

    const fs::path cache = c.effective_cache_dir();
    json languages = json::array();
    for (auto& [id, paths] : files) {
        std::sort(paths.begin(), paths.end());
        Corpus merged{id, {}, kNumTags};
        ConlluStats total;
        json used = json::array();
        for (const auto& p : paths) {
            ConlluStats stats;
            ConlluOptions opt{id, fs::relative(p, c.data_dir).generic_string(), c.strip_final_punct};
            merged.append(parse_conllu_file(p, opt, &stats));
            total.dropped_untagged += stats.dropped_untagged;
            used.push_back(opt.source_name);
        }
        std::ostringstream tags;
        write_tag_cache(tags, merged);
        io::write_file(cache / (id + ".tags"), tags.str());
        languages.push_back({{"language_id", id},
                             {"sentences", merged.sentence_count()},
                             {"tokens", merged.token_count()},
                             {"dropped_untagged", total.dropped_untagged},
                             {"files", used}});
        log << id << ": " << merged.sentence_count() << " sentences, " << merged.token_count() << " tokens\n";
    }
    json manifest{{"strip_final_punct", c.strip_final_punct}, {"languages", languages}};
    const std::string text = manifest.dump(2) + "\n";
    io::write_file(cache / kManifest, text);
    io::write_file(out_dir(c, "ingest") / kManifest, text);
    write_run_record(c, "ingest", text);
}

void cmd_gain(const RunConfig& c, std::ostream& log) {
    const std::string manifest = manifest_text(c);
    for (const Corpus& corpus : select(c, c.languages)) {
        const GainCurve curve = gain_curve(corpus, c.estimator);
        io::write_file(out_dir(c, "gain") / (corpus.language_id + ".csv"), gain_curve_to_csv(curve));
        log << corpus.language_id << ": r_max " << curve.r_max << ", G_0 " << io::format_double(curve.at(0)) << "\n";
    }
    write_run_record(c, "gain", manifest);
}

void cmd_memtest(const RunConfig& c, std::ostream& log) {
    const std::string manifest = manifest_text(c);
    MemoryTestOptions opt;
    opt.estimator = c.estimator;
    opt.threads = c.threads;
    for (const Corpus& corpus : select(c, c.languages)) {
        const auto result =
            memory_test(corpus, c.memtest.m, c.memtest.K, derive_seed(c.seed, "memtest/" + corpus.language_id), opt);
        io::write_file(out_dir(c, "memtest") / (corpus.language_id + ".json"),
                       memory_test_to_json(result, corpus.language_id));
        log << corpus.language_id << ": G_" << c.memtest.m << " = " << io::format_double(result.statistic)
            << ", p = " << io::format_double(result.p_value) << "\n";
    }
    write_run_record(c, "memtest", manifest);
}

void cmd_identify(const RunConfig& c, std::ostream& log) {
    const std::string manifest = manifest_text(c);
    const auto corpora = select(c, c.languages);
    IdentificationOptions opt;
    opt.orders = c.identify.orders;
    opt.K = c.identify.K;
    opt.repetitions = c.identify.repetitions;
    opt.length_min = c.identify.length_min;
    opt.length_max = c.identify.length_max;
    opt.smoothing = c.identify.smoothing;
    opt.threads = c.threads;
    const auto reports = run_identification_experiment(corpora, opt, derive_seed(c.seed, "identify"));
    io::write_file(out_dir(c, "identify") / "accuracy.csv", accuracy_to_csv(reports));
    for (const auto& r : reports) {
        log << r.language_id << " u=" << r.order << ": " << io::format_double(r.mean_accuracy) << "\n";
    }
    write_run_record(c, "identify", manifest);
}

void cmd_distances(const RunConfig& c, std::ostream& log) {
    const std::string manifest = manifest_text(c);
    RunConfig fresh = c;
    fresh.distance_matrix.clear();
    const DistanceMatrix m = matrix_for(fresh, log);
    io::write_file(out_dir(c, "distances") / "distances.csv", distance_matrix_to_csv(m));
    io::write_file(out_dir(c, "distances") / "distances.json", distance_matrix_to_json(m));
    log << m.size() << " languages, metric " << to_string(m.metric()) << ", r = " << m.block_size() << "\n";
    write_run_record(c, "distances", manifest);
}

void cmd_cluster(const RunConfig& c, std::ostream& log) {
    const std::string manifest = c.distance_matrix.empty() ? manifest_text(c) : std::string();
    const DistanceMatrix m = matrix_for(c, log);
    const fs::path dir = out_dir(c, "cluster");

    const Dendrogram tree = complete_linkage(m);
    io::write_file(dir / "dendrogram.nwk", to_newick(tree) + "\n");
    io::write_file(dir / "leaf_order.csv", leaf_order_to_csv(tree));

    const int n = static_cast<int>(m.size());
    const int k_max = std::min(c.cluster.k_max, n - 1);
    json summary{{"n", n}, {"k_min", c.cluster.k_min}, {"k_max", c.cluster.k_max}, {"k_max_effective", k_max}};
    ClusterAssignment chosen;
    if (n >= 3 && c.cluster.k_min <= k_max) {
        const SilhouetteSweep sweep = silhouette_sweep(m, c.cluster.k_min, k_max, c.threads);
        io::write_file(dir / "silhouette.csv", silhouette_to_csv(sweep));
        summary["best_k"] = sweep.best_k;
        chosen = c.cluster.k ? pam(m, *c.cluster.k) : sweep.best();
    } else if (c.cluster.k) {
        chosen = pam(m, *c.cluster.k);
    } else {
        throw KOutOfRange("no valid k in [" + std::to_string(c.cluster.k_min) + ", " + std::to_string(k_max) + "]");
    }
    summary["k"] = chosen.k;
    summary["silhouette"] = chosen.silhouette;
    summary["cost"] = chosen.cost;
    io::write_file(dir / "assignment.csv", assignment_to_csv(m, chosen));

    const SpanningTree mst = minimum_spanning_tree(m);
    Registry registry = load_config_registry(c);
    io::write_file(dir / "mst.csv", spanning_tree_to_csv(m, mst));
    io::write_file(dir / "mst.dot", spanning_tree_to_dot(m, mst, &chosen, &registry));
    io::write_file(dir / "summary.json", summary.dump(2) + "\n");
    log << "k = " << chosen.k << ", silhouette " << io::format_double(chosen.silhouette) << "\n";
    write_run_record(c, "cluster", manifest);
}

void cmd_geo(const RunConfig& c, std::ostream& log) {
    const std::string manifest = c.distance_matrix.empty() ? manifest_text(c) : std::string();
    const DistanceMatrix m = matrix_for(c, log);
    const Registry registry = load_config_registry(c);
    GeoOptions opt;
    opt.exclude = c.geo.exclude;
    opt.permutations = c.geo.permutations;
    opt.log_geo_for_dcor = c.geo.log_geo_for_dcor;
    opt.threads = c.threads;
    const GeoCorrelation overall = correlate(m, registry, opt, derive_seed(c.seed, "geo"));
    const fs::path dir = out_dir(c, "geo");
    io::write_file(dir / "pairs.csv", geo_pairs_to_csv(overall.pairs));

    std::vector<LanguageCorrelation> focus;
    for (const auto& id : c.geo.focus) {
        focus.push_back(per_language_correlation(m, registry, id, c.geo.exclude));
        io::write_file(dir / (id + "_pairs.csv"), geo_pairs_to_csv(focus.back().pairs));
    }
    io::write_file(dir / "summary.json", geo_summary_to_json(overall, focus));
    log << "R_d = " << io::format_double(overall.distance_correlation) << ", p = " << io::format_double(overall.p_value)
        << "\n";
    write_run_record(c, "geo", manifest);
}

void cmd_group_samples(const RunConfig& c, std::ostream& log) {
    const std::string manifest = manifest_text(c);
    const Registry registry = load_config_registry(c);
    std::vector<Corpus> group;
    for (Corpus& corpus : load_cached_corpora(c)) {
        const LanguageRecord* rec = registry.find(corpus.language_id);
        if (rec && rec->group == c.samples.group) group.push_back(std::move(corpus));
    }
    if (group.empty()) throw DataError("no cached language belongs to group '" + c.samples.group + "'");
    const DistanceMatrix m = sample_distance_matrix(group, c.samples.target_tokens, c.metric,
                                                    derive_seed(c.seed, "group-samples"), c.block_size,
                                                    c.samples.max_samples, c.threads);
    const fs::path dir = out_dir(c, "group_samples");
    io::write_file(dir / (c.samples.group + ".csv"), distance_matrix_to_csv(m));
    io::write_file(dir / (c.samples.group + ".json"), distance_matrix_to_json(m));
    log << c.samples.group << ": " << group.size() << " languages, " << m.size() << " samples\n";
    write_run_record(c, "group_samples", manifest);
}

}  // namespace posdist
