#include "posdist/serialize.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "posdist/error.hpp"
#include "posdist/io.hpp"

namespace posdist {
namespace {

using nlohmann::json;
using io::csv_field;
using io::format_double;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse_json(std::string_view text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string(what) + ": " + e.what());
    }
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

std::string dot_id(std::string_view s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string counts_to_json(const BlockCounts& counts, std::string_view language_id) {
    json j;
    j["language_id"] = language_id;
    j["r"] = counts.block_size();
    j["L"] = counts.alphabet_size();
    j["total"] = counts.total();
    json entries = json::array();
    for (const auto& [idx, c] : counts.entries()) entries.push_back({idx, c});
    j["counts"] = std::move(entries);
    return dump(j);
}

BlockCounts counts_from_json(std::string_view text, std::string* language_id) {
    const json j = parse_json(text, "block counts");
    try {
        std::vector<BlockCounts::Entry> entries;
        for (const auto& e : j.at("counts")) entries.emplace_back(e.at(0).get<BlockIndex>(), e.at(1).get<std::uint64_t>());
        BlockCounts counts(j.at("r").get<int>(), j.at("L").get<int>(), std::move(entries));
        if (counts.total() != j.at("total").get<std::uint64_t>()) throw DataError("block counts: total mismatch");
        if (language_id) *language_id = j.value("language_id", "");
        return counts;
    } catch (const json::exception& e) {
        throw DataError(std::string("block counts: ") + e.what());
    }
}

std::string distance_matrix_to_csv(const DistanceMatrix& matrix) {
    std::ostringstream out;
    out << "label";
    for (const auto& l : matrix.labels()) out << ',' << csv_field(l);
    out << '\n';
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out << csv_field(matrix.labels()[i]);
        for (std::size_t j = 0; j < matrix.size(); ++j) out << ',' << format_double(matrix(i, j));
        out << '\n';
    }
    return out.str();
}

DistanceMatrix distance_matrix_from_csv(std::string_view text, Metric metric, int r) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw DataError("distance matrix CSV is empty");
    auto header = io::split_csv(lines[0]);
    if (header.empty() || header[0] != "label") throw DataError("distance matrix CSV must start with a 'label' column");
    std::vector<std::string> labels(header.begin() + 1, header.end());
    const std::size_t n = labels.size();
    if (lines.size() != n + 1) throw DataError("distance matrix CSV has " + std::to_string(lines.size() - 1) +
                                               " rows for " + std::to_string(n) + " labels");
    std::vector<double> values;
    values.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = io::split_csv(lines[i + 1]);
        if (row.size() != n + 1 || row[0] != labels[i]) {
            throw MalformedLine("<distance csv>", i + 2, "row does not match the header");
        }
        for (std::size_t j = 1; j <= n; ++j) values.push_back(io::parse_double(row[j]));
    }
    return DistanceMatrix(std::move(labels), std::move(values), metric, r);
}

std::string distance_matrix_to_json(const DistanceMatrix& matrix) {
    json j;
    j["metric"] = to_string(matrix.metric());
    j["r"] = matrix.block_size();
    j["labels"] = matrix.labels();
    json rows = json::array();
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < matrix.size(); ++k) row.push_back(matrix(i, k));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    return dump(j);
}

DistanceMatrix distance_matrix_from_json(std::string_view text) {
    const json j = parse_json(text, "distance matrix");
    try {
        auto labels = j.at("labels").get<std::vector<std::string>>();
        std::vector<double> values;
        for (const auto& row : j.at("values")) {
            if (row.size() != labels.size()) throw DataError("distance matrix JSON: ragged rows");
            for (const auto& v : row) values.push_back(v.get<double>());
        }
        return DistanceMatrix(std::move(labels), std::move(values), parse_metric(j.at("metric").get<std::string>()),
                              j.at("r").get<int>());
    } catch (const json::exception& e) {
        throw DataError(std::string("distance matrix JSON: ") + e.what());
    }
}

std::string gain_curve_to_csv(const GainCurve& curve) {
    std::ostringstream out;
    out << "u,gain,estimator\n";
    for (std::size_t u = 0; u < curve.values.size(); ++u) {
        out << u << ',' << format_double(curve.values[u]) << ',' << to_string(curve.estimator) << '\n';
    }
    return out.str();
}

std::string memory_test_to_json(const MemoryTestResult& r, std::string_view language_id) {
    json j;
    j["language_id"] = language_id;
    j["m"] = r.m;
    j["K"] = r.K;
    j["estimator"] = to_string(r.real.estimator);
    j["r_max"] = r.real.r_max;
    j["statistic"] = r.statistic;
    j["surrogate_mean"] = number_or_null(r.surrogate_mean);
    j["surrogate_std"] = number_or_null(r.surrogate_std);
    j["p_value"] = r.p_value;
    json curve = json::array();
    for (std::size_t u = 0; u < r.real.values.size(); ++u) {
        curve.push_back({{"u", u},
                         {"gain", r.real.values[u]},
                         {"surrogate_mean", number_or_null(r.mean_curve[u])},
                         {"surrogate_std", number_or_null(r.std_curve[u])}});
    }
    j["curve"] = std::move(curve);
    json entropies = json::array();
    for (const auto& e : r.real.entropies) {
        json item{{"r", e.r}, {"bits", e.value}};
        if (e.posterior_std) item["posterior_std"] = *e.posterior_std;
        entropies.push_back(std::move(item));
    }
    j["entropies"] = std::move(entropies);
    j["surrogate_statistics"] = r.surrogate_statistics;
    return dump(j);
}

std::string accuracy_to_csv(std::span<const AccuracyReport> reports) {
    std::ostringstream out;
    out << "language,order,mean,std\n";
    for (const auto& r : reports) {
        out << csv_field(r.language_id) << ',' << r.order << ',' << format_double(r.mean_accuracy) << ','
            << format_double(r.std_accuracy) << '\n';
    }
    return out.str();
}

std::string leaf_order_to_csv(const Dendrogram& tree) {
    std::ostringstream out;
    out << "position,label\n";
    for (std::size_t i = 0; i < tree.leaf_order.size(); ++i) {
        out << i << ',' << csv_field(tree.labels[tree.leaf_order[i]]) << '\n';
    }
    return out.str();
}

std::string assignment_to_csv(const DistanceMatrix& matrix, const ClusterAssignment& clusters) {
    std::ostringstream out;
    out << "label,cluster,medoid\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        const int c = clusters.assignment[i];
        out << csv_field(matrix.labels()[i]) << ',' << c << ','
            << csv_field(matrix.labels()[clusters.medoids[static_cast<std::size_t>(c)]]) << '\n';
    }
    return out.str();
}

std::string silhouette_to_csv(const SilhouetteSweep& sweep) {
    std::ostringstream out;
    out << "k,silhouette\n";
    for (const auto& [k, s] : sweep.scores) out << k << ',' << format_double(s) << '\n';
    return out.str();
}

std::string spanning_tree_to_csv(const DistanceMatrix& matrix, const SpanningTree& tree) {
    std::ostringstream out;
    out << "lang_a,lang_b,weight\n";
    for (const auto& e : tree.edges) {
        out << csv_field(matrix.labels()[e.a]) << ',' << csv_field(matrix.labels()[e.b]) << ','
            << format_double(e.weight) << '\n';
    }
    return out.str();
}

std::string spanning_tree_to_dot(const DistanceMatrix& matrix, const SpanningTree& tree,
                                 const ClusterAssignment* clusters, const Registry* registry) {
    std::ostringstream out;
    out << "graph mst {\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        const std::string& label = matrix.labels()[i];
        out << "  " << dot_id(label) << " [";
        std::vector<std::string> attrs;
        if (clusters) attrs.push_back("cluster=" + std::to_string(clusters->assignment[i]));
        if (const LanguageRecord* rec = registry ? registry->find(label) : nullptr) {
            attrs.push_back("family=" + dot_id(rec->family));
            attrs.push_back("group=" + dot_id(rec->group));
            attrs.push_back("morph_type=" + dot_id(to_string(rec->morph_type)));
        }
        for (std::size_t a = 0; a < attrs.size(); ++a) out << (a ? ", " : "") << attrs[a];
        out << "];\n";
    }
    for (const auto& e : tree.edges) {
        out << "  " << dot_id(matrix.labels()[e.a]) << " -- " << dot_id(matrix.labels()[e.b])
            << " [weight=" << format_double(e.weight) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string geo_pairs_to_csv(std::span<const GeoPair> pairs) {
    std::ostringstream out;
    out << "lang_a,lang_b,d_ling,d_geo_km\n";
    for (const auto& p : pairs) {
        out << csv_field(p.lang_a) << ',' << csv_field(p.lang_b) << ',' << format_double(p.d_ling) << ','
            << format_double(p.d_geo_km) << '\n';
    }
    return out.str();
}

std::string geo_summary_to_json(const GeoCorrelation& overall, std::span<const LanguageCorrelation> focus) {
    json j;
    j["languages"] = overall.languages;
    j["pairs"] = overall.pairs.size();
    j["pearson_r_log10_km"] = number_or_null(overall.pearson_r);
    j["distance_correlation"] = overall.distance_correlation;
    j["distance_correlation_geo_scale"] = overall.log_geo_for_dcor ? "log10_km" : "km";
    j["p_value"] = overall.p_value;
    j["permutations"] = overall.permutations;
    json per = json::object();
    for (const auto& f : focus) {
        per[f.language_id] = {{"pearson_r_log10_km", number_or_null(f.pearson_r)}, {"points", f.pairs.size()}};
    }
    j["per_language"] = std::move(per);
    return dump(j);
}

}  // namespace posdist
