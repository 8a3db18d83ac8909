#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "posdist/analysis.hpp"
#include "posdist/conllu.hpp"
#include "posdist/distance.hpp"
#include "posdist/entropy.hpp"
#include "posdist/error.hpp"
#include "posdist/geo.hpp"
#include "posdist/markov_id.hpp"
#include "posdist/memory.hpp"
#include "posdist/ngram.hpp"
#include "posdist/pos_tag.hpp"
#include "posdist/registry.hpp"
#include "posdist/synthetic.hpp"

namespace py = pybind11;
using namespace posdist;

namespace {

using Sentences = std::vector<std::vector<int>>;
using CountMap = std::map<BlockIndex, std::uint64_t>;
using ProbMap = std::map<BlockIndex, double>;

Corpus to_corpus(const Sentences& sentences, int L, const std::string& id = "py") {
    Corpus c{id, {}, L};
    for (const auto& s : sentences) {
        TagSequence t;
        for (const int x : s) {
            if (x < 0 || x >= L) throw DigitOutOfRange("tag " + std::to_string(x) + " outside [0, " + std::to_string(L) + ")");
            t.push_back(static_cast<Symbol>(x));
        }
        c.sentences.push_back(std::move(t));
    }
    return c;
}

Sentences from_corpus(const Corpus& c) {
    Sentences out;
    for (const auto& s : c.sentences) out.emplace_back(s.begin(), s.end());
    return out;
}

BlockCounts to_counts(const CountMap& m, int r, int L) {
    std::vector<BlockCounts::Entry> e(m.begin(), m.end());
    return BlockCounts(r, L, std::move(e));
}

BlockDistribution to_dist(const ProbMap& m, int r, int L) {
    std::vector<BlockDistribution::Entry> e(m.begin(), m.end());
    return BlockDistribution(r, L, std::move(e));
}

DistanceMatrix to_matrix(const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows) {
    std::vector<double> v;
    for (const auto& row : rows) v.insert(v.end(), row.begin(), row.end());
    return DistanceMatrix(labels, std::move(v), Metric::jensen_shannon, 3);
}

py::dict gain_dict(const GainCurve& g) {
    py::dict d;
    d["values"] = g.values;
    std::vector<double> h;
    for (const auto& e : g.entropies) h.push_back(e.value);
    d["entropies"] = h;
    d["r_max"] = g.r_max;
    d["estimator"] = std::string(to_string(g.estimator));
    return d;
}

}  // namespace

PYBIND11_MODULE(_posdist, m) {
    m.doc() = "POS-tag block statistics, entropy estimation, distances and clustering";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.attr("TAGS") = std::vector<std::string>(kTagNames.begin(), kTagNames.end());
    m.def("map_upos", [](const std::string& label) { return map_upos(label).index(); });

    m.def(
        "parse_conllu",
        [](const std::string& text, bool strip_final_punct) {
            std::istringstream in(text);
            return from_corpus(parse_conllu(in, {"py", "<string>", strip_final_punct}));
        },
        py::arg("text"), py::arg("strip_final_punct") = false);

    m.def("encode_block", [](const std::vector<int>& digits, int L) {
        std::vector<Symbol> d;
        for (const int x : digits) {
            if (x < 0 || x > 255) throw DigitOutOfRange("digit outside [0, 255]");
            d.push_back(static_cast<Symbol>(x));
        }
        return encode_block(d, L);
    }, py::arg("digits"), py::arg("L") = kNumTags);

    m.def(
        "count_blocks",
        [](const Sentences& s, int r, int L) {
            const BlockCounts c = count_blocks(to_corpus(s, L), r);
            return CountMap(c.entries().begin(), c.entries().end());
        },
        py::arg("sentences"), py::arg("r"), py::arg("L") = kNumTags);

    m.def(
        "entropy_plugin",
        [](const CountMap& counts, int r, int L) { return entropy_plugin(to_counts(counts, r, L)).value; },
        py::arg("counts"), py::arg("r") = 1, py::arg("L") = kNumTags);

    m.def(
        "entropy_nsb",
        [](const CountMap& counts, double alphabet_size) {
            const auto e = entropy_nsb(to_counts(counts, 1, 256), alphabet_size);
            return py::make_tuple(e.value, e.posterior_std.value_or(0.0));
        },
        py::arg("counts"), py::arg("alphabet_size"),
        "NSB entropy (bits) and posterior std for counts over an alphabet of the given size.");

    m.def(
        "gain_curve",
        [](const Sentences& s, const std::string& estimator, int L, std::optional<int> r_max) {
            GainCurve g;
            {
                py::gil_scoped_release release;
                g = gain_curve(to_corpus(s, L), parse_estimator(estimator), r_max);
            }
            return gain_dict(g);
        },
        py::arg("sentences"), py::arg("estimator") = "nsb", py::arg("L") = kNumTags, py::arg("r_max") = py::none());

    m.def(
        "memory_test",
        [](const Sentences& s, int memory, int K, std::uint64_t seed, const std::string& estimator, int L) {
            MemoryTestOptions opt;
            opt.estimator = parse_estimator(estimator);
            MemoryTestResult r;
            {
                py::gil_scoped_release release;
                r = memory_test(to_corpus(s, L), memory, K, seed, opt);
            }
            py::dict d;
            d["m"] = r.m;
            d["K"] = r.K;
            d["statistic"] = r.statistic;
            d["surrogate_mean"] = r.surrogate_mean;
            d["surrogate_std"] = r.surrogate_std;
            d["p_value"] = r.p_value;
            d["real"] = gain_dict(r.real);
            return d;
        },
        py::arg("sentences"), py::arg("m"), py::arg("K"), py::arg("seed"), py::arg("estimator") = "nsb",
        py::arg("L") = kNumTags);

    m.def(
        "surrogates",
        [](const Sentences& s, int memory, int K, std::uint64_t seed, int L) {
            const Corpus c = to_corpus(s, L);
            const SurrogateModel model(c, memory);
            const auto lengths = c.sentence_lengths();
            std::vector<Sentences> out;
            for (const auto& sc : generate_surrogates(model, lengths, K, seed)) out.push_back(from_corpus(sc));
            return out;
        },
        py::arg("sentences"), py::arg("m"), py::arg("K"), py::arg("seed"), py::arg("L") = kNumTags);

    m.def(
        "js_distance",
        [](const ProbMap& p, const ProbMap& q, int r, int L) { return js_distance(to_dist(p, r, L), to_dist(q, r, L)); },
        py::arg("p"), py::arg("q"), py::arg("r") = 3, py::arg("L") = kNumTags);
    m.def(
        "hellinger_distance",
        [](const ProbMap& p, const ProbMap& q, int r, int L) {
            return hellinger_distance(to_dist(p, r, L), to_dist(q, r, L));
        },
        py::arg("p"), py::arg("q"), py::arg("r") = 3, py::arg("L") = kNumTags);

    m.def(
        "score_sentence",
        [](const Sentences& training, const std::vector<int>& sentence, int order, int L, double smoothing) {
            const LanguageModel model = fit_language_model(to_corpus(training, L), order, smoothing);
            return score_sentence(model, to_corpus({sentence}, L).sentences[0]);
        },
        py::arg("training"), py::arg("sentence"), py::arg("order"), py::arg("L") = kNumTags,
        py::arg("smoothing") = 0.0);

    m.def(
        "complete_linkage",
        [](const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows) {
            const Dendrogram d = complete_linkage(to_matrix(labels, rows));
            std::vector<py::tuple> merges;
            for (const auto& mg : d.merges) merges.push_back(py::make_tuple(mg.a, mg.b, mg.height, mg.size));
            return py::make_tuple(merges, d.leaf_order, to_newick(d));
        },
        py::arg("labels"), py::arg("matrix"));

    m.def(
        "pam",
        [](const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows, int k) {
            const auto a = pam(to_matrix(labels, rows), k);
            return py::make_tuple(a.medoids, a.assignment, a.cost, a.silhouette);
        },
        py::arg("labels"), py::arg("matrix"), py::arg("k"));

    m.def(
        "silhouette_sweep",
        [](const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows, int k_min,
           int k_max) {
            const auto s = silhouette_sweep(to_matrix(labels, rows), k_min, k_max, 1);
            return py::make_tuple(s.best_k, s.scores);
        },
        py::arg("labels"), py::arg("matrix"), py::arg("k_min"), py::arg("k_max"));

    m.def(
        "minimum_spanning_tree",
        [](const std::vector<std::string>& labels, const std::vector<std::vector<double>>& rows) {
            std::vector<py::tuple> edges;
            const SpanningTree tree = minimum_spanning_tree(to_matrix(labels, rows));
            for (const auto& e : tree.edges) {
                edges.push_back(py::make_tuple(e.a, e.b, e.weight));
            }
            return edges;
        },
        py::arg("labels"), py::arg("matrix"));

    m.def("haversine_km", &haversine_km, py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"));
    m.def("distance_correlation", [](const std::vector<double>& x, const std::vector<double>& y) {
        return distance_correlation(x, y);
    });
    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });

    m.def("bundled_registry", [] {
        std::vector<py::dict> out;
        const Registry registry = load_registry(bundled_registry_path());
        for (const auto& r : registry.records()) {
            py::dict d;
            d["language_id"] = r.language_id;
            d["name"] = r.name;
            d["family"] = r.family;
            d["group"] = r.group;
            d["morph_type"] = std::string(to_string(r.morph_type));
            d["latitude"] = r.latitude;
            d["longitude"] = r.longitude;
            out.push_back(std::move(d));
        }
        return out;
    });

    m.def(
        "synthetic_corpus",
        [](int order, int L, std::size_t tokens, std::uint64_t seed, double sharpness) {
            Rng rng(seed);
            const auto chain = synthetic::random_chain(order, L, rng, sharpness);
            return from_corpus(synthetic::sample_corpus(chain, tokens, 5, 30, rng));
        },
        py::arg("order"), py::arg("L"), py::arg("tokens"), py::arg("seed"), py::arg("sharpness") = 1.0);
}
