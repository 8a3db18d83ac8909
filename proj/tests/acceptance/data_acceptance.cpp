// Reproduction checks against a local UD release (POSDIST_UD_DIR). Exits 77 when absent.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "posdist/analysis.hpp"
#include "posdist/geo.hpp"
#include "posdist/markov_id.hpp"
#include "posdist/memory.hpp"
#include "posdist/pipeline.hpp"
#include "posdist/random.hpp"

namespace fs = std::filesystem;
using namespace posdist;
using acceptance::fmt;

namespace {

const Corpus* find(const std::vector<Corpus>& corpora, const std::string& id) {
    for (const auto& c : corpora)
        if (c.language_id == id) return &c;
    return nullptr;
}

std::map<std::string, BlockDistribution> trigram_distributions(const std::vector<Corpus>& corpora) {
    std::map<std::string, BlockDistribution> out;
    for (const auto& c : corpora) out.emplace(c.language_id, estimate_distribution(count_blocks(c, 3)));
    return out;
}

// Listed members outside the cluster holding most of them.
int deviations(const DistanceMatrix& m, const ClusterAssignment& a, const std::vector<std::string>& members) {
    std::map<int, int> votes;
    int missing = 0;
    for (const auto& id : members) {
        const auto& labels = m.labels();
        const auto it = std::find(labels.begin(), labels.end(), id);
        if (it == labels.end()) {
            ++missing;
            continue;
        }
        ++votes[a.assignment[static_cast<std::size_t>(it - labels.begin())]];
    }
    int best = 0;
    for (const auto& [c, n] : votes) best = std::max(best, n);
    return static_cast<int>(members.size()) - best;
}

}  // namespace

int main() {
    const char* ud = std::getenv("POSDIST_UD_DIR");
    if (!ud || !*ud || !fs::is_directory(ud)) {
        for (int c = 1; c <= 6; ++c)
            std::cout << "criterion " << c << ": SKIP  needs a local UD release (set POSDIST_UD_DIR)\n";
        return 77;
    }
    acceptance::Report report;
    RunConfig cfg;
    cfg.data_dir = ud;
    cfg.output_dir = fs::temp_directory_path() / "posdist_data_acceptance";
    cfg.seed = 1;
    std::ostringstream log;
    cmd_ingest(cfg, log);
    const auto corpora = load_cached_corpora(cfg, true);
    const auto dists = trigram_distributions(corpora);

    {
        const auto en = dists.find("en"), ja = dists.find("ja");
        const bool have = en != dists.end() && ja != dists.end();
        const double d = have ? js_distance(en->second, ja->second) : std::nan("");
        report.record(1, "d_JS(English, Japanese) at r=3", have && std::abs(d - 0.79) <= 0.02, "d = " + fmt(d));
    }

    std::vector<LabelledDistribution> labelled(dists.begin(), dists.end());
    const DistanceMatrix matrix = build_distance_matrix(labelled, Metric::jensen_shannon);
    {
        const int k_max = std::min<int>(40, static_cast<int>(matrix.size()) - 1);
        const auto sweep = silhouette_sweep(matrix, 2, k_max);
        const auto& best = sweep.best();
        const int romance = deviations(matrix, best, {"ca", "fr", "gl", "it", "pt", "es"});
        const int indic = deviations(matrix, best, {"hi", "ur"});
        const bool ok = std::abs(sweep.best_k - 31) <= 1 && romance <= 1 && indic <= 1;
        report.record(2, "silhouette-selected k and PAM cluster membership", ok,
                      "n = " + std::to_string(matrix.size()) + ", best k = " + std::to_string(sweep.best_k) +
                          ", Romance deviations " + std::to_string(romance) + ", Hindi/Urdu deviations " +
                          std::to_string(indic));
    }

    {
        const Registry registry = load_registry(cfg.effective_registry_path());
        GeoOptions opt;
        opt.permutations = 1000;
        const auto g = correlate(matrix, registry, opt, derive_seed(cfg.seed, "geo"));
        bool ok = std::abs(g.distance_correlation - 0.447) <= 0.05 && g.p_value < 0.001;
        std::string detail = "R_d = " + fmt(g.distance_correlation) + ", p = " + fmt(g.p_value);
        const std::vector<std::pair<std::string, double>> expected{{"de", 0.721}, {"pt", 0.700}, {"cs", 0.600}, {"eu", -0.510}};
        for (const auto& [id, r] : expected) {
            const double got = per_language_correlation(matrix, registry, id).pearson_r;
            ok = ok && std::abs(got - r) <= 0.05;
            detail += ", " + id + " r = " + fmt(got);
        }
        report.record(3, "geo-linguistic correlation", ok, detail);
    }

    const std::vector<std::string> four{"de", "is", "pt", "cs"};
    std::vector<Corpus> selected;
    for (const auto& id : four)
        if (const Corpus* c = find(corpora, id)) selected.push_back(*c);
    const bool have_four = selected.size() == four.size();

    if (have_four) {
        IdentificationOptions opt;
        const auto reports = run_identification_experiment(selected, opt, derive_seed(cfg.seed, "identify"));
        std::map<std::string, std::map<int, double>> acc;
        for (const auto& r : reports) acc[r.language_id][r.order] = r.mean_accuracy;
        bool ok = true;
        std::string detail;
        for (const auto& [id, a] : acc) {
            ok = ok && a.at(1) - a.at(0) >= 0.1 && std::abs(a.at(3) - a.at(2)) <= 0.02;
            detail += id + " A0..A3 = " + fmt(a.at(0), 3) + "/" + fmt(a.at(1), 3) + "/" + fmt(a.at(2), 3) + "/" +
                      fmt(a.at(3), 3) + "; ";
        }
        report.record(4, "identification accuracy pattern across orders", ok, detail);
    } else {
        report.record(4, "identification accuracy pattern across orders", false, "missing one of de/is/pt/cs");
    }

    if (have_four) {
        bool ok = true;
        std::string detail;
        for (const auto& c : selected) {
            const auto res = memory_test(c, 2, 1000, derive_seed(cfg.seed, "memtest/" + c.language_id));
            ok = ok && res.p_value < 0.001;
            detail += c.language_id + " p = " + fmt(res.p_value) + "; ";
        }
        report.record(5, "memory test at m=2 rejects the order-2 null", ok, detail);
    } else {
        report.record(5, "memory test at m=2 rejects the order-2 null", false, "missing one of de/is/pt/cs");
    }

    if (have_four) {
        bool ok = true;
        std::string detail;
        for (const auto& c : selected) {
            const auto g = gain_curve(c, Estimator::nsb);
            const bool shape = g.values.size() >= 3 && g.at(0) > g.at(1) && g.at(1) > g.at(2);
            const double ratio = shape ? g.at(2) / g.at(1) : std::nan("");
            ok = ok && shape && ratio >= 0.35 && ratio <= 0.65;
            detail += c.language_id + " G2/G1 = " + fmt(ratio, 3) + "; ";
        }
        report.record(6, "gain curve shape", ok, detail);
    } else {
        report.record(6, "gain curve shape", false, "missing one of de/is/pt/cs");
    }
    return report.exit_code();
}
