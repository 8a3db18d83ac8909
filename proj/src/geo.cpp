#include "posdist/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "posdist/error.hpp"
#include "posdist/parallel.hpp"
#include "posdist/random.hpp"

namespace posdist {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

const LanguageRecord& lookup(const Registry& registry, const std::string& id) {
    const LanguageRecord* rec = registry.find(id);
    if (!rec) throw MissingCoordinates("no coordinates for '" + id + "'");
    return *rec;
}

// Doubly centred |x_i - x_j| matrix, row-major n*n.
std::vector<double> centred_distances(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> a(n * n);
    std::vector<double> row(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = std::abs(x[i] - x[j]);
            a[i * n + j] = v;
            row[i] += v;
        }
        grand += row[i];
        row[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] += grand - row[i] - row[j];
    return a;
}

double mean_product(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s / static_cast<double>(a.size());
}

// sum_ij A_ij |y_i - y_j| / n^2; equals mean(A o B) because A is doubly centred.
double cross_moment(const std::vector<double>& A, std::span<const double> y) {
    const std::size_t n = y.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &A[i * n];
        const double yi = y[i];
        double part = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) part += row[j] * std::abs(yi - y[j]);
        s += part;
    }
    return 2.0 * s / (static_cast<double>(n) * static_cast<double>(n));
}

double dcor_from(double dcov2, double dvar_x2, double dvar_y2) {
    const double denom = std::sqrt(dvar_x2 * dvar_y2);
    if (!(denom > 0.0)) return 0.0;
    return std::sqrt(std::clamp(dcov2 / denom, 0.0, 1.0));
}

std::vector<double> log10_all(std::span<const double> v) {
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::log10(x); });
    return out;
}

}  // namespace

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
    const double p1 = radians(lat1), p2 = radians(lat2);
    const double dp = p2 - p1, dl = radians(lon2 - lon1);
    const double h = std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
}

double geodesic_km(const LanguageRecord& a, const LanguageRecord& b) {
    return haversine_km(a.latitude, a.longitude, b.latitude, b.longitude);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson inputs differ in length");
    const std::size_t n = x.size();
    if (n < 2) return kNaN;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return kNaN;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double distance_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("distance correlation inputs differ in length");
    if (x.size() < 2) return 0.0;
    const auto A = centred_distances(x);
    const auto B = centred_distances(y);
    return dcor_from(mean_product(A, B), mean_product(A, A), mean_product(B, B));
}

GeoCorrelation correlate(const DistanceMatrix& matrix, const Registry& registry, const GeoOptions& options,
                         std::uint64_t seed) {
    if (options.permutations < 0) throw std::invalid_argument("permutations must be >= 0");
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < matrix.size(); ++i)
        if (!options.exclude.contains(matrix.labels()[i])) keep.push_back(i);
    if (keep.size() < 3) throw InsufficientData("geo correlation needs at least 3 languages");

    GeoCorrelation out;
    out.permutations = options.permutations;
    out.log_geo_for_dcor = options.log_geo_for_dcor;
    const std::size_t m = keep.size();
    std::vector<const LanguageRecord*> recs;
    for (const std::size_t i : keep) {
        out.languages.push_back(matrix.labels()[i]);
        recs.push_back(&lookup(registry, matrix.labels()[i]));
    }
    std::vector<double> geo(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) geo[i * m + j] = geo[j * m + i] = geodesic_km(*recs[i], *recs[j]);

    std::vector<double> x, y;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            out.pairs.push_back({out.languages[i], out.languages[j], matrix(keep[i], keep[j]), geo[i * m + j]});
            x.push_back(out.pairs.back().d_ling);
            y.push_back(out.pairs.back().d_geo_km);
        }
    }
    out.pearson_r = pearson(x, log10_all(y));

    auto transform = [&](double km) { return options.log_geo_for_dcor ? std::log10(km) : km; };
    std::vector<double> yt(y.size());
    std::transform(y.begin(), y.end(), yt.begin(), transform);
    const auto A = centred_distances(x);
    const auto B = centred_distances(yt);
    const double dvar_x2 = mean_product(A, A);
    const double dvar_y2 = mean_product(B, B);
    out.distance_correlation = dcor_from(cross_moment(A, yt), dvar_x2, dvar_y2);

    std::vector<char> exceed(static_cast<std::size_t>(options.permutations), 0);
    parallel_for(exceed.size(), options.threads, [&](std::size_t p) {
        std::vector<std::size_t> perm(m);
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(derive_seed(seed, "geo/permutation", p));
        rng.shuffle(std::span<std::size_t>(perm));
        std::vector<double> yp;
        yp.reserve(yt.size());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) yp.push_back(transform(geo[perm[i] * m + perm[j]]));
        exceed[p] = dcor_from(cross_moment(A, yp), dvar_x2, dvar_y2) >= out.distance_correlation;
    });
    const auto count = static_cast<double>(std::count(exceed.begin(), exceed.end(), 1));
    out.p_value = (count + 1.0) / (static_cast<double>(options.permutations) + 1.0);
    return out;
}

LanguageCorrelation per_language_correlation(const DistanceMatrix& matrix, const Registry& registry,
                                             std::string_view language_id, const std::set<std::string>& exclude) {
    const std::size_t self = matrix.index_of(language_id);
    const LanguageRecord& home = lookup(registry, std::string(language_id));
    LanguageCorrelation out;
    out.language_id = std::string(language_id);
    std::vector<double> x, y;
    for (std::size_t j = 0; j < matrix.size(); ++j) {
        const std::string& other = matrix.labels()[j];
        if (j == self || exclude.contains(other)) continue;
        const double km = geodesic_km(home, lookup(registry, other));
        out.pairs.push_back({out.language_id, other, matrix(self, j), km});
        x.push_back(matrix(self, j));
        y.push_back(std::log10(km));
    }
    out.pearson_r = pearson(x, y);
    return out;
}

}  // namespace posdist
