#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posdist/distance.hpp"
#include "posdist/registry.hpp"

namespace posdist {

inline constexpr double kEarthRadiusKm = 6371.0088;

/// Haversine great-circle distance between two points given in degrees.
double haversine_km(double lat1, double lon1, double lat2, double lon2);
double geodesic_km(const LanguageRecord& a, const LanguageRecord& b);

/// Pearson correlation; NaN when either input has zero variance or n < 2.
double pearson(std::span<const double> x, std::span<const double> y);

/// Sample distance correlation (square root form, no bias correction), in [0, 1].
/// 0 when either input is constant.
double distance_correlation(std::span<const double> x, std::span<const double> y);

struct GeoPair {
    std::string lang_a;
    std::string lang_b;
    double d_ling = 0.0;
    double d_geo_km = 0.0;
};

struct GeoOptions {
    std::set<std::string> exclude{"af"};
    int permutations = 1000;
    /// Use log10 km instead of km as the geodesic variable of the distance correlation.
    bool log_geo_for_dcor = false;
    unsigned threads = 0;
};

struct GeoCorrelation {
    std::vector<std::string> languages;
    std::vector<GeoPair> pairs;  // i < j in matrix order
    double pearson_r = 0.0;      // against log10 km
    double distance_correlation = 0.0;
    double p_value = 1.0;        // (#{permuted >= observed} + 1) / (permutations + 1)
    int permutations = 0;
    bool log_geo_for_dcor = false;
};

/// Correlates all pairwise linguistic distances of the non-excluded labels with their geodesic
/// distances. The permutation test reassigns locations among languages.
/// Throws MissingCoordinates when a kept label is absent from the registry.
GeoCorrelation correlate(const DistanceMatrix& matrix, const Registry& registry, const GeoOptions& options,
                         std::uint64_t seed);

struct LanguageCorrelation {
    std::string language_id;
    std::vector<GeoPair> pairs;  // lang_a is language_id
    double pearson_r = 0.0;      // NaN when undefined
};

/// Distances from one language to every other kept language, with Pearson r on log10 km.
LanguageCorrelation per_language_correlation(const DistanceMatrix& matrix, const Registry& registry,
                                             std::string_view language_id,
                                             const std::set<std::string>& exclude = {"af"});

}  // namespace posdist
