#pragma once

#include <span>
#include <string>
#include <string_view>

#include "posdist/analysis.hpp"
#include "posdist/distance.hpp"
#include "posdist/geo.hpp"
#include "posdist/markov_id.hpp"
#include "posdist/memory.hpp"
#include "posdist/ngram.hpp"
#include "posdist/registry.hpp"

namespace posdist {

/// {"language_id", "r", "L", "total", "counts": [[index, count], ...]}
std::string counts_to_json(const BlockCounts& counts, std::string_view language_id);
BlockCounts counts_from_json(std::string_view text, std::string* language_id = nullptr);

/// Header row and first column hold the labels; values use shortest round-trip formatting.
std::string distance_matrix_to_csv(const DistanceMatrix& matrix);
DistanceMatrix distance_matrix_from_csv(std::string_view text, Metric metric, int r);
/// {"metric", "r", "labels", "values": [[...], ...]}
std::string distance_matrix_to_json(const DistanceMatrix& matrix);
DistanceMatrix distance_matrix_from_json(std::string_view text);

/// u,gain,estimator
std::string gain_curve_to_csv(const GainCurve& curve);
std::string memory_test_to_json(const MemoryTestResult& result, std::string_view language_id);
/// language,order,mean,std
std::string accuracy_to_csv(std::span<const AccuracyReport> reports);

/// position,label in dendrogram leaf order.
std::string leaf_order_to_csv(const Dendrogram& tree);
/// label,cluster,medoid
std::string assignment_to_csv(const DistanceMatrix& matrix, const ClusterAssignment& clusters);
/// k,silhouette
std::string silhouette_to_csv(const SilhouetteSweep& sweep);
/// lang_a,lang_b,weight
std::string spanning_tree_to_csv(const DistanceMatrix& matrix, const SpanningTree& tree);
/// Undirected graph; nodes carry cluster, family, group and morph_type when known.
std::string spanning_tree_to_dot(const DistanceMatrix& matrix, const SpanningTree& tree,
                                 const ClusterAssignment* clusters, const Registry* registry);

/// lang_a,lang_b,d_ling,d_geo_km
std::string geo_pairs_to_csv(std::span<const GeoPair> pairs);
std::string geo_summary_to_json(const GeoCorrelation& overall, std::span<const LanguageCorrelation> focus);

}  // namespace posdist
