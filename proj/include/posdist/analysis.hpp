#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posdist/distance.hpp"

namespace posdist {

/// One agglomeration step. Leaves are clusters 0..n-1; step s creates cluster n+s from a < b.
struct Merge {
    std::size_t a = 0;
    std::size_t b = 0;
    double height = 0.0;
    std::size_t id = 0;
    std::size_t size = 0;  // leaves under the new cluster
};

struct Dendrogram {
    std::vector<std::string> labels;
    std::vector<Merge> merges;
    /// Leaves in left-to-right order; the lower cluster id of each merge goes left.
    std::vector<std::size_t> leaf_order;
};

/// Complete-linkage agglomeration. Equal distances merge the lowest (a, b) cluster-id pair first.
Dendrogram complete_linkage(const DistanceMatrix& matrix);

/// Newick with branch lengths equal to height differences.
std::string to_newick(const Dendrogram& tree);

struct ClusterAssignment {
    int k = 0;
    std::vector<std::size_t> medoids;  // sorted; cluster c has medoid medoids[c]
    std::vector<int> assignment;       // per label
    double cost = 0.0;                 // sum of distances to the assigned medoid
    double silhouette = 0.0;
};

/// Sum over points of the distance to the nearest medoid.
double medoid_cost(const DistanceMatrix& matrix, std::span<const std::size_t> medoids);

/// Nearest-medoid assignment; each medoid keeps its own cluster and ties go to the lower medoid.
std::vector<int> assign_to_medoids(const DistanceMatrix& matrix, std::span<const std::size_t> medoids);

/// PAM k-medoids: greedy BUILD, then the best single swap while it lowers the cost.
/// Deterministic; ties go to the lowest index. Throws KOutOfRange unless 2 <= k < n.
ClusterAssignment pam(const DistanceMatrix& matrix, int k);

/// Per-point silhouette (b - a) / max(a, b); points in singleton clusters score 0.
std::vector<double> silhouette_values(const DistanceMatrix& matrix, std::span<const int> assignment);
double mean_silhouette(const DistanceMatrix& matrix, std::span<const int> assignment);

struct SilhouetteSweep {
    int best_k = 0;
    std::vector<std::pair<int, double>> scores;  // (k, mean silhouette) for k_min..k_max
    std::vector<ClusterAssignment> clusterings;  // same order as scores
    const ClusterAssignment& best() const;
};

/// PAM for every k in [k_min, k_max]; best_k maximizes the mean silhouette (lowest k on ties).
/// Throws KOutOfRange unless 2 <= k_min <= k_max < n.
SilhouetteSweep silhouette_sweep(const DistanceMatrix& matrix, int k_min, int k_max, unsigned threads = 0);

struct Edge {
    std::size_t a = 0;  // a < b
    std::size_t b = 0;
    double weight = 0.0;
};

struct SpanningTree {
    std::vector<Edge> edges;
    double total_weight() const;
};

/// Kruskal over the complete graph; equal weights are taken in (a, b) order.
SpanningTree minimum_spanning_tree(const DistanceMatrix& matrix);

}  // namespace posdist
