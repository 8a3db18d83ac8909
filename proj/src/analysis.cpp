#include "posdist/analysis.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "posdist/error.hpp"
#include "posdist/io.hpp"
#include "posdist/parallel.hpp"

namespace posdist {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string newick_label(const std::string& label) {
    if (label.find_first_of(" ()[]':;,\t") == std::string::npos && !label.empty()) return label;
    std::string out = "'";
    for (const char c : label) {
        if (c == '\'') out += '\'';
        out += c;
    }
    return out + "'";
}

void check_pam_k(int k, std::size_t n) {
    if (k < 2 || static_cast<std::size_t>(k) >= n) {
        throw KOutOfRange("k = " + std::to_string(k) + " must satisfy 2 <= k < " + std::to_string(n));
    }
}

}  // namespace

Dendrogram complete_linkage(const DistanceMatrix& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw InsufficientData("linkage needs at least 2 points");
    const std::size_t total = 2 * n - 1;
    std::vector<double> d(total * total, kInf);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * total + j] = matrix(i, j);

    Dendrogram tree;
    tree.labels = matrix.labels();
    std::vector<std::size_t> active(n);
    std::iota(active.begin(), active.end(), 0);
    std::vector<std::size_t> size(total, 1);
    std::vector<std::pair<std::size_t, std::size_t>> children(total, {0, 0});

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = kInf;
        std::size_t bi = 0, bj = 0;
        for (std::size_t x = 0; x < active.size(); ++x) {
            for (std::size_t y = x + 1; y < active.size(); ++y) {
                const double v = d[active[x] * total + active[y]];
                if (v < best) {
                    best = v;
                    bi = x;
                    bj = y;
                }
            }
        }
        const std::size_t a = active[bi], b = active[bj];
        const std::size_t id = n + step;
        for (const std::size_t c : active) {
            if (c == a || c == b) continue;
            const double v = std::max(d[a * total + c], d[b * total + c]);
            d[id * total + c] = v;
            d[c * total + id] = v;
        }
        size[id] = size[a] + size[b];
        children[id] = {a, b};
        tree.merges.push_back({a, b, best, id, size[id]});
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
        active.push_back(id);  // ids only grow, so active stays sorted
    }

    std::function<void(std::size_t)> walk = [&](std::size_t c) {
        if (c < n) {
            tree.leaf_order.push_back(c);
            return;
        }
        walk(children[c].first);
        walk(children[c].second);
    };
    walk(total - 1);
    return tree;
}

std::string to_newick(const Dendrogram& tree) {
    const std::size_t n = tree.labels.size();
    if (n == 0) return ";";
    if (n == 1) return newick_label(tree.labels[0]) + ";";
    std::vector<double> height(2 * n - 1, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> children(2 * n - 1);
    for (const Merge& m : tree.merges) {
        height[m.id] = m.height;
        children[m.id] = {m.a, m.b};
    }
    std::function<std::string(std::size_t)> render = [&](std::size_t c) -> std::string {
        if (c < n) return newick_label(tree.labels[c]);
        const auto [a, b] = children[c];
        return "(" + render(a) + ":" + io::format_double(height[c] - height[a]) + "," + render(b) + ":" +
               io::format_double(height[c] - height[b]) + ")";
    };
    return render(2 * n - 2) + ";";
}

double medoid_cost(const DistanceMatrix& matrix, std::span<const std::size_t> medoids) {
    double cost = 0.0;
    for (std::size_t j = 0; j < matrix.size(); ++j) {
        double best = kInf;
        for (const std::size_t m : medoids) best = std::min(best, matrix(j, m));
        cost += best;
    }
    return cost;
}

std::vector<int> assign_to_medoids(const DistanceMatrix& matrix, std::span<const std::size_t> medoids) {
    std::vector<std::size_t> sorted(medoids.begin(), medoids.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> out(matrix.size(), 0);
    for (std::size_t j = 0; j < matrix.size(); ++j) {
        double best = kInf;
        for (std::size_t c = 0; c < sorted.size(); ++c) {
            if (sorted[c] == j) {
                out[j] = static_cast<int>(c);
                break;
            }
            if (matrix(j, sorted[c]) < best) {
                best = matrix(j, sorted[c]);
                out[j] = static_cast<int>(c);
            }
        }
    }
    return out;
}

ClusterAssignment pam(const DistanceMatrix& matrix, int k) {
    const std::size_t n = matrix.size();
    check_pam_k(k, n);
    const auto uk = static_cast<std::size_t>(k);
    std::vector<char> is_medoid(n, 0);
    std::vector<std::size_t> medoids;

    // BUILD
    std::vector<double> nearest(n, kInf);
    {
        double best = kInf;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += matrix(i, j);
            if (s < best) {
                best = s;
                arg = i;
            }
        }
        medoids.push_back(arg);
        is_medoid[arg] = 1;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = matrix(j, arg);
    }
    while (medoids.size() < uk) {
        double best_gain = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_medoid[i]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) gain += std::max(nearest[j] - matrix(j, i), 0.0);
            if (gain > best_gain) {
                best_gain = gain;
                arg = i;
            }
        }
        medoids.push_back(arg);
        is_medoid[arg] = 1;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], matrix(j, arg));
    }
    std::sort(medoids.begin(), medoids.end());

    // SWAP
    double cost = medoid_cost(matrix, medoids);
    std::vector<double> d1(n), d2(n);
    std::vector<std::size_t> owner(n);
    for (;;) {
        for (std::size_t j = 0; j < n; ++j) {
            d1[j] = d2[j] = kInf;
            for (std::size_t c = 0; c < uk; ++c) {
                const double v = matrix(j, medoids[c]);
                if (v < d1[j]) {
                    d2[j] = d1[j];
                    d1[j] = v;
                    owner[j] = c;
                } else if (v < d2[j]) {
                    d2[j] = v;
                }
            }
        }
        double best_cost = cost;
        std::size_t best_c = 0, best_h = 0;
        bool found = false;
        for (std::size_t c = 0; c < uk; ++c) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                double total = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dh = matrix(j, h);
                    total += owner[j] == c ? std::min(dh, d2[j]) : std::min(d1[j], dh);
                }
                if (total < best_cost) {
                    best_cost = total;
                    best_c = c;
                    best_h = h;
                    found = true;
                }
            }
        }
        if (!found) break;
        is_medoid[medoids[best_c]] = 0;
        is_medoid[best_h] = 1;
        medoids[best_c] = best_h;
        std::sort(medoids.begin(), medoids.end());
        cost = medoid_cost(matrix, medoids);
    }

    ClusterAssignment out;
    out.k = k;
    out.medoids = medoids;
    out.assignment = assign_to_medoids(matrix, medoids);
    out.cost = cost;
    out.silhouette = mean_silhouette(matrix, out.assignment);
    return out;
}

std::vector<double> silhouette_values(const DistanceMatrix& matrix, std::span<const int> assignment) {
    const std::size_t n = matrix.size();
    if (assignment.size() != n) throw std::invalid_argument("assignment size differs from the matrix size");
    const int k = n == 0 ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<std::size_t> cluster_size(static_cast<std::size_t>(k), 0);
    for (const int c : assignment) {
        if (c < 0) throw std::invalid_argument("negative cluster id");
        ++cluster_size[static_cast<std::size_t>(c)];
    }
    std::vector<double> s(n, 0.0);
    std::vector<double> sums(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(assignment[i]);
        if (cluster_size[own] <= 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) sums[static_cast<std::size_t>(assignment[j])] += matrix(i, j);
        const double a = sums[own] / static_cast<double>(cluster_size[own] - 1);
        double b = kInf;
        for (std::size_t c = 0; c < sums.size(); ++c) {
            if (c == own || cluster_size[c] == 0) continue;
            b = std::min(b, sums[c] / static_cast<double>(cluster_size[c]));
        }
        if (b == kInf) continue;
        const double denom = std::max(a, b);
        s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return s;
}

double mean_silhouette(const DistanceMatrix& matrix, std::span<const int> assignment) {
    const auto s = silhouette_values(matrix, assignment);
    if (s.empty()) return 0.0;
    return std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
}

const ClusterAssignment& SilhouetteSweep::best() const {
    for (const auto& c : clusterings)
        if (c.k == best_k) return c;
    throw std::logic_error("sweep has no clustering for its best k");
}

SilhouetteSweep silhouette_sweep(const DistanceMatrix& matrix, int k_min, int k_max, unsigned threads) {
    const std::size_t n = matrix.size();
    if (k_min < 2 || k_max < k_min || static_cast<std::size_t>(k_max) >= n) {
        throw KOutOfRange("k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                          "] must satisfy 2 <= k_min <= k_max < " + std::to_string(n));
    }
    SilhouetteSweep sweep;
    sweep.clusterings.resize(static_cast<std::size_t>(k_max - k_min + 1));
    parallel_for(sweep.clusterings.size(), threads,
                 [&](std::size_t i) { sweep.clusterings[i] = pam(matrix, k_min + static_cast<int>(i)); });
    double best = -kInf;
    for (const auto& c : sweep.clusterings) {
        sweep.scores.emplace_back(c.k, c.silhouette);
        if (c.silhouette > best) {
            best = c.silhouette;
            sweep.best_k = c.k;
        }
    }
    return sweep;
}

double SpanningTree::total_weight() const {
    double w = 0.0;
    for (const auto& e : edges) w += e.weight;
    return w;
}

SpanningTree minimum_spanning_tree(const DistanceMatrix& matrix) {
    const std::size_t n = matrix.size();
    if (n < 2) throw InsufficientData("spanning tree needs at least 2 points");
    std::vector<Edge> edges;
    edges.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j, matrix(i, j)});
    std::stable_sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.weight < y.weight; });

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    SpanningTree tree;
    for (const Edge& e : edges) {
        const std::size_t ra = find(e.a), rb = find(e.b);
        if (ra == rb) continue;
        parent[std::max(ra, rb)] = std::min(ra, rb);
        tree.edges.push_back(e);
        if (tree.edges.size() + 1 == n) break;
    }
    return tree;
}

}  // namespace posdist
