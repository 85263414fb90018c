#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmedian/metric_space.hpp"

namespace qmedian {

enum class InstanceKind { matrix, euclidean, graph, perturbed_uniform };

inline const char* to_string(InstanceKind k) {
    switch (k) {
        case InstanceKind::matrix: return "matrix";
        case InstanceKind::euclidean: return "euclidean";
        case InstanceKind::graph: return "graph";
        case InstanceKind::perturbed_uniform: return "perturbed-uniform";
    }
    return "?";
}

inline InstanceKind instance_kind_from_string(const std::string& s) {
    if (s == "matrix") return InstanceKind::matrix;
    if (s == "euclidean") return InstanceKind::euclidean;
    if (s == "graph") return InstanceKind::graph;
    if (s == "perturbed-uniform") return InstanceKind::perturbed_uniform;
    throw std::invalid_argument("unknown instance kind: " + s);
}

/// Deterministic recipe for a random instance: same spec, bit-identical space.
struct InstanceSpec {
    InstanceKind kind = InstanceKind::perturbed_uniform;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t dim = 2;        // euclidean
    double density = 0.1;       // graph edge probability
    double amplitude = 0.9;     // perturbed-uniform: d = 1 + u, u in [0, amplitude]
};

namespace detail {

// Fixed mapping to [0,1) so instances do not depend on the standard library's
// distribution internals.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

inline MetricSpace generate_euclidean(const InstanceSpec& spec, std::mt19937_64& rng) {
    std::vector<std::vector<double>> points(spec.n, std::vector<double>(spec.dim));
    for (auto& p : points)
        for (auto& c : p) c = uniform01(rng);
    return MetricSpace::from_points(spec.dim, std::move(points));
}

inline MetricSpace generate_perturbed_uniform(const InstanceSpec& spec, std::mt19937_64& rng) {
    if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0))
        throw std::invalid_argument("generate: perturbation amplitude must lie in [0, 1)");
    const std::size_t n = spec.n;
    std::vector<double> full(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            const double d = 1.0 + spec.amplitude * uniform01(rng);
            full[x * n + y] = d;
            full[y * n + x] = d;
        }
    }
    return MetricSpace::from_matrix(n, std::move(full));
}

inline MetricSpace generate_graph(const InstanceSpec& spec, std::mt19937_64& rng) {
    if (!(spec.density >= 0.0 && spec.density <= 1.0))
        throw std::invalid_argument("generate: graph density must lie in [0, 1]");
    const std::size_t n = spec.n;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n * n, inf);
    for (std::size_t i = 0; i < n; ++i) dist[i * n + i] = 0.0;

    DisjointSet components(n);
    auto add_edge = [&](std::size_t x, std::size_t y, double w) {
        dist[x * n + y] = std::min(dist[x * n + y], w);
        dist[y * n + x] = dist[x * n + y];
        components.unite(x, y);
    };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            const double coin = uniform01(rng);
            const double w = 1.0 + uniform01(rng); // weight drawn even when edge absent: keeps the stream aligned
            if (coin < spec.density) add_edge(x, y, w);
        }

    // Too sparse to connect: bridge component representatives, smallest first.
    std::vector<std::size_t> reps;
    for (std::size_t v = 0; v < n; ++v)
        if (components.find(v) == v) reps.push_back(v);
    for (std::size_t k = 1; k < reps.size(); ++k) add_edge(reps[k - 1], reps[k], 1.0 + uniform01(rng));

    // Floyd-Warshall; the shortest-path closure of a connected weighted graph
    // is a metric.
    for (std::size_t mid = 0; mid < n; ++mid)
        for (std::size_t x = 0; x < n; ++x) {
            const double dxm = dist[x * n + mid];
            if (dxm == inf) continue;
            double* row_x = &dist[x * n];
            const double* row_m = &dist[mid * n];
            for (std::size_t y = 0; y < n; ++y) {
                const double through = dxm + row_m[y];
                if (through < row_x[y]) row_x[y] = through;
            }
        }
    return MetricSpace::from_matrix(n, std::move(dist));
}

} // namespace detail

inline constexpr std::size_t kMaxMatrixBackedN = 8192; // full-table memory cap
inline constexpr std::size_t kMaxGraphN = 2048;        // O(n^3) shortest paths

/// Builds a valid metric space from the spec; a pure function of its fields.
/// graph and perturbed-uniform materialize a full distance table, so they are
/// capped at desk scale. Kind "matrix" is file-only and rejected here.
inline MetricSpace generate(const InstanceSpec& spec) {
    if (spec.n == 0) throw std::invalid_argument("generate: n must be >= 1");
    std::mt19937_64 rng(spec.seed);
    switch (spec.kind) {
        case InstanceKind::euclidean:
            if (spec.dim == 0) throw std::invalid_argument("generate: dim must be >= 1");
            return detail::generate_euclidean(spec, rng);
        case InstanceKind::perturbed_uniform:
            if (spec.n > kMaxMatrixBackedN)
                throw std::invalid_argument("generate: perturbed-uniform capped at n <= 8192");
            return detail::generate_perturbed_uniform(spec, rng);
        case InstanceKind::graph:
            if (spec.n > kMaxGraphN) throw std::invalid_argument("generate: graph capped at n <= 2048");
            return detail::generate_graph(spec, rng);
        case InstanceKind::matrix:
            throw std::invalid_argument("generate: kind 'matrix' is read from instance files, not generated");
    }
    throw std::invalid_argument("generate: unknown kind");
}

} // namespace qmedian
