#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qmedian {

/// Finite metric space over point indices 0..n-1.
///
/// Distances are backed either by a full symmetric n-by-n table or by a list
/// of Euclidean points evaluated on demand. Instances are immutable after
/// construction and safe to share across threads.
class MetricSpace {
public:
    static MetricSpace from_matrix(std::size_t n, std::vector<double> full_row_major) {
        if (n == 0) throw std::invalid_argument("MetricSpace: n must be >= 1");
        if (full_row_major.size() != n * n)
            throw std::invalid_argument("MetricSpace: matrix size != n*n");
        MetricSpace m;
        m.n_ = n;
        m.matrix_ = std::move(full_row_major);
        return m;
    }

    /// Build from the strict lower triangle, row-major: d(i,j) for i>j.
    /// The resulting table is symmetric with a zero diagonal by construction.
    static MetricSpace from_lower_triangle(std::size_t n, const std::vector<double>& tri) {
        if (n == 0) throw std::invalid_argument("MetricSpace: n must be >= 1");
        if (tri.size() != n * (n - 1) / 2)
            throw std::invalid_argument("MetricSpace: triangle size != n(n-1)/2");
        std::vector<double> full(n * n, 0.0);
        std::size_t k = 0;
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t j = 0; j < i; ++j, ++k) {
                full[i * n + j] = tri[k];
                full[j * n + i] = tri[k];
            }
        }
        return from_matrix(n, std::move(full));
    }

    static MetricSpace from_points(std::size_t dim, std::vector<std::vector<double>> points) {
        if (points.empty()) throw std::invalid_argument("MetricSpace: need at least one point");
        if (dim == 0) throw std::invalid_argument("MetricSpace: dim must be >= 1");
        for (const auto& p : points)
            if (p.size() != dim) throw std::invalid_argument("MetricSpace: point has wrong dimension");
        MetricSpace m;
        m.n_ = points.size();
        m.dim_ = dim;
        m.points_ = std::move(points);
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    bool euclidean() const noexcept { return !points_.empty(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<std::vector<double>>& points() const noexcept { return points_; }

    /// Raw distance lookup. Bounds-checked; query accounting lives in
    /// QueryLedger. Matrix storage returns the stored value even on the
    /// diagonal so the validator can see a dirty table.
    double distance(std::size_t x, std::size_t y) const {
        if (x >= n_ || y >= n_) throw std::out_of_range("MetricSpace::distance: index out of range");
        if (!matrix_.empty()) return matrix_[x * n_ + y];
        double sum = 0.0;
        const auto& px = points_[x];
        const auto& py = points_[y];
        for (std::size_t k = 0; k < dim_; ++k) {
            const double diff = px[k] - py[k];
            sum += diff * diff;
        }
        return std::sqrt(sum);
    }

    /// Strict lower triangle, row-major; the on-disk matrix payload.
    std::vector<double> lower_triangle() const {
        std::vector<double> tri;
        tri.reserve(n_ * (n_ - 1) / 2);
        for (std::size_t i = 1; i < n_; ++i)
            for (std::size_t j = 0; j < i; ++j) tri.push_back(distance(i, j));
        return tri;
    }

private:
    MetricSpace() = default;

    std::size_t n_ = 0;
    std::vector<double> matrix_;                 // full n*n when matrix-backed
    std::size_t dim_ = 0;                        // point storage otherwise
    std::vector<std::vector<double>> points_;
};

} // namespace qmedian
