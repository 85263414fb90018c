#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qmedian/metric_space.hpp"

namespace qmedian {

enum class Axiom { zero_diagonal, positivity, symmetry, triangle };

struct Violation {
    Axiom axiom;
    std::size_t x;
    std::size_t y;
    std::size_t z; // triangle only; otherwise equal to y

    std::string describe() const {
        std::ostringstream out;
        switch (axiom) {
            case Axiom::zero_diagonal: out << "d(" << x << "," << x << ") != 0"; break;
            case Axiom::positivity: out << "d(" << x << "," << y << ") <= 0 for distinct points"; break;
            case Axiom::symmetry: out << "d(" << x << "," << y << ") != d(" << y << "," << x << ")"; break;
            case Axiom::triangle:
                out << "d(" << x << "," << y << ") + d(" << y << "," << z << ") < d(" << x << "," << z << ")";
                break;
        }
        return out.str();
    }
};

/// Relative slack for the triangle and symmetry checks; absorbs Euclidean
/// round-off while catching real violations.
inline constexpr double kMetricTolerance = 1e-9;

namespace detail {

// Collection stops at the cap: validity only needs emptiness to be exact.
inline constexpr std::size_t kMaxViolations = 64;

inline bool triangle_ok(double dxy, double dyz, double dxz) {
    const double slack = kMetricTolerance * std::max(dxy + dyz, dxz);
    return dxy + dyz >= dxz - slack;
}

} // namespace detail

/// Checks the four metric axioms. Exhaustive over pairs and triples at desk
/// scale (triples for n <= 512, pairs for n <= 2048); seeded sampling with at
/// least 1e5 draws above that.
inline std::vector<Violation> validate_metric(const MetricSpace& m) {
    std::vector<Violation> out;
    const std::size_t n = m.size();
    auto full = [&] { return out.size() >= detail::kMaxViolations; };

    for (std::size_t x = 0; x < n && !full(); ++x)
        if (m.distance(x, x) != 0.0) out.push_back({Axiom::zero_diagonal, x, x, x});

    auto check_pair = [&](std::size_t x, std::size_t y) {
        const double dxy = m.distance(x, y);
        const double dyx = m.distance(y, x);
        if (std::abs(dxy - dyx) > kMetricTolerance * std::max(std::abs(dxy), std::abs(dyx)))
            out.push_back({Axiom::symmetry, x, y, y});
        if (!(dxy > 0.0)) out.push_back({Axiom::positivity, x, y, y});
    };
    auto check_triple = [&](std::size_t x, std::size_t y, std::size_t z) {
        const double dxy = m.distance(x, y);
        const double dyz = m.distance(y, z);
        const double dxz = m.distance(x, z);
        if (!detail::triangle_ok(dxy, dyz, dxz)) out.push_back({Axiom::triangle, x, y, z});
        if (!detail::triangle_ok(dxy, dxz, dyz)) out.push_back({Axiom::triangle, y, x, z});
        if (!detail::triangle_ok(dxz, dyz, dxy)) out.push_back({Axiom::triangle, x, z, y});
    };

    if (n <= 2048) {
        for (std::size_t x = 0; x < n && !full(); ++x)
            for (std::size_t y = x + 1; y < n && !full(); ++y) check_pair(x, y);
    } else {
        std::mt19937_64 rng(0x5eed0001ULL);
        for (std::size_t k = 0; k < 100000 && !full(); ++k) {
            const std::size_t x = rng() % n;
            const std::size_t y = rng() % n;
            if (x != y) check_pair(x, y);
        }
    }

    if (n <= 512) {
        for (std::size_t x = 0; x < n && !full(); ++x)
            for (std::size_t y = x + 1; y < n && !full(); ++y)
                for (std::size_t z = y + 1; z < n && !full(); ++z) check_triple(x, y, z);
    } else {
        std::mt19937_64 rng(0x5eed0002ULL);
        for (std::size_t k = 0; k < 100000 && !full(); ++k) {
            const std::size_t x = rng() % n;
            const std::size_t y = rng() % n;
            const std::size_t z = rng() % n;
            if (x != y && y != z && x != z) check_triple(x, y, z);
        }
    }
    return out;
}

} // namespace qmedian
