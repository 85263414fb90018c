#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qmedian/approx_median.hpp"
#include "qmedian/metric_space.hpp"
#include "qmedian/params.hpp"
#include "qmedian/query_ledger.hpp"

namespace qmedian {

struct OracleReport {
    std::uint64_t exact_index = 0;
    double exact_cost = 0.0;
    std::vector<double> cost; // per-candidate distance sums
};

/// Ground truth by exhaustive O(n^2) scan; smallest index wins ties.
inline OracleReport exact_median(const MetricSpace& metric) {
    const std::size_t n = metric.size();
    OracleReport r;
    r.cost.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += metric.distance(i, j);
        r.cost[i] = total;
        if (i == 0 || total < r.exact_cost) {
            r.exact_index = i;
            r.exact_cost = total;
        }
    }
    return r;
}

namespace detail {

// Literal (m+1)-fold digit sum from the f/g definitions. with_cap selects f
// (tuples capped at n-sigma-1) over g. Distances go through a throwaway
// ledger so production caches stay untouched.
inline double fg_direct(const MetricSpace& metric, const Params& p, std::uint64_t i, unsigned m,
                        bool with_cap) {
    if (m >= p.h) throw std::invalid_argument("fg_direct: m must lie in [0, h-1]");
    if (i >= p.q()) throw std::out_of_range("fg_direct: i out of range");
    QueryLedger scratch(metric, /*record_transcript=*/false);

    std::uint64_t cap = 0; // sum_{r<=m} s'_r t^r
    {
        std::uint64_t tp = 1;
        for (unsigned r = 0; r <= m; ++r) {
            cap += p.sprime_digit(r) * tp;
            tp *= p.t;
        }
    }

    std::vector<std::uint32_t> tuple(m + 1, 0); // tuple[idx] = s_{m-idx}, most significant first
    double total = 0.0;
    while (true) {
        std::uint64_t value = 0;
        for (unsigned idx = 0; idx <= m; ++idx) value = value * p.t + tuple[idx];
        if (!with_cap || value <= cap) {
            std::uint64_t x = i % p.q();
            double walk = 0.0;
            for (unsigned k = 0; k <= m; ++k) {
                const std::uint64_t next = (x * p.t + tuple[k]) % p.q();
                walk += scratch.query(static_cast<std::size_t>(x), static_cast<std::size_t>(next));
                x = next;
            }
            total += walk;
        }
        unsigned idx = m + 1;
        while (idx > 0) {
            if (++tuple[idx - 1] < p.t) break;
            tuple[idx - 1] = 0;
            --idx;
        }
        if (idx == 0) break;
    }
    return total;
}

} // namespace detail

/// f(i,m) straight from its defining sum; test-scale only (t^{m+1} tuples).
inline double f_direct(const MetricSpace& metric, const Params& p, std::uint64_t i, unsigned m) {
    return detail::fg_direct(metric, p, i, m, /*with_cap=*/true);
}

/// g(i,m) straight from its defining sum.
inline double g_direct(const MetricSpace& metric, const Params& p, std::uint64_t i, unsigned m) {
    return detail::fg_direct(metric, p, i, m, /*with_cap=*/false);
}

struct TildeReport {
    std::uint64_t output = 0;
    std::uint64_t count_distinct = 0;
    unsigned h = 0;
    std::uint64_t t = 0;
    std::uint64_t n = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> transcript; // when recorded
};

/// Prior-work baseline used for query accounting: chained hops that add the
/// digits of j in place (no shift to i*t^h, no sigma), working mod n. Hop k
/// moves from i + (j truncated below t^{h-k}) to i + (j truncated below
/// t^{h-k-1}), so its queried pairs are exactly {(x, x + s*t^k mod n)}.
/// Naive O(n^2 h) evaluation; desk scale only.
inline TildeReport tilde_median_naive(const MetricSpace& metric, unsigned h,
                                      bool record_transcript = false) {
    if (h < 2) throw std::invalid_argument("tilde_median_naive: need h >= 2");
    const std::uint64_t n = metric.size();
    if (n < 2) throw std::invalid_argument("tilde_median_naive: need n >= 2");

    TildeReport rep;
    rep.h = h;
    rep.n = n;
    rep.t = bertrand_prime(n, h);

    std::vector<std::uint64_t> t_pow(h + 1);
    t_pow[0] = 1;
    for (unsigned k = 1; k <= h; ++k) {
        if (t_pow[k - 1] > (~0ULL) / rep.t)
            throw std::invalid_argument("tilde_median_naive: t^h exceeds 64 bits");
        t_pow[k] = t_pow[k - 1] * rep.t;
    }

    QueryLedger ledger(metric, record_transcript);
    double best = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::uint64_t j = 0; j < n; ++j) {
            std::uint64_t x = i; // x_k = i + j - (j mod t^{h-k}), reduced mod n
            for (unsigned k = 0; k < h; ++k) {
                const std::uint64_t next = (i + j - j % t_pow[h - k - 1]) % n;
                total += ledger.query(static_cast<std::size_t>(x), static_cast<std::size_t>(next));
                x = next;
            }
        }
        if (i == 0 || total < best) {
            best = total;
            rep.output = i;
        }
    }
    rep.count_distinct = ledger.count_distinct();
    if (record_transcript) rep.transcript = ledger.transcript();
    return rep;
}

} // namespace qmedian
