#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qmedian/metric_space.hpp"
#include "qmedian/params.hpp"
#include "qmedian/query_ledger.hpp"

namespace qmedian {

/// d lifted to all naturals by reducing indices mod n-sigma. Symmetric and
/// triangle-respecting, like d itself.
inline double d_mod(QueryLedger& ledger, std::uint64_t x, std::uint64_t y, const Params& p) {
    const std::uint64_t q = p.q();
    return ledger.query(static_cast<std::size_t>(x % q), static_cast<std::size_t>(y % q));
}

/// The pseudo-distance evaluated from its definition: h chained hops where
/// hop k appends the k-th most significant base-t digit of j,
///   x_0 = i,  x_{k+1} = x_k * t + digit_k,  result = sum_k d_mod(x_k, x_{k+1}).
/// Callers index by (i, j); the value is the pseudo-distance from i to
/// i*t^h + j mod (n-sigma). Test/oracle path only; the production run gets
/// these sums out of the dynamic program.
inline double hat_distance_direct(QueryLedger& ledger, std::uint64_t i, std::uint64_t j,
                                  const Params& p) {
    const std::uint64_t q = p.q();
    if (i >= q || j >= q) throw std::out_of_range("hat_distance_direct: index out of range");
    const auto digits = tary_digits(j, p.t, p.h);
    double sum = 0.0;
    std::uint64_t x = i;
    for (unsigned k = 0; k < p.h; ++k) {
        const std::uint64_t next = (x * p.t + digits[k]) % q;
        sum += ledger.query(static_cast<std::size_t>(x), static_cast<std::size_t>(next));
        x = next;
    }
    return sum;
}

/// Answers to the algorithm's fixed query schedule.
///   hop[i*t + s] = d((i) mod q, (i*t+s) mod q)   for i in [0,q), s in [0,t)
///   last[i]      = d(n-1, i)                     for i in [0,q)
/// Everything the dynamic program and the selector read comes from here, so
/// no distance is ever requested twice.
struct ScheduledDistances {
    std::uint64_t q = 0;
    std::uint64_t t = 0;
    std::vector<double> hop;
    std::vector<double> last;

    double hop_at(std::uint64_t i, std::uint64_t s) const { return hop[i * t + s]; }
};

/// Issues the schedule in its fixed order: for each i, the t hop queries in
/// ascending s, then d(n-1, i). The order depends only on (n, h).
inline ScheduledDistances run_query_schedule(QueryLedger& ledger, const Params& p) {
    ScheduledDistances sd;
    sd.q = p.q();
    sd.t = p.t;
    sd.hop.resize(sd.q * sd.t);
    sd.last.resize(sd.q);
    ledger.reserve(sd.q * (sd.t + 1));
    const std::size_t last_point = static_cast<std::size_t>(p.n - 1);
    for (std::uint64_t i = 0; i < sd.q; ++i) {
        for (std::uint64_t s = 0; s < sd.t; ++s)
            sd.hop[i * sd.t + s] =
                ledger.query(static_cast<std::size_t>(i), static_cast<std::size_t>((i * sd.t + s) % sd.q));
        sd.last[i] = ledger.query(last_point, static_cast<std::size_t>(i));
    }
    return sd;
}

/// The two dynamic-programming tables, q rows by h columns.
/// f[i][m] accumulates pseudo-distance hops over digit tuples capped at
/// n-sigma-1; g[i][m] over all tuples, so f <= g cell-wise.
struct DpTables {
    std::uint64_t q = 0;
    unsigned h = 0;
    std::vector<double> f;
    std::vector<double> g;

    double f_at(std::uint64_t i, unsigned m) const { return f[static_cast<std::size_t>(m) * q + i]; }
    double g_at(std::uint64_t i, unsigned m) const { return g[static_cast<std::size_t>(m) * q + i]; }
};

inline DpTables make_dp_tables(const Params& p) {
    DpTables dp;
    dp.q = p.q();
    dp.h = p.h;
    dp.f.assign(static_cast<std::size_t>(dp.q) * p.h, 0.0);
    dp.g.assign(static_cast<std::size_t>(dp.q) * p.h, 0.0);
    return dp;
}

/// Column m = 0:
///   f[i][0] = sum_{s <= s'_0} hop(i, s)   (inclusive bound)
///   g[i][0] = sum_{s <  t  } hop(i, s)
inline void dp_base(const ScheduledDistances& sd, const Params& p, DpTables& dp) {
    const std::uint32_t s0 = p.sprime_digit(0);
    for (std::uint64_t i = 0; i < dp.q; ++i) {
        double fsum = 0.0, gsum = 0.0;
        for (std::uint64_t s = 0; s < p.t; ++s) {
            const double d = sd.hop_at(i, s);
            if (s <= s0) fsum += d;
            gsum += d;
        }
        dp.f[i] = fsum;
        dp.g[i] = gsum;
    }
}

/// g[i][m] = t^m * sum_s hop(i,s) + sum_s g[(i*t+s) mod q][m-1].
inline void dp_g_step(const ScheduledDistances& sd, const Params& p, DpTables& dp, unsigned m) {
    if (m == 0 || m >= p.h) throw std::invalid_argument("dp_g_step: m must lie in [1, h-1]");
    const std::size_t col = static_cast<std::size_t>(m) * dp.q;
    const std::size_t prev = col - dp.q;
    for (std::uint64_t i = 0; i < dp.q; ++i) {
        double hops = 0.0, carry = 0.0;
        for (std::uint64_t s = 0; s < p.t; ++s) {
            hops += sd.hop_at(i, s);
            carry += dp.g[prev + (i * p.t + s) % dp.q];
        }
        dp.g[col + i] = p.t_pow[m] * hops + carry;
    }
}

/// f[i][m] = (1 + sum_{r<m} s'_r t^r) * hop(i, s'_m)
///         + t^m * sum_{s < s'_m} hop(i, s)
///         + f[(i*t + s'_m) mod q][m-1]
///         + sum_{s < s'_m} g[(i*t+s) mod q][m-1].
inline void dp_f_step(const ScheduledDistances& sd, const Params& p, DpTables& dp, unsigned m) {
    if (m == 0 || m >= p.h) throw std::invalid_argument("dp_f_step: m must lie in [1, h-1]");
    const std::size_t col = static_cast<std::size_t>(m) * dp.q;
    const std::size_t prev = col - dp.q;
    const std::uint32_t sm = p.sprime_digit(m);
    const double head = 1.0 + static_cast<double>(p.sprime_partial[m]);
    for (std::uint64_t i = 0; i < dp.q; ++i) {
        double hops = 0.0, carry = 0.0;
        for (std::uint64_t s = 0; s < sm; ++s) {
            hops += sd.hop_at(i, s);
            carry += dp.g[prev + (i * p.t + s) % dp.q];
        }
        dp.f[col + i] = head * sd.hop_at(i, sm) + p.t_pow[m] * hops +
                        dp.f[prev + (i * p.t + sm) % dp.q] + carry;
    }
}

struct SelectionResult {
    std::uint64_t alpha = 0;
    double alpha_score = 0.0; // [sigma=1] * d(alpha, n-1) + f[alpha][h-1]
    double last_score = 0.0;  // sum_j d(n-1, j)
    std::uint64_t output = 0; // alpha if alpha_score < last_score, else n-1
};

/// Picks alpha as the smallest minimizer of [sigma=1]*d(i,n-1) + f[i][h-1],
/// then keeps alpha only if it strictly beats the last point's true cost.
inline SelectionResult select_output(const ScheduledDistances& sd, const Params& p,
                                     const DpTables& dp) {
    SelectionResult r;
    const unsigned top = p.h - 1;
    for (std::uint64_t i = 0; i < dp.q; ++i) {
        const double score = (p.sigma == 1 ? sd.last[i] : 0.0) + dp.f_at(i, top);
        if (i == 0 || score < r.alpha_score) {
            r.alpha = i;
            r.alpha_score = score;
        }
    }
    double total = 0.0; // d(n-1, n-1) = 0 covers j = n-1 when sigma = 1
    for (std::uint64_t j = 0; j < dp.q; ++j) total += sd.last[j];
    r.last_score = total;
    r.output = r.alpha_score < r.last_score ? r.alpha : p.n - 1;
    return r;
}

/// One full run: parameters, the query transcript, and the selected point.
struct MedianRun {
    Params params;
    SelectionResult selection;
    double output_cost = 0.0; // sum_j d(output, j), verified off-ledger
    std::uint64_t distinct_queries = 0;
    std::uint64_t transcript_hash = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> transcript;
};

/// The algorithm end to end. Deterministic; the query schedule depends only
/// on (n, h). The reported output cost needs distances outside the schedule,
/// so those go through a separate ledger and are not counted here.
inline MedianRun approx_median(const MetricSpace& metric, unsigned h) {
    if (h < 2) throw std::invalid_argument("approx_median: need h >= 2");
    const std::uint64_t n = metric.size();

    MedianRun run;
    run.params = choose_params(n, h);

    QueryLedger ledger(metric);
    const ScheduledDistances sd = run_query_schedule(ledger, run.params);

    DpTables dp = make_dp_tables(run.params);
    dp_base(sd, run.params, dp);
    for (unsigned m = 1; m < h; ++m) {
        dp_g_step(sd, run.params, dp, m);
        dp_f_step(sd, run.params, dp, m);
    }
    run.selection = select_output(sd, run.params, dp);

    if (run.selection.output == n - 1) {
        run.output_cost = run.selection.last_score;
    } else {
        QueryLedger verify(metric, /*record_transcript=*/false);
        double total = 0.0;
        for (std::uint64_t j = 0; j < n; ++j)
            total += verify.query(static_cast<std::size_t>(run.selection.output),
                                  static_cast<std::size_t>(j));
        run.output_cost = total;
    }

    run.distinct_queries = ledger.count_distinct();
    run.transcript_hash = ledger.transcript_hash();
    run.transcript = ledger.transcript();
    return run;
}

} // namespace qmedian
