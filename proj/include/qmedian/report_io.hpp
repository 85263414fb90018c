#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qmedian/approx_median.hpp"
#include "qmedian/oracles.hpp"

namespace qmedian {

/// Machine-readable summary of one run. Everything except runtime_ms is
/// byte-stable for a given (instance, flags).
struct MedianReport {
    std::uint64_t n = 0;
    unsigned h = 0;
    std::uint64_t t = 0;
    unsigned sigma = 0;
    std::uint64_t output_index = 0;
    double output_cost = 0.0;
    std::optional<double> exact_cost;
    std::optional<double> ratio;
    std::uint64_t distinct_queries = 0;
    std::uint64_t query_bound = 0; // (n - sigma) * (t + 1)
    std::uint64_t transcript_hash = 0;
    double runtime_ms = 0.0;
    std::optional<std::uint64_t> tilde_queries;
};

inline MedianReport make_report(const MedianRun& run, const OracleReport* exact = nullptr) {
    MedianReport r;
    r.n = run.params.n;
    r.h = run.params.h;
    r.t = run.params.t;
    r.sigma = run.params.sigma;
    r.output_index = run.selection.output;
    r.output_cost = run.output_cost;
    r.distinct_queries = run.distinct_queries;
    r.query_bound = run.params.q() * (run.params.t + 1);
    r.transcript_hash = run.transcript_hash;
    if (exact) {
        r.exact_cost = exact->exact_cost;
        r.ratio = exact->exact_cost > 0.0 ? run.output_cost / exact->exact_cost : 1.0;
    }
    return r;
}

inline nlohmann::json report_to_json(const MedianReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["h"] = r.h;
    j["t"] = r.t;
    j["sigma"] = r.sigma;
    j["output_index"] = r.output_index;
    j["output_cost"] = r.output_cost;
    if (r.exact_cost) j["exact_cost"] = *r.exact_cost;
    if (r.ratio) j["ratio"] = *r.ratio;
    j["distinct_queries"] = r.distinct_queries;
    j["query_bound"] = r.query_bound;
    j["transcript_hash"] = r.transcript_hash;
    j["runtime_ms"] = r.runtime_ms;
    if (r.tilde_queries) j["tilde_queries"] = *r.tilde_queries;
    return j;
}

namespace detail {

// Shortest representation that round-trips; keeps CSV output byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace detail

struct BenchRow {
    MedianReport report;
    std::string kind;
    std::uint64_t seed = 0;
};

inline std::string bench_csv_header() {
    return "n,h,t,sigma,kind,seed,output_index,output_cost,exact_cost,ratio,"
           "distinct_queries,query_bound,tilde_queries,transcript_hash,runtime_ms";
}

inline std::string bench_csv_row(const BenchRow& row) {
    const MedianReport& r = row.report;
    std::string out;
    out += std::to_string(r.n) + ',';
    out += std::to_string(r.h) + ',';
    out += std::to_string(r.t) + ',';
    out += std::to_string(r.sigma) + ',';
    out += row.kind + ',';
    out += std::to_string(row.seed) + ',';
    out += std::to_string(r.output_index) + ',';
    out += detail::format_double(r.output_cost) + ',';
    out += (r.exact_cost ? detail::format_double(*r.exact_cost) : std::string()) + ',';
    out += (r.ratio ? detail::format_double(*r.ratio) : std::string()) + ',';
    out += std::to_string(r.distinct_queries) + ',';
    out += std::to_string(r.query_bound) + ',';
    out += (r.tilde_queries ? std::to_string(*r.tilde_queries) : std::string()) + ',';
    out += std::to_string(r.transcript_hash) + ',';
    out += detail::format_double(r.runtime_ms);
    return out;
}

} // namespace qmedian
