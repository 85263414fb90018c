// Command-line front end: instance generation, single runs, benchmark sweeps
// and instance validation. Exit codes: 0 ok, 1 claim violation, 2 usage or
// input error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmedian/qmedian.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimViolation = 1;
constexpr int kExitUsage = 2;

constexpr double kRelativeSlack = 1e-9;

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    const auto dt = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(dt).count();
}

qmedian::MetricSpace load_validated(const std::string& path) {
    qmedian::MetricSpace metric = qmedian::read_instance_file(path);
    const auto violations = qmedian::validate_metric(metric);
    if (!violations.empty()) {
        std::string msg = "instance fails metric validation:";
        for (const auto& v : violations) msg += "\n  " + v.describe();
        throw std::invalid_argument(msg);
    }
    return metric;
}

struct RunOutcome {
    qmedian::MedianReport report;
    bool claims_ok = true;
    std::string diagnostic;
};

// Runs the algorithm and checks the two per-run claims: the approximation
// ratio (when the exact cost is known) and the query budget.
RunOutcome run_once(const qmedian::MetricSpace& metric, unsigned h, bool with_exact,
                    bool with_tilde) {
    RunOutcome out;
    const auto start = std::chrono::steady_clock::now();
    const qmedian::MedianRun run = qmedian::approx_median(metric, h);
    const double algorithm_ms = elapsed_ms(start);

    qmedian::OracleReport exact;
    if (with_exact) exact = qmedian::exact_median(metric);
    out.report = qmedian::make_report(run, with_exact ? &exact : nullptr);
    out.report.runtime_ms = algorithm_ms;
    if (with_tilde && metric.size() >= 2)
        out.report.tilde_queries = qmedian::tilde_median_naive(metric, h).count_distinct;

    if (out.report.distinct_queries > out.report.query_bound) {
        out.claims_ok = false;
        out.diagnostic += "distinct_queries " + std::to_string(out.report.distinct_queries) +
                          " exceeds (n-sigma)(t+1) = " + std::to_string(out.report.query_bound) + "\n";
    }
    const std::uint64_t root = qmedian::ceil_nth_root(out.report.n, h);
    if (out.report.t > 2 * root) {
        out.claims_ok = false;
        out.diagnostic += "t = " + std::to_string(out.report.t) + " exceeds 2*ceil(n^{1/h}) = " +
                          std::to_string(2 * root) + "\n";
    }
    if (out.report.ratio && *out.report.ratio > 2.0 * h * (1.0 + kRelativeSlack)) {
        out.claims_ok = false;
        out.diagnostic += "ratio " + std::to_string(*out.report.ratio) + " exceeds 2h = " +
                          std::to_string(2 * h) + "\n";
    }
    return out;
}

std::string summary_line(const qmedian::MedianReport& r) {
    std::string line = "n=" + std::to_string(r.n) + " h=" + std::to_string(r.h) +
                       " t=" + std::to_string(r.t) + " sigma=" + std::to_string(r.sigma) +
                       " output=" + std::to_string(r.output_index) +
                       " cost=" + qmedian::detail::format_double(r.output_cost);
    if (r.ratio) line += " ratio=" + qmedian::detail::format_double(*r.ratio);
    line += " queries=" + std::to_string(r.distinct_queries) +
            " bound=" + std::to_string(r.query_bound);
    if (r.tilde_queries) line += " tilde_queries=" + std::to_string(*r.tilde_queries);
    line += " hash=" + std::to_string(r.transcript_hash);
    return line;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string item = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!item.empty()) out.push_back(std::stoull(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + csv);
    return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string item = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (!item.empty()) out.push_back(item);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + csv);
    return out;
}

int cmd_gen(const qmedian::InstanceSpec& spec, const std::string& out_path) {
    const qmedian::MetricSpace metric = qmedian::generate(spec);
    qmedian::write_instance_file(out_path, metric);
    std::cout << out_path << " n=" << metric.size() << "\n";
    return kExitOk;
}

int cmd_run(const std::string& input, std::optional<unsigned> h_flag,
            std::optional<double> eps_flag, bool with_exact, bool with_tilde,
            const std::string& out_path) {
    const qmedian::MetricSpace metric = load_validated(input);
    unsigned h = 0;
    if (h_flag && eps_flag) throw std::invalid_argument("pass only one of --h / --h-from-epsilon");
    if (h_flag) h = *h_flag;
    else if (eps_flag) h = qmedian::h_from_epsilon(metric.size(), *eps_flag);
    else throw std::invalid_argument("one of --h / --h-from-epsilon is required");

    const RunOutcome out = run_once(metric, h, with_exact, with_tilde);
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
        f << qmedian::report_to_json(out.report).dump() << '\n';
    }
    std::cout << summary_line(out.report) << "\n";
    if (!out.claims_ok) {
        std::cerr << out.diagnostic;
        return kExitClaimViolation;
    }
    return kExitOk;
}

struct BenchConfig {
    std::vector<std::uint64_t> n_list;
    std::vector<std::uint64_t> h_list;
    std::vector<std::string> kinds;
    std::uint64_t trials = 3;
    std::uint64_t seed0 = 0;
    bool tilde = false;
    std::string csv_path;
    std::size_t dim = 2;
    double density = 0.1;
    double amplitude = 0.9;
};

constexpr std::uint64_t kBenchMaxN = 1ULL << 20;
constexpr std::uint64_t kBenchExactCap = 8192; // O(n^2) oracle kept to desk scale
constexpr std::uint64_t kBenchTildeCap = 4096; // O(n^2 h) baseline

int cmd_bench(const BenchConfig& cfg) {
    using qmedian::BenchRow;
    for (const std::uint64_t n : cfg.n_list)
        if (n > kBenchMaxN) throw std::invalid_argument("bench sizes are capped at n <= 2^20");
    std::vector<BenchRow> rows;
    bool claims_ok = true;
    std::string diagnostics;

    for (const std::uint64_t n : cfg.n_list) {
        for (std::size_t kind_idx = 0; kind_idx < cfg.kinds.size(); ++kind_idx) {
            const auto kind = qmedian::instance_kind_from_string(cfg.kinds[kind_idx]);
            for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
                qmedian::InstanceSpec spec;
                spec.kind = kind;
                spec.n = static_cast<std::size_t>(n);
                spec.seed = cfg.seed0 + trial;
                spec.dim = cfg.dim;
                spec.density = cfg.density;
                spec.amplitude = cfg.amplitude;
                const qmedian::MetricSpace metric = qmedian::generate(spec);

                std::optional<qmedian::OracleReport> exact;
                if (n <= kBenchExactCap) exact = qmedian::exact_median(metric);

                for (const std::uint64_t h : cfg.h_list) {
                    const auto start = std::chrono::steady_clock::now();
                    const qmedian::MedianRun run =
                        qmedian::approx_median(metric, static_cast<unsigned>(h));
                    BenchRow row;
                    row.report = qmedian::make_report(run, exact ? &*exact : nullptr);
                    row.report.runtime_ms = elapsed_ms(start);
                    row.kind = cfg.kinds[kind_idx];
                    row.seed = spec.seed;
                    if (cfg.tilde && n >= 2 && n <= kBenchTildeCap)
                        row.report.tilde_queries =
                            qmedian::tilde_median_naive(metric, static_cast<unsigned>(h)).count_distinct;

                    if (row.report.distinct_queries > row.report.query_bound) {
                        claims_ok = false;
                        diagnostics += "query bound violated at n=" + std::to_string(n) +
                                       " h=" + std::to_string(h) + " kind=" + row.kind +
                                       " seed=" + std::to_string(row.seed) + "\n";
                    }
                    if (row.report.ratio &&
                        *row.report.ratio > 2.0 * static_cast<double>(h) * (1.0 + kRelativeSlack)) {
                        claims_ok = false;
                        diagnostics += "ratio bound violated at n=" + std::to_string(n) +
                                       " h=" + std::to_string(h) + " kind=" + row.kind +
                                       " seed=" + std::to_string(row.seed) +
                                       " ratio=" + std::to_string(*row.report.ratio) + "\n";
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }

    // Emit in (n, h, kind, seed) order regardless of compute order.
    std::map<std::string, std::size_t> kind_rank;
    for (std::size_t k = 0; k < cfg.kinds.size(); ++k) kind_rank[cfg.kinds[k]] = k;
    std::stable_sort(rows.begin(), rows.end(), [&](const BenchRow& a, const BenchRow& b) {
        const auto ka = std::make_tuple(a.report.n, a.report.h, kind_rank[a.kind], a.seed);
        const auto kb = std::make_tuple(b.report.n, b.report.h, kind_rank[b.kind], b.seed);
        return ka < kb;
    });

    if (!cfg.csv_path.empty()) {
        const std::string tmp = cfg.csv_path + ".tmp";
        {
            std::ofstream f(tmp);
            if (!f) throw std::invalid_argument("cannot open output file: " + tmp);
            f << qmedian::bench_csv_header() << '\n';
            for (const auto& row : rows) f << qmedian::bench_csv_row(row) << '\n';
        }
        std::filesystem::rename(tmp, cfg.csv_path);
    }

    // Nonadaptivity audit: the transcript is a function of (n, h) alone.
    std::map<std::pair<std::uint64_t, unsigned>, std::uint64_t> cell_hash;
    bool nonadaptive_ok = true;
    for (const auto& row : rows) {
        const auto key = std::make_pair(row.report.n, row.report.h);
        const auto [it, inserted] = cell_hash.emplace(key, row.report.transcript_hash);
        if (!inserted && it->second != row.report.transcript_hash) {
            nonadaptive_ok = false;
            diagnostics += "transcript hash mismatch at n=" + std::to_string(row.report.n) +
                           " h=" + std::to_string(row.report.h) + " kind=" + row.kind +
                           " seed=" + std::to_string(row.seed) + "\n";
        }
    }

    std::map<unsigned, double> max_ratio;
    std::map<std::pair<std::uint64_t, unsigned>, double> max_norm_queries;
    double tilde_ratio_sum = 0.0;
    std::size_t tilde_ratio_count = 0;
    for (const auto& row : rows) {
        if (row.report.ratio) {
            auto& best = max_ratio[row.report.h];
            best = std::max(best, *row.report.ratio);
        }
        const double norm = static_cast<double>(row.report.distinct_queries) /
                            std::pow(static_cast<double>(row.report.n),
                                     1.0 + 1.0 / static_cast<double>(row.report.h));
        auto& cell = max_norm_queries[{row.report.n, row.report.h}];
        cell = std::max(cell, norm);
        if (row.report.tilde_queries && row.report.distinct_queries > 0) {
            tilde_ratio_sum += static_cast<double>(*row.report.tilde_queries) /
                               static_cast<double>(row.report.distinct_queries);
            ++tilde_ratio_count;
        }
    }
    std::cout << "rows: " << rows.size() << "\n";
    for (const auto& [h, ratio] : max_ratio)
        std::cout << "h=" << h << ": max ratio " << qmedian::detail::format_double(ratio)
                  << " (bound " << 2 * h << ")\n";
    for (const auto& [cell, norm] : max_norm_queries)
        std::cout << "n=" << cell.first << " h=" << cell.second
                  << ": max queries/n^{1+1/h} = " << qmedian::detail::format_double(norm) << "\n";
    if (tilde_ratio_count > 0)
        std::cout << "mean tilde/hat distinct queries: "
                  << qmedian::detail::format_double(tilde_ratio_sum /
                                                    static_cast<double>(tilde_ratio_count))
                  << " over " << tilde_ratio_count << " rows\n";
    std::cout << "nonadaptivity audit: " << (nonadaptive_ok ? "ok" : "FAILED") << " ("
              << cell_hash.size() << " cells)\n";

    if (!claims_ok || !nonadaptive_ok) {
        std::cerr << diagnostics;
        return kExitClaimViolation;
    }
    return kExitOk;
}

int cmd_validate(const std::string& input) {
    const qmedian::MetricSpace metric = qmedian::read_instance_file(input);
    const auto violations = qmedian::validate_metric(metric);
    if (violations.empty()) {
        std::cout << "ok\n";
        return kExitOk;
    }
    for (const auto& v : violations) std::cout << v.describe() << "\n";
    return kExitClaimViolation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic sublinear-query approximate 1-median selection"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help"); // frees -h; the run subcommand takes --h

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random metric instance file");
    gen->set_help_flag("--help", "print help");
    std::string gen_kind;
    qmedian::InstanceSpec spec;
    std::string gen_out;
    gen->add_option("--kind", gen_kind, "euclidean|graph|perturbed-uniform")->required();
    gen->add_option("--n", spec.n, "number of points")->required();
    gen->add_option("--seed", spec.seed, "instance seed")->required();
    gen->add_option("--dim", spec.dim, "euclidean dimension (default 2)");
    gen->add_option("--density", spec.density, "graph edge probability (default 0.1)");
    gen->add_option("--amplitude", spec.amplitude, "perturbed-uniform amplitude (default 0.9)");
    gen->add_option("--out", gen_out, "output instance file")->required();

    // run
    auto* run = app.add_subcommand("run", "run the algorithm on an instance file");
    run->set_help_flag("--help", "print help");
    std::string run_input, run_out;
    unsigned run_h = 0;
    double run_eps = 0.0;
    bool run_exact = false, run_tilde = false;
    run->add_option("--input", run_input, "instance file")->required();
    auto* h_opt = run->add_option("--h", run_h, "number of hops (>= 2)")->check(CLI::Range(2u, 1u << 20));
    auto* eps_opt = run->add_option("--h-from-epsilon", run_eps, "set h = max(2, round((eps/2) lg n))");
    run->add_flag("--exact", run_exact, "also run the exact oracle and report the ratio");
    run->add_flag("--tilde", run_tilde, "also count the baseline's distinct queries");
    run->add_option("--out", run_out, "report JSON path");

    // bench
    auto* bench = app.add_subcommand("bench", "sweep instances and emit a CSV of runs");
    bench->set_help_flag("--help", "print help");
    BenchConfig cfg;
    std::string bench_n, bench_h, bench_kinds = "euclidean,graph,perturbed-uniform";
    bench->add_option("--n-list", bench_n, "comma-separated sizes")->required();
    bench->add_option("--h-list", bench_h, "comma-separated h values")->required();
    bench->add_option("--kinds", bench_kinds, "comma-separated generator kinds");
    bench->add_option("--trials", cfg.trials, "seeds per cell (default 3)");
    bench->add_option("--seed", cfg.seed0, "first seed (default 0)");
    bench->add_flag("--tilde", cfg.tilde, "add baseline query counts (n <= 4096)");
    bench->add_option("--csv", cfg.csv_path, "CSV output path");
    bench->add_option("--dim", cfg.dim, "euclidean dimension (default 2)");
    bench->add_option("--density", cfg.density, "graph edge probability (default 0.1)");
    bench->add_option("--amplitude", cfg.amplitude, "perturbed-uniform amplitude (default 0.9)");

    // validate
    auto* validate = app.add_subcommand("validate", "check the metric axioms of an instance file");
    validate->set_help_flag("--help", "print help");
    std::string validate_input;
    validate->add_option("--input", validate_input, "instance file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            spec.kind = qmedian::instance_kind_from_string(gen_kind);
            return cmd_gen(spec, gen_out);
        }
        if (run->parsed()) {
            std::optional<unsigned> h_flag;
            std::optional<double> eps_flag;
            if (h_opt->count() > 0) h_flag = run_h;
            if (eps_opt->count() > 0) eps_flag = run_eps;
            return cmd_run(run_input, h_flag, eps_flag, run_exact, run_tilde, run_out);
        }
        if (bench->parsed()) {
            cfg.n_list = parse_u64_list(bench_n);
            cfg.h_list = parse_u64_list(bench_h);
            cfg.kinds = parse_string_list(bench_kinds);
            for (const std::uint64_t h : cfg.h_list)
                if (h < 2) throw std::invalid_argument("h values must be >= 2");
            return cmd_bench(cfg);
        }
        if (validate->parsed()) return cmd_validate(validate_input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
