#include <catch2/catch_amalgamated.hpp>

#include "qmedian/approx_median.hpp"
#include "qmedian/generate.hpp"
#include "qmedian/oracles.hpp"

#include "test_helpers.hpp"

using namespace qmedian;
using testutil::close;
using testutil::line_metric;
using testutil::uniform_metric;

TEST_CASE("d_mod reduces both indices") {
    const MetricSpace m = line_metric(4);
    const Params p = choose_params(4, 2); // sigma=1, q=3
    QueryLedger ledger(m);
    CHECK(d_mod(ledger, 5, 9, p) == 2.0); // d(2, 0)
    CHECK(d_mod(ledger, 1, 1 + 3 * 7, p) == 0.0);
    CHECK(d_mod(ledger, 2, 7, p) == d_mod(ledger, 7, 2, p));
}

TEST_CASE("hat_distance_direct on hand-checked cases") {
    SECTION("single residue: every hop is a self-distance") {
        const MetricSpace m = line_metric(2);
        const Params p = choose_params(2, 2); // q=1
        QueryLedger ledger(m);
        CHECK(hat_distance_direct(ledger, 0, 0, p) == 0.0);
    }
    SECTION("line metric n=4, h=2") {
        const MetricSpace m = line_metric(4);
        const Params p = choose_params(4, 2); // t=2, sigma=1, q=3
        QueryLedger ledger(m);
        CHECK(hat_distance_direct(ledger, 0, 1, p) == 1.0); // hops d(0,0), d(0,1)
        CHECK(hat_distance_direct(ledger, 0, 2, p) == 2.0); // hops d(0,1), d(1,2)
    }
    SECTION("rejects indices outside [0, q)") {
        const MetricSpace m = line_metric(4);
        const Params p = choose_params(4, 2);
        QueryLedger ledger(m);
        CHECK_THROWS_AS(hat_distance_direct(ledger, 3, 0, p), std::out_of_range);
    }
}

TEST_CASE("worked example: line metric n=4, h=2, full trace") {
    const MetricSpace m = line_metric(4);
    const Params p = choose_params(4, 2);
    REQUIRE(p.t == 2);
    REQUIRE(p.sigma == 1);
    REQUIRE(p.sprime == std::vector<std::uint32_t>{1, 0});

    QueryLedger ledger(m);
    const ScheduledDistances sd = run_query_schedule(ledger, p);
    DpTables dp = make_dp_tables(p);

    dp_base(sd, p, dp);
    CHECK(dp.f_at(0, 0) == 0.0);
    CHECK(dp.f_at(1, 0) == 1.0);
    CHECK(dp.g_at(0, 0) == 1.0);
    CHECK(dp.g_at(1, 0) == 2.0);
    CHECK(dp.g_at(2, 0) == 1.0);

    dp_g_step(sd, p, dp, 1);
    dp_f_step(sd, p, dp, 1);
    CHECK(dp.g_at(0, 1) == 5.0);
    CHECK(dp.f_at(0, 1) == 3.0);
    CHECK(dp.f_at(1, 1) == 4.0);
    CHECK(dp.f_at(2, 1) == 5.0);

    const SelectionResult sel = select_output(sd, p, dp);
    CHECK(sel.alpha == 0);
    CHECK(sel.alpha_score == 6.0);
    CHECK(sel.last_score == 6.0);
    CHECK(sel.output == 3); // 6 < 6 fails, so the last point wins
}

TEST_CASE("dp base column against its definition on the uniform metric") {
    // g[i][0] counts the non-self hops: t minus |{s : it+s = i mod q}|.
    const MetricSpace m = uniform_metric(10);
    const Params p = choose_params(10, 2);
    QueryLedger ledger(m);
    const ScheduledDistances sd = run_query_schedule(ledger, p);
    DpTables dp = make_dp_tables(p);
    dp_base(sd, p, dp);
    for (std::uint64_t i = 0; i < p.q(); ++i) {
        std::uint64_t self_hits = 0;
        for (std::uint64_t s = 0; s < p.t; ++s)
            if ((i * p.t + s) % p.q() == i) ++self_hits;
        CHECK(dp.g_at(i, 0) == double(p.t - self_hits));
    }
}

TEST_CASE("approx_median on the worked example") {
    const MedianRun run = approx_median(line_metric(4), 2);
    CHECK(run.selection.output == 3);
    CHECK(run.output_cost == 6.0);
    const OracleReport exact = exact_median(line_metric(4));
    CHECK(exact.exact_cost == 4.0);
    CHECK(run.output_cost / exact.exact_cost == 1.5);
}

TEST_CASE("approx_median handles a single point without queries") {
    const MetricSpace m = MetricSpace::from_matrix(1, {0.0});
    const MedianRun run = approx_median(m, 2);
    CHECK(run.selection.output == 0);
    CHECK(run.distinct_queries == 0);
    CHECK(run.output_cost == 0.0);
    CHECK(run.transcript.empty());
}

TEST_CASE("approx_median rejects h < 2") {
    CHECK_THROWS_AS(approx_median(line_metric(4), 1), std::invalid_argument);
    CHECK_THROWS_AS(approx_median(line_metric(4), 0), std::invalid_argument);
}

TEST_CASE("query budget at n=100, h=2") {
    InstanceSpec spec;
    spec.kind = InstanceKind::perturbed_uniform;
    spec.n = 100;
    spec.seed = 4;
    const MedianRun run = approx_median(generate(spec), 2);
    CHECK(run.params.t == 11);
    CHECK(run.distinct_queries <= 1200); // (n - sigma)(t + 1) = 100 * 12
    CHECK(run.transcript.size() <= run.params.q() * (run.params.t + 1));
}

TEST_CASE("all scheduled queries stay within the budget across kinds") {
    for (const auto kind :
         {InstanceKind::euclidean, InstanceKind::graph, InstanceKind::perturbed_uniform}) {
        for (std::uint64_t n : {2ULL, 7ULL, 33ULL, 64ULL}) {
            for (unsigned h : {2u, 3u}) {
                InstanceSpec spec;
                spec.kind = kind;
                spec.n = static_cast<std::size_t>(n);
                spec.seed = n + h;
                const MedianRun run = approx_median(generate(spec), h);
                CAPTURE(to_string(kind), n, h);
                REQUIRE(run.distinct_queries <= run.params.q() * (run.params.t + 1));
                REQUIRE(run.params.t <= 2 * ceil_nth_root(n, h));
            }
        }
    }
}

TEST_CASE("pseudo-distance dominates the plain modular distance") {
    for (const auto kind : {InstanceKind::euclidean, InstanceKind::perturbed_uniform}) {
        InstanceSpec spec;
        spec.kind = kind;
        spec.n = 21;
        spec.seed = 13;
        const MetricSpace m = generate(spec);
        for (unsigned h : {2u, 3u}) {
            const Params p = choose_params(21, h);
            QueryLedger ledger(m);
            for (std::uint64_t i = 0; i < p.q(); ++i) {
                // i*t^h mod q, built without large powers
                std::uint64_t shifted = i;
                for (unsigned k = 0; k < h; ++k) shifted = shifted * p.t % p.q();
                for (std::uint64_t j = 0; j < p.q(); ++j) {
                    const double hat = hat_distance_direct(ledger, i, j, p);
                    const double base = d_mod(ledger, i, shifted + j, p);
                    CAPTURE(to_string(kind), h, i, j);
                    REQUIRE(hat >= base - 1e-9 * std::max({1.0, hat, base}));
                }
            }
        }
    }
}

TEST_CASE("top f column equals the pseudo-distance row sums") {
    InstanceSpec spec;
    spec.kind = InstanceKind::graph;
    spec.n = 18;
    spec.seed = 8;
    const MetricSpace m = generate(spec);
    for (unsigned h : {2u, 3u, 4u}) {
        const Params p = choose_params(18, h);
        QueryLedger ledger(m);
        const ScheduledDistances sd = run_query_schedule(ledger, p);
        DpTables dp = make_dp_tables(p);
        dp_base(sd, p, dp);
        for (unsigned mcol = 1; mcol < h; ++mcol) {
            dp_g_step(sd, p, dp, mcol);
            dp_f_step(sd, p, dp, mcol);
        }
        QueryLedger scratch(m);
        for (std::uint64_t i = 0; i < p.q(); ++i) {
            double direct = 0.0;
            for (std::uint64_t j = 0; j < p.q(); ++j)
                direct += hat_distance_direct(scratch, i, j, p);
            CAPTURE(h, i);
            REQUIRE(close(dp.f_at(i, h - 1), direct));
        }
    }
}

TEST_CASE("f never exceeds g in any filled cell") {
    for (std::uint64_t n : {5ULL, 16ULL, 40ULL}) {
        InstanceSpec spec;
        spec.kind = InstanceKind::perturbed_uniform;
        spec.n = static_cast<std::size_t>(n);
        spec.seed = n;
        const MetricSpace m = generate(spec);
        for (unsigned h : {2u, 3u, 4u}) {
            const Params p = choose_params(n, h);
            QueryLedger ledger(m);
            const ScheduledDistances sd = run_query_schedule(ledger, p);
            DpTables dp = make_dp_tables(p);
            dp_base(sd, p, dp);
            for (unsigned mcol = 1; mcol < h; ++mcol) {
                dp_g_step(sd, p, dp, mcol);
                dp_f_step(sd, p, dp, mcol);
            }
            for (unsigned mcol = 0; mcol < h; ++mcol)
                for (std::uint64_t i = 0; i < p.q(); ++i) {
                    CAPTURE(n, h, mcol, i);
                    REQUIRE(dp.f_at(i, mcol) <= dp.g_at(i, mcol) * (1.0 + 1e-12) + 1e-12);
                }
        }
    }
}

TEST_CASE("transcripts depend only on (n, h), not on the metric") {
    for (std::uint64_t n : {6ULL, 17ULL, 32ULL}) {
        for (unsigned h : {2u, 3u}) {
            std::vector<MedianRun> runs;
            for (const auto kind :
                 {InstanceKind::euclidean, InstanceKind::graph, InstanceKind::perturbed_uniform}) {
                for (std::uint64_t seed = 0; seed < 3; ++seed) {
                    InstanceSpec spec;
                    spec.kind = kind;
                    spec.n = static_cast<std::size_t>(n);
                    spec.seed = seed;
                    runs.push_back(approx_median(generate(spec), h));
                }
            }
            for (std::size_t k = 1; k < runs.size(); ++k) {
                CAPTURE(n, h, k);
                REQUIRE(runs[k].transcript == runs[0].transcript);
                REQUIRE(runs[k].transcript_hash == runs[0].transcript_hash);
            }
        }
    }
}

TEST_CASE("repeat runs are bit-identical") {
    InstanceSpec spec;
    spec.kind = InstanceKind::euclidean;
    spec.n = 73;
    spec.seed = 19;
    const MetricSpace m = generate(spec);
    const MedianRun a = approx_median(m, 3);
    const MedianRun b = approx_median(m, 3);
    CHECK(a.selection.output == b.selection.output);
    CHECK(a.selection.alpha == b.selection.alpha);
    CHECK(a.selection.alpha_score == b.selection.alpha_score);
    CHECK(a.output_cost == b.output_cost);
    CHECK(a.distinct_queries == b.distinct_queries);
    CHECK(a.transcript_hash == b.transcript_hash);
    CHECK(a.transcript == b.transcript);
}

TEST_CASE("output is a 2h-approximate 1-median across kinds and seeds") {
    for (const auto kind :
         {InstanceKind::euclidean, InstanceKind::graph, InstanceKind::perturbed_uniform}) {
        for (std::uint64_t n : {2ULL, 3ULL, 9ULL, 31ULL, 64ULL}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                InstanceSpec spec;
                spec.kind = kind;
                spec.n = static_cast<std::size_t>(n);
                spec.seed = seed;
                const MetricSpace m = generate(spec);
                const OracleReport exact = exact_median(m);
                for (unsigned h : {2u, 3u}) {
                    const MedianRun run = approx_median(m, h);
                    CAPTURE(to_string(kind), n, seed, h);
                    REQUIRE(run.output_cost <= 2.0 * h * exact.exact_cost * (1.0 + 1e-9));
                    REQUIRE(run.output_cost >= exact.exact_cost * (1.0 - 1e-9)); // optimum is a floor
                }
            }
        }
    }
}

TEST_CASE("depth far beyond lg n stays finite and deterministic") {
    const MetricSpace m = line_metric(6);
    const MedianRun a = approx_median(m, 40);
    const MedianRun b = approx_median(m, 40);
    CHECK(a.params.t == 2);
    CHECK(a.selection.output < 6);
    CHECK(std::isfinite(a.selection.alpha_score));
    CHECK(a.distinct_queries <= a.params.q() * (a.params.t + 1));
    CHECK(a.output_cost <= 80.0 * exact_median(m).exact_cost);
    CHECK(a.transcript == b.transcript);
    CHECK(a.output_cost == b.output_cost);
}

TEST_CASE("uniform metric: every point is optimal and the ratio is 1") {
    const MetricSpace m = uniform_metric(12);
    const MedianRun run = approx_median(m, 2);
    CHECK(run.output_cost == 11.0);
    const OracleReport exact = exact_median(m);
    CHECK(exact.exact_cost == 11.0);
}

TEST_CASE("sigma=0 instances score alpha by the dp column alone") {
    // n=10, h=2: t=5, gcd(5,10)=5 forces sigma=1; n=9 gives t=3, gcd(3,9)=3 -> sigma=1;
    // n=11: t=5, gcd(5,11)=1 -> sigma=0.
    const Params p = choose_params(11, 2);
    REQUIRE(p.sigma == 0);
    const MetricSpace m = line_metric(11);
    QueryLedger ledger(m);
    const ScheduledDistances sd = run_query_schedule(ledger, p);
    DpTables dp = make_dp_tables(p);
    dp_base(sd, p, dp);
    dp_g_step(sd, p, dp, 1);
    dp_f_step(sd, p, dp, 1);
    const SelectionResult sel = select_output(sd, p, dp);
    CHECK(sel.alpha_score == dp.f_at(sel.alpha, 1));
}
