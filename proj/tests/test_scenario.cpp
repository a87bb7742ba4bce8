#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "qmarket/csv.hpp"
#include "qmarket/scenario.hpp"

using namespace qmarket;

TEST_CASE("scenario parsing and registry") {
    auto [params, init, sched] = resolve_scenario(parse_scenario("Ia/P1"));
    CHECK(params.omega_a == 1.0);
    CHECK(params.omega_c == 1.0);
    CHECK(params.Omega_A == 1.0);
    CHECK(params.Omega_C == 1.0);
    CHECK(params.f1 == 1e-3);
    CHECK(init.n == 0);
    CHECK(init.k == 20);
    CHECK(init.k_prime == 20);
    CHECK(init.n_prime == 100);
    CHECK(init.M == 2);
    CHECK(sched.name() == "P1");

    auto [p6, i6, s6] = resolve_scenario(parse_scenario("VId/P4"));
    CHECK(p6.omega_a == 1.0);
    CHECK(p6.omega_c == 3.0);
    CHECK(p6.Omega_A == 2.0);
    CHECK(p6.Omega_C == 7.0);
    CHECK(i6.k == 80);
    CHECK(i6.k_prime == 80);
    CHECK(s6.name() == "P4");

    CHECK_THROWS_AS(parse_scenario("VIIa/P1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("Ie/P1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("Ia/P9"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("Ia"), std::invalid_argument);
}

TEST_CASE("run_scenario basics") {
    Numerics numerics; // h=1e-3, t0=6, lambda=1
    auto traj = run_scenario(parse_scenario("Ia/P1"), numerics);
    CHECK(traj.grid.size() == 6001);
    CHECK(traj.delta_pi.size() == 6001);
    CHECK(traj.delta_n.front() == 0.0);
    CHECK(traj.delta_k.front() == 0.0);
    CHECK(traj.delta_pi.front() == 0.0);
}

TEST_CASE("lambda = 0 run is identically zero") {
    Numerics numerics;
    numerics.lambda = 0.0;
    auto traj = run_scenario(parse_scenario("IVc/P3"), numerics);
    for (double v : traj.delta_n) CHECK(v == 0.0);
    for (double v : traj.delta_k) CHECK(v == 0.0);
    for (double v : traj.delta_pi) CHECK(v == 0.0);
    CHECK(traj.validity.full());
}

TEST_CASE("validity scan") {
    TimeGrid grid{6.0, 1e-3};
    InitialState init{0, 20, 100, 20, 2, 0};

    SUBCASE("zero deltas are valid over the full horizon") {
        RealSeries zero(grid.size(), 0.0);
        auto report = validity_scan(grid, zero, zero, init);
        CHECK(report.full());
        CHECK(report.violations.empty());
    }

    SUBCASE("synthetic share-bound crossing at t = 0.5") {
        RealSeries dn(grid.size()), dk(grid.size(), 0.0);
        for (std::size_t i = 0; i < grid.size(); ++i) dn[i] = 200.0 * grid.t(i);
        auto report = validity_scan(grid, dn, dk, init);
        REQUIRE(report.t_f.has_value());
        CHECK(*report.t_f == doctest::Approx(0.5).epsilon(2e-3));
        CHECK(report.violations.front().quantity == "shares");
    }

    SUBCASE("negative delta_n is flagged") {
        RealSeries dn(grid.size(), 0.0), dk(grid.size(), 0.0);
        dn[100] = -1e-3;
        auto report = validity_scan(grid, dn, dk, init);
        REQUIRE(report.t_f.has_value());
        CHECK(*report.t_f == doctest::Approx(0.1));
    }

    SUBCASE("cash bounds") {
        RealSeries dn(grid.size(), 0.0), dk(grid.size(), 0.0);
        dk[10] = 20.5; // more cash than sigma ever had
        auto report = validity_scan(grid, dn, dk, init);
        REQUIRE(report.t_f.has_value());
        CHECK(report.violations.front().quantity == "delta_k");
    }
}

TEST_CASE("delta_pi_range on a zero trajectory") {
    Numerics numerics;
    numerics.lambda = 0.0;
    auto traj = run_scenario(parse_scenario("Ia/P1"), numerics);
    auto [lo, hi] = delta_pi_range(traj);
    CHECK(lo == 0.0);
    CHECK(hi == 0.0);
    CHECK(no_transaction(traj));
}

TEST_CASE("grid cardinality and composition") {
    Numerics numerics;
    numerics.h = 1e-2; // keep this test fast
    const std::vector<Case> cases(std::begin(kAllCases), std::end(kAllCases));
    const std::vector<Subcase> subcases(std::begin(kAllSubcases), std::end(kAllSubcases));
    auto rows = run_grid(cases, subcases, kAllSchedules, numerics);
    CHECK(rows.size() == 96);

    auto single = run_grid({Case::I}, {Subcase::a}, {"P1"}, numerics);
    REQUIRE(single.size() == 1);
    auto traj = run_scenario(parse_scenario("Ia/P1"), numerics);
    auto [lo, hi] = delta_pi_range(traj);
    CHECK(single[0].min_delta_pi == lo);
    CHECK(single[0].max_delta_pi == hi);

    CHECK_THROWS_AS(run_grid({}, {Subcase::a}, {"P1"}, numerics), std::invalid_argument);
}

TEST_CASE("table sign structure and orderings at lambda = 1") {
    Numerics numerics;
    numerics.h = 1e-3;
    const std::vector<Case> cases(std::begin(kAllCases), std::end(kAllCases));
    const std::vector<Subcase> subcases(std::begin(kAllSubcases), std::end(kAllSubcases));
    auto rows = run_grid(cases, subcases, kAllSchedules, numerics);

    std::map<std::string, GridRow> by_id;
    for (const auto& row : rows) by_id.emplace(row.id.str(), row);

    for (const auto& row : rows) {
        const auto& sched = row.id.schedule;
        if (sched == "P1" || sched == "P2") {
            CHECK(row.min_delta_pi >= -1e-9);
            CHECK(row.max_delta_pi >= 0.0);
        } else if (sched == "P3") {
            CHECK(row.max_delta_pi <= 1e-9);
            CHECK(row.min_delta_pi <= 0.0);
        } else { // P4: V and VI never dip below zero, I-IV do
            if (row.id.case_id == Case::V || row.id.case_id == Case::VI)
                CHECK(row.min_delta_pi >= -1e-9);
            else {
                CHECK(row.min_delta_pi < 0.0);
                CHECK(row.max_delta_pi > 0.0);
            }
        }
        // with n = 0 the trader can only buy, so delta_n stays nonnegative
        auto traj = run_scenario(row.id, numerics);
        for (double v : traj.delta_n) CHECK(v >= -1e-6);
    }

    // width ordering: a <= {b, c} <= d, and case I widest per subcase/schedule
    auto width = [&](const std::string& id) {
        const auto& row = by_id.at(id);
        return row.max_delta_pi - row.min_delta_pi;
    };
    for (Case c : kAllCases)
        for (const auto& sched : kAllSchedules) {
            const std::string base = to_string(c);
            CHECK(width(base + "a/" + sched) <= width(base + "b/" + sched) + 1e-12);
            CHECK(width(base + "a/" + sched) <= width(base + "c/" + sched) + 1e-12);
            CHECK(width(base + "b/" + sched) <= width(base + "d/" + sched) + 1e-12);
            CHECK(width(base + "c/" + sched) <= width(base + "d/" + sched) + 1e-12);
        }
    for (Subcase s : kAllSubcases)
        for (const auto& sched : kAllSchedules) {
            const std::string suffix = to_string(s) + "/" + sched;
            for (Case c : {Case::II, Case::III, Case::IV, Case::V, Case::VI})
                CHECK(width("I" + suffix) >= width(to_string(c) + suffix) - 1e-12);
        }
}

TEST_CASE("grid refinement stability") {
    Numerics coarse, fine;
    coarse.h = 1e-3;
    fine.h = 5e-4;
    const std::vector<Case> cases(std::begin(kAllCases), std::end(kAllCases));
    const std::vector<Subcase> subcases(std::begin(kAllSubcases), std::end(kAllSubcases));
    auto rows_c = run_grid(cases, subcases, kAllSchedules, coarse);
    auto rows_f = run_grid(cases, subcases, kAllSchedules, fine);
    REQUIRE(rows_c.size() == rows_f.size());
    for (std::size_t i = 0; i < rows_c.size(); ++i) {
        const double mc = std::max(std::abs(rows_c[i].min_delta_pi),
                                   std::abs(rows_c[i].max_delta_pi));
        const double mf = std::max(std::abs(rows_f[i].min_delta_pi),
                                   std::abs(rows_f[i].max_delta_pi));
        CHECK(std::abs(mc - mf) <= 1e-4 * std::max(1e-12, mf));
    }
}

TEST_CASE("grid report is deterministic") {
    Numerics numerics;
    numerics.h = 1e-2;
    auto rows1 = run_grid({Case::I, Case::IV}, {Subcase::a, Subcase::d}, {"P1", "P3"},
                          numerics);
    auto rows2 = run_grid({Case::I, Case::IV}, {Subcase::a, Subcase::d}, {"P1", "P3"},
                          numerics);
    CHECK(summary_csv(rows1) == summary_csv(rows2));
}

TEST_CASE("closed-model stasis with M = O") {
    ModelParams params{1.0, 1.0, 1.0, 1.0, 1.0, 1e-3};
    InitialState init{0, 20, 100, 20, 2, 2};
    Numerics numerics;
    auto sched = PriceSchedule::closed_model(init.M, init.O, numerics.lambda, numerics.t0);
    auto traj = run_pipeline(params, init, sched, numerics, "closed M=O");
    double max_dpi = 0.0, max_dn = 0.0;
    for (double v : traj.delta_pi) max_dpi = std::max(max_dpi, std::abs(v));
    for (double v : traj.delta_n) max_dn = std::max(max_dn, std::abs(v));
    CHECK(max_dpi < 1e-6);
    CHECK(max_dn > 0.0);
}

TEST_CASE("calibration hits the target exactly") {
    Numerics numerics;
    const double lambda = calibrate_lambda(4.0, numerics);
    numerics.lambda = lambda;
    auto traj = run_scenario(parse_scenario("Ia/P1"), numerics);
    CHECK(delta_pi_range(traj).second == doctest::Approx(4.0).epsilon(1e-6));
}
