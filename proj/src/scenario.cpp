#include "qmarket/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmarket {

namespace {

constexpr double kValidityEps = 1e-6;

struct CaseParams {
    double omega_a, omega_c, Omega_A, Omega_C;
};

CaseParams case_params(Case c) {
    switch (c) {
        case Case::I: return {1, 1, 1, 1};
        case Case::II: return {10, 10, 1, 1};
        case Case::III: return {1, 1, 10, 10};
        case Case::IV: return {20, 10, 5, 1};
        case Case::V: return {1, 5, 10, 20};
        case Case::VI: return {1, 3, 2, 7};
    }
    throw std::invalid_argument("unknown case");
}

InitialState subcase_state(Subcase s) {
    InitialState init;
    init.n = 0;
    init.M = 2;
    init.n_prime = 100;
    switch (s) {
        case Subcase::a: init.k = 20; init.k_prime = 20; break;
        case Subcase::b: init.k = 80; init.k_prime = 20; break;
        case Subcase::c: init.k = 20; init.k_prime = 80; break;
        case Subcase::d: init.k = 80; init.k_prime = 80; break;
    }
    return init;
}

} // namespace

std::string to_string(Case c) {
    switch (c) {
        case Case::I: return "I";
        case Case::II: return "II";
        case Case::III: return "III";
        case Case::IV: return "IV";
        case Case::V: return "V";
        case Case::VI: return "VI";
    }
    return "?";
}

std::string to_string(Subcase s) {
    switch (s) {
        case Subcase::a: return "a";
        case Subcase::b: return "b";
        case Subcase::c: return "c";
        case Subcase::d: return "d";
    }
    return "?";
}

std::string ScenarioId::str() const {
    return to_string(case_id) + to_string(subcase_id) + "/" + schedule;
}

ScenarioId parse_scenario(const std::string& text) {
    const auto slash = text.find('/');
    const std::string head = text.substr(0, slash);
    if (head.size() < 2)
        throw std::invalid_argument("unknown scenario '" + text + "'");
    const std::string case_part = head.substr(0, head.size() - 1);
    const char sub = head.back();

    ScenarioId id;
    if (case_part == "I") id.case_id = Case::I;
    else if (case_part == "II") id.case_id = Case::II;
    else if (case_part == "III") id.case_id = Case::III;
    else if (case_part == "IV") id.case_id = Case::IV;
    else if (case_part == "V") id.case_id = Case::V;
    else if (case_part == "VI") id.case_id = Case::VI;
    else throw std::invalid_argument("unknown case '" + case_part + "'");

    if (sub == 'a') id.subcase_id = Subcase::a;
    else if (sub == 'b') id.subcase_id = Subcase::b;
    else if (sub == 'c') id.subcase_id = Subcase::c;
    else if (sub == 'd') id.subcase_id = Subcase::d;
    else throw std::invalid_argument(std::string("unknown subcase '") + sub + "'");

    if (slash == std::string::npos)
        throw std::invalid_argument("scenario '" + text + "' is missing a schedule");
    id.schedule = text.substr(slash + 1);
    if (id.schedule != "custom" &&
        std::find(kAllSchedules.begin(), kAllSchedules.end(), id.schedule) ==
            kAllSchedules.end())
        throw std::invalid_argument("unknown schedule '" + id.schedule + "'");
    return id;
}

std::tuple<ModelParams, InitialState, PriceSchedule>
resolve_scenario(const ScenarioId& id, double t0, const PriceSchedule* custom) {
    const CaseParams cp = case_params(id.case_id);
    ModelParams params;
    params.omega_a = cp.omega_a;
    params.omega_c = cp.omega_c;
    params.Omega_A = cp.Omega_A;
    params.Omega_C = cp.Omega_C;
    params.f1 = 1e-3;
    const InitialState init = subcase_state(id.subcase_id);
    if (id.schedule == "custom") {
        if (!custom)
            throw std::invalid_argument("resolve_scenario: custom schedule not provided");
        return {params, init, *custom};
    }
    return {params, init, PriceSchedule::builtin(id.schedule, t0)};
}

ValidityReport validity_scan(const TimeGrid& grid, const RealSeries& delta_n,
                             const RealSeries& delta_k, const InitialState& init) {
    ValidityReport report;
    auto flag = [&](std::size_t i, const char* quantity, double bound) {
        report.violations.push_back({grid.t(i), quantity, bound});
        if (!report.t_f) report.t_f = grid.t(i);
    };
    // one violation record per quantity, at its first crossing
    bool hit_n_low = false, hit_n_high = false, hit_k_low = false, hit_k_high = false;
    for (std::size_t i = 0; i < delta_n.size(); ++i) {
        if (!hit_n_low && delta_n[i] < -kValidityEps) {
            flag(i, "delta_n", 0.0);
            hit_n_low = true;
        }
        if (!hit_n_high && delta_n[i] > init.n_prime + kValidityEps) {
            flag(i, "shares", double(init.n + init.n_prime));
            hit_n_high = true;
        }
        if (!hit_k_high && delta_k[i] > init.k_prime + kValidityEps) {
            flag(i, "delta_k", double(init.k_prime));
            hit_k_high = true;
        }
        if (!hit_k_low && init.k + delta_k[i] < -kValidityEps) {
            flag(i, "cash", 0.0);
            hit_k_low = true;
        }
    }
    std::sort(report.violations.begin(), report.violations.end(),
              [](const auto& a, const auto& b) { return a.time < b.time; });
    return report;
}

Trajectory run_pipeline(ModelParams params, const InitialState& init,
                        const PriceSchedule& schedule, const Numerics& numerics,
                        const std::string& label) {
    if (numerics.h <= 0) throw std::invalid_argument("run_pipeline: step must be > 0");
    if (numerics.t0 <= 0) throw std::invalid_argument("run_pipeline: horizon must be > 0");
    params.lambda = numerics.lambda;

    Trajectory traj;
    traj.grid = {numerics.t0, numerics.h};
    traj.scenario = label;
    traj.lambda = params.lambda;
    const std::size_t npts = traj.grid.size();
    traj.price.resize(npts);
    for (std::size_t i = 0; i < npts; ++i)
        traj.price[i] = schedule.value(traj.grid.t(i));

    if (params.lambda == 0.0) {
        // no interaction: the status quo cannot change
        traj.r.assign(npts, {0.0, 0.0});
        traj.delta_n.assign(npts, 0.0);
        traj.delta_k.assign(npts, 0.0);
        traj.delta_pi.assign(npts, 0.0);
        traj.validity = validity_scan(traj.grid, traj.delta_n, traj.delta_k, init);
        return traj;
    }

    const Expectations exps = omega12_closed_form(init, params.f1);
    const FplCoefficients coeffs = eta_coefficients(params, schedule, traj.grid);
    traj.r = correlation_r(coeffs, exps);
    auto [dn, dk] = trader_deltas(traj.r, schedule, traj.grid, params.lambda);
    traj.delta_n = std::move(dn);
    traj.delta_k = std::move(dk);
    traj.delta_pi = portfolio_delta(traj.delta_n, traj.delta_k, schedule, init.n, traj.grid);
    traj.validity = validity_scan(traj.grid, traj.delta_n, traj.delta_k, init);
    return traj;
}

Trajectory run_scenario(const ScenarioId& id, const Numerics& numerics,
                        const PriceSchedule* custom) {
    auto [params, init, schedule] = resolve_scenario(id, numerics.t0, custom);
    return run_pipeline(params, init, schedule, numerics, id.str());
}

std::pair<double, double> delta_pi_range(const Trajectory& traj) {
    const auto [lo, hi] =
        std::minmax_element(traj.delta_pi.begin(), traj.delta_pi.end());
    return {*lo, *hi};
}

bool no_transaction(const Trajectory& traj) {
    double max_n = 0.0, max_k = 0.0;
    for (double v : traj.delta_n) max_n = std::max(max_n, std::abs(v));
    for (double v : traj.delta_k) max_k = std::max(max_k, std::abs(v));
    return max_n < 1.0 && max_k < 1.0;
}

std::vector<GridRow> run_grid(const std::vector<Case>& cases,
                              const std::vector<Subcase>& subcases,
                              const std::vector<std::string>& schedules,
                              const Numerics& numerics) {
    if (cases.empty() || subcases.empty() || schedules.empty())
        throw std::invalid_argument("run_grid: empty selection");
    std::vector<GridRow> rows;
    rows.reserve(cases.size() * subcases.size() * schedules.size());
    for (Case c : cases)
        for (Subcase s : subcases)
            for (const auto& sched : schedules) {
                const ScenarioId id{c, s, sched};
                const Trajectory traj = run_scenario(id, numerics);
                const auto [lo, hi] = delta_pi_range(traj);
                rows.push_back({id, lo, hi, traj.validity.t_f, no_transaction(traj)});
            }
    return rows;
}

double calibrate_lambda(double target_max, const Numerics& base) {
    if (target_max <= 0)
        throw std::invalid_argument("calibrate_lambda: target must be > 0");
    Numerics unit = base;
    unit.lambda = 1.0;
    const Trajectory ref = run_scenario(parse_scenario("Ia/P1"), unit);
    const double max_at_unit = delta_pi_range(ref).second;
    if (max_at_unit <= 0)
        throw std::runtime_error("calibrate_lambda: reference run has no positive excursion");
    return std::sqrt(target_max / max_at_unit);
}

} // namespace qmarket
