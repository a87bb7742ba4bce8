#ifndef QMARKET_SCENARIO_HPP
#define QMARKET_SCENARIO_HPP

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qmarket/fpl.hpp"
#include "qmarket/schedule.hpp"

namespace qmarket {

enum class Case { I, II, III, IV, V, VI };
enum class Subcase { a, b, c, d };

inline constexpr Case kAllCases[] = {Case::I, Case::II, Case::III,
                                     Case::IV, Case::V,  Case::VI};
inline constexpr Subcase kAllSubcases[] = {Subcase::a, Subcase::b, Subcase::c, Subcase::d};
inline const std::vector<std::string> kAllSchedules = {"P1", "P2", "P3", "P4"};

std::string to_string(Case c);
std::string to_string(Subcase s);

struct ScenarioId {
    Case case_id;
    Subcase subcase_id;
    std::string schedule; // P1..P4 or "custom"

    std::string str() const;
};

/// Parses "Ia/P1"-style identifiers; throws on unknown case/subcase/schedule.
ScenarioId parse_scenario(const std::string& text);

struct ValidityReport {
    struct Violation {
        double time;
        std::string quantity;
        double bound;
    };
    std::optional<double> t_f; // first violation time; nullopt = valid over full horizon
    std::vector<Violation> violations;

    bool full() const { return !t_f.has_value(); }
};

struct Trajectory {
    TimeGrid grid;
    RealSeries price;
    ComplexSeries r;
    RealSeries delta_n, delta_k, delta_pi;
    ValidityReport validity;
    std::string scenario;  // "Ia/P1" or "custom"
    double lambda = 1.0;
};

struct Numerics {
    double h = 1e-3;
    double t0 = 6.0;
    double lambda = 1.0;
};

/// The fixed experiment registry: frequencies per case, initial numbers per
/// subcase (n = 0 and f1 = 1e-3 throughout).
std::tuple<ModelParams, InitialState, PriceSchedule>
resolve_scenario(const ScenarioId& id, double t0 = 6.0,
                 const PriceSchedule* custom = nullptr);

/// Full fpl pipeline for one scenario: omegas -> chi/eta -> r -> deltas ->
/// delta_Pi, with a validity report attached.
Trajectory run_scenario(const ScenarioId& id, const Numerics& numerics,
                        const PriceSchedule* custom = nullptr);

/// Pipeline over explicit inputs (also used for closed-model runs).
Trajectory run_pipeline(ModelParams params, const InitialState& init,
                        const PriceSchedule& schedule, const Numerics& numerics,
                        const std::string& label = "custom");

/// Flags the first time the deltas breach the conserved totals
/// (epsilon = 1e-6 absolute).
ValidityReport validity_scan(const TimeGrid& grid, const RealSeries& delta_n,
                             const RealSeries& delta_k, const InitialState& init);

std::pair<double, double> delta_pi_range(const Trajectory& traj);

/// max|delta_n| < 1 and max|delta_k| < 1 over the horizon.
bool no_transaction(const Trajectory& traj);

struct GridRow {
    ScenarioId id;
    double min_delta_pi;
    double max_delta_pi;
    std::optional<double> t_f;
    bool no_transaction;
};

/// Case-major, subcase-minor, schedule-last ordering; deterministic.
std::vector<GridRow> run_grid(const std::vector<Case>& cases,
                              const std::vector<Subcase>& subcases,
                              const std::vector<std::string>& schedules,
                              const Numerics& numerics);

/// lambda such that scenario Ia/P1 reaches the target max delta_Pi; the
/// mixed-model deltas scale exactly as lambda^2, so the solve is closed-form.
double calibrate_lambda(double target_max = 4.0, const Numerics& base = {});

} // namespace qmarket

#endif
