// qmarket: fpl market dynamics runner and oracle checker.
//
// Subcommands:
//   run             run scenarios and write per-scenario + summary CSVs
//   verify-oracle   conservation and omega-equivalence checks, exact oracle
//   list-scenarios  print the case/subcase/schedule registry
//
// Config file (optional, overridden by flags): one `key = value` per line,
// '#' comments. Keys: scenario (repeatable), schedule (repeatable), lambda,
// step, horizon, out, downsample, breakpoint (repeatable "t,P").

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmarket/csv.hpp"
#include "qmarket/fock.hpp"
#include "qmarket/oracle.hpp"
#include "qmarket/scenario.hpp"

namespace fs = std::filesystem;
using namespace qmarket;

namespace {

struct RunConfig {
    std::vector<std::string> scenarios; // "all", "Ia", or "Ia/P1"
    std::vector<std::string> schedules; // filter for bare case/subcase tokens
    double lambda = 1.0;
    double step = 1e-3;
    double horizon = 6.0;
    std::string out_dir;
    std::size_t downsample = 1;
    std::vector<std::pair<double, double>> breakpoints;
};

[[noreturn]] void config_error(const std::string& path, int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

void load_config(const std::string& path, RunConfig& cfg) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_error(path, lineno, "expected 'key = value'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) config_error(path, lineno, "empty value for key '" + key + "'");
        try {
            if (key == "scenario") cfg.scenarios.push_back(value);
            else if (key == "schedule") cfg.schedules.push_back(value);
            else if (key == "lambda") cfg.lambda = std::stod(value);
            else if (key == "step") cfg.step = std::stod(value);
            else if (key == "horizon") cfg.horizon = std::stod(value);
            else if (key == "out") cfg.out_dir = value;
            else if (key == "downsample") cfg.downsample = std::stoul(value);
            else if (key == "breakpoint") {
                const auto comma = value.find(',');
                if (comma == std::string::npos)
                    config_error(path, lineno, "breakpoint needs 't,P'");
                cfg.breakpoints.emplace_back(std::stod(value.substr(0, comma)),
                                             std::stod(value.substr(comma + 1)));
            } else config_error(path, lineno, "unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            config_error(path, lineno, "cannot parse value '" + value + "'");
        } catch (const std::out_of_range&) {
            config_error(path, lineno, "value '" + value + "' out of range");
        }
    }
}

std::vector<ScenarioId> select_scenarios(const RunConfig& cfg) {
    std::vector<std::string> schedules =
        cfg.schedules.empty() ? kAllSchedules : cfg.schedules;
    if (std::find(schedules.begin(), schedules.end(), "all") != schedules.end())
        schedules = kAllSchedules;

    std::vector<ScenarioId> ids;
    auto add_all = [&] {
        for (Case c : kAllCases)
            for (Subcase s : kAllSubcases)
                for (const auto& sched : schedules) ids.push_back({c, s, sched});
    };
    if (cfg.scenarios.empty()) {
        add_all();
        return ids;
    }
    for (const auto& token : cfg.scenarios) {
        if (token == "all") {
            add_all();
        } else if (token.find('/') != std::string::npos) {
            ids.push_back(parse_scenario(token));
        } else {
            for (const auto& sched : schedules)
                ids.push_back(parse_scenario(token + "/" + sched));
        }
    }
    return ids;
}

std::string csv_name(const ScenarioId& id) {
    return to_string(id.case_id) + to_string(id.subcase_id) + "_" + id.schedule + ".csv";
}

int cmd_run(const RunConfig& cfg) {
    if (cfg.step <= 0 || cfg.horizon <= 0)
        throw std::runtime_error("step and horizon must be positive");
    if (cfg.downsample < 1) throw std::runtime_error("downsample must be >= 1");

    std::string out_dir = cfg.out_dir;
    if (out_dir.empty()) {
        const char* env = std::getenv("QMARKET_OUT");
        out_dir = env ? env : ".";
    }
    fs::create_directories(out_dir);

    std::optional<PriceSchedule> custom;
    if (!cfg.breakpoints.empty())
        custom = PriceSchedule::from_breakpoints(cfg.breakpoints);

    const Numerics numerics{cfg.step, cfg.horizon, cfg.lambda};
    const auto ids = select_scenarios(cfg);
    std::vector<GridRow> rows;
    for (const auto& id : ids) {
        if (id.schedule == "custom" && !custom)
            throw std::runtime_error(
                "scenario " + id.str() + " needs breakpoints for the custom schedule");
        const Trajectory traj =
            run_scenario(id, numerics, custom ? &*custom : nullptr);
        const auto [lo, hi] = delta_pi_range(traj);
        rows.push_back({id, lo, hi, traj.validity.t_f, no_transaction(traj)});
        write_file((fs::path(out_dir) / csv_name(id)).string(),
                   trajectory_csv(traj, cfg.downsample));
    }
    write_file((fs::path(out_dir) / "summary.csv").string(), summary_csv(rows));
    std::cout << "wrote " << rows.size() << " scenario file(s) and summary.csv to "
              << out_dir << "\n";
    return 0;
}

int cmd_verify_oracle(const std::vector<int>& cutoffs, const std::string& omega_instance) {
    constexpr std::int64_t kOracleDimCap = 20000;
    MarketCutoffs cut;
    if (!cutoffs.empty()) {
        if (cutoffs.size() != 6)
            throw std::runtime_error("--cutoffs needs 6 values: n k P N K O");
        cut = {cutoffs[0], cutoffs[1], cutoffs[2], cutoffs[3], cutoffs[4], cutoffs[5]};
    }
    std::int64_t dim = 1;
    for (int c : {cut.trader_shares, cut.trader_cash, cut.price, cut.reservoir_shares,
                  cut.reservoir_cash, cut.supply})
        dim *= c + 1;
    if (dim > kOracleDimCap) {
        std::ostringstream os;
        os << "cutoffs (" << cut.trader_shares << "," << cut.trader_cash << "," << cut.price
           << "," << cut.reservoir_shares << "," << cut.reservoir_cash << "," << cut.supply
           << ") give dimension " << dim << " > cap " << kOracleDimCap;
        throw std::runtime_error(os.str());
    }

    bool ok = true;
    const MarketSpace market = make_market_space(cut, 1);
    OracleModelSpec spec;
    spec.params.lambda = 1.0;
    const FockOperator H = hamiltonian(market, spec);
    // cash margins must cover the price transfer of up to `price` quanta
    std::vector<int> margins;
    for (const auto& reg : market.space->registers())
        margins.push_back((reg.label == Register::TraderCash ||
                           reg.label == Register::ReservoirCash)
                              ? cut.price
                              : 1);
    const FockOperator interior = interior_projector(market.space, margins);

    std::cout << "hermiticity: " << (H.is_hermitian() ? "exact" : "BROKEN") << "\n";
    ok = ok && H.is_hermitian();
    const struct {
        const char* name;
        FockOperator q;
    } conserved[] = {{"N", total_shares(market)},
                     {"K", total_cash(market)},
                     {"Gamma", total_gamma(market)}};
    for (const auto& [name, q] : conserved) {
        const double res = commutator_residual(H, q, interior);
        std::cout << "[H, " << name << "] interior residual = " << res << "\n";
        ok = ok && res < 1e-10;
    }

    auto check_instance = [&](const InitialState& init, double f1) {
        const auto [bf1, bf2] = omega12_bruteforce(init, f1);
        const Expectations cf = omega12_closed_form(init, f1);
        const double rel =
            std::max(std::abs(bf1 - cf.omega1) / std::max(1.0, std::abs(cf.omega1)),
                     std::abs(bf2 - cf.omega2) / std::max(1.0, std::abs(cf.omega2)));
        std::cout << "omega(1,2) @ (k=" << init.k << ",k'=" << init.k_prime
                  << ",n'=" << init.n_prime << ",M=" << init.M << "): closed-form ("
                  << cf.omega1.real() << ", " << cf.omega2.real() << "), brute-force ("
                  << bf1.real() << ", " << bf2.real() << "), rel diff " << rel << "\n";
        ok = ok && rel < 1e-9;
    };
    check_instance({0, 4, 2, 3, 1, 0}, 1.0);
    check_instance({0, 5, 1, 4, 2, 0}, 1.0);
    check_instance({0, 2, 3, 2, 0, 0}, 1.0); // M = 0 degenerate case
    if (!omega_instance.empty()) {
        InitialState init;
        if (std::sscanf(omega_instance.c_str(), "%d,%d,%d,%d", &init.k, &init.k_prime,
                        &init.n_prime, &init.M) != 4)
            throw std::runtime_error("--omega-instance needs 'k,k',n',M'");
        check_instance(init, 1e-3);
    }

    std::cout << (ok ? "oracle checks passed" : "oracle checks FAILED") << "\n";
    return ok ? 0 : 1;
}

void cmd_list_scenarios() {
    for (Case c : kAllCases)
        for (Subcase s : kAllSubcases)
            for (const auto& sched : kAllSchedules)
                std::cout << to_string(c) << to_string(s) << "/" << sched << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-algebra market model: fpl dynamics and exact oracle"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;

    auto* run = app.add_subcommand("run", "run scenarios and write CSVs");
    run->add_option("--config", config_path, "config file (flags override)");
    std::vector<std::string> flag_scenarios, flag_schedules;
    double flag_lambda = -1, flag_step = -1, flag_horizon = -1;
    std::string flag_out;
    std::size_t flag_downsample = 0;
    run->add_option("--scenario", flag_scenarios, "scenario id ('Ia/P1', 'Ia', or 'all')");
    run->add_option("--schedule", flag_schedules, "schedule filter (P1..P4, custom, all)");
    run->add_option("--lambda", flag_lambda, "interaction strength");
    run->add_option("--step", flag_step, "grid step h");
    run->add_option("--horizon", flag_horizon, "horizon t0");
    run->add_option("--out", flag_out, "output directory (default $QMARKET_OUT or .)");
    run->add_option("--downsample", flag_downsample, "keep every n-th CSV row");

    auto* verify = app.add_subcommand("verify-oracle", "exact-oracle consistency checks");
    std::vector<int> cutoffs;
    std::string omega_instance;
    verify->add_option("--cutoffs", cutoffs, "six cutoffs: n k P N K O")->expected(6);
    verify->add_option("--omega-instance", omega_instance,
                       "extra equivalence instance 'k,k',n',M'");

    auto* list = app.add_subcommand("list-scenarios", "print the scenario registry");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!config_path.empty()) load_config(config_path, cfg);
            if (!flag_scenarios.empty()) cfg.scenarios = flag_scenarios;
            if (!flag_schedules.empty()) cfg.schedules = flag_schedules;
            if (flag_lambda >= 0) cfg.lambda = flag_lambda;
            if (flag_step > 0) cfg.step = flag_step;
            if (flag_horizon > 0) cfg.horizon = flag_horizon;
            if (!flag_out.empty()) cfg.out_dir = flag_out;
            if (flag_downsample > 0) cfg.downsample = flag_downsample;
            return cmd_run(cfg);
        }
        if (verify->parsed()) return cmd_verify_oracle(cutoffs, omega_instance);
        if (list->parsed()) cmd_list_scenarios();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
