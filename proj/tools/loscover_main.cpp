// Command-line front end: scenario generation, solving, AoV sweeps, and
// solution verification.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loscover/loscover.hpp"

namespace {

using namespace loscover;

struct RegionFlags {
    Region region;
    void attach(CLI::App* cmd) {
        cmd->add_option("--length", region.length_m, "Region length, m");
        cmd->add_option("--breadth", region.breadth_m, "Region breadth, m");
        cmd->add_option("--altitude", region.altitude_m, "Region altitude, m");
        cmd->add_option("--grid-size", region.grid_size_m, "Cubic grid cell size, m");
        cmd->add_option("--margin", region.boundary_margin_m,
                        "Candidate-grid margin outside the region, m");
    }
};

struct RadioFlags {
    RadioParams radio;
    void attach(CLI::App* cmd) {
        cmd->add_option("--fc-hz", radio.fc_hz, "Carrier frequency, Hz");
        cmd->add_option("--pt-w", radio.pt_w, "Transmit power, W");
        cmd->add_option("--gt-db", radio.gt_db, "Antenna gain, dB");
        cmd->add_option("--bandwidth-hz", radio.bandwidth_hz, "Bandwidth, Hz");
        cmd->add_option("--noise-psd", radio.noise_psd_dbm_hz, "Noise PSD, dBm/Hz");
        cmd->add_option("--snr-threshold", radio.snr_threshold_db,
                        "Coverage SNR threshold, dB");
        cmd->add_option("--hpbw", radio.hpbw_deg, "Antenna half-power beamwidth, deg");
    }
};

struct UserFlags {
    UserGenConfig cfg;
    void attach(CLI::App* cmd) {
        cmd->add_option("--users", cfg.n_users, "Number of users");
        cmd->add_option("--cluster-min", cfg.cluster_size_min, "Smallest cluster size");
        cmd->add_option("--cluster-max", cfg.cluster_size_max, "Largest cluster size");
        cmd->add_option("--cluster-radius", cfg.cluster_radius_m, "Cluster radius, m");
        cmd->add_flag("--lov-hemisphere-up", cfg.lov_hemisphere_up,
                      "Draw view axes from the upper hemisphere only");
    }
};

std::vector<std::array<double, 2>> parse_intervals(const std::string& text) {
    std::vector<std::array<double, 2>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("interval must look like lo:hi, got '" + item + "'");
        out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    }
    if (out.empty()) throw std::invalid_argument("no intervals given");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"3D placement and orientation planner for directional-antenna "
                 "aerial base stations with guaranteed line-of-sight coverage"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a clustered-user scenario JSON");
    RegionFlags gen_region;
    RadioFlags gen_radio;
    UserFlags gen_users;
    std::string gen_out;
    std::uint64_t gen_seed = 1;
    gen_region.attach(gen);
    gen_radio.attach(gen);
    gen_users.attach(gen);
    gen->add_option("--out", gen_out, "Output scenario path")->required();
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--aov-lo", gen_users.cfg.aov_lo_deg, "AoV interval low, deg");
    gen->add_option("--aov-hi", gen_users.cfg.aov_hi_deg, "AoV interval high, deg");

    // solve
    auto* solve = app.add_subcommand("solve", "Place and orient UAVs for a scenario");
    std::string solve_scenario, solve_out, solve_algo = "greedy";
    std::size_t solve_budget = 0;
    int solve_omega = 72;
    solve->add_option("--scenario", solve_scenario, "Scenario JSON path")->required();
    solve->add_option("--out", solve_out, "Output solution path")->required();
    solve->add_option("--algo", solve_algo, "greedy | baseline | oracle")
        ->check(CLI::IsMember({"greedy", "baseline", "oracle"}));
    solve->add_option("--budget", solve_budget, "UAV budget (0 = one per grid cell)");
    solve->add_option("--omega-samples", solve_omega,
                      "Boundary orientation samples per (cell, anchor) pair");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run the AoV-interval sweep and emit CSV");
    RegionFlags sweep_region;
    RadioFlags sweep_radio;
    UserFlags sweep_users;
    std::string sweep_out, sweep_intervals, sweep_algos = "greedy,baseline";
    std::size_t sweep_seeds = 10;
    std::size_t sweep_budget = 0;
    int sweep_omega = 72;
    sweep_region.attach(sweep);
    sweep_radio.attach(sweep);
    sweep_users.attach(sweep);
    sweep->add_option("--out", sweep_out, "Output CSV path")->required();
    sweep->add_option("--seeds", sweep_seeds, "Number of seeds (1..N)")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--intervals", sweep_intervals,
                      "AoV intervals as lo:hi[,lo:hi...] (default: the standard six)");
    sweep->add_option("--algos", sweep_algos, "Comma-separated algorithms");
    sweep->add_option("--budget", sweep_budget, "UAV budget (0 = one per grid cell)");
    sweep->add_option("--omega-samples", sweep_omega, "Boundary orientation samples");

    // verify
    auto* verify = app.add_subcommand("verify", "Audit a solution against its scenario");
    std::string verify_scenario, verify_solution;
    std::size_t verify_budget = 0;
    verify->add_option("--scenario", verify_scenario, "Scenario JSON path")->required();
    verify->add_option("--solution", verify_solution, "Solution JSON path")->required();
    verify->add_option("--budget", verify_budget, "UAV budget to enforce (0 = skip)");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        const Scenario s =
            make_scenario(gen_region.region, gen_radio.radio, gen_users.cfg, gen_seed);
        save_scenario(s, gen_out);
        std::cout << "wrote " << gen_out << " (" << s.users.size() << " users)\n";
        return 0;
    }

    if (solve->parsed()) {
        const Scenario s = load_scenario(solve_scenario);
        const std::vector<GridCandidate> grid = generate_grid(s.region);
        const std::size_t budget = solve_budget == 0 ? grid.size() : solve_budget;
        Solution sol;
        if (solve_algo == "greedy")
            sol = greedy_solve(s, grid, budget, solve_omega);
        else if (solve_algo == "baseline")
            sol = baseline_solve(s, grid, budget);
        else
            sol = oracle_solve(s, grid, budget, solve_omega);
        const Metrics m = evaluate(sol, s, budget, &grid);
        save_solution(sol, solve_out);
        std::printf("%s: %zu/%zu users covered (%.1f%%), %zu UAVs, objective %.3f\n",
                    solve_algo.c_str(), m.n_covered, s.users.size(), m.pct_covered,
                    m.n_uavs, sol.objective_eq6);
        return 0;
    }

    if (sweep->parsed()) {
        SweepConfig cfg;
        cfg.region = sweep_region.region;
        cfg.radio = sweep_radio.radio;
        cfg.usergen = sweep_users.cfg;
        if (!sweep_intervals.empty()) cfg.intervals = parse_intervals(sweep_intervals);
        cfg.seeds.clear();
        for (std::uint64_t i = 1; i <= sweep_seeds; ++i) cfg.seeds.push_back(i);
        cfg.algorithms.clear();
        std::stringstream ss(sweep_algos);
        std::string algo;
        while (std::getline(ss, algo, ',')) cfg.algorithms.push_back(algo);
        cfg.omega_samples = sweep_omega;
        if (sweep_budget > 0) cfg.uav_budget = sweep_budget;
        const std::vector<SweepRow> rows = run_sweep(cfg);
        write_sweep_csv(rows, sweep_out);
        std::cout << "wrote " << sweep_out << " (" << rows.size() << " rows)\n";
        return 0;
    }

    if (verify->parsed()) {
        const Scenario s = load_scenario(verify_scenario);
        const Solution sol = load_solution(verify_solution);
        const std::vector<GridCandidate> grid = generate_grid(s.region);
        const std::optional<std::size_t> budget =
            verify_budget == 0 ? std::nullopt : std::optional<std::size_t>(verify_budget);
        const Metrics m = evaluate(sol, s, budget, &grid);
        std::printf("OK: %zu/%zu users covered (%.1f%%), %zu UAVs\n", m.n_covered,
                    s.users.size(), m.pct_covered, m.n_uavs);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::ios_base::failure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const loscover::AuditError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return 1;
    } catch (const loscover::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
