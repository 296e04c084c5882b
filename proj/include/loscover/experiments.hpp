#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "loscover/scenario.hpp"
#include "loscover/solver.hpp"

namespace loscover {

/// Coverage quality of one solution. Out-of-coverage users contribute an SNR
/// of zero to the average, which is taken over the whole population.
struct Metrics {
    double pct_covered = 0.0;
    double uavs_per_covered = 0.0;  // 0 when nobody is covered
    double avg_snr_db = 0.0;
    std::size_t n_covered = 0;
    std::size_t n_uavs = 0;
};

inline Metrics compute_metrics(const Solution& sol, const Scenario& scenario) {
    Metrics m;
    m.n_uavs = sol.deployments.size();
    std::unordered_map<int, const User*> by_id;
    for (const User& u : scenario.users) by_id.emplace(u.id, &u);

    double snr_sum = 0.0;
    for (const Deployment& d : sol.deployments)
        for (int id : d.users) {
            ++m.n_covered;
            snr_sum += snr_floored_db(scenario.radio,
                                      distance(d.pose.position, by_id.at(id)->position));
        }
    const std::size_t n = scenario.users.size();
    m.pct_covered = n == 0 ? 0.0 : 100.0 * static_cast<double>(m.n_covered) / n;
    m.avg_snr_db = n == 0 ? 0.0 : snr_sum / static_cast<double>(n);
    m.uavs_per_covered =
        m.n_covered == 0 ? 0.0
                         : static_cast<double>(m.n_uavs) / static_cast<double>(m.n_covered);
    return m;
}

/// Audit the solution against the scenario from scratch, then report metrics.
/// Throws AuditError if any invariant fails.
inline Metrics evaluate(const Solution& sol, const Scenario& scenario,
                        std::optional<std::size_t> uav_budget = std::nullopt,
                        const std::vector<GridCandidate>* grid = nullptr) {
    audit_solution(sol, scenario, uav_budget, grid);
    return compute_metrics(sol, scenario);
}

// ---------------------------------------------------------------------------
// Angle-of-view sweep
// ---------------------------------------------------------------------------

/// The angle-of-view intervals swept by default, narrowest first.
inline std::vector<std::array<double, 2>> default_aov_intervals() {
    return {{15.0, 45.0}, {30.0, 90.0}, {60.0, 120.0},
            {90.0, 150.0}, {120.0, 180.0}, {180.0, 180.0}};
}

struct SweepConfig {
    Region region;
    RadioParams radio;
    UserGenConfig usergen;  // aov interval fields are overridden per sweep cell
    std::vector<std::array<double, 2>> intervals = default_aov_intervals();
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<std::string> algorithms = {"greedy", "baseline"};
    int omega_samples = 72;
    std::optional<std::size_t> uav_budget;  // default: one per grid cell
};

struct SweepRow {
    double aov_lo_deg = 0.0;
    double aov_hi_deg = 0.0;
    std::string algorithm;
    std::uint64_t seed = 0;
    Metrics metrics;
    std::uint64_t flos_evals = 0;
    double runtime_ms = 0.0;
};

/// Regenerate users per (interval, seed), solve the identical scenario with
/// each algorithm, audit every solution, and collect one row per cell.
/// Row order is interval-major, then seed, then algorithm.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    if (cfg.seeds.empty() || cfg.intervals.empty())
        throw std::invalid_argument("sweep needs at least one seed and one interval");
    for (const std::string& a : cfg.algorithms)
        if (a != "greedy" && a != "baseline")
            throw std::invalid_argument("sweep algorithms must be greedy or baseline");

    const std::vector<GridCandidate> grid = generate_grid(cfg.region);
    const std::size_t budget = cfg.uav_budget.value_or(grid.size());

    std::vector<SweepRow> rows;
    for (const auto& interval : cfg.intervals) {
        UserGenConfig ug = cfg.usergen;
        ug.aov_lo_deg = interval[0];
        ug.aov_hi_deg = interval[1];
        for (std::uint64_t seed : cfg.seeds) {
            const Scenario scenario = make_scenario(cfg.region, cfg.radio, ug, seed);
            for (const std::string& algo : cfg.algorithms) {
                const Solution sol =
                    algo == "greedy"
                        ? greedy_solve(scenario, grid, budget, cfg.omega_samples)
                        : baseline_solve(scenario, grid, budget);
                SweepRow row;
                row.aov_lo_deg = interval[0];
                row.aov_hi_deg = interval[1];
                row.algorithm = algo;
                row.seed = seed;
                row.metrics = evaluate(sol, scenario, budget, &grid);
                row.flos_evals = sol.stats.flos_evals;
                row.runtime_ms = sol.stats.runtime_ms;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

inline const char* kSweepCsvHeader =
    "aov_lo_deg,aov_hi_deg,algorithm,seed,pct_covered,n_uavs,n_covered,"
    "uavs_per_covered,avg_snr_db,flos_evals,runtime_ms";

/// Fixed-precision CSV emission; apart from runtime_ms the bytes depend only
/// on the sweep inputs.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = kSweepCsvHeader;
    out += '\n';
    char buf[320];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf),
                      "%.6f,%.6f,%s,%llu,%.6f,%zu,%zu,%.6f,%.6f,%llu,%.3f\n",
                      r.aov_lo_deg, r.aov_hi_deg, r.algorithm.c_str(),
                      static_cast<unsigned long long>(r.seed), r.metrics.pct_covered,
                      r.metrics.n_uavs, r.metrics.n_covered, r.metrics.uavs_per_covered,
                      r.metrics.avg_snr_db, static_cast<unsigned long long>(r.flos_evals),
                      r.runtime_ms);
        out += buf;
    }
    return out;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
    out << sweep_to_csv(rows);
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

}  // namespace loscover
