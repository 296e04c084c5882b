#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "loscover/coverage.hpp"
#include "loscover/scenario.hpp"

namespace loscover {

struct AuditError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One placed transmitter: grid cell, pose, and the users it serves.
struct Deployment {
    std::size_t grid_index = 0;
    UavPose pose;
    std::vector<int> users;  // assigned user ids, ascending
    double avg_snr_db = 0.0;
};

struct SolveStats {
    std::uint64_t flos_evals = 0;
    std::uint64_t iterations = 0;
    double runtime_ms = 0.0;
};

struct Solution {
    std::vector<Deployment> deployments;
    std::vector<int> uncovered;  // user ids with no assignment, ascending
    double objective_eq6 = 0.0;  // total assigned SNR / number of deployments
    SolveStats stats;
};

namespace detail {

struct GridChoice {
    std::size_t count = 0;
    double avg_snr = -std::numeric_limits<double>::infinity();
    int anchor_id = std::numeric_limits<int>::max();
    Vec3 axis;
    std::vector<std::uint32_t> covered;  // user indices, ascending
};

// The fixed orientation of the baseline strategy: antenna facing straight down.
inline Vec3 downward_axis() { return {0.0, 0.0, -1.0}; }

// Orientation candidates for one (cell, anchor) pair. A user collocated with
// the cell center is covered by any orientation; represent that case by the
// downward axis alone.
inline std::vector<OrientationCandidate> anchor_candidates(const Vec3& center,
                                                           const User& anchor,
                                                           double hpbw_deg, int n_omega) {
    if ((anchor.position - center).squared_norm() == 0.0) {
        OrientationCandidate c;
        c.axis = downward_axis();
        c.anchor_user = anchor.id;
        c.boresight = true;
        return {c};
    }
    return candidate_orientations(center, anchor.position, hpbw_deg, n_omega, anchor.id);
}

// Best strategy for one grid cell over the orientation candidates of every
// remaining anchor. Candidates are scored by covered count, then average SNR,
// then candidate order (increasing omega, boresight last), then anchor id.
// Counting loops evaluate the full guaranteed-LoS indicator per user.
inline GridChoice eval_grid(const Vec3& center, const std::vector<std::uint32_t>& members,
                            const std::vector<User>& users, const Scenario& scenario,
                            const CoverageLimits& lim, int n_omega, bool fixed_downward,
                            std::uint64_t& flos_evals) {
    std::vector<double> member_snr(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
        member_snr[i] =
            snr_floored_db(scenario.radio, distance(center, users[members[i]].position));

    GridChoice best;
    const auto consider = [&](const Vec3& axis, int anchor_id) {
        const UavPose pose{center, axis};
        std::vector<std::uint32_t> covered;
        double snr_sum = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
            ++flos_evals;
            // Members already satisfy the user-side cone and range condition
            // for this cell (that is what membership means), so f_los reduces
            // to the UAV-side test here.
            if (uav_covers(pose, users[members[i]], lim)) {
                covered.push_back(members[i]);
                snr_sum += member_snr[i];
            }
        }
        if (covered.empty()) return;
        const double avg = snr_sum / static_cast<double>(covered.size());
        const bool better =
            covered.size() > best.count ||
            (covered.size() == best.count &&
             (avg > best.avg_snr || (avg == best.avg_snr && anchor_id < best.anchor_id)));
        if (better) {
            best.count = covered.size();
            best.avg_snr = avg;
            best.anchor_id = anchor_id;
            best.axis = axis;
            best.covered = std::move(covered);
        }
    };

    if (fixed_downward) {
        consider(downward_axis(), std::numeric_limits<int>::max() - 1);
    } else {
        for (std::uint32_t ui : members) {
            const User& anchor = users[ui];
            for (const OrientationCandidate& cand :
                 anchor_candidates(center, anchor, scenario.radio.hpbw_deg, n_omega))
                consider(cand.axis, anchor.id);
        }
    }
    return best;
}

inline Solution solve_loop(const Scenario& scenario, const std::vector<GridCandidate>& grid,
                           std::size_t uav_budget, int n_omega, bool fixed_downward) {
    scenario.validate();
    if (uav_budget < 1) throw std::invalid_argument("uav_budget must be >= 1");
    if (n_omega < 1) throw std::invalid_argument("n_omega_samples must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    const CoverageLimits lim(scenario.radio);
    const std::vector<User>& users = scenario.users;
    Solution sol;

    // Users each cell can possibly serve: the cell lies inside the user's
    // line-of-view region, so at least the boresight orientation works.
    std::vector<std::vector<std::uint32_t>> members(grid.size());
    std::vector<std::size_t> lov_cells;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::uint32_t ui = 0; ui < users.size(); ++ui)
            if (in_lov_region(grid[k].center, users[ui], lim)) members[k].push_back(ui);
        if (!members[k].empty()) lov_cells.push_back(k);
    }

    std::vector<GridChoice> cached(grid.size());
    std::vector<char> dirty(grid.size(), 1);
    std::vector<char> assigned(users.size(), 0);
    double total_snr = 0.0;

    while (sol.deployments.size() < uav_budget) {
        std::size_t pick = grid.size();
        for (std::size_t k : lov_cells) {
            if (members[k].empty()) continue;
            if (dirty[k]) {
                cached[k] = eval_grid(grid[k].center, members[k], users, scenario, lim,
                                      n_omega, fixed_downward, sol.stats.flos_evals);
                dirty[k] = 0;
            }
            if (cached[k].count == 0) continue;
            if (pick == grid.size()) {
                pick = k;
                continue;
            }
            const GridChoice& a = cached[k];
            const GridChoice& b = cached[pick];
            if (a.count > b.count || (a.count == b.count && a.avg_snr > b.avg_snr))
                pick = k;  // remaining ties fall to the smaller grid index
        }
        if (pick == grid.size()) break;  // nothing coverable remains

        const GridChoice& choice = cached[pick];
        Deployment dep;
        dep.grid_index = grid[pick].index;
        dep.pose = {grid[pick].center, choice.axis};
        dep.avg_snr_db = choice.avg_snr;
        for (std::uint32_t ui : choice.covered) {
            dep.users.push_back(users[ui].id);
            assigned[ui] = 1;
            total_snr += snr_floored_db(scenario.radio,
                                        distance(dep.pose.position, users[ui].position));
        }
        std::sort(dep.users.begin(), dep.users.end());
        sol.deployments.push_back(std::move(dep));
        ++sol.stats.iterations;

        for (std::size_t k : lov_cells) {
            if (members[k].empty()) continue;
            const std::size_t before = members[k].size();
            members[k].erase(std::remove_if(members[k].begin(), members[k].end(),
                                            [&](std::uint32_t ui) { return assigned[ui]; }),
                             members[k].end());
            if (members[k].size() != before) dirty[k] = 1;
        }
    }

    for (std::uint32_t ui = 0; ui < users.size(); ++ui)
        if (!assigned[ui]) sol.uncovered.push_back(users[ui].id);
    std::sort(sol.uncovered.begin(), sol.uncovered.end());

    sol.objective_eq6 = sol.deployments.empty()
                            ? 0.0
                            : total_snr / static_cast<double>(sol.deployments.size());
    sol.stats.runtime_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    return sol;
}

}  // namespace detail

/// Greedy placement and orientation: repeatedly deploy the (cell, orientation)
/// strategy covering the most still-uncovered users, breaking ties by higher
/// average SNR, then smaller grid index, then smaller anchor id. Stops when no
/// coverable user remains or the budget is spent.
inline Solution greedy_solve(const Scenario& scenario, const std::vector<GridCandidate>& grid,
                             std::size_t uav_budget, int n_omega_samples = 72) {
    return detail::solve_loop(scenario, grid, uav_budget, n_omega_samples, false);
}

/// Same greedy loop with the orientation space collapsed to the single
/// straight-down vector.
inline Solution baseline_solve(const Scenario& scenario, const std::vector<GridCandidate>& grid,
                               std::size_t uav_budget) {
    return detail::solve_loop(scenario, grid, uav_budget, 1, true);
}

/// Exhaustive search over subsets of candidate (cell, orientation) pairs, for
/// desk-scale instances only. Maximizes lexicographically the number of
/// covered users, then total assigned SNR per deployed transmitter, with each
/// covered user assigned to its highest-SNR covering deployment. Refuses
/// instances whose reduced enumeration exceeds ~1e7 subset combinations.
inline Solution oracle_solve(const Scenario& scenario, const std::vector<GridCandidate>& grid,
                             std::size_t uav_budget, int n_omega_samples = 8) {
    scenario.validate();
    if (uav_budget < 1) throw std::invalid_argument("uav_budget must be >= 1");
    if (n_omega_samples < 1) throw std::invalid_argument("n_omega_samples must be >= 1");
    const std::vector<User>& users = scenario.users;
    if (users.size() > 64)
        throw std::runtime_error("oracle instance too large: more than 64 users");
    const auto t0 = std::chrono::steady_clock::now();

    const CoverageLimits lim(scenario.radio);
    Solution sol;

    struct Pose {
        std::size_t grid_pos;  // position in `grid`
        std::uint64_t mask;
        Vec3 axis;
    };
    std::vector<Pose> poses;
    std::vector<std::vector<double>> snr_rows;  // one per cell that yields poses
    std::vector<std::size_t> pose_row;          // pose -> snr row

    for (std::size_t k = 0; k < grid.size(); ++k) {
        std::map<std::uint64_t, Vec3> seen;  // mask -> first axis producing it
        for (const User& anchor : users) {
            for (const OrientationCandidate& cand : detail::anchor_candidates(
                     grid[k].center, anchor, scenario.radio.hpbw_deg, n_omega_samples)) {
                const UavPose pose{grid[k].center, cand.axis};
                std::uint64_t mask = 0;
                for (std::uint32_t ui = 0; ui < users.size(); ++ui) {
                    ++sol.stats.flos_evals;
                    if (f_los(pose, users[ui], lim)) mask |= (std::uint64_t{1} << ui);
                }
                if (mask != 0) seen.emplace(mask, cand.axis);
            }
        }
        if (seen.empty()) continue;

        const std::size_t row = snr_rows.size();
        {
            std::vector<double> snr(users.size());
            for (std::uint32_t ui = 0; ui < users.size(); ++ui)
                snr[ui] = snr_floored_db(scenario.radio,
                                         distance(grid[k].center, users[ui].position));
            snr_rows.push_back(std::move(snr));
        }

        // Keep only masks maximal within this cell: a superset mask at the
        // same position dominates (identical per-user SNR).
        for (const auto& [mask, axis] : seen) {
            bool dominated = false;
            for (const auto& other : seen)
                if (other.first != mask && (mask & other.first) == mask) {
                    dominated = true;
                    break;
                }
            if (!dominated) {
                poses.push_back({k, mask, axis});
                pose_row.push_back(row);
            }
        }
    }

    // Cross-cell weak dominance: drop a pose whose covered set is contained in
    // another's with at least the same SNR for every shared user.
    {
        const auto dominates = [&](std::size_t a, std::size_t b) {
            if ((poses[b].mask & poses[a].mask) != poses[b].mask) return false;
            std::uint64_t m = poses[b].mask;
            while (m) {
                const int ui = std::countr_zero(m);
                m &= m - 1;
                if (snr_rows[pose_row[a]][ui] < snr_rows[pose_row[b]][ui]) return false;
            }
            return true;
        };
        std::vector<char> drop(poses.size(), 0);
        for (std::size_t i = 0; i < poses.size(); ++i)
            for (std::size_t j = 0; j < poses.size() && !drop[i]; ++j) {
                if (j == i || !dominates(j, i)) continue;
                // mutual domination means equivalent poses: keep the earlier
                if (dominates(i, j) && i < j) continue;
                drop[i] = 1;
            }
        std::vector<Pose> kept;
        std::vector<std::size_t> kept_row;
        for (std::size_t i = 0; i < poses.size(); ++i)
            if (!drop[i]) {
                kept.push_back(poses[i]);
                kept_row.push_back(pose_row[i]);
            }
        poses = std::move(kept);
        pose_row = std::move(kept_row);
    }

    const std::size_t n_poses = poses.size();
    const std::size_t max_size = std::min(uav_budget, n_poses);
    {
        double combos = 0.0;
        double c = 1.0;
        for (std::size_t s = 1; s <= max_size; ++s) {
            c = c * static_cast<double>(n_poses - s + 1) / static_cast<double>(s);
            combos += c;
            if (combos > 1e7)
                throw std::runtime_error(
                    "oracle instance too large: enumeration exceeds 1e7 combinations");
        }
    }

    double best_obj = -std::numeric_limits<double>::infinity();
    std::size_t best_count = 0;
    std::vector<std::size_t> best_subset;

    std::vector<std::size_t> idx;
    for (std::size_t s = 1; s <= max_size; ++s) {
        idx.assign(s, 0);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            ++sol.stats.iterations;
            std::uint64_t or_mask = 0;
            for (std::size_t i : idx) or_mask |= poses[i].mask;
            const std::size_t count = static_cast<std::size_t>(std::popcount(or_mask));

            double total = 0.0;
            std::uint64_t m = or_mask;
            while (m) {
                const int ui = std::countr_zero(m);
                m &= m - 1;
                double snr_best = -std::numeric_limits<double>::infinity();
                for (std::size_t i : idx)
                    if (poses[i].mask >> ui & 1)
                        snr_best = std::max(snr_best, snr_rows[pose_row[i]][ui]);
                total += snr_best;
            }
            const double obj = total / static_cast<double>(s);
            if (count > best_count || (count == best_count && obj > best_obj)) {
                best_count = count;
                best_obj = obj;
                best_subset = idx;
            }

            // next combination
            std::size_t i = s;
            while (i > 0 && idx[i - 1] == n_poses - s + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
    }

    std::vector<char> assigned(users.size(), 0);
    double total_snr = 0.0;
    if (!best_subset.empty()) {
        // Each covered user goes to its highest-SNR covering deployment,
        // earliest deployment on ties.
        std::vector<std::vector<std::uint32_t>> assignment(best_subset.size());
        for (std::uint32_t ui = 0; ui < users.size(); ++ui) {
            std::size_t arg = best_subset.size();
            double snr_best = -std::numeric_limits<double>::infinity();
            for (std::size_t d = 0; d < best_subset.size(); ++d) {
                const Pose& p = poses[best_subset[d]];
                if (!(p.mask >> ui & 1)) continue;
                const double s = snr_rows[pose_row[best_subset[d]]][ui];
                if (s > snr_best) {
                    snr_best = s;
                    arg = d;
                }
            }
            if (arg != best_subset.size()) {
                assignment[arg].push_back(ui);
                assigned[ui] = 1;
                total_snr += snr_best;
            }
        }
        for (std::size_t d = 0; d < best_subset.size(); ++d) {
            const Pose& p = poses[best_subset[d]];
            Deployment dep;
            dep.grid_index = grid[p.grid_pos].index;
            dep.pose = {grid[p.grid_pos].center, p.axis};
            double snr_sum = 0.0;
            for (std::uint32_t ui : assignment[d]) {
                dep.users.push_back(users[ui].id);
                snr_sum += snr_rows[pose_row[best_subset[d]]][ui];
            }
            std::sort(dep.users.begin(), dep.users.end());
            dep.avg_snr_db = dep.users.empty()
                                 ? 0.0
                                 : snr_sum / static_cast<double>(dep.users.size());
            sol.deployments.push_back(std::move(dep));
        }
    }

    for (std::uint32_t ui = 0; ui < users.size(); ++ui)
        if (!assigned[ui]) sol.uncovered.push_back(users[ui].id);
    std::sort(sol.uncovered.begin(), sol.uncovered.end());
    sol.objective_eq6 = sol.deployments.empty()
                            ? 0.0
                            : total_snr / static_cast<double>(sol.deployments.size());
    sol.stats.runtime_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
    return sol;
}

/// Recompute every solution invariant from scratch and throw AuditError on the
/// first violation: pairwise-disjoint assignments, guaranteed LoS for every
/// assignment, per-deployment average SNR, the overall objective, and (when
/// given) the deployment budget and grid consistency.
inline void audit_solution(const Solution& sol, const Scenario& scenario,
                           std::optional<std::size_t> uav_budget = std::nullopt,
                           const std::vector<GridCandidate>* grid = nullptr) {
    const CoverageLimits lim(scenario.radio);
    std::unordered_map<int, const User*> by_id;
    for (const User& u : scenario.users) by_id.emplace(u.id, &u);

    if (uav_budget && sol.deployments.size() > *uav_budget)
        throw AuditError("deployment count " + std::to_string(sol.deployments.size()) +
                         " exceeds budget " + std::to_string(*uav_budget));

    std::unordered_map<int, std::size_t> owner;
    double total_snr = 0.0;
    for (std::size_t d = 0; d < sol.deployments.size(); ++d) {
        const Deployment& dep = sol.deployments[d];
        const std::string tag =
            "deployment " + std::to_string(d) + " (grid " + std::to_string(dep.grid_index) + ")";
        if (grid) {
            if (dep.grid_index >= grid->size())
                throw AuditError(tag + ": grid index out of range");
            if (distance((*grid)[dep.grid_index].center, dep.pose.position) > 1e-9)
                throw AuditError(tag + ": pose is not at the cell center");
        }
        double snr_sum = 0.0;
        for (int id : dep.users) {
            const auto it = by_id.find(id);
            if (it == by_id.end())
                throw AuditError(tag + ": unknown user " + std::to_string(id));
            const auto [prev, fresh] = owner.emplace(id, d);
            if (!fresh)
                throw AuditError("user " + std::to_string(id) +
                                 " assigned to multiple deployments (" +
                                 std::to_string(prev->second) + " and " + std::to_string(d) +
                                 ")");
            if (!f_los(dep.pose, *it->second, lim))
                throw AuditError(tag + ": f_los = 0 for user " + std::to_string(id));
            snr_sum +=
                snr_floored_db(scenario.radio, distance(dep.pose.position, it->second->position));
        }
        const double avg = dep.users.empty()
                               ? 0.0
                               : snr_sum / static_cast<double>(dep.users.size());
        if (std::abs(avg - dep.avg_snr_db) > 1e-9)
            throw AuditError(tag + ": stored avg_snr_db " + std::to_string(dep.avg_snr_db) +
                             " does not match recomputed " + std::to_string(avg));
        total_snr += snr_sum;
    }
    const double obj = sol.deployments.empty()
                           ? 0.0
                           : total_snr / static_cast<double>(sol.deployments.size());
    if (std::abs(obj - sol.objective_eq6) > 1e-9)
        throw AuditError("stored objective_eq6 " + std::to_string(sol.objective_eq6) +
                         " does not match recomputed " + std::to_string(obj));
}

// ---------------------------------------------------------------------------
// JSON persistence (runtime is intentionally not serialized, so equal inputs
// produce byte-identical files)
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json solution_to_json(const Solution& sol) {
    nlohmann::ordered_json j;
    j["deployments"] = nlohmann::ordered_json::array();
    for (const Deployment& d : sol.deployments)
        j["deployments"].push_back(
            {{"grid_index", d.grid_index},
             {"pos", {d.pose.position.x, d.pose.position.y, d.pose.position.z}},
             {"orient", {d.pose.orientation.x, d.pose.orientation.y, d.pose.orientation.z}},
             {"users", d.users},
             {"avg_snr_db", d.avg_snr_db}});
    j["uncovered"] = sol.uncovered;
    j["objective_eq6"] = sol.objective_eq6;
    j["stats"] = {{"flos_evals", sol.stats.flos_evals}, {"iterations", sol.stats.iterations}};
    return j;
}

inline Solution solution_from_json(const nlohmann::ordered_json& j) {
    Solution sol;
    if (j.contains("deployments")) {
        std::size_t idx = 0;
        for (const auto& jd : j["deployments"]) {
            const std::string where = "deployments[" + std::to_string(idx++) + "]";
            Deployment d;
            d.grid_index = static_cast<std::size_t>(
                detail::require_number(jd, "grid_index", where));
            d.pose.position = detail::require_vec3(jd, "pos", where);
            d.pose.orientation = detail::require_vec3(jd, "orient", where);
            if (!jd.contains("users") || !jd["users"].is_array())
                throw ParseError(where + ": missing field 'users'");
            for (const auto& u : jd["users"]) d.users.push_back(u.get<int>());
            d.avg_snr_db = detail::require_number(jd, "avg_snr_db", where);
            sol.deployments.push_back(std::move(d));
        }
    }
    if (j.contains("uncovered"))
        for (const auto& u : j["uncovered"]) sol.uncovered.push_back(u.get<int>());
    if (j.contains("objective_eq6")) sol.objective_eq6 = j["objective_eq6"].get<double>();
    if (j.contains("stats")) {
        const auto& st = j["stats"];
        if (st.contains("flos_evals"))
            sol.stats.flos_evals = st["flos_evals"].get<std::uint64_t>();
        if (st.contains("iterations"))
            sol.stats.iterations = st["iterations"].get<std::uint64_t>();
    }
    return sol;
}

inline void save_solution(const Solution& sol, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
    out << solution_to_json(sol).dump(2) << "\n";
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

inline Solution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open: " + path);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return solution_from_json(j);
}

}  // namespace loscover
