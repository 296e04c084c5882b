#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "loscover/channel.hpp"
#include "loscover/coverage.hpp"
#include "loscover/rng.hpp"

namespace loscover {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Axis-aligned deployment region with its candidate-grid parameters. The
/// candidate lattice extends boundary_margin_m beyond the region on the four
/// sides and the top, but never below the ground plane.
struct Region {
    double length_m = 1000.0;
    double breadth_m = 1000.0;
    double altitude_m = 100.0;
    double grid_size_m = 20.0;
    double boundary_margin_m = 50.0;

    void validate() const {
        if (!(length_m > 0 && breadth_m > 0 && altitude_m > 0 && grid_size_m > 0 &&
              boundary_margin_m >= 0))
            throw std::invalid_argument("region dimensions must be positive");
        for (double dim : {length_m, breadth_m, altitude_m}) {
            const double cells = dim / grid_size_m;
            if (std::abs(cells - std::round(cells)) > 1e-6)
                throw std::invalid_argument("grid_size_m must divide the region dimensions");
        }
    }

    bool contains(const Vec3& p, double tol = 1e-9) const {
        return p.x >= -tol && p.x <= length_m + tol && p.y >= -tol && p.y <= breadth_m + tol &&
               p.z >= -tol && p.z <= altitude_m + tol;
    }
};

/// One cell of the candidate lattice; the cell center is the admissible
/// transmitter position.
struct GridCandidate {
    std::size_t index = 0;
    Vec3 center;
};

/// Cell centers of the cubic lattice tiling the margin-extended region,
/// ordered by (z, y, x) with x fastest; indices are dense in that order.
/// A partial top layer rounds up to one extra layer of cells.
inline std::vector<GridCandidate> generate_grid(const Region& region) {
    region.validate();
    const double g = region.grid_size_m;
    const double m = region.boundary_margin_m;
    const auto cells = [g](double extent) {
        return static_cast<std::size_t>(std::ceil(extent / g - 1e-9));
    };
    const std::size_t nx = cells(region.length_m + 2.0 * m);
    const std::size_t ny = cells(region.breadth_m + 2.0 * m);
    const std::size_t nz = cells(region.altitude_m + m);

    std::vector<GridCandidate> out;
    out.reserve(nx * ny * nz);
    for (std::size_t k = 0; k < nz; ++k)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                GridCandidate c;
                c.index = out.size();
                c.center = {-m + (static_cast<double>(i) + 0.5) * g,
                            -m + (static_cast<double>(j) + 0.5) * g,
                            (static_cast<double>(k) + 0.5) * g};
                out.push_back(c);
            }
    return out;
}

/// User-population parameters: users are placed in clusters of random size,
/// each cluster a uniform ball sample around a uniformly drawn center.
struct UserGenConfig {
    std::size_t n_users = 100;
    std::size_t cluster_size_min = 10;
    std::size_t cluster_size_max = 15;
    double cluster_radius_m = 50.0;
    double aov_lo_deg = 15.0;
    double aov_hi_deg = 45.0;
    bool lov_hemisphere_up = false;  // restrict view axes to z >= 0

    void validate() const {
        if (n_users < 1) throw std::invalid_argument("n_users must be >= 1");
        if (cluster_size_min < 1 || cluster_size_max < cluster_size_min)
            throw std::invalid_argument("invalid cluster size range");
        if (!(aov_lo_deg > 0.0 && aov_hi_deg <= 180.0 && aov_lo_deg <= aov_hi_deg))
            throw std::invalid_argument("aov interval must lie within (0, 180]");
        if (!(cluster_radius_m > 0.0))
            throw std::invalid_argument("cluster_radius_m must be positive");
    }
};

/// Deterministic clustered user generation. The draw sequence per seed is
/// fixed and part of the contract, in distinct passes:
///   1. cluster sizes (uniform in [min, max], last cluster truncated),
///   2. cluster centers (uniform in the region inset by the cluster radius),
///   3. per-user ball offsets (cluster-major order, clamped to the region),
///   4. per-user angle of view (uniform in the interval),
///   5. per-user view axes (uniform on the sphere, or upper hemisphere).
inline std::vector<User> generate_users(const Region& region, const UserGenConfig& cfg,
                                        std::uint64_t seed) {
    region.validate();
    cfg.validate();
    const double r = cfg.cluster_radius_m;
    const double min_dim = std::min({region.length_m, region.breadth_m, region.altitude_m});
    if (r > min_dim / 2.0)
        throw std::invalid_argument("cluster radius exceeds half the smallest region dimension");

    Rng rng(seed);

    std::vector<std::size_t> sizes;
    std::size_t remaining = cfg.n_users;
    while (remaining > 0) {
        std::size_t s = static_cast<std::size_t>(
            rng.uniform_int(cfg.cluster_size_min, cfg.cluster_size_max));
        s = std::min(s, remaining);
        sizes.push_back(s);
        remaining -= s;
    }

    std::vector<Vec3> centers;
    centers.reserve(sizes.size());
    for (std::size_t c = 0; c < sizes.size(); ++c)
        centers.push_back({rng.uniform(r, region.length_m - r),
                           rng.uniform(r, region.breadth_m - r),
                           rng.uniform(r, region.altitude_m - r)});

    std::vector<User> users(cfg.n_users);
    std::size_t u = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c)
        for (std::size_t i = 0; i < sizes[c]; ++i, ++u) {
            Vec3 p = centers[c] + rng.in_ball(r);
            p.x = std::clamp(p.x, 0.0, region.length_m);
            p.y = std::clamp(p.y, 0.0, region.breadth_m);
            p.z = std::clamp(p.z, 0.0, region.altitude_m);
            users[u].id = static_cast<int>(u);
            users[u].position = p;
        }
    for (auto& usr : users) usr.aov_deg = rng.uniform(cfg.aov_lo_deg, cfg.aov_hi_deg);
    for (auto& usr : users)
        usr.lov_axis = cfg.lov_hemisphere_up ? rng.unit_hemisphere_up() : rng.unit_sphere();
    return users;
}

struct Scenario {
    Region region;
    RadioParams radio;
    std::vector<User> users;
    std::uint64_t seed = 0;
    double aov_lo_deg = 180.0;
    double aov_hi_deg = 180.0;

    void validate() const {
        region.validate();
        radio.validate();
        std::set<int> ids;
        for (const User& u : users) {
            u.validate();
            if (!ids.insert(u.id).second)
                throw std::invalid_argument("duplicate user id " + std::to_string(u.id));
            if (!region.contains(u.position))
                throw std::invalid_argument("user " + std::to_string(u.id) +
                                            " lies outside the region");
            if (u.aov_deg < aov_lo_deg - 1e-9 || u.aov_deg > aov_hi_deg + 1e-9)
                throw std::invalid_argument("user " + std::to_string(u.id) +
                                            " aov outside the scenario interval");
        }
    }
};

inline Scenario make_scenario(const Region& region, const RadioParams& radio,
                              const UserGenConfig& cfg, std::uint64_t seed) {
    Scenario s;
    s.region = region;
    s.radio = radio;
    s.users = generate_users(region, cfg, seed);
    s.seed = seed;
    s.aov_lo_deg = cfg.aov_lo_deg;
    s.aov_hi_deg = cfg.aov_hi_deg;
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// JSON persistence
// ---------------------------------------------------------------------------

namespace detail {

inline void warn_unknown_fields(const nlohmann::ordered_json& j,
                                std::initializer_list<const char*> known,
                                const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) { ok = true; break; }
        if (!ok)
            std::cerr << "warning: ignoring unknown field '" << where << item.key() << "'\n";
    }
}

inline double require_number(const nlohmann::ordered_json& j, const char* field,
                             const std::string& where) {
    if (!j.contains(field))
        throw ParseError(where + ": missing field '" + field + "'");
    if (!j[field].is_number())
        throw ParseError(where + ": field '" + field + "' must be a number");
    return j[field].get<double>();
}

inline Vec3 require_vec3(const nlohmann::ordered_json& j, const char* field,
                         const std::string& where) {
    if (!j.contains(field))
        throw ParseError(where + ": missing field '" + field + "'");
    const auto& a = j[field];
    if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
        !a[2].is_number())
        throw ParseError(where + ": field '" + field + "' must be [x, y, z]");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

}  // namespace detail

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
    nlohmann::ordered_json j;
    j["region"] = {{"length_m", s.region.length_m},
                   {"breadth_m", s.region.breadth_m},
                   {"altitude_m", s.region.altitude_m},
                   {"grid_size_m", s.region.grid_size_m},
                   {"boundary_margin_m", s.region.boundary_margin_m}};
    j["radio"] = {{"fc_hz", s.radio.fc_hz},
                  {"pt_w", s.radio.pt_w},
                  {"gt_db", s.radio.gt_db},
                  {"bandwidth_hz", s.radio.bandwidth_hz},
                  {"noise_psd_dbm_hz", s.radio.noise_psd_dbm_hz},
                  {"snr_threshold_db", s.radio.snr_threshold_db},
                  {"hpbw_deg", s.radio.hpbw_deg}};
    j["users"] = nlohmann::ordered_json::array();
    for (const User& u : s.users)
        j["users"].push_back({{"id", u.id},
                              {"pos", {u.position.x, u.position.y, u.position.z}},
                              {"lov_axis", {u.lov_axis.x, u.lov_axis.y, u.lov_axis.z}},
                              {"aov_deg", u.aov_deg}});
    j["seed"] = s.seed;
    j["aov_interval_deg"] = {s.aov_lo_deg, s.aov_hi_deg};
    return j;
}

inline Scenario scenario_from_json(const nlohmann::ordered_json& j) {
    Scenario s;
    detail::warn_unknown_fields(
        j, {"region", "radio", "users", "seed", "aov_interval_deg"}, "");

    if (j.contains("region")) {
        const auto& r = j["region"];
        detail::warn_unknown_fields(
            r, {"length_m", "breadth_m", "altitude_m", "grid_size_m", "boundary_margin_m"},
            "region.");
        if (r.contains("length_m")) s.region.length_m = r["length_m"].get<double>();
        if (r.contains("breadth_m")) s.region.breadth_m = r["breadth_m"].get<double>();
        if (r.contains("altitude_m")) s.region.altitude_m = r["altitude_m"].get<double>();
        if (r.contains("grid_size_m")) s.region.grid_size_m = r["grid_size_m"].get<double>();
        if (r.contains("boundary_margin_m"))
            s.region.boundary_margin_m = r["boundary_margin_m"].get<double>();
    }
    if (j.contains("radio")) {
        const auto& r = j["radio"];
        detail::warn_unknown_fields(r,
                                    {"fc_hz", "pt_w", "gt_db", "bandwidth_hz",
                                     "noise_psd_dbm_hz", "snr_threshold_db", "hpbw_deg"},
                                    "radio.");
        if (r.contains("fc_hz")) s.radio.fc_hz = r["fc_hz"].get<double>();
        if (r.contains("pt_w")) s.radio.pt_w = r["pt_w"].get<double>();
        if (r.contains("gt_db")) s.radio.gt_db = r["gt_db"].get<double>();
        if (r.contains("bandwidth_hz")) s.radio.bandwidth_hz = r["bandwidth_hz"].get<double>();
        if (r.contains("noise_psd_dbm_hz"))
            s.radio.noise_psd_dbm_hz = r["noise_psd_dbm_hz"].get<double>();
        if (r.contains("snr_threshold_db"))
            s.radio.snr_threshold_db = r["snr_threshold_db"].get<double>();
        if (r.contains("hpbw_deg")) s.radio.hpbw_deg = r["hpbw_deg"].get<double>();
    }
    if (j.contains("users")) {
        if (!j["users"].is_array()) throw ParseError("users: must be an array");
        std::size_t idx = 0;
        for (const auto& ju : j["users"]) {
            const std::string where = "users[" + std::to_string(idx) + "]";
            detail::warn_unknown_fields(ju, {"id", "pos", "lov_axis", "aov_deg"}, where + ".");
            User u;
            u.id = ju.contains("id") ? ju["id"].get<int>() : static_cast<int>(idx);
            u.position = detail::require_vec3(ju, "pos", where);
            u.lov_axis = detail::require_vec3(ju, "lov_axis", where);
            const double n = u.lov_axis.norm();
            if (n == 0.0) throw ParseError(where + ": lov_axis is degenerate");
            // renormalize only when off-unit, so saved axes round-trip bit-exactly
            if (std::abs(n - 1.0) > 1e-9) u.lov_axis = u.lov_axis * (1.0 / n);
            u.aov_deg = detail::require_number(ju, "aov_deg", where);
            s.users.push_back(u);
            ++idx;
        }
    }
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("aov_interval_deg")) {
        const auto& a = j["aov_interval_deg"];
        if (!a.is_array() || a.size() != 2)
            throw ParseError("aov_interval_deg: must be [lo, hi]");
        s.aov_lo_deg = a[0].get<double>();
        s.aov_hi_deg = a[1].get<double>();
    } else if (!s.users.empty()) {
        s.aov_lo_deg = s.aov_hi_deg = s.users.front().aov_deg;
        for (const User& u : s.users) {
            s.aov_lo_deg = std::min(s.aov_lo_deg, u.aov_deg);
            s.aov_hi_deg = std::max(s.aov_hi_deg, u.aov_deg);
        }
    }
    s.validate();
    return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot open for writing: " + path);
    out << scenario_to_json(s).dump(2) << "\n";
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open: " + path);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace loscover
