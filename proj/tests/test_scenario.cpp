#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>
#include <set>

#include "loscover/scenario.hpp"

using namespace loscover;
namespace fs = std::filesystem;

namespace {

Region small_region() {
    Region r;
    r.length_m = 40;
    r.breadth_m = 40;
    r.altitude_m = 20;
    r.grid_size_m = 20;
    r.boundary_margin_m = 0;
    return r;
}

}  // namespace

TEST_CASE("grid of a 40x40x20 region with no margin") {
    const auto grid = generate_grid(small_region());
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].center == Vec3{10, 10, 10});
    CHECK(grid[1].center == Vec3{30, 10, 10});
    CHECK(grid[2].center == Vec3{10, 30, 10});
    CHECK(grid[3].center == Vec3{30, 30, 10});
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i].index == i);
}

TEST_CASE("default region grid: 55 x 55 x 8 cells") {
    const Region r;  // 1000 x 1000 x 100, cell 20, margin 50
    const auto grid = generate_grid(r);
    CHECK(grid.size() == 55u * 55u * 8u);

    std::set<std::array<double, 3>> centers;
    double zmin = 1e9, zmax = -1e9, xmin = 1e9, xmax = -1e9;
    for (const auto& c : grid) {
        centers.insert({c.center.x, c.center.y, c.center.z});
        zmin = std::min(zmin, c.center.z);
        zmax = std::max(zmax, c.center.z);
        xmin = std::min(xmin, c.center.x);
        xmax = std::max(xmax, c.center.x);
    }
    CHECK(centers.size() == grid.size());  // all unique
    CHECK(xmin == Approx(-40.0));          // margin extends past the boundary
    CHECK(xmax == Approx(1040.0));
    CHECK(zmin == Approx(10.0));           // but never below ground
    CHECK(zmax == Approx(150.0));          // partial top layer rounds up
}

TEST_CASE("region validation") {
    Region r = small_region();
    r.grid_size_m = 30;  // does not divide 40
    CHECK_THROWS_AS(generate_grid(r), std::invalid_argument);
    r = small_region();
    r.altitude_m = -5;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("generated users satisfy their invariants") {
    const Region r;
    UserGenConfig cfg;
    cfg.n_users = 100;
    const auto users = generate_users(r, cfg, 42);
    REQUIRE(users.size() == 100);
    for (std::size_t i = 0; i < users.size(); ++i) {
        CHECK(users[i].id == static_cast<int>(i));
        CHECK_NOTHROW(users[i].validate());
        CHECK(r.contains(users[i].position));
        CHECK(users[i].aov_deg >= cfg.aov_lo_deg);
        CHECK(users[i].aov_deg <= cfg.aov_hi_deg);
    }
}

TEST_CASE("user generation is a pure function of the seed") {
    const Region r;
    UserGenConfig cfg;
    cfg.n_users = 60;
    const Scenario a = make_scenario(r, RadioParams{}, cfg, 7);
    const Scenario b = make_scenario(r, RadioParams{}, cfg, 7);
    CHECK(scenario_to_json(a).dump() == scenario_to_json(b).dump());
    const Scenario c = make_scenario(r, RadioParams{}, cfg, 8);
    CHECK(scenario_to_json(a).dump() != scenario_to_json(c).dump());
}

TEST_CASE("degenerate AoV interval pins every user at 180") {
    const Region r;
    UserGenConfig cfg;
    cfg.n_users = 25;
    cfg.aov_lo_deg = 180.0;
    cfg.aov_hi_deg = 180.0;
    for (const User& u : generate_users(r, cfg, 3)) CHECK(u.aov_deg == 180.0);
}

TEST_CASE("hemisphere-up option keeps view axes above the horizon") {
    const Region r;
    UserGenConfig cfg;
    cfg.n_users = 40;
    cfg.lov_hemisphere_up = true;
    for (const User& u : generate_users(r, cfg, 9)) CHECK(u.lov_axis.z >= 0.0);
}

TEST_CASE("oversized cluster radius is rejected") {
    const Region r;  // altitude 100
    UserGenConfig cfg;
    cfg.cluster_radius_m = 60.0;  // > 100 / 2
    CHECK_THROWS_AS(generate_users(r, cfg, 1), std::invalid_argument);
}

TEST_CASE("scenario JSON round trip") {
    const Region r;
    UserGenConfig cfg;
    cfg.n_users = 30;
    const Scenario s = make_scenario(r, RadioParams{}, cfg, 12);

    const fs::path path = fs::temp_directory_path() / "loscover_test_scenario.json";
    save_scenario(s, path.string());
    const Scenario loaded = load_scenario(path.string());
    CHECK(scenario_to_json(loaded).dump() == scenario_to_json(s).dump());
    fs::remove(path);
}

TEST_CASE("missing user field is reported with its index") {
    nlohmann::ordered_json j;
    j["users"] = {{{"id", 0},
                   {"pos", {1.0, 2.0, 3.0}},
                   {"lov_axis", {0.0, 0.0, 1.0}},
                   {"aov_deg", 90.0}},
                  {{"id", 1}, {"pos", {4.0, 5.0, 6.0}}, {"lov_axis", {0.0, 0.0, 1.0}}}};
    try {
        scenario_from_json(j);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("users[1]") != std::string::npos);
        CHECK(std::string(e.what()).find("aov_deg") != std::string::npos);
    }
}

TEST_CASE("unknown fields warn but do not fail") {
    nlohmann::ordered_json j;
    j["users"] = nlohmann::ordered_json::array();
    j["future_extension"] = 1;
    j["radio"] = {{"fc_hz", 28e9}, {"wiggle", true}};
    const Scenario s = scenario_from_json(j);
    CHECK(s.radio.fc_hz == 28e9);
    CHECK(s.radio.pt_w == 0.5);  // untouched default
}

TEST_CASE("defaults fill omitted sections") {
    const Scenario s = scenario_from_json(nlohmann::ordered_json::object());
    CHECK(s.region.length_m == 1000.0);
    CHECK(s.region.boundary_margin_m == 50.0);
    CHECK(s.radio.fc_hz == 60e9);
    CHECK(s.radio.snr_threshold_db == 15.0);
    CHECK(s.users.empty());
}

TEST_CASE("malformed JSON raises a parse error") {
    const fs::path path = fs::temp_directory_path() / "loscover_test_bad.json";
    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_scenario(path.string()), ParseError);
    fs::remove(path);
    CHECK_THROWS_AS(load_scenario("/nonexistent/nowhere.json"), std::ios_base::failure);
}
