#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "qclink/scenario.hpp"

using namespace qclink;

namespace {

bool has_violation(const std::vector<std::string>& v, const std::string& needle) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& s) {
        return s.find(needle) != std::string::npos;
    });
}

}  // namespace

TEST_CASE("the default configuration carries the measured plant") {
    const Scenario s = default_paper_scenario();
    CHECK(s.fiber.length_km == doctest::Approx(23.0));
    CHECK(s.fiber.mean_dgd_ps == doctest::Approx(0.22));
    CHECK(s.fiber.fiber_type == FiberType::dispersion_shifted);
    CHECK(s.detector_a.dark_prob_per_gate == doctest::Approx(3.7e-5));
    CHECK(s.detector_b.dark_prob_per_gate == doctest::Approx(3.2e-5));
    CHECK(s.detector_a.efficiency == doctest::Approx(0.15));
    CHECK(s.detector_a.gate_rate_hz == doctest::Approx(1e5));
    CHECK(s.quantum_filter_bw_ghz == doctest::Approx(50.0));
    CHECK(s.plan.n_classical() == 2);
    CHECK(s.launch_dbm_per_channel() == doctest::Approx(-19.8));
    CHECK(s.source_node1.mean_photon_number == doctest::Approx(1.0));
}

TEST_CASE("the default configuration validates cleanly") {
    CHECK(validate(default_paper_scenario()).empty());
}

TEST_CASE("excessive group delay is flagged") {
    Scenario s = default_paper_scenario();
    s.fiber.mean_dgd_ps = 2.0;  // tau * 2 pi * 100 GHz = 1.26
    CHECK(has_violation(validate(s), "DGD constraint violated"));
}

TEST_CASE("a channel plan outside the scaling table is flagged") {
    Scenario s = default_paper_scenario();
    s.plan = build_channel_plan(16, 100.0, s.plan.quantum_wavelength_nm);
    s.launch_dbm.assign(16, -19.8);
    CHECK(validate(s).empty());
    s.raman.channel_scaling.rows.clear();
    CHECK(has_violation(validate(s), "uncalibrated configuration"));
}

TEST_CASE("launch powers outside the sanity band are flagged") {
    Scenario s = default_paper_scenario();
    s.launch_dbm = {20.0, 20.0};
    CHECK(has_violation(validate(s), "launch power"));
    s.launch_dbm = {-19.8};
    CHECK(has_violation(validate(s), "channel plan"));
}

TEST_CASE("overrides rewrite nested fields and broadcast over channels") {
    const Scenario s = default_paper_scenario();
    const Scenario hi = with_overrides(s, {{"launch_dbm", "-17.8"}});
    REQUIRE(hi.launch_dbm.size() == 2);
    CHECK(hi.launch_dbm[0] == doctest::Approx(-17.8));
    CHECK(hi.launch_dbm[1] == doctest::Approx(-17.8));

    const Scenario half =
        with_overrides(s, {{"source_node1.mean_photon_number", "0.5"},
                           {"source_node2.mean_photon_number", "0.5"}});
    CHECK(half.source_node1.mean_photon_number == doctest::Approx(0.5));
    CHECK(half.source_node2.mean_photon_number == doctest::Approx(0.5));

    const Scenario longer = with_overrides(s, {{"fiber.length_km", "40"}});
    CHECK(longer.fiber.length_km == doctest::Approx(40.0));
}

TEST_CASE("empty override map is the identity") {
    const Scenario s = default_paper_scenario();
    CHECK(scenario_to_json_string(with_overrides(s, {})) ==
          scenario_to_json_string(s));
}

TEST_CASE("overrides are idempotent") {
    const Scenario s = default_paper_scenario();
    const std::map<std::string, std::string> ov{{"launch_dbm", "-17.8"},
                                                {"fiber.length_km", "30"}};
    const Scenario once = with_overrides(s, ov);
    const Scenario twice = with_overrides(once, ov);
    CHECK(scenario_to_json_string(once) == scenario_to_json_string(twice));
}

TEST_CASE("unknown override keys are rejected") {
    CHECK_THROWS_AS(with_overrides(default_paper_scenario(), {{"no.such.key", "1"}}),
                    std::invalid_argument);
}

TEST_CASE("scenario survives a file round-trip") {
    const Scenario s = default_paper_scenario();
    const std::string path =
        (std::filesystem::temp_directory_path() / "scenario_roundtrip.json").string();
    save_scenario(s, path);
    const Scenario back = load_scenario(path);
    CHECK(scenario_to_json_string(back) == scenario_to_json_string(s));
    CHECK(back.fiber.length_km == s.fiber.length_km);
    CHECK(back.raman.beta_12 == doctest::Approx(s.raman.beta_12).epsilon(1e-12));
    CHECK(back.raman.beta_21 == doctest::Approx(s.raman.beta_21).epsilon(1e-12));
    CHECK(back.seed == s.seed);
    CHECK(back.budget_12.entries == s.budget_12.entries);
    CHECK(back.budget_21.entries == s.budget_21.entries);
    std::remove(path.c_str());
}
