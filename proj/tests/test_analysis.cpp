#include <doctest.h>

#include <cmath>

#include "qclink/analysis.hpp"
#include "qclink/scenario.hpp"

using namespace qclink;

TEST_CASE("two-port visibility") {
    CHECK(visibility(5.0, 5.0) == doctest::Approx(0.0));
    CHECK(visibility(5.0, 0.0) == doctest::Approx(1.0));
    CHECK(visibility(958.0, 42.0) == doctest::Approx(0.916).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(visibility(0.0, 0.0), "visibility: no counts",
                         std::invalid_argument);
}

TEST_CASE("noise terms only appear in the denominator") {
    VisibilityInputs in{100.0, 4.0, 0.0, 0.0};
    CHECK(visibility_with_noise(in) ==
          doctest::Approx(visibility(100.0, 4.0)).epsilon(1e-12));
    in.dark_rate = 3.45;
    in.raman_rate = 1.63;
    CHECK(visibility_with_noise(in) < visibility(100.0, 4.0));
    CHECK(visibility_with_noise(in) ==
          doctest::Approx(96.0 / (104.0 + 2 * 3.45 + 2 * 1.63)).epsilon(1e-12));
    in.raman_rate = 1e12;
    CHECK(visibility_with_noise(in) < 1e-9);
}

TEST_CASE("successive noise removal is monotone and exact at zero noise") {
    VisibilityInputs noiseless{80.0, 2.0, 0.0, 0.0};
    const NoiseChain flat = noise_corrected_chain(noiseless, 1.0);
    CHECK(flat.v_raw == doctest::Approx(flat.v_minus_raman).epsilon(1e-12));
    CHECK(flat.v_minus_raman == doctest::Approx(flat.v_minus_dark).epsilon(1e-12));
    CHECK(flat.v_minus_dark ==
          doctest::Approx(flat.v_minus_control_noise).epsilon(1e-12));

    VisibilityInputs noisy{80.0, 2.0, 3.45, 1.63};
    const NoiseChain chain = noise_corrected_chain(noisy, 0.99);
    CHECK(chain.v_raw <= chain.v_minus_raman);
    CHECK(chain.v_minus_raman <= chain.v_minus_dark);
    CHECK(chain.v_minus_dark <= chain.v_minus_control_noise);
    CHECK(chain.v_minus_control_noise <= 1.0);
}

TEST_CASE("corrected chain matches the reference measurements") {
    const Scenario s = default_paper_scenario();
    const NoiseChain chain = noise_corrected_chain(
        baseline_inputs(s, Direction::node1_to_node2), s.apc.visibility_penalty);
    CHECK(chain.v_raw == doctest::Approx(0.916).epsilon(0.011));
    CHECK(chain.v_minus_raman == doctest::Approx(0.952).epsilon(0.011));
    CHECK(chain.v_minus_dark == doctest::Approx(0.968).epsilon(0.011));
    CHECK(chain.v_minus_control_noise == doctest::Approx(0.988).epsilon(0.011));
}

TEST_CASE("error rate from visibility") {
    CHECK(qber_from_visibility(0.78) == doctest::Approx(0.11).epsilon(1e-15));
    CHECK(qber_from_visibility(1.0) == 0.0);
    CHECK(qber_from_visibility(0.916) == doctest::Approx(0.042).epsilon(1e-12));
    CHECK_THROWS_AS(qber_from_visibility(1.5), std::invalid_argument);
    for (double v : {0.0, 0.3, 0.78, 0.99}) {
        CHECK(1.0 - 2.0 * qber_from_visibility(v) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("reference-length visibilities match the measured baselines") {
    const Scenario s = default_paper_scenario();
    const auto rows = visibility_vs_distance(s, {s.fiber.length_km});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].v_12 == doctest::Approx(0.916).epsilon(0.022));
    CHECK(rows[0].v_21 == doctest::Approx(0.931).epsilon(0.022));
    CHECK(rows[0].v_21 > rows[0].v_12);
}

TEST_CASE("visibility decays with distance and the direction ordering flips") {
    const Scenario s = default_paper_scenario();
    std::vector<double> grid;
    for (double z = 5.0; z <= 120.0; z += 1.0) grid.push_back(z);
    const auto rows = visibility_vs_distance(s, grid);
    bool crossed = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].v_12 < rows[i - 1].v_12);
        CHECK(rows[i].v_21 < rows[i - 1].v_21);
        if (rows[i].v_12 > rows[i].v_21) crossed = true;
    }
    CHECK(crossed);  // the forward direction degrades more slowly far out
}

TEST_CASE("maximum quantum range at both launch powers") {
    const Scenario lo = default_paper_scenario();
    const Scenario hi = with_overrides(lo, {{"launch_dbm", "-17.8"}});

    const double lo21 = max_distance(lo, Direction::node2_to_node1);
    const double hi21 = max_distance(hi, Direction::node2_to_node1);
    CHECK(lo21 == doctest::Approx(61.0).epsilon(3.0 / 61.0));
    CHECK(hi21 == doctest::Approx(55.0).epsilon(3.0 / 55.0));
    CHECK(hi21 < lo21);  // more classical power, shorter quantum reach

    // the backward direction is the binding one at both powers
    CHECK(lo21 < max_distance(lo, Direction::node1_to_node2));
    CHECK(hi21 < max_distance(hi, Direction::node1_to_node2));

    // self-consistency at the returned crossing
    const auto rows = visibility_vs_distance(lo, {lo21});
    CHECK(rows[0].v_21 == doctest::Approx(0.78).epsilon(2e-4));
}

TEST_CASE("threshold crossing errors are reported") {
    Scenario s = default_paper_scenario();
    s.raman.beta_12 = 0.0;
    s.raman.beta_21 = 0.0;
    s.detector_a.dark_prob_per_gate = 0.0;
    s.detector_b.dark_prob_per_gate = 0.0;
    // noise-free link: visibility is independent of distance, so it never
    // falls to the threshold
    CHECK_THROWS_WITH_AS(max_distance(s, Direction::node1_to_node2),
                         "max_distance: threshold never reached",
                         std::runtime_error);
}

TEST_CASE("receiver model hits the error-correction limit anchors") {
    const Scenario lo = default_paper_scenario();
    const Scenario hi = with_overrides(lo, {{"launch_dbm", "-17.8"}});
    CHECK(classical_ber_at(lo, lo.fiber.length_km) <= 1.0e-9);
    CHECK(classical_max_distance(lo).z_km == doctest::Approx(70.0).epsilon(3.0 / 70.0));
    CHECK(classical_max_distance(hi).z_km == doctest::Approx(69.0).epsilon(3.0 / 69.0));

    // Q at the correction limit solves erfc(q / sqrt 2) / 2 = 3.9e-3
    CHECK(efec_q() == doctest::Approx(2.660606738781).epsilon(1e-9));
    CHECK(0.5 * std::erfc(efec_q() / std::sqrt(2.0)) ==
          doctest::Approx(3.9e-3).epsilon(1e-9));

    const ClassicalReach degenerate = classical_max_distance(lo, 1.0);
    CHECK(degenerate.unbounded);
}

TEST_CASE("bit error rate decreases strictly with Q") {
    BerCalibration cal{2.0, 23.0, 0.2};
    CHECK(classical_ber(3.0103, cal) < classical_ber(0.0, cal));  // Q doubled
    CHECK(classical_ber(0.0, cal) < classical_ber(-3.0103, cal));
}

TEST_CASE("directional count-rate asymmetry follows the budget gap") {
    const Scenario s = default_paper_scenario();
    const double ratio = baseline_signal_rate(s, Direction::node2_to_node1) /
                         baseline_signal_rate(s, Direction::node1_to_node2);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("visibility histogram statistics") {
    const Histogram h = visibility_histogram({0.9, 0.9, 0.9}, 5);
    std::int64_t occupied = 0;
    for (auto c : h.counts) occupied += c > 0;
    CHECK(occupied == 1);
    CHECK(h.mean == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(h.stddev == doctest::Approx(0.0).epsilon(1e-9));

    const Histogram g = visibility_histogram({0.1, 0.2, 0.3, 0.4}, 4);
    CHECK(g.min == doctest::Approx(0.1));
    CHECK(g.mean == doctest::Approx(0.25));
    std::int64_t total = 0;
    for (auto c : g.counts) total += c;
    CHECK(total == 4);

    CHECK_THROWS_AS(visibility_histogram({}, 4), std::invalid_argument);
    CHECK_THROWS_AS(visibility_histogram({0.5}, 0), std::invalid_argument);
}

TEST_CASE("quantum reach shrinks with channel count and filter bandwidth") {
    const Scenario base = default_paper_scenario();
    Scenario narrow = base;
    narrow.quantum_filter_bw_ghz = 1.0;
    CHECK(max_distance(narrow, Direction::node2_to_node1) >
          max_distance(base, Direction::node2_to_node1));

    Scenario crowded = base;
    crowded.plan = build_channel_plan(8, 100.0, base.plan.quantum_wavelength_nm);
    crowded.launch_dbm.assign(8, base.launch_dbm_per_channel());
    CHECK(max_distance(crowded, Direction::node2_to_node1) <
          max_distance(base, Direction::node2_to_node1));
}
