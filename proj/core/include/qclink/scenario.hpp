#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qclink/apc.hpp"
#include "qclink/link_model.hpp"
#include "qclink/photon_stats.hpp"
#include "qclink/polarization.hpp"
#include "qclink/raman.hpp"

namespace qclink {

/// Closed-loop simulation settings for the polarization stabilizer.
struct ApcSettings {
    double loop_period_s = 0.01;
    double log_period_s = 1.0;
    double visibility_window_s = 10.0;
    double dither_amplitude = 0.02;
    double step_gain = 1.2;
    /// Gaussian retardance jitter per control step, modelling the noise the
    /// control system itself injects into the quantum channel.
    double jitter_sigma = 0.10;
    /// Mean multiplicative visibility penalty of the jitter, used by the
    /// analytic noise-corrected chain.
    double visibility_penalty = 0.98985;
    double drift_rate_rad_per_sqrt_s = 0.05;
    /// Residual drift of uncontrolled pigtails outside the stabilized span.
    bool residual_pigtail_drift = false;
};

/// Classical-receiver calibration anchor: link length at which the BER
/// reaches the EFEC limit for a given launch power.
struct BerReachAnchor {
    double launch_dbm;
    double efec_reach_km;
};

/// One validated simulation configuration covering both directions.
struct Scenario {
    ChannelPlan plan;
    FiberSpec fiber;
    LossBudget budget_12;
    LossBudget budget_21;
    SourceSpec source_node1;
    SourceSpec source_node2;
    DetectorSpec detector_a;  // aligned-port SPCM
    DetectorSpec detector_b;  // orthogonal-port SPCM
    RamanParams raman;
    ApcSettings apc;
    std::vector<double> launch_dbm;  // per classical channel
    double quantum_filter_bw_ghz = 50.0;
    JonesVector quantum_input_sop = JonesVector::horizontal();
    /// Residual manual PBS misalignment per direction (fitted).
    double alignment_error_rad_12 = 0.070868815007;
    double alignment_error_rad_21 = 0.073701157014;
    double pbs_extinction_db = 30.0;
    std::vector<BerReachAnchor> ber_anchors;
    std::uint64_t seed = 42;

    const LossBudget& budget(Direction d) const {
        return d == Direction::node1_to_node2 ? budget_12 : budget_21;
    }
    const SourceSpec& source(Direction d) const {
        return d == Direction::node1_to_node2 ? source_node1 : source_node2;
    }
    double launch_dbm_per_channel() const;
    NoiseScenario noise_scenario() const;
    double total_loss_db(Direction d) const;
    double alignment_error_rad(Direction d) const {
        return d == Direction::node1_to_node2 ? alignment_error_rad_12
                                              : alignment_error_rad_21;
    }
};

/// The 23 km two-classical-channel configuration with calibrated Raman
/// coefficients and fitted receiver imperfections.
Scenario default_paper_scenario();

/// All invariant violations as data; an empty list means valid.
std::vector<std::string> validate(const Scenario& s);

/// Functional update through dotted config keys ("fiber.length_km", ...).
/// Unknown keys throw std::invalid_argument.
Scenario with_overrides(const Scenario& s,
                        const std::map<std::string, std::string>& overrides);

Scenario scenario_from_json_string(const std::string& text);
std::string scenario_to_json_string(const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace qclink
