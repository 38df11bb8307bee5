#pragma once

#include <cstdint>
#include <random>

namespace qclink {

/// Weak coherent source: attenuated laser with Poissonian photon number.
struct SourceSpec {
    double mean_photon_number = 1.0;  // photons per detection window
};

/// Gated Geiger-mode single-photon counting module.
struct DetectorSpec {
    double efficiency = 0.15;
    double dark_prob_per_gate = 3.7e-5;
    double gate_rate_hz = 1e5;
    double gate_width_ns = 2.5;
};

/// Per-gate click probability of a gated SPCM fed by a weak coherent pulse
/// through the given loss, in the presence of a background rate already
/// referred to the detector:
///   p = 1 - (1 - d)(1 - p_bg) exp(-mu * 10^(-loss/10) * eta)
double click_probability(double mean_photon_number, double loss_db,
                         const DetectorSpec& det, double background_rate_cps);

double expected_count_rate(double p_click, const DetectorSpec& det);

/// Poisson draw with mean rate*window.
std::int64_t sample_counts(double rate_cps, double window_s, std::mt19937_64& rng);

}  // namespace qclink
