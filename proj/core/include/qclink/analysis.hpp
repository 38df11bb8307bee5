#pragma once

#include <vector>

#include "qclink/scenario.hpp"

namespace qclink {

struct VisibilityInputs {
    double c1 = 0.0;         // aligned-port signal counts/s
    double c2 = 0.0;         // orthogonal-port signal counts/s
    double dark_rate = 0.0;  // counts/s per detector
    double raman_rate = 0.0; // counts/s per detector
};

struct SweepRow {
    double z_km;
    double v_12;
    double v_21;
    double ber;
    double raman_12_cps;
    double raman_21_cps;
};

using SweepResult = std::vector<SweepRow>;

/// V = |C1 - C2| / (C1 + C2). Throws when both counts are zero.
double visibility(double c1, double c2);

/// V(z) = (C1 - C2) / (C1 + C2 + 2d + 2S).
double visibility_with_noise(const VisibilityInputs& in);

struct NoiseChain {
    double v_raw;
    double v_minus_raman;
    double v_minus_dark;
    double v_minus_control_noise;
};

/// Successive removal of Raman, dark-count and control-system noise.
/// The control term is a multiplicative visibility penalty.
NoiseChain noise_corrected_chain(const VisibilityInputs& in,
                                 double control_penalty);

/// QBER = (1 - V) / 2 under the visibility-only error model.
double qber_from_visibility(double v);

/// Expected per-direction signal counts and noise rates at the reference
/// (calibration) distance, derived from the weak-coherent pipeline.
VisibilityInputs baseline_inputs(const Scenario& s, Direction d);

/// Total signal count rate (both PBS ports) at the reference distance.
double baseline_signal_rate(const Scenario& s, Direction d);

/// Intrinsic signal visibility (PBS extinction, alignment and control
/// noise; no counting noise terms).
double signal_visibility(const Scenario& s, Direction d);

SweepResult visibility_vs_distance(const Scenario& s,
                                   const std::vector<double>& z_grid_km);

/// Distance at which V(z) crosses the threshold, by bisection with a
/// geometrically expanded bracket. Throws if V(z_ref) is already below the
/// threshold or no crossing exists within 500 km.
double max_distance(const Scenario& s, Direction d, double threshold = 0.78);

/// Single-parameter Gaussian receiver: BER = erfc(Q / sqrt(2)) / 2 with Q
/// proportional to received optical power.
struct BerCalibration {
    double q_ref;            // Q at the reference distance
    double z_ref_km;
    double alpha_db_per_km;
};

/// Q at the EFEC limit (BER = 3.9e-3).
double efec_q();

BerCalibration ber_calibration(const Scenario& s, double launch_dbm);

double classical_ber(double received_power_rel_db, const BerCalibration& cal);

double classical_ber_at(const Scenario& s, double z_km);

struct ClassicalReach {
    double z_km = 0.0;
    bool unbounded = false;
};

ClassicalReach classical_max_distance(const Scenario& s,
                                      double efec_threshold = 3.9e-3);

struct Histogram {
    std::vector<double> bin_edges;   // size bins + 1
    std::vector<std::int64_t> counts;
    double min = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

Histogram visibility_histogram(const std::vector<double>& samples, int bins);

}  // namespace qclink
