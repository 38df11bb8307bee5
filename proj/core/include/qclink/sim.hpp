#pragma once

#include <cstdint>
#include <vector>

#include "qclink/apc.hpp"
#include "qclink/scenario.hpp"

namespace qclink {

/// One logged row of a stabilization run, per direction.
struct DriftRecord {
    double t_s;
    Direction direction;
    double i1;  // feedback channel intensities
    double i2;
    std::int64_t counts_spcm_a;
    std::int64_t counts_spcm_b;
    double fidelity;            // quantum SOP fidelity through the link
    double visibility_window;   // trailing-window count visibility
};

/// Closed-loop (or free-running, when control_on is false) simulation of
/// the drifting fiber, the dither controller and the photon-counting
/// chain. Deterministic given the seed.
std::vector<DriftRecord> run_stabilization(const Scenario& s, double duration_s,
                                           bool control_on, std::uint64_t seed);

/// Convenience views over a two-direction record series.
std::vector<double> window_visibilities(const std::vector<DriftRecord>& records,
                                        Direction d);

}  // namespace qclink
