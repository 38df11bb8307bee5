#pragma once

#include <cstdint>

#include "qclink/polarization.hpp"

namespace qclink {

/// State of the automatic polarization controller: a 4-plate compensating
/// cascade steered by the transmitted intensities of two non-orthogonal
/// classical reference channels behind linear polarizers.
struct ApcState {
    std::array<double, 4> controller_retardances{0.0, 0.0, 0.0, 0.0};
    std::array<double, 4> controller_axes{0.0, M_PI / 4.0, 0.0, M_PI / 4.0};
    JonesVector ref_state_1 = JonesVector::linear(0.0);
    JonesVector ref_state_2 = JonesVector::linear(M_PI / 4.0);
    double polarizer_1_angle = 0.0;
    double polarizer_2_angle = M_PI / 4.0;
    double dither_amplitude = 0.02;  // rad
    double step_gain = 1.2;
    std::uint64_t iteration = 0;

    PolUnitary controller_unitary() const;

    /// Checks the non-orthogonality invariant |<r1|r2>|^2 = 0.5 and the
    /// polarizer/reference pairing. Throws std::invalid_argument if broken.
    void check_invariants() const;
};

/// Transmitted fractions of the two reference channels after the composed
/// controller*fiber transformation: Ik = |<p_k| U_ctrl U_fiber |ref_k>|^2.
std::pair<double, double> feedback_intensities(const PolUnitary& fiber_u,
                                               const ApcState& apc);

double feedback_objective(const PolUnitary& fiber_u, const ApcState& apc);

/// One sequential dither-and-step pass: for each retardance in turn the
/// objective J = I1 + I2 is probed at +/- dither and the plate moves along
/// the finite-difference gradient estimate.
ApcState controller_step(const ApcState& apc, const PolUnitary& fiber_u);

struct ConvergenceResult {
    ApcState state;
    bool converged = false;
    int iterations = 0;
    int restarts = 0;
};

/// Runs controller_step against a frozen fiber unitary until
/// J >= 2 - tolerance or the iteration budget is spent. Stalls below the
/// target (local maxima of J) trigger a deterministic seeded re-seed of
/// the controller plates.
ConvergenceResult converge(ApcState apc, const PolUnitary& fiber_u,
                           double tolerance = 1e-3, int max_iterations = 500,
                           std::uint64_t restart_seed = 1);

}  // namespace qclink
