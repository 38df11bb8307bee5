#include "qclink/apc.hpp"

#include <cmath>
#include <stdexcept>

namespace qclink {

PolUnitary ApcState::controller_unitary() const {
    PolUnitary u = waveplate(controller_axes[0], controller_retardances[0]);
    for (int i = 1; i < 4; ++i) {
        u = waveplate(controller_axes[i], controller_retardances[i]) * u;
    }
    return u;
}

void ApcState::check_invariants() const {
    const double overlap = fidelity(normalize(ref_state_1), normalize(ref_state_2));
    if (std::abs(overlap - 0.5) > 1e-6) {
        throw std::invalid_argument("ApcState: reference SOPs must be 45 deg apart");
    }
    if (polarizer_intensity(normalize(ref_state_1), polarizer_1_angle) < 1.0 - 1e-9 ||
        polarizer_intensity(normalize(ref_state_2), polarizer_2_angle) < 1.0 - 1e-9) {
        throw std::invalid_argument("ApcState: polarizers must match reference SOPs");
    }
}

std::pair<double, double> feedback_intensities(const PolUnitary& fiber_u,
                                               const ApcState& apc) {
    const PolUnitary total = apc.controller_unitary() * fiber_u;
    return {polarizer_intensity(apply(total, apc.ref_state_1), apc.polarizer_1_angle),
            polarizer_intensity(apply(total, apc.ref_state_2), apc.polarizer_2_angle)};
}

double feedback_objective(const PolUnitary& fiber_u, const ApcState& apc) {
    auto [i1, i2] = feedback_intensities(fiber_u, apc);
    return i1 + i2;
}

ApcState controller_step(const ApcState& apc, const PolUnitary& fiber_u) {
    if (!(apc.dither_amplitude > 0.0)) {
        throw std::invalid_argument("controller_step: dither amplitude must be > 0");
    }
    ApcState next = apc;
    for (int i = 0; i < 4; ++i) {
        ApcState probe = next;
        probe.controller_retardances[i] = next.controller_retardances[i] + apc.dither_amplitude;
        const double j_plus = feedback_objective(fiber_u, probe);
        probe.controller_retardances[i] = next.controller_retardances[i] - apc.dither_amplitude;
        const double j_minus = feedback_objective(fiber_u, probe);
        const double gradient = (j_plus - j_minus) / (2.0 * apc.dither_amplitude);
        next.controller_retardances[i] += apc.step_gain * gradient;
    }
    ++next.iteration;
    return next;
}

ConvergenceResult converge(ApcState apc, const PolUnitary& fiber_u,
                           double tolerance, int max_iterations,
                           std::uint64_t restart_seed) {
    ConvergenceResult result;
    std::mt19937_64 rng(restart_seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    double best_j = feedback_objective(fiber_u, apc);
    int stall = 0;
    for (int it = 0; it < max_iterations; ++it) {
        apc = controller_step(apc, fiber_u);
        const double j = feedback_objective(fiber_u, apc);
        if (j >= 2.0 - tolerance) {
            result.state = apc;
            result.converged = true;
            result.iterations = it + 1;
            return result;
        }
        if (j > best_j + 1e-9) {
            best_j = j;
            stall = 0;
        } else if (++stall >= 8) {
            // Stuck on a local maximum of J: re-seed the plates.
            for (double& r : apc.controller_retardances) r = uni(rng);
            best_j = feedback_objective(fiber_u, apc);
            stall = 0;
            ++result.restarts;
        }
    }
    result.state = apc;
    result.iterations = max_iterations;
    return result;
}

}  // namespace qclink
