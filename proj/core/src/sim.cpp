#include "qclink/sim.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

#include "qclink/analysis.hpp"
#include "qclink/photon_stats.hpp"

namespace qclink {

namespace {

PolUnitary rotation(double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    return {{complexd{c, 0}, complexd{-s, 0}, complexd{s, 0}, complexd{c, 0}}};
}

struct DirectionModel {
    Direction dir;
    double signal_rate;      // total over both PBS ports at z_ref
    double raman_rate;       // per detector
    JonesVector basis;       // misaligned analysis basis
};

}  // namespace

std::vector<DriftRecord> run_stabilization(const Scenario& s, double duration_s,
                                           bool control_on, std::uint64_t seed) {
    if (!(duration_s > 0.0)) {
        throw std::invalid_argument("run_stabilization: duration must be > 0");
    }
    const ApcSettings& cfg = s.apc;
    const double dt = cfg.loop_period_s;
    const long steps_per_log = std::max(1L, std::lround(cfg.log_period_s / dt));
    const long total_logs = std::max(1L, std::lround(duration_s / cfg.log_period_s));
    const int window_rows =
        std::max(1, static_cast<int>(std::lround(cfg.visibility_window_s / cfg.log_period_s)));

    DriftProcess fiber = DriftProcess::standard(cfg.drift_rate_rad_per_sqrt_s, seed);
    // Pigtails sit outside the stabilized span; when enabled they drift an
    // order of magnitude slower than the spool and are never compensated.
    DriftProcess pigtail(
        cfg.residual_pigtail_drift ? 0.1 * cfg.drift_rate_rad_per_sqrt_s : 0.0,
        {M_PI / 8}, {0.0}, seed ^ 0x3c6ef372fe94f82bULL);
    std::mt19937_64 jitter_rng(seed ^ 0x6a09e667f3bcc909ULL);
    std::mt19937_64 count_rng(seed ^ 0xbb67ae8584caa73bULL);
    std::normal_distribution<double> jitter(0.0, cfg.jitter_sigma);

    ApcState apc;
    apc.dither_amplitude = cfg.dither_amplitude;
    apc.step_gain = cfg.step_gain;

    const JonesVector sop = normalize(s.quantum_input_sop);
    const double dark_a = expected_count_rate(s.detector_a.dark_prob_per_gate, s.detector_a);
    const double dark_b = expected_count_rate(s.detector_b.dark_prob_per_gate, s.detector_b);
    const double eps = std::pow(10.0, -s.pbs_extinction_db / 10.0);
    const NoiseScenario ns = s.noise_scenario();

    const DirectionModel models[2] = {
        {Direction::node1_to_node2,
         baseline_signal_rate(s, Direction::node1_to_node2),
         total_background_rate(Direction::node1_to_node2, s.fiber.length_km, ns, s.raman),
         apply(rotation(s.alignment_error_rad_12), sop)},
        {Direction::node2_to_node1,
         baseline_signal_rate(s, Direction::node2_to_node1),
         total_background_rate(Direction::node2_to_node1, s.fiber.length_km, ns, s.raman),
         apply(rotation(s.alignment_error_rad_21), sop)},
    };

    std::vector<DriftRecord> records;
    records.reserve(static_cast<std::size_t>(total_logs) * 2);
    std::deque<std::pair<std::int64_t, std::int64_t>> window[2];

    for (long log_idx = 0; log_idx < total_logs; ++log_idx) {
        double p1_sum[2] = {0.0, 0.0};
        double fid_sum[2] = {0.0, 0.0};
        for (long k = 0; k < steps_per_log; ++k) {
            fiber.step(dt);
            pigtail.step(dt);
            const PolUnitary u_fiber = fiber.unitary();
            const PolUnitary u_pig = pigtail.unitary();
            if (control_on) {
                apc = controller_step(apc, u_fiber);
                if (cfg.jitter_sigma > 0.0) {
                    for (double& r : apc.controller_retardances) r += jitter(jitter_rng);
                }
            }
            const PolUnitary u_ctrl = apc.controller_unitary();
            const PolUnitary u_eff[2] = {u_pig * u_ctrl * u_fiber,
                                         u_fiber * u_ctrl * u_pig};
            for (int d = 0; d < 2; ++d) {
                const JonesVector out = apply(u_eff[d], sop);
                p1_sum[d] += fidelity(models[d].basis, out);
                fid_sum[d] += fidelity(sop, out);
            }
        }
        const double t = static_cast<double>(log_idx + 1) * cfg.log_period_s;
        const auto [i1, i2] = feedback_intensities(fiber.unitary(), apc);
        for (int d = 0; d < 2; ++d) {
            const double p1_ideal = p1_sum[d] / static_cast<double>(steps_per_log);
            const double p1 = (1.0 - eps) * p1_ideal + eps * (1.0 - p1_ideal);
            const double rate_a = models[d].signal_rate * p1 + dark_a + models[d].raman_rate;
            const double rate_b = models[d].signal_rate * (1.0 - p1) + dark_b +
                                  models[d].raman_rate;
            DriftRecord rec;
            rec.t_s = t;
            rec.direction = models[d].dir;
            rec.i1 = i1;
            rec.i2 = i2;
            rec.counts_spcm_a = sample_counts(rate_a, cfg.log_period_s, count_rng);
            rec.counts_spcm_b = sample_counts(rate_b, cfg.log_period_s, count_rng);
            rec.fidelity = fid_sum[d] / static_cast<double>(steps_per_log);

            window[d].emplace_back(rec.counts_spcm_a, rec.counts_spcm_b);
            if (static_cast<int>(window[d].size()) > window_rows) window[d].pop_front();
            std::int64_t sum_a = 0, sum_b = 0;
            for (const auto& [a, b] : window[d]) {
                sum_a += a;
                sum_b += b;
            }
            rec.visibility_window =
                (sum_a + sum_b) > 0
                    ? static_cast<double>(std::abs(sum_a - sum_b)) /
                          static_cast<double>(sum_a + sum_b)
                    : 0.0;
            records.push_back(rec);
        }
    }
    return records;
}

std::vector<double> window_visibilities(const std::vector<DriftRecord>& records,
                                        Direction d) {
    std::vector<double> out;
    for (const DriftRecord& r : records) {
        if (r.direction == d) out.push_back(r.visibility_window);
    }
    return out;
}

}  // namespace qclink
