#include "qclink/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qclink/photon_stats.hpp"

namespace qclink {

namespace {

double dark_rate_per_detector(const Scenario& s) {
    return 0.5 * (expected_count_rate(s.detector_a.dark_prob_per_gate, s.detector_a) +
                  expected_count_rate(s.detector_b.dark_prob_per_gate, s.detector_b));
}

double attenuation_factor(const Scenario& s, double z_km) {
    return std::pow(10.0, -s.fiber.attenuation_db_per_km *
                              (z_km - s.fiber.length_km) / 10.0);
}

double visibility_at(const Scenario& s, Direction d, double z_km,
                     const NoiseScenario& ns) {
    const VisibilityInputs base = baseline_inputs(s, d);
    const double att = attenuation_factor(s, z_km);
    VisibilityInputs in;
    in.c1 = base.c1 * att;
    in.c2 = base.c2 * att;
    in.dark_rate = base.dark_rate;
    in.raman_rate = total_background_rate(d, z_km, ns, s.raman);
    return visibility_with_noise(in);
}

}  // namespace

double visibility(double c1, double c2) {
    if (!(c1 + c2 > 0.0)) throw std::invalid_argument("visibility: no counts");
    return std::abs(c1 - c2) / (c1 + c2);
}

double visibility_with_noise(const VisibilityInputs& in) {
    const double denom = in.c1 + in.c2 + 2.0 * in.dark_rate + 2.0 * in.raman_rate;
    if (!(denom > 0.0)) throw std::invalid_argument("visibility_with_noise: empty denominator");
    return (in.c1 - in.c2) / denom;
}

NoiseChain noise_corrected_chain(const VisibilityInputs& in, double control_penalty) {
    if (!(control_penalty > 0.0) || control_penalty > 1.0) {
        throw std::invalid_argument("noise_corrected_chain: penalty must be in (0, 1]");
    }
    NoiseChain chain;
    chain.v_raw = visibility_with_noise(in);
    VisibilityInputs no_raman = in;
    no_raman.raman_rate = 0.0;
    chain.v_minus_raman = visibility_with_noise(no_raman);
    VisibilityInputs signal_only = no_raman;
    signal_only.dark_rate = 0.0;
    chain.v_minus_dark = visibility_with_noise(signal_only);
    chain.v_minus_control_noise = std::min(1.0, chain.v_minus_dark / control_penalty);
    return chain;
}

double qber_from_visibility(double v) {
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("qber: visibility out of [0, 1]");
    return (1.0 - v) / 2.0;
}

double baseline_signal_rate(const Scenario& s, Direction d) {
    const double loss_db = s.total_loss_db(d);
    const double mu = s.source(d).mean_photon_number;
    const double transmitted = mu * std::pow(10.0, -loss_db / 10.0) *
                               s.detector_a.efficiency;
    return s.detector_a.gate_rate_hz * (1.0 - std::exp(-transmitted));
}

double signal_visibility(const Scenario& s, Direction d) {
    const auto [p1, p2] = pbs_split(JonesVector::linear(s.alignment_error_rad(d)),
                                    0.0, s.pbs_extinction_db);
    return (p1 - p2) * s.apc.visibility_penalty;
}

VisibilityInputs baseline_inputs(const Scenario& s, Direction d) {
    const double total = baseline_signal_rate(s, d);
    const double v = signal_visibility(s, d);
    VisibilityInputs in;
    in.c1 = total * (1.0 + v) / 2.0;
    in.c2 = total * (1.0 - v) / 2.0;
    in.dark_rate = dark_rate_per_detector(s);
    in.raman_rate = total_background_rate(d, s.fiber.length_km,
                                          s.noise_scenario(), s.raman);
    return in;
}

SweepResult visibility_vs_distance(const Scenario& s,
                                   const std::vector<double>& z_grid_km) {
    const NoiseScenario ns = s.noise_scenario();
    SweepResult rows;
    rows.reserve(z_grid_km.size());
    for (double z : z_grid_km) {
        SweepRow row;
        row.z_km = z;
        row.v_12 = visibility_at(s, Direction::node1_to_node2, z, ns);
        row.v_21 = visibility_at(s, Direction::node2_to_node1, z, ns);
        row.ber = classical_ber_at(s, z);
        row.raman_12_cps = total_background_rate(Direction::node1_to_node2, z, ns, s.raman);
        row.raman_21_cps = total_background_rate(Direction::node2_to_node1, z, ns, s.raman);
        rows.push_back(row);
    }
    return rows;
}

double max_distance(const Scenario& s, Direction d, double threshold) {
    const NoiseScenario ns = s.noise_scenario();
    const double z_ref = s.fiber.length_km;
    double lo = z_ref;
    double v_lo = visibility_at(s, d, lo, ns);
    if (!(v_lo > threshold)) {
        throw std::runtime_error("max_distance: visibility already below threshold at z_ref");
    }
    double hi = std::max(2.0 * z_ref, z_ref + 10.0);
    while (visibility_at(s, d, hi, ns) > threshold) {
        hi *= 2.0;
        if (hi > 500.0) throw std::runtime_error("max_distance: threshold never reached");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = visibility_at(s, d, mid, ns);
        if (std::abs(v - threshold) < 1e-4 || hi - lo < 0.01) return mid;
        (v > threshold ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double efec_q() {
    // erfc(q / sqrt(2)) / 2 = 3.9e-3, solved by bisection.
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(mid / std::sqrt(2.0)) > 3.9e-3 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BerCalibration ber_calibration(const Scenario& s, double launch_dbm) {
    if (s.ber_anchors.empty()) {
        throw std::runtime_error("ber_calibration: no anchors in scenario");
    }
    // Interpolate the EFEC reach linearly in launch power, clamping at the
    // outermost anchors.
    std::vector<BerReachAnchor> anchors = s.ber_anchors;
    std::sort(anchors.begin(), anchors.end(),
              [](const BerReachAnchor& a, const BerReachAnchor& b) {
                  return a.launch_dbm < b.launch_dbm;
              });
    double reach = anchors.front().efec_reach_km;
    if (launch_dbm >= anchors.back().launch_dbm) {
        reach = anchors.back().efec_reach_km;
    } else if (launch_dbm > anchors.front().launch_dbm) {
        for (std::size_t i = 1; i < anchors.size(); ++i) {
            if (launch_dbm <= anchors[i].launch_dbm) {
                const double t = (launch_dbm - anchors[i - 1].launch_dbm) /
                                 (anchors[i].launch_dbm - anchors[i - 1].launch_dbm);
                reach = anchors[i - 1].efec_reach_km +
                        t * (anchors[i].efec_reach_km - anchors[i - 1].efec_reach_km);
                break;
            }
        }
    }
    BerCalibration cal;
    cal.z_ref_km = s.fiber.length_km;
    cal.alpha_db_per_km = s.fiber.attenuation_db_per_km;
    cal.q_ref = efec_q() * std::pow(10.0, cal.alpha_db_per_km *
                                              (reach - cal.z_ref_km) / 10.0);
    return cal;
}

double classical_ber(double received_power_rel_db, const BerCalibration& cal) {
    const double q = cal.q_ref * std::pow(10.0, received_power_rel_db / 10.0);
    return 0.5 * std::erfc(q / std::sqrt(2.0));
}

double classical_ber_at(const Scenario& s, double z_km) {
    const BerCalibration cal = ber_calibration(s, s.launch_dbm_per_channel());
    return classical_ber(-cal.alpha_db_per_km * (z_km - cal.z_ref_km), cal);
}

ClassicalReach classical_max_distance(const Scenario& s, double efec_threshold) {
    if (!(efec_threshold > 0.0)) {
        throw std::invalid_argument("classical_max_distance: threshold must be > 0");
    }
    ClassicalReach reach;
    if (efec_threshold >= 0.5) {  // erfc-model BER never exceeds 1/2
        reach.unbounded = true;
        reach.z_km = std::numeric_limits<double>::infinity();
        return reach;
    }
    double lo = 0.0;
    double hi = 1000.0;
    if (classical_ber_at(s, hi) < efec_threshold) {
        throw std::runtime_error("classical_max_distance: threshold unreachable");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (classical_ber_at(s, mid) < efec_threshold ? lo : hi) = mid;
    }
    reach.z_km = 0.5 * (lo + hi);
    return reach;
}

Histogram visibility_histogram(const std::vector<double>& samples, int bins) {
    if (samples.empty()) throw std::invalid_argument("visibility_histogram: empty series");
    if (bins < 1) throw std::invalid_argument("visibility_histogram: bins must be >= 1");
    Histogram h;
    const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn, hi = *mx;
    if (hi - lo < 1e-12) hi = lo + 1e-12;  // constant series: one occupied bin
    h.bin_edges.resize(bins + 1);
    for (int i = 0; i <= bins; ++i) {
        h.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / bins;
    }
    h.counts.assign(bins, 0);
    double sum = 0.0, sum_sq = 0.0;
    for (double v : samples) {
        int idx = static_cast<int>((v - lo) / (hi - lo) * bins);
        idx = std::clamp(idx, 0, bins - 1);
        ++h.counts[idx];
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(samples.size());
    h.min = *mn;
    h.mean = sum / n;
    h.stddev = std::sqrt(std::max(0.0, sum_sq / n - h.mean * h.mean));
    return h;
}

}  // namespace qclink
