#include "qclink/photon_stats.hpp"

#include <cmath>
#include <stdexcept>

namespace qclink {

double click_probability(double mean_photon_number, double loss_db,
                         const DetectorSpec& det, double background_rate_cps) {
    if (mean_photon_number < 0.0) {
        throw std::invalid_argument("click_probability: mu must be >= 0");
    }
    if (det.efficiency < 0.0 || det.efficiency > 1.0 ||
        det.dark_prob_per_gate < 0.0 || det.dark_prob_per_gate > 1.0 ||
        !(det.gate_rate_hz > 0.0)) {
        throw std::invalid_argument("click_probability: detector out of range");
    }
    const double p_bg = background_rate_cps / det.gate_rate_hz;
    if (p_bg < 0.0 || p_bg > 1.0) {
        throw std::invalid_argument("click_probability: background exceeds gate rate");
    }
    const double signal = mean_photon_number *
                          std::pow(10.0, -loss_db / 10.0) * det.efficiency;
    return 1.0 - (1.0 - det.dark_prob_per_gate) * (1.0 - p_bg) * std::exp(-signal);
}

double expected_count_rate(double p_click, const DetectorSpec& det) {
    return p_click * det.gate_rate_hz;
}

std::int64_t sample_counts(double rate_cps, double window_s, std::mt19937_64& rng) {
    if (rate_cps < 0.0) throw std::invalid_argument("sample_counts: rate must be >= 0");
    if (!(window_s > 0.0)) throw std::invalid_argument("sample_counts: window must be > 0");
    const double mean = rate_cps * window_s;
    if (mean == 0.0) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(rng);
}

}  // namespace qclink
