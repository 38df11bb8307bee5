#include "qclink/polarization.hpp"

#include <cmath>
#include <stdexcept>

namespace qclink {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    return r < 0 ? r + kTwoPi : r;
}
}  // namespace

double PolUnitary::unitarity_defect() const {
    PolUnitary p = dagger() * (*this);
    double d = 0.0;
    d += std::norm(p.m[0] - complexd{1, 0});
    d += std::norm(p.m[1]);
    d += std::norm(p.m[2]);
    d += std::norm(p.m[3] - complexd{1, 0});
    return std::sqrt(d);
}

JonesVector normalize(const JonesVector& v) {
    double n = std::sqrt(v.norm_sq());
    if (n <= 0.0 || !std::isfinite(n)) {
        throw std::invalid_argument("normalize: degenerate state");
    }
    return {v.ex / n, v.ey / n};
}

PolUnitary waveplate(double axis_rad, double retardance_rad) {
    // R(theta) * diag(e^{-i d/2}, e^{+i d/2}) * R(-theta)
    const double c = std::cos(axis_rad);
    const double s = std::sin(axis_rad);
    const complexd ef = std::polar(1.0, -retardance_rad / 2.0);
    const complexd es = std::polar(1.0, +retardance_rad / 2.0);
    return {{c * c * ef + s * s * es, c * s * (ef - es),
             c * s * (ef - es), s * s * ef + c * c * es}};
}

PolUnitary unitary_from_waveplates(const std::vector<double>& axes_rad,
                                   const std::vector<double>& retardances_rad) {
    if (axes_rad.size() != retardances_rad.size()) {
        throw std::invalid_argument("unitary_from_waveplates: mismatched lengths");
    }
    if (axes_rad.empty()) {
        throw std::invalid_argument("unitary_from_waveplates: empty cascade");
    }
    PolUnitary u = waveplate(axes_rad[0], retardances_rad[0]);
    for (std::size_t i = 1; i < axes_rad.size(); ++i) {
        u = waveplate(axes_rad[i], retardances_rad[i]) * u;
    }
    return u;
}

JonesVector apply(const PolUnitary& u, const JonesVector& v) {
    return {u.m[0] * v.ex + u.m[1] * v.ey, u.m[2] * v.ex + u.m[3] * v.ey};
}

double polarizer_intensity(const JonesVector& v, double polarizer_angle_rad) {
    const complexd amp = std::cos(polarizer_angle_rad) * v.ex +
                         std::sin(polarizer_angle_rad) * v.ey;
    return std::norm(amp);
}

std::pair<double, double> pbs_split(const JonesVector& v, double basis_angle_rad,
                                    double extinction_ratio_db) {
    if (!(extinction_ratio_db > 0.0)) {
        throw std::invalid_argument("pbs_split: extinction ratio must be > 0 dB");
    }
    const double p1 = polarizer_intensity(v, basis_angle_rad);
    const double p2 = v.norm_sq() - p1;
    const double eps = std::pow(10.0, -extinction_ratio_db / 10.0);
    return {(1.0 - eps) * p1 + eps * p2, (1.0 - eps) * p2 + eps * p1};
}

double fidelity(const JonesVector& a, const JonesVector& b) {
    return std::norm(std::conj(a.ex) * b.ex + std::conj(a.ey) * b.ey);
}

DriftProcess::DriftProcess(double rate_rad_per_sqrt_s, std::vector<double> axes_rad,
                           std::vector<double> retardances_rad, std::uint64_t seed)
    : rate_(rate_rad_per_sqrt_s),
      axes_(std::move(axes_rad)),
      retardances_(std::move(retardances_rad)),
      rng_(seed) {
    if (rate_ < 0.0) throw std::invalid_argument("DriftProcess: rate must be >= 0");
    if (axes_.size() != retardances_.size() || axes_.empty()) {
        throw std::invalid_argument("DriftProcess: mismatched axes/retardances");
    }
    for (double& r : retardances_) r = wrap_2pi(r);
}

DriftProcess DriftProcess::standard(double rate_rad_per_sqrt_s, std::uint64_t seed) {
    const double q = 0.78539816339744830961;  // pi/4
    return DriftProcess(rate_rad_per_sqrt_s, {0.0, q, 0.0, q},
                        {0.0, 0.0, 0.0, 0.0}, seed);
}

void DriftProcess::step(double dt_s) {
    if (!(dt_s > 0.0)) throw std::invalid_argument("DriftProcess::step: dt must be > 0");
    if (rate_ == 0.0) return;
    std::normal_distribution<double> inc(0.0, rate_ * std::sqrt(dt_s));
    for (double& r : retardances_) r = wrap_2pi(r + inc(rng_));
}

PolUnitary DriftProcess::unitary() const {
    return unitary_from_waveplates(axes_, retardances_);
}

}  // namespace qclink
