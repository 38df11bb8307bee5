#include "qclink/raman.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qclink {

namespace {
constexpr double kLn10Over10 = 0.23025850929940456840;

FiberType fiber_from_string(const std::string& s) {
    if (s == "DS") return FiberType::dispersion_shifted;
    if (s == "standard") return FiberType::standard;
    throw std::invalid_argument("unknown fiber type: " + s);
}
}  // namespace

double ChannelScalingTable::factor(int n_channels, double spacing_ghz,
                                   FiberType fiber) const {
    const Row* lower = nullptr;
    const Row* upper = nullptr;
    for (const Row& r : rows) {
        if (r.spacing_ghz != spacing_ghz || r.fiber != fiber) continue;
        if (r.n_channels == n_channels) return r.factor;
        if (r.n_channels < n_channels &&
            (!lower || r.n_channels > lower->n_channels)) {
            lower = &r;
        }
        if (r.n_channels > n_channels &&
            (!upper || r.n_channels < upper->n_channels)) {
            upper = &r;
        }
    }
    if (lower && upper) {
        const double t = static_cast<double>(n_channels - lower->n_channels) /
                         static_cast<double>(upper->n_channels - lower->n_channels);
        return lower->factor + t * (upper->factor - lower->factor);
    }
    throw std::out_of_range("uncalibrated configuration");
}

bool ChannelScalingTable::covers(int n_channels, double spacing_ghz,
                                 FiberType fiber) const {
    try {
        factor(n_channels, spacing_ghz, fiber);
        return true;
    } catch (const std::out_of_range&) {
        return false;
    }
}

ChannelScalingTable ChannelScalingTable::defaults() {
    // Anchors: factor(1, 100, DS) = 1; the standard-fiber 1 GHz-filter
    // 16-channel sweeps cross V = 0.78 at 44 km (100 GHz) and 34 km
    // (200 GHz) under the default scenario.
    constexpr double kStd100PerChannel = 0.2913994;
    constexpr double kStd200PerChannel = 0.4680623;
    constexpr double kDs200PerChannel = 1.606256;
    ChannelScalingTable t;
    for (int n : {1, 2, 4, 8, 16}) {
        t.rows.push_back({n, 100.0, FiberType::dispersion_shifted, static_cast<double>(n)});
        t.rows.push_back({n, 200.0, FiberType::dispersion_shifted, kDs200PerChannel * n});
        t.rows.push_back({n, 100.0, FiberType::standard, kStd100PerChannel * n});
        t.rows.push_back({n, 200.0, FiberType::standard, kStd200PerChannel * n});
    }
    return t;
}

ChannelScalingTable ChannelScalingTable::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scaling table: " + path);
    ChannelScalingTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (first) {  // header
            first = false;
            continue;
        }
        std::istringstream ss(line);
        std::string n_s, sp_s, fib_s, f_s;
        if (!std::getline(ss, n_s, ',') || !std::getline(ss, sp_s, ',') ||
            !std::getline(ss, fib_s, ',') || !std::getline(ss, f_s, ',')) {
            throw std::runtime_error("malformed scaling table row: " + line);
        }
        t.rows.push_back({std::stoi(n_s), std::stod(sp_s), fiber_from_string(fib_s),
                          std::stod(f_s)});
    }
    return t;
}

void ChannelScalingTable::to_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scaling table: " + path);
    out << "n,spacing_ghz,fiber_type,factor\n";
    char buf[64];
    for (const Row& r : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.6g,%s,%.17g\n", r.n_channels,
                      r.spacing_ghz, to_string(r.fiber).c_str(), r.factor);
        out << buf;
    }
}

double RamanParams::alpha_per_km() const { return alpha_db_per_km * kLn10Over10; }

double s12(double z_km, double launch_mw, const RamanParams& p) {
    if (z_km < 0.0) throw std::invalid_argument("s12: z must be >= 0");
    return launch_mw * p.beta_12 * z_km * std::exp(-p.alpha_per_km() * z_km);
}

double s21(double z_km, double launch_mw, const RamanParams& p) {
    if (z_km < 0.0) throw std::invalid_argument("s21: z must be >= 0");
    const double a = p.alpha_per_km();
    return launch_mw * p.beta_21 / (2.0 * a) * (1.0 - std::exp(-2.0 * a * z_km));
}

RamanParams calibrate(double z_ref_km, double launch_dbm, double measured_12_cps,
                      double measured_21_cps, double alpha_db_per_km) {
    if (!(z_ref_km > 0.0)) throw std::invalid_argument("calibrate: degenerate inversion at z_ref = 0");
    if (!(measured_12_cps > 0.0) || !(measured_21_cps > 0.0)) {
        throw std::invalid_argument("calibrate: measured rates must be > 0");
    }
    RamanParams p;
    p.alpha_db_per_km = alpha_db_per_km;
    const double a = p.alpha_per_km();
    const double launch_mw = dbm_to_mw(launch_dbm);
    p.beta_12 = measured_12_cps / (launch_mw * z_ref_km * std::exp(-a * z_ref_km));
    p.beta_21 = measured_21_cps * 2.0 * a /
                (launch_mw * (1.0 - std::exp(-2.0 * a * z_ref_km)));
    return p;
}

double scale_filter(double rate_cps, double from_bw_ghz, double to_bw_ghz) {
    if (!(from_bw_ghz > 0.0) || !(to_bw_ghz > 0.0)) {
        throw std::invalid_argument("scale_filter: bandwidths must be > 0");
    }
    return rate_cps * to_bw_ghz / from_bw_ghz;
}

double scale_channels(double rate_cps, int n_channels, double spacing_ghz,
                      FiberType fiber, const RamanParams& p) {
    return rate_cps * p.channel_scaling.factor(n_channels, spacing_ghz, fiber);
}

double total_background_rate(Direction direction, double z_km,
                             const NoiseScenario& ns, const RamanParams& p) {
    const double launch_mw = dbm_to_mw(ns.launch_dbm_per_channel);
    const double base = direction == Direction::node1_to_node2
                            ? s12(z_km, launch_mw, p)
                            : s21(z_km, launch_mw, p);
    const double filtered = scale_filter(base, p.filter_bw_ghz, ns.filter_bw_ghz);
    const double cal_factor =
        p.channel_scaling.factor(p.cal_n_channels, p.cal_spacing_ghz, p.cal_fiber);
    return scale_channels(filtered, ns.n_channels, ns.spacing_ghz, ns.fiber, p) /
           cal_factor;
}

}  // namespace qclink
