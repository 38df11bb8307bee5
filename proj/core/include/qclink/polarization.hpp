#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace qclink {

using complexd = std::complex<double>;

/// Fully polarized state of light as a complex 2-vector (Ex, Ey).
struct JonesVector {
    complexd ex{1.0, 0.0};
    complexd ey{0.0, 0.0};

    double norm_sq() const { return std::norm(ex) + std::norm(ey); }

    static JonesVector linear(double angle_rad) {
        return {std::cos(angle_rad), std::sin(angle_rad)};
    }
    static JonesVector horizontal() { return {1.0, 0.0}; }
    static JonesVector vertical() { return {0.0, 1.0}; }
};

/// 2x2 complex matrix acting on Jones vectors, row-major.
struct PolUnitary {
    std::array<complexd, 4> m{complexd{1, 0}, complexd{0, 0},
                              complexd{0, 0}, complexd{1, 0}};

    static PolUnitary identity() { return {}; }

    PolUnitary operator*(const PolUnitary& o) const {
        return {{m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
                 m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]}};
    }

    PolUnitary dagger() const {
        return {{std::conj(m[0]), std::conj(m[2]),
                 std::conj(m[1]), std::conj(m[3])}};
    }

    complexd det() const { return m[0] * m[3] - m[1] * m[2]; }

    /// Frobenius distance to the identity, ignoring global phase.
    double unitarity_defect() const;
};

/// Normalizes to unit intensity, preserving relative phase.
/// Throws std::invalid_argument on a zero vector ("degenerate state").
JonesVector normalize(const JonesVector& v);

/// Variable waveplate: retardance delta about an axis at theta from x.
PolUnitary waveplate(double axis_rad, double retardance_rad);

/// Product of waveplates, first element applied first.
/// Throws std::invalid_argument on mismatched or empty lists.
PolUnitary unitary_from_waveplates(const std::vector<double>& axes_rad,
                                   const std::vector<double>& retardances_rad);

JonesVector apply(const PolUnitary& u, const JonesVector& v);

/// Malus law for an arbitrary (possibly elliptical) unit input:
/// transmitted fraction through a linear polarizer at the given angle.
double polarizer_intensity(const JonesVector& v, double polarizer_angle_rad);

/// PBS output fractions for a unit input in the given linear basis, with
/// finite extinction: leakage eps = 10^(-ER/10) mixes the ideal ports.
/// The two fractions always sum to 1.
std::pair<double, double> pbs_split(const JonesVector& v, double basis_angle_rad,
                                    double extinction_ratio_db);

/// |<a|b>|^2 for unit vectors; insensitive to global phase.
double fidelity(const JonesVector& a, const JonesVector& b);

/// Wiener walk on the retardances of a fixed waveplate cascade, modelling
/// slow thermal birefringence drift of the fiber.
class DriftProcess {
  public:
    DriftProcess(double rate_rad_per_sqrt_s, std::vector<double> axes_rad,
                 std::vector<double> retardances_rad, std::uint64_t seed);

    /// Default 4-plate plant at alternating 0/45 deg axes, zero retardance.
    static DriftProcess standard(double rate_rad_per_sqrt_s, std::uint64_t seed);

    /// Advances by dt: each retardance gets an independent N(0, rate^2*dt)
    /// increment. Deterministic given the construction seed.
    void step(double dt_s);

    PolUnitary unitary() const;

    double rate() const { return rate_; }
    const std::vector<double>& axes() const { return axes_; }
    const std::vector<double>& retardances() const { return retardances_; }

  private:
    double rate_;
    std::vector<double> axes_;
    std::vector<double> retardances_;  // wrapped to [0, 2pi)
    std::mt19937_64 rng_;
};

}  // namespace qclink
