#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qclink {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
/// ITU-T G.694.1 DWDM grid anchor.
inline constexpr double kItuAnchorThz = 193.1;

enum class Direction { node1_to_node2, node2_to_node1 };
enum class FiberType { dispersion_shifted, standard };

std::string to_string(Direction d);
std::string to_string(FiberType t);

struct ChannelPlan {
    double quantum_wavelength_nm = 1546.12;
    std::vector<double> classical_wavelengths_nm;
    double grid_spacing_ghz = 100.0;

    int n_classical() const { return static_cast<int>(classical_wavelengths_nm.size()); }
};

struct FiberSpec {
    double length_km = 23.0;
    double attenuation_db_per_km = 0.2;
    double mean_dgd_ps = 0.22;
    FiberType fiber_type = FiberType::dispersion_shifted;
};

struct LossBudget {
    Direction direction = Direction::node1_to_node2;
    std::vector<std::pair<std::string, double>> entries;  // (component, dB)

    double component_sum_db() const;
};

/// Component losses plus fiber attenuation over the full span.
double total_loss_db(const LossBudget& budget, const FiberSpec& fiber);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

double received_power_mw(double launch_dbm, double loss_db);

struct DgdCheck {
    bool pass = true;
    double tau_delta_omega = 0.0;  // tau * 2*pi * spacing
};

/// Polarization-control validity condition: tau * delta_omega < 1 across
/// the control/quantum channel spacing.
DgdCheck dgd_constraint(double tau_ps, double spacing_ghz);

/// Places n classical channels on the ITU grid around the quantum slot,
/// alternating outward (+1, -1, +2, -2, ... grid slots in frequency).
/// Throws if a channel would collide with the quantum slot.
ChannelPlan build_channel_plan(int n_classical, double spacing_ghz,
                               double quantum_slot_nm);

}  // namespace qclink
