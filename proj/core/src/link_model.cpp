#include "qclink/link_model.hpp"

#include <cmath>
#include <stdexcept>

namespace qclink {

std::string to_string(Direction d) {
    return d == Direction::node1_to_node2 ? "1->2" : "2->1";
}

std::string to_string(FiberType t) {
    return t == FiberType::dispersion_shifted ? "DS" : "standard";
}

double LossBudget::component_sum_db() const {
    double total = 0.0;
    for (const auto& [name, db] : entries) {
        if (db < 0.0) throw std::invalid_argument("LossBudget: negative loss for " + name);
        total += db;
    }
    return total;
}

double total_loss_db(const LossBudget& budget, const FiberSpec& fiber) {
    return budget.component_sum_db() + fiber.attenuation_db_per_km * fiber.length_km;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double received_power_mw(double launch_dbm, double loss_db) {
    return dbm_to_mw(launch_dbm - loss_db);
}

DgdCheck dgd_constraint(double tau_ps, double spacing_ghz) {
    if (tau_ps < 0.0) throw std::invalid_argument("dgd_constraint: tau must be >= 0");
    if (!(spacing_ghz > 0.0)) throw std::invalid_argument("dgd_constraint: spacing must be > 0");
    const double product = tau_ps * 1e-12 * 2.0 * M_PI * spacing_ghz * 1e9;
    return {product < 1.0, product};
}

ChannelPlan build_channel_plan(int n_classical, double spacing_ghz,
                               double quantum_slot_nm) {
    if (n_classical < 1 || n_classical > 16) {
        throw std::invalid_argument("build_channel_plan: n must be in [1, 16]");
    }
    if (!(spacing_ghz > 0.0) || !(quantum_slot_nm > 0.0)) {
        throw std::invalid_argument("build_channel_plan: invalid grid parameters");
    }
    const double c_nm_thz = kSpeedOfLight * 1e-3;  // nm * THz
    const double spacing_thz = spacing_ghz * 1e-3;
    const double fq = c_nm_thz / quantum_slot_nm;
    // Snap the quantum slot onto the ITU grid.
    const long slot_q = std::lround((fq - kItuAnchorThz) / spacing_thz);

    ChannelPlan plan;
    plan.quantum_wavelength_nm = quantum_slot_nm;
    plan.grid_spacing_ghz = spacing_ghz;
    for (int i = 0; i < n_classical; ++i) {
        const int k = i / 2 + 1;
        const long slot = slot_q + ((i % 2 == 0) ? k : -k);
        if (slot == slot_q) {
            throw std::invalid_argument("build_channel_plan: collision with quantum slot");
        }
        const double f = kItuAnchorThz + static_cast<double>(slot) * spacing_thz;
        plan.classical_wavelengths_nm.push_back(c_nm_thz / f);
    }
    return plan;
}

}  // namespace qclink
