#pragma once

#include <string>
#include <vector>

#include "qclink/link_model.hpp"

namespace qclink {

/// Multiplicative Raman correction for a channel configuration, relative
/// to the single-channel 100 GHz DS anchor (factor 1). Intermediate
/// channel counts interpolate linearly in n.
struct ChannelScalingTable {
    struct Row {
        int n_channels;
        double spacing_ghz;
        FiberType fiber;
        double factor;
    };
    std::vector<Row> rows;

    /// Throws std::out_of_range ("uncalibrated configuration") when the
    /// requested (n, spacing, fiber) is not covered by the table.
    double factor(int n_channels, double spacing_ghz, FiberType fiber) const;

    bool covers(int n_channels, double spacing_ghz, FiberType fiber) const;

    static ChannelScalingTable defaults();
    static ChannelScalingTable from_csv(const std::string& path);
    void to_csv(const std::string& path) const;
};

/// Effective spontaneous-Raman coefficients, calibrated from at-detector
/// count rates. They absorb detector efficiency, gate duty cycle and the
/// reference filter bandwidth.
struct RamanParams {
    double beta_12 = 0.0;  // counts/(s*mW*km), co-propagating
    double beta_21 = 0.0;  // counts/(s*mW*km), counter-propagating
    double alpha_db_per_km = 0.2;
    double filter_bw_ghz = 50.0;  // reference bandwidth of the calibration
    // Configuration the calibration counts were taken in.
    int cal_n_channels = 2;
    double cal_spacing_ghz = 100.0;
    FiberType cal_fiber = FiberType::dispersion_shifted;
    ChannelScalingTable channel_scaling = ChannelScalingTable::defaults();

    double alpha_per_km() const;  // natural units, 1/km
};

/// Co-propagating Raman noise rate at the far-end SPCM:
///   S12(z) = P(0) * beta12 * z * exp(-alpha z)
double s12(double z_km, double launch_mw, const RamanParams& p);

/// Counter-propagating Raman noise rate at the near-end SPCM:
///   S21(z) = P(0) * beta21 / (2 alpha) * (1 - exp(-2 alpha z))
double s21(double z_km, double launch_mw, const RamanParams& p);

/// Inverts the two noise laws at a reference distance. Round-trips the
/// measured inputs exactly. Throws on z_ref = 0 or non-positive counts.
RamanParams calibrate(double z_ref_km, double launch_dbm, double measured_12_cps,
                      double measured_21_cps, double alpha_db_per_km);

/// Raman spectrum is flat across these bandwidths: rate scales as to/from.
double scale_filter(double rate_cps, double from_bw_ghz, double to_bw_ghz);

/// Applies the channel-configuration correction relative to the table anchor.
double scale_channels(double rate_cps, int n_channels, double spacing_ghz,
                      FiberType fiber, const RamanParams& p);

/// Channel configuration for which a total background rate is requested.
struct NoiseScenario {
    double launch_dbm_per_channel = -19.8;
    int n_channels = 2;
    double spacing_ghz = 100.0;
    FiberType fiber = FiberType::dispersion_shifted;
    double filter_bw_ghz = 50.0;
};

/// S(z) referred to one SPCM: the direction's noise law rescaled for
/// filter bandwidth and channel configuration relative to the calibration.
double total_background_rate(Direction direction, double z_km,
                             const NoiseScenario& ns, const RamanParams& p);

}  // namespace qclink
