#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loscover/geometry.hpp"

namespace loscover {

constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Reported link SNR is evaluated at no less than this distance; free-space
// path loss diverges as the separation goes to zero.
constexpr double kMinLinkDistanceM = 1.0;

/// Radio front-end parameters of the transmitter/receiver pair. Defaults are
/// a 60 GHz link with a 45-degree half-power beamwidth directional antenna.
struct RadioParams {
    double fc_hz = 60e9;             // carrier frequency
    double pt_w = 0.5;               // transmit power, watts
    double gt_db = 10.0;             // flat-top antenna gain inside the beam
    double bandwidth_hz = 1e9;
    double noise_psd_dbm_hz = -174.0;
    double snr_threshold_db = 15.0;  // coverage threshold
    double hpbw_deg = 45.0;          // half-power beamwidth

    void validate() const {
        if (!(fc_hz > 0.0)) throw std::invalid_argument("fc_hz must be positive");
        if (!(pt_w > 0.0)) throw std::invalid_argument("pt_w must be positive");
        if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth_hz must be positive");
        if (!(hpbw_deg > 0.0 && hpbw_deg < 180.0))
            throw std::invalid_argument("hpbw_deg must be in (0, 180)");
        if (!std::isfinite(noise_psd_dbm_hz) || !std::isfinite(snr_threshold_db) ||
            !std::isfinite(gt_db))
            throw std::invalid_argument("radio parameters must be finite");
    }
};

inline double noise_power_dbm(const RadioParams& p) {
    return p.noise_psd_dbm_hz + 10.0 * std::log10(p.bandwidth_hz);
}

inline double transmit_power_dbm(const RadioParams& p) {
    return 10.0 * std::log10(p.pt_w * 1000.0);
}

/// Free-space path loss in dB: 20*log10(4*pi*fc*d/c). 20 dB per distance decade.
inline double path_loss_db(const RadioParams& p, double distance_m) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("nonpositive distance");
    return 20.0 * std::log10(4.0 * kPi * p.fc_hz * distance_m / kSpeedOfLight);
}

/// Downlink SNR in dB. Transmit and noise power are both expressed in dBm
/// before subtracting, so the unit offset cancels.
inline double snr_db(const RadioParams& p, double distance_m) {
    return transmit_power_dbm(p) + p.gt_db - path_loss_db(p, distance_m) - noise_power_dbm(p);
}

/// SNR reported for a link, clamped to the 1 m near-field floor so collocated
/// endpoints get a finite value.
inline double snr_floored_db(const RadioParams& p, double distance_m) {
    return snr_db(p, std::max(distance_m, kMinLinkDistanceM));
}

/// Maximum distance at which the SNR still meets the coverage threshold.
/// Closed-form inversion of the path-loss and SNR equations:
/// snr(max_range) == snr_threshold_db exactly.
inline double max_range_m(const RadioParams& p) {
    p.validate();
    const double pl_max =
        transmit_power_dbm(p) + p.gt_db - noise_power_dbm(p) - p.snr_threshold_db;
    return kSpeedOfLight / (4.0 * kPi * p.fc_hz) * std::pow(10.0, pl_max / 20.0);
}

struct LinkBudget {
    double path_loss_db = 0.0;
    double snr_db = 0.0;
    double distance_m = 0.0;
};

inline LinkBudget link_budget(const RadioParams& p, double distance_m) {
    LinkBudget lb;
    lb.distance_m = distance_m;
    lb.path_loss_db = loscover::path_loss_db(p, distance_m);
    lb.snr_db = loscover::snr_db(p, distance_m);
    return lb;
}

}  // namespace loscover
