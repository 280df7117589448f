#pragma once

#include <string>

#include "clf/run_config.hpp"

namespace clf {

inline constexpr int current_fixture_version = 1;

/// Frozen constants the verification commands compare against.
///
/// Reference values are what calibration measured; floors and windows carry
/// the tolerance. A section is usable only once calibrated.
struct Fixtures {
    int version = current_fixture_version;

    bool has_kernel = false;
    double kernel_reference = 0;  ///< min over alphas of min -Re(1/w^2) alpha^2
    double kernel_floor = 0;

    bool has_blowup = false;
    double c_h_reference = 0;     ///< min over alphas of min -Re H on V
    double c_h_floor = 0;
    double ln_m_over_n_lo = 0;    ///< window for log(M(N)/N), N >= 2
    double ln_m_over_n_hi = 0;
    double increment_ratio_max = 0.5;
    double control_spread_max = 4.0;

    Json calibration_config;      ///< config echo of the calibrating run
};

/// Tolerances applied when freezing calibrated values.
inline constexpr double floor_fraction = 0.9;
inline constexpr double window_widen = 1.1;

/// Throws ConfigError if the file is missing, malformed, or of another version.
Fixtures load_fixtures(const std::string& path);
void save_fixtures(const Fixtures& f, const std::string& path);
Json to_json(const Fixtures& f);

} // namespace clf
