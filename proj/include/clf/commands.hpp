#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clf/counterexample.hpp"
#include "clf/fixtures.hpp"
#include "clf/kernel.hpp"
#include "clf/run_config.hpp"

namespace clf {

/// One named pass/fail line of a report.
struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Result of a verification command: a table for the terminal, a JSON
/// document for files, and an optional CSV.
struct CommandReport {
    std::string command;
    Json config_echo;
    Json metrics;
    std::vector<Check> checks;
    int fixture_version = current_fixture_version;
    std::string table;
    std::string csv;

    bool pass() const;
    Json to_json() const;
};

/// Exit status of the command-line front end.
enum ExitCode : int {
    exit_pass = 0,
    exit_failed = 1,
    exit_usage = 2,
};

// ---- patch measures ---------------------------------------------------------

struct MeasureRow {
    double alpha = 0;
    double w_coefficient = 0;     ///< S(W)/alpha^2 by quadrature
    double v_coefficient = 0;
    double w_analytic = 0;
    double v_analytic = 0;
    double w_deviation = 0;       ///< relative
    double v_deviation = 0;
    double sigma_ratio_w = 0;     ///< Leray over sigma measure of W
    double tolerance = 0;
};

/// 10% for alpha >= 1e-2, 2% for alpha >= 1e-3, 0.5% below.
double measure_tolerance(double alpha);

MeasureRow measure_row(double alpha, const GammaConfig& g, const QuadratureGrid& grid,
                       const Ellipsoid& e);

// ---- kernel bounds ----------------------------------------------------------

struct KernelStudy {
    GammaConfig gammas;
    GammaAdmissibility admissibility{};
    std::vector<KernelBoundReport> same_alpha;   ///< one per config alpha
    std::vector<double> cross_scales;            ///< schedule scales
    std::vector<std::vector<long>> cross_violations; ///< [j][k]: W at scale j, V at scale k
    double cross_min_neg_re = 0;                 ///< unscaled minimum over all cross pairs
    long cross_samples = 0;
};

KernelStudy run_kernel_study(const RunConfig& cfg);

// ---- blow-up ----------------------------------------------------------------

struct BlowupStudy {
    BlowupResult result;
    std::vector<ImageFloorReport> image_floor;            ///< one per config alpha
    std::optional<std::vector<ControlRow>> control;
    double seconds = 0;
};

BlowupStudy run_blowup_study(const RunConfig& cfg, bool with_control);

/// log(M(N)/N) for each row with N >= 2.
std::vector<double> ln_m_over_n(const BlowupResult& r);
/// Least-squares slope of M(N) against N, in units of M(N_max).
double relative_growth_slope(const BlowupResult& r);

std::string blowup_csv(const BlowupResult& r);

// ---- log-Hoelder ------------------------------------------------------------

/// xi at theta2 = -alpha and z at theta2 = +alpha on the circle r1 = 0;
/// |xi - z| = 2 sin(alpha).
PointPair straddle_pair(double alpha, const Ellipsoid& e);

struct HolderRow {
    double alpha = 0;
    double separation = 0;
    double modulus_field = 0;
    double modulus_control = 0;
};

struct QuasimetricBounds {
    double lower_constant = 0;   ///< min d / |xi - z|^(2 delta), delta = max(m1, m2)
    double upper_constant = 0;   ///< max d / |xi - z|
    double max_asymmetry = 0;    ///< max |d(xi, z) - d(z, xi)|
    long samples = 0;
};

QuasimetricBounds quasimetric_bounds(const Ellipsoid& e, long n, std::uint64_t seed);

struct HolderStudy {
    std::vector<HolderRow> rows;
    double growth = 0;           ///< modulus_field(last) / modulus_field(first)
    double control_spread = 0;   ///< max over rows of max(r, 1/r), r = control / control(first)
    QuasimetricBounds quasimetric;
};

inline constexpr double holder_growth_min = 2.0;
inline constexpr double holder_control_spread_max = 1.5;

HolderStudy run_holder_study(const RunConfig& cfg);

// ---- commands ---------------------------------------------------------------

CommandReport cmd_verify_measure(const RunConfig& cfg);
CommandReport cmd_verify_kernel(const RunConfig& cfg, const Fixtures& fx);
/// Throws ConfigError if N < 2 or the fixtures lack the blow-up section.
CommandReport cmd_blowup(const RunConfig& cfg, const Fixtures& fx);
CommandReport cmd_check_log_holder(const RunConfig& cfg);

/// Report for an already computed study. Throws ConfigError if the
/// fixtures lack the needed section.
CommandReport evaluate_kernel(const RunConfig& cfg, const Fixtures& fx, const KernelStudy& s);
CommandReport evaluate_blowup(const RunConfig& cfg, const Fixtures& fx, const BlowupStudy& s);

/// Freeze the measured constants of a study into `base`.
Fixtures calibrate_kernel(const RunConfig& cfg, const KernelStudy& s, Fixtures base);
Fixtures calibrate_blowup(const RunConfig& cfg, const BlowupStudy& s, Fixtures base);

/// Writes <dir>/<command>.json and, if present, <dir>/<command>.csv.
void write_report(const CommandReport& r, const std::string& dir);

} // namespace clf
