#pragma once

#include <span>
#include <string>
#include <string_view>

#include "clf/geometry.hpp"
#include "clf/quadrature.hpp"

namespace clf {

/// Radial band coefficients of the source (g1, g2) and target (g3, g4) patches.
struct GammaConfig {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double g4 = 0.0;

    /// Positivity and ordering only: 0 < g1 < g2 and 0 < g3 < g4.
    void validate_structure() const;
};

/// Which of the sufficient conditions for the kernel sign estimates hold.
struct GammaAdmissibility {
    bool ratios;          ///< g4 = g1/2 and g3 = g1/4
    bool real_part;       ///< g2/g1 < (3/2) m1
    bool argument_cot;    ///< (2 + m1) pi g2 / (2 m2) < 1/sqrt(3)
    bool argument_cross;  ///< 2 (m1 + 1) g2 < m2 / pi

    bool all() const { return ratios && real_part && argument_cot && argument_cross; }
};

GammaAdmissibility check_admissibility(const GammaConfig& cfg, const Ellipsoid& e);

/// Picks g2 at a fraction `safety` of the tighter argument constraint, then
/// g1 = g2 / min(1.2, 1.5 m1 safety), g4 = g1/2, g3 = g1/4.
/// Throws DomainError unless safety is in (0, 1) and the result satisfies
/// every admissibility condition.
GammaConfig choose_gammas(const Ellipsoid& e, double safety = 0.9);

enum class PatchKind {
    source, ///< W: theta1 in [-pi/12, 0], theta2 in [-2a, -a], r1^(2m1) in [g1 a, g2 a]
    target, ///< V: theta1 in [0, pi/12],  theta2 in [a, 2a],   r1^(2m1) in [g3 a, g4 a]
};

std::string_view to_string(PatchKind kind);

/// A source (W) or target (V) patch at scale alpha. The band bounds are on
/// r1^(2 m1) and are stored as absolute values.
struct PatchSpec {
    PatchKind kind = PatchKind::source;
    double alpha = 0.0;
    double band_lo = 0.0;
    double band_hi = 0.0;
    double t1_lo = 0.0;
    double t1_hi = 0.0;
    double t2_lo = 0.0;
    double t2_hi = 0.0;

    /// Chart box; the r1 range is band^(1/(2 m1)).
    ParamBox box(const Ellipsoid& e) const;
    bool contains(const ParamPoint& p, const Ellipsoid& e) const;
};

/// Smallest alpha accepted by make_patch; below it the chart box is not
/// representable in double precision.
inline constexpr double min_patch_alpha = 1e-290;

/// Builds W_alpha or V_alpha. Throws DomainError if alpha <= 0, alpha is
/// below `min_patch_alpha`, or the upper band bound reaches 1.
PatchSpec make_patch(PatchKind kind, double alpha, const GammaConfig& cfg);

/// Integral of the density over the patch.
double patch_measure(const PatchSpec& p, const QuadratureGrid& grid, Density density,
                     const Ellipsoid& e);

/// Closed-form Leray measure divided by alpha^2:
/// pi m1 m2 (band_hi - band_lo) / (24 alpha).
double analytic_measure_coefficient(const PatchSpec& p, const Ellipsoid& e);

/// True iff the theta2 intervals are pairwise non-overlapping (shared
/// endpoints allowed).
bool disjointness_check(std::span<const PatchSpec> patches);

/// One-line record with 17 significant digits:
/// kind,alpha,band_lo,band_hi,t1_lo,t1_hi,t2_lo,t2_hi
std::string to_record(const PatchSpec& p);

} // namespace clf
