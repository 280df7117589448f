#include "clf/patches.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "clf/errors.hpp"

namespace clf {

void GammaConfig::validate_structure() const
{
    if (!(g1 > 0 && g1 < g2 && std::isfinite(g2)))
        throw DomainError(fmt::format("gamma config needs 0 < g1 < g2 (got g1={}, g2={})", g1, g2));
    if (!(g3 > 0 && g3 < g4 && std::isfinite(g4)))
        throw DomainError(fmt::format("gamma config needs 0 < g3 < g4 (got g3={}, g4={})", g3, g4));
}

GammaAdmissibility check_admissibility(const GammaConfig& cfg, const Ellipsoid& e)
{
    const double m1 = e.m1();
    const double m2 = e.m2();
    GammaAdmissibility a{};
    a.ratios = std::abs(cfg.g4 - cfg.g1 / 2) <= 1e-15 * cfg.g1
            && std::abs(cfg.g3 - cfg.g1 / 4) <= 1e-15 * cfg.g1;
    a.real_part = cfg.g2 / cfg.g1 < 1.5 * m1;
    a.argument_cot = (2 + m1) * pi * cfg.g2 / (2 * m2) < 1 / std::sqrt(3.0);
    a.argument_cross = 2 * (m1 + 1) * cfg.g2 < m2 / pi;
    return a;
}

GammaConfig choose_gammas(const Ellipsoid& e, double safety)
{
    if (!(safety > 0 && safety < 1))
        throw DomainError(fmt::format("gamma safety factor must be in (0, 1) (got {})", safety));
    const double m1 = e.m1();
    const double m2 = e.m2();
    const double cross = m2 / (2 * pi * (m1 + 1));
    const double cot = 2 * m2 / ((2 + m1) * std::sqrt(3.0) * pi);
    const double ratio = std::min(1.2, 1.5 * m1 * safety);
    if (!(ratio > 1))
        throw DomainError(fmt::format(
            "gamma safety factor {} too small for m1 = {}: need g2/g1 > 1", safety, m1));

    GammaConfig cfg;
    cfg.g2 = safety * std::min(cross, cot);
    cfg.g1 = cfg.g2 / ratio;
    cfg.g4 = cfg.g1 / 2;
    cfg.g3 = cfg.g1 / 4;
    cfg.validate_structure();
    if (!check_admissibility(cfg, e).all())
        throw DomainError("choose_gammas produced an inadmissible configuration");
    return cfg;
}

std::string_view to_string(PatchKind kind)
{
    return kind == PatchKind::source ? "W" : "V";
}

ParamBox PatchSpec::box(const Ellipsoid& e) const
{
    const double inv = 1.0 / (2 * e.m1());
    return {std::pow(band_lo, inv), std::pow(band_hi, inv), t1_lo, t1_hi, t2_lo, t2_hi};
}

bool PatchSpec::contains(const ParamPoint& p, const Ellipsoid& e) const
{
    const double u = std::pow(p.r1, 2 * e.m1());
    return u >= band_lo && u <= band_hi && p.theta1 >= t1_lo && p.theta1 <= t1_hi
        && p.theta2 >= t2_lo && p.theta2 <= t2_hi;
}

PatchSpec make_patch(PatchKind kind, double alpha, const GammaConfig& cfg)
{
    cfg.validate_structure();
    if (!(alpha > 0) || !std::isfinite(alpha))
        throw DomainError(fmt::format("patch scale alpha must be positive (got {})", alpha));
    if (alpha < min_patch_alpha)
        throw DomainError(fmt::format("patch scale alpha = {} below representable range", alpha));

    PatchSpec p;
    p.kind = kind;
    p.alpha = alpha;
    if (kind == PatchKind::source) {
        p.band_lo = cfg.g1 * alpha;
        p.band_hi = cfg.g2 * alpha;
        p.t1_lo = -pi / 12;
        p.t1_hi = 0.0;
        p.t2_lo = -2 * alpha;
        p.t2_hi = -alpha;
    } else {
        p.band_lo = cfg.g3 * alpha;
        p.band_hi = cfg.g4 * alpha;
        p.t1_lo = 0.0;
        p.t1_hi = pi / 12;
        p.t2_lo = alpha;
        p.t2_hi = 2 * alpha;
    }
    if (!(p.band_hi < 1.0))
        throw DomainError(fmt::format(
            "patch band upper bound {} * alpha = {} must stay below 1",
            kind == PatchKind::source ? cfg.g2 : cfg.g4, p.band_hi));
    if (p.t2_lo < -pi || p.t2_hi > pi)
        throw DomainError(fmt::format("patch theta2 interval leaves [-pi, pi] at alpha = {}", alpha));
    return p;
}

double patch_measure(const PatchSpec& p, const QuadratureGrid& grid, Density density,
                     const Ellipsoid& e)
{
    return integrate_boundary([](const BoundaryPoint&) { return 1.0; }, p.box(e), grid, density,
                              e)
        .real();
}

double analytic_measure_coefficient(const PatchSpec& p, const Ellipsoid& e)
{
    return pi * e.m1() * e.m2() * (p.band_hi - p.band_lo) / (24 * p.alpha);
}

bool disjointness_check(std::span<const PatchSpec> patches)
{
    std::vector<std::pair<double, double>> iv;
    iv.reserve(patches.size());
    for (const auto& p : patches)
        iv.emplace_back(p.t2_lo, p.t2_hi);
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 1; i < iv.size(); ++i)
        if (iv[i].first < iv[i - 1].second)
            return false;
    return true;
}

std::string to_record(const PatchSpec& p)
{
    return fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}",
                       to_string(p.kind), p.alpha, p.band_lo, p.band_hi, p.t1_lo, p.t1_hi,
                       p.t2_lo, p.t2_hi);
}

} // namespace clf
