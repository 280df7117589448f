#pragma once

#include <cmath>
#include <cstdint>

#include <fmt/format.h>

#include "clf/errors.hpp"
#include "clf/geometry.hpp"
#include "clf/patches.hpp"
#include "clf/quadrature.hpp"

namespace clf {

/// Normalization of the operator for n = 2 against the exact Leray density:
/// K f(z) = clf_prefactor * integral of f(xi) leray(xi) / w(xi, z)^2.
inline constexpr double clf_prefactor = 1.0 / (2.0 * pi * pi);

/// Evaluation is refused when |w| / scale falls below this at any node.
inline constexpr double near_singular_threshold = 1e-12;

/// w(xi, z) = sum_j m_j |xi_j|^(2(m_j-1)) conj(xi_j) (xi_j - z_j) for an
/// arbitrary point z of C^2.
Complex w_eval(const BoundaryPoint& xi, const ComplexPair& z, const Ellipsoid& e);

/// Same pairing for a boundary point z, formed from chart coordinates so
/// that it stays accurate when both points sit within 1e-16 of the circle
/// |z2| = 1.
Complex w_eval(const BoundaryPoint& xi, const BoundaryPoint& z, const Ellipsoid& e);

[[noreturn]] void throw_near_singular(const WeightedNode& node, Complex w);

/// K f(z) for f supported on the box of `rule`; `rule` must carry the Leray
/// density. Throws NearSingularError if |w| < 1e-12 at some node.
template <class F>
Complex clf_apply(const BoundaryRule& rule, F&& f, const ComplexPair& z, const Ellipsoid& e)
{
    if (rule.density() != Density::leray)
        throw DomainError("clf_apply needs a rule built with the Leray density");
    CompensatedSum sum;
    for (const auto& node : rule.nodes()) {
        const Complex w = w_eval(node.point, z, e);
        if (std::abs(w) < near_singular_threshold)
            throw_near_singular(node, w);
        const Complex v = Complex(f(node.point)) / (w * w);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw_non_finite(node, v);
        sum.add(node.weight * v);
    }
    return clf_prefactor * sum.value();
}

template <class F>
Complex clf_apply(F&& f, const ParamBox& support, const ComplexPair& z, const QuadratureGrid& grid,
                  const Ellipsoid& e)
{
    return clf_apply(BoundaryRule(support, grid, Density::leray, e), std::forward<F>(f), z, e);
}

/// K of the indicator of the rule's box, evaluated at a boundary point z
/// outside that box. Kernel and weights are rescaled by `scale` (the patch
/// alpha) so that tiny patches neither underflow nor trip the guard, which
/// is applied to |w| / scale.
Complex clf_apply_indicator(const BoundaryRule& rule, const BoundaryPoint& z, double scale,
                            const Ellipsoid& e);

/// Extremes of the kernel over sampled (xi, z) in W x V.
struct KernelBoundReport {
    double min_neg_re_scaled = 0;    ///< min of -Re(1/w^2) * alpha^2
    double min_abs_w_over_alpha = 0;
    double max_abs_w_over_alpha = 0;
    long sample_count = 0;
    bool all_positive = false;       ///< -Re(1/w^2) > 0 at every evaluation
    long violations = 0;             ///< evaluations with -Re(1/w^2) <= 0
    double min_neg_im_over_alpha = 0; ///< min of -Im w / alpha
    double min_re_over_alpha = 0;
    double max_re_over_alpha = 0;
    double min_arg = 0;              ///< extremes of arg w
    double max_arg = 0;
    bool arg_window_ok = false;      ///< every arg w in (-pi/2, -pi/3)
    long literal_window_hits = 0;    ///< samples with -pi/2 < arg w < -2pi/3 (empty window)
    long refine_evaluations = 0;
    double alpha = 0;                ///< scale used for the scaled fields
};

/// Seeded uniform sampling of chart boxes of W and V. The first sample is
/// the pair of box centres; after sampling, a local random search around
/// the worst pair spends `refine_steps` extra evaluations on the minimum of
/// -Re(1/w^2). Scaled fields use alpha = max(W.alpha, V.alpha).
KernelBoundReport kernel_bound_scan(const PatchSpec& w_patch, const PatchSpec& v_patch,
                                    long n_samples, std::uint64_t seed, const Ellipsoid& e,
                                    int refine_steps = 256);

} // namespace clf
