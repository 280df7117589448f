#include "clf/kernel.hpp"

#include <algorithm>
#include <limits>

#include "clf/random.hpp"

namespace clf {

Complex w_eval(const BoundaryPoint& xi, const ComplexPair& z, const Ellipsoid& e)
{
    const double m1 = e.m1();
    const double m2 = e.m2();
    const double a1 = m1 * std::pow(xi.param.r1, 2 * m1 - 2);
    const double a2 = m2 * std::exp((2 * m2 - 2) * xi.ln_r2);
    return a1 * std::conj(xi.z1) * (xi.z1 - z.z1) + a2 * std::conj(xi.z2) * (xi.z2 - z.z2);
}

Complex w_eval(const BoundaryPoint& xi, const BoundaryPoint& z, const Ellipsoid& e)
{
    const double m1 = e.m1();
    const double m2 = e.m2();
    const double r1 = xi.param.r1;
    const double s1 = z.param.r1;
    const double s2 = z.r2;

    // conj(xi_j)(xi_j - z_j) = r_j (r_j - s_j e^{i d_j}), d_j = phi_j - theta_j,
    // with r_j - s_j cos d_j = (r_j - s_j) + 2 s_j sin^2(d_j / 2).
    const double d1 = z.param.theta1 - xi.param.theta1;
    const double d2 = z.param.theta2 - xi.param.theta2;
    const double h1 = std::sin(0.5 * d1);
    const double h2 = std::sin(0.5 * d2);
    // r2 = 0 on the circle r1 = 1, where the log form is -inf - -inf
    const double r2_minus_s2 = (s2 == 0.0 || xi.r2 == 0.0)
                                   ? xi.r2 - s2
                                   : s2 * std::expm1(xi.ln_r2 - z.ln_r2);

    const Complex t1((r1 - s1) + 2 * s1 * h1 * h1, -s1 * std::sin(d1));
    const Complex t2(r2_minus_s2 + 2 * s2 * h2 * h2, -s2 * std::sin(d2));
    const double a1 = m1 * std::pow(r1, 2 * m1 - 1);
    const double a2 = m2 * std::exp((2 * m2 - 1) * xi.ln_r2);
    return a1 * t1 + a2 * t2;
}

void throw_near_singular(const WeightedNode& node, Complex w)
{
    throw NearSingularError(fmt::format(
        "near-singular kernel: |w| = {:.3e} at node r1={:.17g} theta1={:.17g} theta2={:.17g}",
        std::abs(w), node.point.param.r1, node.point.param.theta1, node.point.param.theta2));
}

Complex clf_apply_indicator(const BoundaryRule& rule, const BoundaryPoint& z, double scale,
                            const Ellipsoid& e)
{
    if (rule.density() != Density::leray)
        throw DomainError("clf_apply_indicator needs a rule built with the Leray density");
    if (!(scale > 0))
        throw DomainError("clf_apply_indicator: scale must be positive");
    const double ln_scale2 = 2 * std::log(scale);
    CompensatedSum sum;
    for (const auto& node : rule.nodes()) {
        const Complex w = w_eval(node.point, z, e) / scale;
        if (std::abs(w) < near_singular_threshold)
            throw_near_singular(node, w);
        const Complex v = std::exp(node.ln_weight - ln_scale2) / (w * w);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw_non_finite(node, v);
        sum.add(v);
    }
    return clf_prefactor * sum.value();
}

namespace {

struct PairSample {
    ParamPoint xi;
    ParamPoint z;
};

ParamPoint sample_box(const ParamBox& b, UniformSource& rng)
{
    return {rng.next(b.r_lo, b.r_hi), rng.next(b.t1_lo, b.t1_hi), rng.next(b.t2_lo, b.t2_hi)};
}

ParamPoint centre(const ParamBox& b)
{
    return {0.5 * (b.r_lo + b.r_hi), 0.5 * (b.t1_lo + b.t1_hi), 0.5 * (b.t2_lo + b.t2_hi)};
}

ParamPoint perturb(const ParamPoint& p, const ParamBox& b, double frac, UniformSource& rng)
{
    auto step = [&](double x, double lo, double hi) {
        return std::clamp(x + frac * (hi - lo) * rng.next(-1.0, 1.0), lo, hi);
    };
    return {step(p.r1, b.r_lo, b.r_hi), step(p.theta1, b.t1_lo, b.t1_hi),
            step(p.theta2, b.t2_lo, b.t2_hi)};
}

class BoundAccumulator {
public:
    BoundAccumulator(double alpha, const Ellipsoid& e) : alpha_(alpha), e_(e)
    {
        r_.alpha = alpha;
        r_.min_neg_re_scaled = std::numeric_limits<double>::infinity();
        r_.min_abs_w_over_alpha = std::numeric_limits<double>::infinity();
        r_.max_abs_w_over_alpha = 0;
        r_.min_neg_im_over_alpha = std::numeric_limits<double>::infinity();
        r_.min_re_over_alpha = std::numeric_limits<double>::infinity();
        r_.max_re_over_alpha = -std::numeric_limits<double>::infinity();
        r_.min_arg = std::numeric_limits<double>::infinity();
        r_.max_arg = -std::numeric_limits<double>::infinity();
        r_.arg_window_ok = true;
    }

    /// Returns -Re(1/w^2) alpha^2 for the pair.
    double add(const PairSample& s)
    {
        const Complex w = w_eval(lift(s.xi, e_), lift(s.z, e_), e_) / alpha_;
        const Complex inv = 1.0 / (w * w);
        const double neg_re = -inv.real();
        const double arg = std::arg(w);
        r_.min_neg_re_scaled = std::min(r_.min_neg_re_scaled, neg_re);
        r_.min_abs_w_over_alpha = std::min(r_.min_abs_w_over_alpha, std::abs(w));
        r_.max_abs_w_over_alpha = std::max(r_.max_abs_w_over_alpha, std::abs(w));
        r_.min_neg_im_over_alpha = std::min(r_.min_neg_im_over_alpha, -w.imag());
        r_.min_re_over_alpha = std::min(r_.min_re_over_alpha, w.real());
        r_.max_re_over_alpha = std::max(r_.max_re_over_alpha, w.real());
        r_.min_arg = std::min(r_.min_arg, arg);
        r_.max_arg = std::max(r_.max_arg, arg);
        if (!(arg > -pi / 2 && arg < -pi / 3))
            r_.arg_window_ok = false;
        if (arg > -pi / 2 && arg < -2 * pi / 3)
            ++r_.literal_window_hits;
        if (!(neg_re > 0))
            ++r_.violations;
        return neg_re;
    }

    KernelBoundReport& report() { return r_; }

private:
    double alpha_;
    const Ellipsoid& e_;
    KernelBoundReport r_;
};

} // namespace

KernelBoundReport kernel_bound_scan(const PatchSpec& w_patch, const PatchSpec& v_patch,
                                    long n_samples, std::uint64_t seed, const Ellipsoid& e,
                                    int refine_steps)
{
    if (n_samples < 1)
        throw DomainError("kernel_bound_scan needs at least one sample");
    const ParamBox wb = w_patch.box(e);
    const ParamBox vb = v_patch.box(e);
    const double alpha = std::max(w_patch.alpha, v_patch.alpha);

    UniformSource rng(seed);
    BoundAccumulator acc(alpha, e);
    PairSample worst{centre(wb), centre(vb)};
    double worst_value = acc.add(worst);
    for (long i = 1; i < n_samples; ++i) {
        const PairSample s{sample_box(wb, rng), sample_box(vb, rng)};
        const double v = acc.add(s);
        if (v < worst_value) {
            worst_value = v;
            worst = s;
        }
    }

    // Shrinking random search around the worst pair.
    double frac = 0.05;
    int stale = 0;
    for (int i = 0; i < refine_steps; ++i) {
        const PairSample s{perturb(worst.xi, wb, frac, rng), perturb(worst.z, vb, frac, rng)};
        const double v = acc.add(s);
        if (v < worst_value) {
            worst_value = v;
            worst = s;
            stale = 0;
        } else if (++stale >= 16) {
            frac *= 0.5;
            stale = 0;
        }
    }

    KernelBoundReport& r = acc.report();
    r.sample_count = n_samples;
    r.refine_evaluations = refine_steps;
    r.all_positive = r.violations == 0;
    return r;
}

} // namespace clf
