// Acceptance criteria 1-9. `acceptance N` runs criterion N, no argument runs
// all of them. One PASS/FAIL line per criterion; exit status 1 on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "clf/commands.hpp"
#include "clf/fixtures.hpp"
#include "clf/kernel.hpp"
#include "modular_oracle.hpp"

using namespace clf;

namespace {

// Pinned tolerances.
constexpr double reproducing_rel = 1e-6;
constexpr double reproducing_seconds = 60;
constexpr double measure_seconds = 30;
constexpr long kernel_min_samples = 10000;
constexpr double kernel_seconds = 60;
constexpr double stability_ratio = 2.0;
constexpr double blowup_seconds = 600;
constexpr double norm_increment_max = 1e-6;
constexpr double oracle_ln_abs = 1e-10;
constexpr double homogeneity_rel = 1e-12;
constexpr double closed_form_rel = 1e-10;

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string note)
    {
        pass = pass && ok;
        notes.push_back(fmt::format("{}{}", ok ? "" : "[fail] ", note));
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Fixtures fixtures()
{
    return load_fixtures(CLF_FIXTURES);
}

// Cached between criteria when several run in one process.
const KernelStudy& kernel_study()
{
    static const KernelStudy s = run_kernel_study(RunConfig{});
    return s;
}

const BlowupStudy& blowup_study()
{
    static const BlowupStudy s = [] {
        RunConfig c;
        c.positive_control = true;
        return run_blowup_study(c, true);
    }();
    return s;
}

Outcome c1()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const QuadratureGrid grid{32, 32, 32};
    const ComplexPair points[] = {{0.0, 0.0}, {0.1, Complex(0.2, -0.1)}};
    const std::function<Complex(const ComplexPair&)> monomials[] = {
        [](const ComplexPair&) { return Complex(1.0); },
        [](const ComplexPair& z) { return z.z1; },
        [](const ComplexPair& z) { return z.z2; },
        [](const ComplexPair& z) { return z.z1 * z.z2; },
        [](const ComplexPair& z) { return z.z1 * z.z1; },
    };
    double worst = 0;
    for (auto [m1, m2] : {std::pair{1.0, 1.0}, {2.0, 3.0}}) {
        const Ellipsoid e(m1, m2);
        const BoundaryRule rule(ParamBox::full(), grid, Density::leray, e);
        for (const auto& z : points)
            for (const auto& f : monomials) {
                const Complex got =
                    clf_apply(rule, [&](const BoundaryPoint& p) { return f(p.coords()); }, z, e);
                const Complex want = f(z);
                worst = std::max(worst, std::abs(got - want) / std::max(std::abs(want), 1.0));
            }
    }
    const double t = seconds_since(t0);
    o.require(worst < reproducing_rel, fmt::format("max rel error {:.3e} < {:g}", worst, reproducing_rel));
    o.require(t < reproducing_seconds, fmt::format("{:.2f} s < {:g} s", t, reproducing_seconds));
    return o;
}

Outcome c2()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg;
    for (double alpha : {1e-2, 1e-3, 1e-4}) {
        const MeasureRow r = measure_row(alpha, cfg.gammas(), cfg.patch_grid, cfg.ellipsoid());
        const double tol = measure_tolerance(alpha);
        o.require(r.w_deviation <= tol && r.v_deviation <= tol,
                  fmt::format("alpha={:g}: W {:.2e}, V {:.2e} <= {:g}", alpha, r.w_deviation,
                              r.v_deviation, tol));
    }
    const double t = seconds_since(t0);
    o.require(t < measure_seconds, fmt::format("{:.2f} s < {:g} s", t, measure_seconds));
    return o;
}

Outcome c3()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const KernelStudy& s = kernel_study();
    const double t = seconds_since(t0);
    const Fixtures fx = fixtures();
    double lo = 1e300, hi = 0;
    for (const auto& r : s.same_alpha) {
        o.require(r.sample_count >= kernel_min_samples,
                  fmt::format("alpha={:g}: {} samples", r.alpha, r.sample_count));
        o.require(r.all_positive, fmt::format("alpha={:g}: {} sign violations", r.alpha, r.violations));
        lo = std::min(lo, r.min_neg_re_scaled);
        hi = std::max(hi, r.min_neg_re_scaled);
    }
    o.require(lo >= fx.kernel_floor, fmt::format("min {:.7g} >= floor {:.7g}", lo, fx.kernel_floor));
    o.require(hi <= stability_ratio * lo, fmt::format("max/min {:.5f} <= {:g}", hi / lo, stability_ratio));
    o.require(t < kernel_seconds, fmt::format("study {:.2f} s < {:g} s", t, kernel_seconds));
    return o;
}

Outcome c4()
{
    Outcome o;
    const KernelStudy& s = kernel_study();
    long violations = 0;
    for (const auto& row : s.cross_violations)
        for (long v : row)
            violations += v;
    const std::size_t n = s.cross_scales.size();
    o.require(n >= 2, fmt::format("{} schedule scales, {} pairs", n, n * n));
    o.require(violations == 0, fmt::format("{} violations in {} evaluations", violations, s.cross_samples));
    o.require(s.cross_min_neg_re > 0, fmt::format("min -Re(1/w^2) alpha^2 {:.4g}", s.cross_min_neg_re));
    return o;
}

Outcome c5()
{
    Outcome o;
    const BlowupStudy& s = blowup_study();
    const Fixtures fx = fixtures();
    double lo = 1e300, hi = 0;
    for (const auto& l : s.image_floor) {
        o.require(l.min_re < 0 && l.max_re < 0,
                  fmt::format("alpha={:g}: Re H in [{:.4g}, {:.4g}]", l.alpha, l.min_re, l.max_re));
        lo = std::min(lo, l.min_oriented_re);
        hi = std::max(hi, l.min_oriented_re);
    }
    o.require(lo >= fx.c_h_floor, fmt::format("min -Re H {:.7g} >= floor {:.7g}", lo, fx.c_h_floor));
    o.require(hi <= stability_ratio * lo, fmt::format("max/min {:.5f} <= {:g}", hi / lo, stability_ratio));
    return o;
}

Outcome c6()
{
    Outcome o;
    const BlowupStudy& s = blowup_study();
    const double t = s.seconds;
    const Fixtures fx = fixtures();
    const BlowupResult& r = s.result;
    o.require(r.rows.size() == 8, fmt::format("N_max = {}", r.rows.size()));

    // (a) modular of h
    bool bounded = true;
    double worst_ratio = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        bounded = bounded && r.rows[i].modular_h.to_double() <= r.certified_bound[i];
        if (r.rows[i].n >= 3)
            worst_ratio = std::max(worst_ratio, std::exp(r.rows[i].increment_h.ln_mag()
                                                         - r.rows[i - 1].increment_h.ln_mag()));
    }
    o.require(bounded, fmt::format("(a) modular {:.6g} <= {:.6g}", r.rows.back().modular_h.to_double(),
                                   r.certified_bound.back()));
    o.require(worst_ratio <= fx.increment_ratio_max,
              fmt::format("(a) increment ratio {:.4f} <= {:g}", worst_ratio, fx.increment_ratio_max));

    // (b) linear growth of M(N)
    const auto lmn = ln_m_over_n(r);
    const auto [lo, hi] = std::minmax_element(lmn.begin(), lmn.end());
    o.require(*lo >= fx.ln_m_over_n_lo && *hi <= fx.ln_m_over_n_hi,
              fmt::format("(b) ln(M/N) in [{:.3f}, {:.3f}] within [{:.3f}, {:.3f}]", *lo, *hi,
                          fx.ln_m_over_n_lo, fx.ln_m_over_n_hi));
    const double slope = relative_growth_slope(r);
    o.require(slope > 0, fmt::format("(b) slope {:.4f}", slope));
    bool cross = true;
    for (const auto& row : r.rows)
        cross = cross && row.cross_positivity_ok;
    o.require(cross, "(b) cross positivity on every row");

    // (c) norm of h converges
    const double step = std::abs(r.rows.back().norm_h.ln_mag() - r.rows[r.rows.size() - 2].norm_h.ln_mag());
    o.require(step < norm_increment_max, fmt::format("(c) ln |h| increment {:.3e} < {:g}", step, norm_increment_max));
    o.require(t <= blowup_seconds, fmt::format("study {:.1f} s <= {:g} s", t, blowup_seconds));
    return o;
}

Outcome c7()
{
    Outcome o;
    const BlowupStudy& s = blowup_study();
    const Fixtures fx = fixtures();
    if (!s.control) {
        o.require(false, "no control run");
        return o;
    }
    double lo = 1e300, hi = 0;
    for (const auto& row : *s.control) {
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
    }
    o.require(std::isfinite((*s.control)[0].ratio) && (*s.control)[0].ratio > 0, "N=1 ratio finite");
    o.require(hi <= fx.control_spread_max * lo,
              fmt::format("max/min {:.5f} <= {:g}", hi / lo, fx.control_spread_max));
    return o;
}

Outcome c8()
{
    Outcome o;
    const HolderStudy s = run_holder_study(RunConfig{});
    o.require(s.growth >= holder_growth_min,
              fmt::format("exponent modulus {:.4f} -> {:.4f}, growth {:.5f} >= {:g}",
                          s.rows.front().modulus_field, s.rows.back().modulus_field, s.growth,
                          holder_growth_min));
    o.require(s.control_spread <= holder_control_spread_max,
              fmt::format("control spread {:.5f} <= {:g}", s.control_spread, holder_control_spread_max));
    return o;
}

Outcome c9()
{
    Outcome o;
    const Ellipsoid e(2, 3);
    const GammaConfig g = choose_gammas(e);
    const ExponentField f;

    // modular against 50 digits at magnitudes up to e^700 and beyond
    const QuadratureGrid toy{2, 2, 2};
    const PatchSum h({{LogScalar::from_log(500.0), make_patch(PatchKind::source, 1e-3, g)},
                      {LogScalar::from_log(-40.0), make_patch(PatchKind::target, 1e-3, g)}});
    double worst = 0, largest = 0;
    for (double ln_lambda : {0.0, 330.0, 500.0, 650.0, -120.0}) {
        const double got = modular(h, LogScalar::from_log(ln_lambda), f, toy, e).ln_mag();
        const double want = double(oracle::modular_hp(h, ln_lambda, f, toy, e));
        worst = std::max(worst, std::abs(got - want));
        largest = std::max(largest, want);
    }
    o.require(largest >= 700, fmt::format("largest ln modular {:.1f}", largest));
    o.require(worst <= oracle_ln_abs, fmt::format("oracle |d ln| {:.2e} <= {:g}", worst, oracle_ln_abs));

    // homogeneity
    const QuadratureGrid grid{8, 4, 4};
    const PatchSum two({{LogScalar::from_log(1.0), make_patch(PatchKind::source, 1e-2, g)},
                        {LogScalar::from_log(30.0), make_patch(PatchKind::target, 1e-3, g)}});
    const double base = luxemburg_norm(two, f, grid, 1e-10, e).ln_mag();
    double worst_h = 0;
    for (double ln_t : {-200.0, 0.5, 300.0}) {
        const double scaled = luxemburg_norm(two.scaled(LogScalar::from_log(ln_t)), f, grid, 1e-10, e).ln_mag();
        worst_h = std::max(worst_h, std::abs(scaled - base - ln_t) / std::abs(scaled));
    }
    o.require(worst_h <= homogeneity_rel, fmt::format("homogeneity {:.2e} <= {:g}", worst_h, homogeneity_rel));

    // constant exponent closed form c S^(1/p)
    const PatchSpec w = make_patch(PatchKind::source, 1e-2, g);
    const double s = patch_measure(w, grid, Density::leray, e);
    double worst_c = 0;
    for (double p : {1.5, 4.0, 6.0}) {
        ExponentField c;
        c.p0 = p;
        c.psi.amplitude = 0;
        const double got = luxemburg_norm(PatchSum({{LogScalar::from_log(2.0), w}}), c, grid, 1e-10, e).ln_mag();
        worst_c = std::max(worst_c, std::abs(std::expm1(got - (2.0 + std::log(s) / p))));
    }
    o.require(worst_c <= closed_form_rel, fmt::format("closed form {:.2e} <= {:g}", worst_c, closed_form_rel));
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    const std::function<Outcome()> criteria[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9};
    std::vector<int> which;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 9) {
            std::fprintf(stderr, "usage: acceptance [1-9]\n");
            return 2;
        }
        which.push_back(n);
    } else {
        for (int n = 1; n <= 9; ++n)
            which.push_back(n);
    }

    bool all = true;
    for (int n : which) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o.require(false, fmt::format("exception: {}", e.what()));
        }
        std::string joined;
        for (const auto& note : o.notes)
            joined += (joined.empty() ? "" : "; ") + note;
        std::printf("C%d %s (%.2f s) %s\n", n, o.pass ? "PASS" : "FAIL", seconds_since(t0), joined.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
