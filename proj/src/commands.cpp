#include "clf/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "clf/errors.hpp"
#include "clf/random.hpp"

namespace clf {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void add_check(CommandReport& r, std::string name, bool pass, std::string detail)
{
    r.checks.push_back({std::move(name), pass, std::move(detail)});
}

std::string render_checks(const CommandReport& r)
{
    std::string out;
    for (const auto& c : r.checks)
        out += fmt::format("  [{}] {}: {}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail);
    out += fmt::format("result: {}\n", r.pass() ? "PASS" : "FAIL");
    return out;
}

Json gammas_json(const GammaConfig& g)
{
    return {{"g1", g.g1}, {"g2", g.g2}, {"g3", g.g3}, {"g4", g.g4}};
}

} // namespace

bool CommandReport::pass() const
{
    return !checks.empty()
        && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Json CommandReport::to_json() const
{
    Json m = metrics;
    Json list = Json::array();
    for (const auto& c : checks)
        list.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    m["checks"] = list;
    Json j;
    j["command"] = command;
    j["config_echo"] = config_echo;
    j["metrics"] = m;
    j["pass"] = pass();
    j["fixture_version"] = fixture_version;
    return j;
}

// ---- patch measures ---------------------------------------------------------

double measure_tolerance(double alpha)
{
    if (alpha >= 1e-2)
        return 0.10;
    if (alpha >= 1e-3)
        return 0.02;
    return 0.005;
}

MeasureRow measure_row(double alpha, const GammaConfig& g, const QuadratureGrid& grid,
                       const Ellipsoid& e)
{
    const PatchSpec w = make_patch(PatchKind::source, alpha, g);
    const PatchSpec v = make_patch(PatchKind::target, alpha, g);
    const double a2 = alpha * alpha;

    MeasureRow r;
    r.alpha = alpha;
    const double sw = patch_measure(w, grid, Density::leray, e);
    r.w_coefficient = sw / a2;
    r.v_coefficient = patch_measure(v, grid, Density::leray, e) / a2;
    r.w_analytic = analytic_measure_coefficient(w, e);
    r.v_analytic = analytic_measure_coefficient(v, e);
    r.w_deviation = std::abs(r.w_coefficient - r.w_analytic) / r.w_analytic;
    r.v_deviation = std::abs(r.v_coefficient - r.v_analytic) / r.v_analytic;
    r.sigma_ratio_w = sw / patch_measure(w, grid, Density::sigma, e);
    r.tolerance = measure_tolerance(alpha);
    return r;
}

CommandReport cmd_verify_measure(const RunConfig& cfg)
{
    cfg.validate();
    const Ellipsoid e = cfg.ellipsoid();
    const GammaConfig g = cfg.gammas();

    CommandReport r;
    r.command = "verify-measure";
    r.config_echo = to_json(cfg);
    r.metrics["gammas"] = gammas_json(g);
    r.table = fmt::format("{:>10} {:>14} {:>14} {:>14} {:>11} {:>11} {:>11}\n", "alpha",
                          "S(W)/a^2", "S(V)/a^2", "limit W", "dev W", "dev V", "leray/sigma");
    Json rows = Json::array();
    for (double alpha : cfg.alphas) {
        const MeasureRow m = measure_row(alpha, g, cfg.patch_grid, e);
        r.table += fmt::format("{:>10.3g} {:>14.8g} {:>14.8g} {:>14.8g} {:>11.3e} {:>11.3e} {:>11.6g}\n",
                               m.alpha, m.w_coefficient, m.v_coefficient, m.w_analytic,
                               m.w_deviation, m.v_deviation, m.sigma_ratio_w);
        rows.push_back({{"alpha", m.alpha},
                        {"w_coefficient", m.w_coefficient},
                        {"v_coefficient", m.v_coefficient},
                        {"w_analytic", m.w_analytic},
                        {"v_analytic", m.v_analytic},
                        {"w_deviation", m.w_deviation},
                        {"v_deviation", m.v_deviation},
                        {"leray_over_sigma_w", m.sigma_ratio_w},
                        {"tolerance", m.tolerance}});
        add_check(r, fmt::format("measure at alpha={:g}", alpha),
                  m.w_deviation <= m.tolerance && m.v_deviation <= m.tolerance,
                  fmt::format("deviation W {:.3e}, V {:.3e} <= {:g}", m.w_deviation,
                              m.v_deviation, m.tolerance));
    }
    r.metrics["rows"] = rows;
    r.table += render_checks(r);
    return r;
}

// ---- kernel bounds ----------------------------------------------------------

KernelStudy run_kernel_study(const RunConfig& cfg)
{
    cfg.validate();
    const Ellipsoid e = cfg.ellipsoid();
    KernelStudy s;
    s.gammas = cfg.gammas();
    s.admissibility = check_admissibility(s.gammas, e);

    for (double alpha : cfg.alphas) {
        const PatchSpec w = make_patch(PatchKind::source, alpha, s.gammas);
        const PatchSpec v = make_patch(PatchKind::target, alpha, s.gammas);
        s.same_alpha.push_back(
            kernel_bound_scan(w, v, cfg.kernel_samples, cfg.seed, e, cfg.kernel_refine_steps));
    }

    if (cfg.field.is_constant()) {
        s.cross_scales = cfg.alphas;
    } else {
        const AlphaSchedule sched = select_alphas(cfg.n_max, cfg.field, cfg.log_budget);
        for (std::size_t k = 1; k <= sched.size(); ++k)
            s.cross_scales.push_back(sched.alpha(k));
    }
    const std::size_t n = s.cross_scales.size();
    s.cross_violations.assign(n, std::vector<long>(n, 0));
    s.cross_min_neg_re = inf;
    for (std::size_t j = 0; j < n; ++j) {
        const PatchSpec w = make_patch(PatchKind::source, s.cross_scales[j], s.gammas);
        for (std::size_t k = 0; k < n; ++k) {
            const PatchSpec v = make_patch(PatchKind::target, s.cross_scales[k], s.gammas);
            const auto rep = kernel_bound_scan(w, v, cfg.kernel_samples,
                                               cfg.seed + 1000 * (j + 1) + k, e,
                                               cfg.kernel_refine_steps);
            s.cross_violations[j][k] = rep.violations;
            s.cross_min_neg_re = std::min(s.cross_min_neg_re, rep.min_neg_re_scaled);
            s.cross_samples += rep.sample_count + rep.refine_evaluations;
        }
    }
    return s;
}

CommandReport evaluate_kernel(const RunConfig& cfg, const Fixtures& fx, const KernelStudy& s)
{
    if (!fx.has_kernel)
        throw ConfigError("fixtures have no kernel section; run verify-kernel --calibrate first");
    const Ellipsoid e = cfg.ellipsoid();

    CommandReport r;
    r.command = "verify-kernel";
    r.config_echo = to_json(cfg);
    r.fixture_version = fx.version;
    r.metrics["gammas"] = gammas_json(s.gammas);
    r.metrics["admissibility"] = {{"ratios", s.admissibility.ratios},
                                  {"real_part", s.admissibility.real_part},
                                  {"argument_cot", s.admissibility.argument_cot},
                                  {"argument_cross", s.admissibility.argument_cross}};
    r.metrics["kernel_floor"] = fx.kernel_floor;

    r.table = fmt::format("{:>10} {:>14} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8}\n", "alpha",
                          "min -Re/w^2*a2", "|w|/a lo", "|w|/a hi", "-Im w/a", "arg lo",
                          "arg hi", "viol");
    Json rows = Json::array();
    double lo = inf, hi = 0, w_lo = inf, w_hi = 0;
    bool positive = true, arg_ok = true, im_ok = true;
    long literal_hits = 0;
    const double im_floor = 0.9 * 2 * e.m2() / pi;
    for (const auto& k : s.same_alpha) {
        r.table += fmt::format("{:>10.3g} {:>14.8g} {:>10.5g} {:>10.5g} {:>10.5g} {:>10.6f} {:>10.6f} {:>8}\n",
                               k.alpha, k.min_neg_re_scaled, k.min_abs_w_over_alpha,
                               k.max_abs_w_over_alpha, k.min_neg_im_over_alpha, k.min_arg,
                               k.max_arg, k.violations);
        rows.push_back({{"alpha", k.alpha},
                        {"min_neg_re_scaled", k.min_neg_re_scaled},
                        {"min_abs_w_over_alpha", k.min_abs_w_over_alpha},
                        {"max_abs_w_over_alpha", k.max_abs_w_over_alpha},
                        {"min_neg_im_over_alpha", k.min_neg_im_over_alpha},
                        {"min_arg", k.min_arg},
                        {"max_arg", k.max_arg},
                        {"violations", k.violations},
                        {"literal_window_hits", k.literal_window_hits},
                        {"sample_count", k.sample_count}});
        lo = std::min(lo, k.min_neg_re_scaled);
        hi = std::max(hi, k.min_neg_re_scaled);
        w_lo = std::min(w_lo, k.max_abs_w_over_alpha);
        w_hi = std::max(w_hi, k.max_abs_w_over_alpha);
        positive = positive && k.all_positive;
        arg_ok = arg_ok && k.arg_window_ok;
        im_ok = im_ok && k.min_neg_im_over_alpha >= im_floor;
        literal_hits += k.literal_window_hits;
    }
    r.metrics["same_alpha"] = rows;

    long cross_total = 0;
    Json matrix = Json::array();
    for (const auto& row : s.cross_violations) {
        matrix.push_back(row);
        cross_total += std::accumulate(row.begin(), row.end(), 0L);
    }
    r.metrics["cross_scales"] = s.cross_scales;
    r.metrics["cross_violations"] = matrix;
    r.metrics["cross_min_neg_re_scaled"] = s.cross_min_neg_re;
    r.metrics["cross_evaluations"] = s.cross_samples;
    r.table += fmt::format("cross-scale matrix: {} x {} pairs, {} evaluations, {} violations, "
                           "min scaled value {:.6g}\n",
                           s.cross_scales.size(), s.cross_scales.size(), s.cross_samples,
                           cross_total, s.cross_min_neg_re);

    add_check(r, "scaled lower bound", lo >= fx.kernel_floor,
              fmt::format("min {:.8g} >= floor {:.8g}", lo, fx.kernel_floor));
    add_check(r, "stability across alpha", hi <= 2 * lo,
              fmt::format("max/min {:.6g} <= 2", hi / lo));
    add_check(r, "same-scale positivity", positive, "-Re(1/w^2) > 0 at every sample");
    add_check(r, "cross-scale positivity", cross_total == 0,
              fmt::format("{} violations over {} pairs", cross_total,
                          s.cross_scales.size() * s.cross_scales.size()));
    add_check(r, "|w| <= C alpha stable", w_hi <= 2 * w_lo,
              fmt::format("max |w|/alpha in [{:.6g}, {:.6g}]", w_lo, w_hi));
    add_check(r, "-Im w lower bound", im_ok,
              fmt::format("-Im w / alpha >= 0.9 * 2 m2 / pi = {:.6g}", im_floor));
    add_check(r, "argument window (-pi/2, -pi/3)", arg_ok,
              fmt::format("{} samples in the literal window (-pi/2, -2pi/3)", literal_hits));
    add_check(r, "gamma admissibility", s.admissibility.all(),
              fmt::format("ratios {} real_part {} argument_cot {} argument_cross {}",
                          s.admissibility.ratios, s.admissibility.real_part,
                          s.admissibility.argument_cot, s.admissibility.argument_cross));
    r.table += render_checks(r);
    return r;
}

CommandReport cmd_verify_kernel(const RunConfig& cfg, const Fixtures& fx)
{
    if (!fx.has_kernel)
        throw ConfigError("fixtures have no kernel section; run verify-kernel --calibrate first");
    return evaluate_kernel(cfg, fx, run_kernel_study(cfg));
}

Fixtures calibrate_kernel(const RunConfig& cfg, const KernelStudy& s, Fixtures base)
{
    double lo = inf;
    for (const auto& k : s.same_alpha)
        lo = std::min(lo, k.min_neg_re_scaled);
    if (!(lo > 0))
        throw Error(fmt::format("kernel calibration measured a non-positive minimum {}", lo));
    base.has_kernel = true;
    base.kernel_reference = lo;
    base.kernel_floor = floor_fraction * lo;
    base.calibration_config = to_json(cfg);
    return base;
}

// ---- blow-up ----------------------------------------------------------------

BlowupStudy run_blowup_study(const RunConfig& cfg, bool with_control)
{
    cfg.validate();
    if (cfg.n_max < 2)
        throw ConfigError(fmt::format("schedule.n_max: blowup needs N >= 2 (got {})", cfg.n_max));
    const auto start = std::chrono::steady_clock::now();
    const BlowupConfig bc = cfg.blowup();
    const Ellipsoid e = cfg.ellipsoid();

    BlowupStudy s;
    const ImageTable table = build_image_table(bc);
    s.result = blowup_experiment(bc, table);
    for (double alpha : cfg.alphas)
        s.image_floor.push_back(image_floor_scan(alpha, bc.gammas, bc.patch_grid, bc.v_grid, e));
    if (with_control)
        s.control = positive_control(bc, table, cfg.control_p);
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
}

std::vector<double> ln_m_over_n(const BlowupResult& r)
{
    std::vector<double> out;
    for (const auto& row : r.rows)
        if (row.n >= 2)
            out.push_back(row.modular_H_lower.ln_mag() - std::log(double(row.n)));
    return out;
}

double relative_growth_slope(const BlowupResult& r)
{
    const double ln_last = r.rows.back().modular_H_lower.ln_mag();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& row : r.rows) {
        if (row.n < 2)
            continue;
        const double x = row.n;
        const double y = std::exp(row.modular_H_lower.ln_mag() - ln_last);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

std::string blowup_csv(const BlowupResult& r)
{
    std::string out = "N,ln_modular_h,ln_norm_h,ln_modular_H_lower,ln_norm_H_lower,min_ReH,cross_ok\n";
    for (const auto& row : r.rows)
        out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", row.n,
                           row.modular_h.ln_mag(), row.norm_h.ln_mag(),
                           row.modular_H_lower.ln_mag(), row.norm_H_lower.ln_mag(),
                           row.min_ReH_on_Vk, row.cross_positivity_ok ? 1 : 0);
    return out;
}

CommandReport evaluate_blowup(const RunConfig& cfg, const Fixtures& fx, const BlowupStudy& s)
{
    if (!fx.has_blowup)
        throw ConfigError("fixtures have no blowup section; run blowup --calibrate first");
    const BlowupResult& res = s.result;

    CommandReport r;
    r.command = "blowup";
    r.config_echo = to_json(cfg);
    r.fixture_version = fx.version;
    r.csv = blowup_csv(res);

    Json sched = Json::array();
    for (double la : res.schedule.ln_alphas)
        sched.push_back(-la);
    r.metrics["ln_inv_alphas"] = sched;
    r.metrics["source_coefficient"] = res.source_coefficient;
    r.metrics["target_coefficient"] = res.target_coefficient;

    r.table = fmt::format("{:>3} {:>14} {:>14} {:>14} {:>14} {:>12} {:>6}\n", "N",
                          "ln mod h", "ln |h|", "ln M(N)", "ln |H| lower", "min -ReH", "cross");
    Json rows = Json::array();
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const auto& row = res.rows[i];
        r.table += fmt::format("{:>3} {:>14.9f} {:>14.9f} {:>14.9f} {:>14.9f} {:>12.6e} {:>6}\n",
                               row.n, row.modular_h.ln_mag(), row.norm_h.ln_mag(),
                               row.modular_H_lower.ln_mag(), row.norm_H_lower.ln_mag(),
                               row.min_ReH_on_Vk, row.cross_positivity_ok ? "yes" : "no");
        rows.push_back({{"N", row.n},
                        {"ln_modular_h", row.modular_h.ln_mag()},
                        {"ln_norm_h", row.norm_h.ln_mag()},
                        {"ln_modular_H_lower", row.modular_H_lower.ln_mag()},
                        {"ln_norm_H_lower", row.norm_H_lower.ln_mag()},
                        {"min_ReH", row.min_ReH_on_Vk},
                        {"cross_ok", row.cross_positivity_ok},
                        {"ln_increment_h", row.increment_h.ln_mag()},
                        {"certified_bound", res.certified_bound[i]}});
    }
    r.metrics["rows"] = rows;

    // modular of h: monotone, geometric increments, under the certified bound
    bool monotone = true, bounded = true;
    double worst_ratio = 0;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        if (i > 0 && res.rows[i].modular_h < res.rows[i - 1].modular_h)
            monotone = false;
        if (res.rows[i].modular_h.to_double() > res.certified_bound[i])
            bounded = false;
        if (res.rows[i].n >= 3)
            worst_ratio = std::max(worst_ratio, std::exp(res.rows[i].increment_h.ln_mag()
                                                         - res.rows[i - 1].increment_h.ln_mag()));
    }
    add_check(r, "modular of h non-decreasing", monotone, "over N");
    add_check(r, "increment decay", worst_ratio <= fx.increment_ratio_max,
              fmt::format("max ratio for k >= 3: {:.6g} <= {:g}", worst_ratio,
                          fx.increment_ratio_max));
    add_check(r, "certified tail bound", bounded,
              fmt::format("modular {:.9g} <= {:.9g} at N={}", res.rows.back().modular_h.to_double(),
                          res.certified_bound.back(), res.rows.back().n));

    // lower bound of the image: linear growth, increasing norm
    const auto lmn = ln_m_over_n(res);
    const auto [mn_lo, mn_hi] = std::minmax_element(lmn.begin(), lmn.end());
    r.metrics["ln_m_over_n"] = lmn;
    add_check(r, "M(N)/N window", *mn_lo >= fx.ln_m_over_n_lo && *mn_hi <= fx.ln_m_over_n_hi,
              fmt::format("ln(M/N) in [{:.6f}, {:.6f}] within [{:.6f}, {:.6f}]", *mn_lo, *mn_hi,
                          fx.ln_m_over_n_lo, fx.ln_m_over_n_hi));
    const double slope = relative_growth_slope(res);
    r.metrics["relative_growth_slope"] = slope;
    add_check(r, "M(N) linear-fit slope", slope > 0,
              fmt::format("slope {:.6g} M(N_max) per step", slope));
    bool increasing = true;
    for (std::size_t i = 1; i < res.rows.size(); ++i)
        increasing = increasing && res.rows[i].norm_H_lower > res.rows[i - 1].norm_H_lower;
    add_check(r, "image norm lower bound increasing", increasing, "strict in N");
    const std::size_t last = res.rows.size() - 1;
    const double norm_step =
        std::abs(res.rows[last].norm_h.ln_mag() - res.rows[last - 1].norm_h.ln_mag());
    r.metrics["ln_norm_h_last_increment"] = norm_step;
    add_check(r, "norm of h converges", norm_step < 1e-6,
              fmt::format("ln increment at N={}: {:.3e} < 1e-6", res.rows[last].n, norm_step));

    bool cross = true, diag_ok = true;
    for (const auto& row : res.rows) {
        cross = cross && row.cross_positivity_ok;
        diag_ok = diag_ok && row.min_ReH_on_Vk >= fx.c_h_reference / 2;
    }
    add_check(r, "cross positivity", cross, "all rows");
    add_check(r, "image stable across scales", diag_ok,
              fmt::format("min -Re H on V_k {:.6g} >= c_H/2 = {:.6g}", res.rows.back().min_ReH_on_Vk,
                          fx.c_h_reference / 2));

    // single-patch image at the configured alphas
    Json l3 = Json::array();
    double c_lo = inf, c_hi = 0;
    r.table += fmt::format("{:>10} {:>14} {:>14} {:>14}\n", "alpha", "min -Re H", "max -Re H",
                           "min Re H");
    for (const auto& l : s.image_floor) {
        r.table += fmt::format("{:>10.3g} {:>14.8g} {:>14.8g} {:>14.8g}\n", l.alpha,
                               l.min_oriented_re, l.max_oriented_re, l.min_re);
        l3.push_back({{"alpha", l.alpha},
                      {"min_neg_re_H", l.min_oriented_re},
                      {"max_neg_re_H", l.max_oriented_re},
                      {"min_re_H", l.min_re},
                      {"max_re_H", l.max_re}});
        c_lo = std::min(c_lo, l.min_oriented_re);
        c_hi = std::max(c_hi, l.min_oriented_re);
    }
    r.metrics["single_patch_image"] = l3;
    add_check(r, "single-patch image floor", c_lo >= fx.c_h_floor,
              fmt::format("min -Re H {:.8g} >= c_H floor {:.8g}", c_lo, fx.c_h_floor));
    add_check(r, "single-patch image stability", c_hi <= 2 * c_lo,
              fmt::format("max/min {:.6g} <= 2", c_hi / c_lo));

    if (s.control) {
        Json ctl = Json::array();
        double lo = inf, hi = 0;
        bool first_ok = true;
        r.table += fmt::format("positive control, p = {:g}\n{:>3} {:>14} {:>14} {:>14}\n",
                               cfg.control_p, "N", "ln |h|", "ln |H| lower", "ratio");
        for (const auto& row : *s.control) {
            r.table += fmt::format("{:>3} {:>14.9f} {:>14.9f} {:>14.8g}\n", row.n,
                                   row.norm_h.ln_mag(), row.norm_H_lower.ln_mag(), row.ratio);
            ctl.push_back({{"N", row.n},
                           {"ln_norm_h", row.norm_h.ln_mag()},
                           {"ln_norm_H_lower", row.norm_H_lower.ln_mag()},
                           {"ratio", row.ratio}});
            lo = std::min(lo, row.ratio);
            hi = std::max(hi, row.ratio);
            if (row.n == 1)
                first_ok = std::isfinite(row.ratio) && row.ratio > 0;
        }
        r.metrics["positive_control"] = ctl;
        add_check(r, "positive control N=1 finite", first_ok, "ratio finite and positive");
        add_check(r, "positive control bounded", hi <= fx.control_spread_max * lo,
                  fmt::format("max/min {:.6g} <= {:g}", hi / lo, fx.control_spread_max));
    }

    r.table += fmt::format("runtime {:.2f} s\n", s.seconds);
    r.table += render_checks(r);
    return r;
}

CommandReport cmd_blowup(const RunConfig& cfg, const Fixtures& fx)
{
    if (!fx.has_blowup)
        throw ConfigError("fixtures have no blowup section; run blowup --calibrate first");
    return evaluate_blowup(cfg, fx, run_blowup_study(cfg, cfg.positive_control));
}

Fixtures calibrate_blowup(const RunConfig& cfg, const BlowupStudy& s, Fixtures base)
{
    double c_lo = inf;
    for (const auto& l : s.image_floor)
        c_lo = std::min(c_lo, l.min_oriented_re);
    if (!(c_lo > 0))
        throw Error(fmt::format("blowup calibration measured a non-positive image minimum {}", c_lo));
    const auto lmn = ln_m_over_n(s.result);
    const auto [lo, hi] = std::minmax_element(lmn.begin(), lmn.end());
    base.has_blowup = true;
    base.c_h_reference = c_lo;
    base.c_h_floor = floor_fraction * c_lo;
    base.ln_m_over_n_lo = *lo + std::log(floor_fraction);
    base.ln_m_over_n_hi = *hi + std::log(window_widen);
    base.calibration_config = to_json(cfg);
    return base;
}

// ---- log-Hoelder ------------------------------------------------------------

PointPair straddle_pair(double alpha, const Ellipsoid& e)
{
    return {lift({0.0, 0.0, -alpha}, e), lift({0.0, 0.0, alpha}, e)};
}

QuasimetricBounds quasimetric_bounds(const Ellipsoid& e, long n, std::uint64_t seed)
{
    UniformSource rng(seed);
    QuasimetricBounds b;
    b.lower_constant = inf;
    const double two_delta = 2 * std::max(e.m1(), e.m2());
    while (b.samples < n) {
        const ParamPoint p{rng.next(), rng.next(-pi, pi), rng.next(-pi, pi)};
        const double step = std::pow(10.0, -6 * rng.next());
        const ParamPoint q{std::clamp(p.r1 + step * rng.next(-1.0, 1.0), 0.0, 1.0),
                           p.theta1 + step * rng.next(-1.0, 1.0),
                           p.theta2 + step * rng.next(-1.0, 1.0)};
        const BoundaryPoint xi = lift(p, e);
        const BoundaryPoint z = lift(q, e);
        const double dist = std::hypot(std::abs(xi.z1 - z.z1), std::abs(xi.z2 - z.z2));
        if (!(dist > 0 && dist < 1))
            continue;
        const double d = quasimetric(xi, z, e);
        b.lower_constant = std::min(b.lower_constant, d / std::pow(dist, two_delta));
        b.upper_constant = std::max(b.upper_constant, d / dist);
        b.max_asymmetry = std::max(b.max_asymmetry, std::abs(d - quasimetric(z, xi, e)));
        ++b.samples;
    }
    return b;
}

HolderStudy run_holder_study(const RunConfig& cfg)
{
    cfg.validate();
    const Ellipsoid e = cfg.ellipsoid();
    const LogHolderControlField control{cfg.field.p0};

    HolderStudy s;
    for (double alpha : cfg.holder_alphas) {
        const PointPair pair = straddle_pair(alpha, e);
        const std::span<const PointPair> one(&pair, 1);
        HolderRow row;
        row.alpha = alpha;
        row.separation = std::hypot(std::abs(pair.xi.z1 - pair.z.z1), std::abs(pair.xi.z2 - pair.z.z2));
        row.modulus_field = log_holder_modulus(one, cfg.field);
        row.modulus_control = log_holder_modulus(one, control);
        s.rows.push_back(row);
    }
    const HolderRow& first = s.rows.front();
    s.growth = first.modulus_field > 0 ? s.rows.back().modulus_field / first.modulus_field : 0.0;
    for (const auto& row : s.rows) {
        const double q = row.modulus_control / first.modulus_control;
        s.control_spread = std::max({s.control_spread, q, 1 / q});
    }
    s.quasimetric = quasimetric_bounds(e, cfg.quasimetric_samples, cfg.seed);
    return s;
}

CommandReport cmd_check_log_holder(const RunConfig& cfg)
{
    const HolderStudy s = run_holder_study(cfg);

    CommandReport r;
    r.command = "check-log-holder";
    r.config_echo = to_json(cfg);
    r.table = fmt::format("{:>10} {:>14} {:>16} {:>16}\n", "alpha", "|xi - z|", "modulus p",
                          "modulus control");
    Json rows = Json::array();
    for (const auto& row : s.rows) {
        r.table += fmt::format("{:>10.3g} {:>14.8g} {:>16.10g} {:>16.10g}\n", row.alpha,
                               row.separation, row.modulus_field, row.modulus_control);
        rows.push_back({{"alpha", row.alpha},
                        {"separation", row.separation},
                        {"modulus_field", row.modulus_field},
                        {"modulus_control", row.modulus_control}});
    }
    r.metrics["rows"] = rows;
    r.metrics["growth"] = s.growth;
    r.metrics["control_spread"] = s.control_spread;
    r.metrics["quasimetric"] = {{"lower_constant", s.quasimetric.lower_constant},
                                {"upper_constant", s.quasimetric.upper_constant},
                                {"two_delta", 2 * std::max(cfg.m1, cfg.m2)},
                                {"max_asymmetry", s.quasimetric.max_asymmetry},
                                {"samples", s.quasimetric.samples}};
    r.table += fmt::format("quasimetric: {:.6g} |xi-z|^{:g} <= d <= {:.6g} |xi-z| over {} pairs, "
                           "asymmetry {:g}\n",
                           s.quasimetric.lower_constant, 2 * std::max(cfg.m1, cfg.m2),
                           s.quasimetric.upper_constant, s.quasimetric.samples,
                           s.quasimetric.max_asymmetry);

    add_check(r, "exponent modulus grows", s.growth >= holder_growth_min,
              fmt::format("growth {:.6g} >= {:g} from alpha={:g} to {:g}", s.growth,
                          holder_growth_min, s.rows.front().alpha, s.rows.back().alpha));
    add_check(r, "control modulus bounded", s.control_spread <= holder_control_spread_max,
              fmt::format("spread {:.6g} <= {:g}", s.control_spread, holder_control_spread_max));
    add_check(r, "quasimetric two-sided bound",
              s.quasimetric.lower_constant > 0 && std::isfinite(s.quasimetric.upper_constant)
                  && s.quasimetric.max_asymmetry == 0,
              "positive lower constant, finite upper constant, exact symmetry");
    r.table += render_checks(r);
    return r;
}

// ---- output -----------------------------------------------------------------

void write_report(const CommandReport& r, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    const std::filesystem::path base = std::filesystem::path(dir) / r.command;
    {
        std::ofstream out(base.string() + ".json", std::ios::binary);
        if (!out)
            throw ConfigError(fmt::format("cannot write report under '{}'", dir));
        out << r.to_json().dump(2) << '\n';
    }
    if (!r.csv.empty()) {
        std::ofstream out(base.string() + ".csv", std::ios::binary);
        if (!out)
            throw ConfigError(fmt::format("cannot write CSV under '{}'", dir));
        out << r.csv;
    }
}

} // namespace clf
