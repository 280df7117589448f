#include "clf/counterexample.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "clf/errors.hpp"
#include "clf/kernel.hpp"
#include "clf/root_finding.hpp"

namespace clf {

bool decay_condition_holds(double ln_inv_alpha, std::size_t k, const ExponentField& field)
{
    const double psi = psi_at_log_scale(ln_inv_alpha, field.psi);
    const double lhs = ln_inv_alpha * (1.0 / (field.p0 + psi) - 1.0 / field.p0);
    const double rhs = -double(k) * std::numbers::ln2 / field.p0;
    return lhs <= rhs;
}

AlphaSchedule select_alphas(int n, const ExponentField& field, double log_budget)
{
    field.validate();
    if (n < 1)
        throw DomainError(fmt::format("select_alphas needs N >= 1 (got {})", n));
    if (field.is_constant())
        throw DomainError("select_alphas: a constant exponent admits no decaying schedule");

    AlphaSchedule s;
    s.field = field;
    double prev = 0.0;
    for (int k = 1; k <= n; ++k) {
        const double lo = k == 1 ? 0.0 : prev + std::numbers::ln2;
        auto pred = [&](double L) { return L > 0 && decay_condition_holds(L, k, field); };
        double L = lo;
        if (!pred(lo)) {
            double hi = std::max(2 * lo, 1.0);
            while (!pred(hi)) {
                if (hi > log_budget)
                    throw Error(fmt::format(
                        "select_alphas: log(1/alpha_{}) exceeds the log-domain budget {}", k,
                        log_budget));
                hi *= 2;
            }
            L = bisect_predicate(pred, lo, hi).hi;
        }
        if (L > log_budget)
            throw Error(fmt::format(
                "select_alphas: log(1/alpha_{}) = {} exceeds the log-domain budget {}", k, L,
                log_budget));
        s.ln_alphas.push_back(-L);
        prev = L;
    }
    return s;
}

ScheduleCheck check_schedule(const AlphaSchedule& s)
{
    ScheduleCheck c;
    const auto& f = s.field;
    for (std::size_t k = 1; k <= s.size(); ++k) {
        const double L = s.ln_inv_alpha(k);
        if (k > 1 && !(L >= s.ln_inv_alpha(k - 1) + std::numbers::ln2))
            c.halving = false;
        if (!decay_condition_holds(L, k, f))
            c.decay = false;
        const double psi = psi_at_log_scale(L, f.psi);
        const double lhs = L * (1.0 / (f.p0 + psi) - 1.0 / f.p0);
        const double rhs = -double(k) * std::numbers::ln2 / f.p0;
        c.worst_decay_ratio = std::max(c.worst_decay_ratio, rhs / lhs);
    }
    return c;
}

LogScalar lambda_of(std::size_t k, const AlphaSchedule& s)
{
    if (k < 1 || k > s.size())
        throw DomainError(fmt::format("lambda_of: index {} outside 1..{}", k, s.size()));
    const double L = s.ln_inv_alpha(k);
    const double p = s.field.p0 + psi_at_log_scale(L, s.field.psi);
    return LogScalar::from_log(2.0 * L / p);
}

PatchSum build_h(const AlphaSchedule& s, const GammaConfig& cfg)
{
    std::vector<PatchTerm> terms;
    for (std::size_t k = 1; k <= s.size(); ++k)
        terms.push_back({lambda_of(k, s), make_patch(PatchKind::source, s.alpha(k), cfg)});
    return PatchSum(std::move(terms));
}

LogScalar ScaledComplex::real() const
{
    const double re = mantissa.real();
    if (re == 0.0)
        return LogScalar::zero();
    return LogScalar::from_log(ln_scale + std::log(std::abs(re)), re > 0 ? 1 : -1);
}

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b)
{
    if (a.mantissa == Complex{})
        return b;
    if (b.mantissa == Complex{})
        return a;
    const double m = std::max(a.ln_scale, b.ln_scale);
    return {m, a.mantissa * std::exp(a.ln_scale - m) + b.mantissa * std::exp(b.ln_scale - m)};
}

ImageEvaluator::ImageEvaluator(const PatchSum& h, const QuadratureGrid& grid, const Ellipsoid& e)
    : e_(e)
{
    for (const auto& term : h.terms()) {
        rules_.emplace_back(term.patch.box(e), grid, Density::leray, e);
        scales_.push_back(term.patch.alpha);
        ln_weights_.push_back(term.weight.ln_mag());
    }
}

Complex ImageEvaluator::unit_term(std::size_t j, const BoundaryPoint& z) const
{
    const BoundaryRule& rule = rules_.at(j);
    if (rule.box().contains(z.param))
        throw DomainError("eval_H: evaluation point lies inside the support of h");
    return clf_apply_indicator(rule, z, scales_[j], e_);
}

ScaledComplex ImageEvaluator::operator()(const BoundaryPoint& z) const
{
    ScaledComplex sum;
    for (std::size_t j = 0; j < rules_.size(); ++j)
        sum = sum + ScaledComplex{ln_weights_[j], unit_term(j, z)};
    return sum;
}

ScaledComplex eval_H(const PatchSum& h, const BoundaryPoint& z, const QuadratureGrid& grid,
                     const Ellipsoid& e)
{
    return ImageEvaluator(h, grid, e)(z);
}

void EvalGrid::validate() const
{
    if (n_r < 1 || n_t1 < 1 || n_t2 < 1)
        throw DomainError(
            fmt::format("evaluation grid counts must be >= 1 (got {}x{}x{})", n_r, n_t1, n_t2));
}

std::vector<BoundaryPoint> evaluation_points(const PatchSpec& p, const EvalGrid& g,
                                             const Ellipsoid& e)
{
    g.validate();
    const ParamBox b = p.box(e);
    auto at = [](double lo, double hi, int i, int n) {
        return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
    };
    std::vector<BoundaryPoint> pts;
    pts.reserve(std::size_t(g.n_r) * g.n_t1 * g.n_t2);
    for (int i = 0; i < g.n_r; ++i)
        for (int j = 0; j < g.n_t1; ++j)
            for (int k = 0; k < g.n_t2; ++k)
                pts.push_back(lift({at(b.r_lo, b.r_hi, i, g.n_r), at(b.t1_lo, b.t1_hi, j, g.n_t1),
                                    at(b.t2_lo, b.t2_hi, k, g.n_t2)},
                                   e));
    return pts;
}

ImageFloorReport image_floor_scan(double alpha, const GammaConfig& cfg, const QuadratureGrid& patch_grid,
                         const EvalGrid& v_grid, const Ellipsoid& e)
{
    const PatchSpec w = make_patch(PatchKind::source, alpha, cfg);
    const PatchSpec v = make_patch(PatchKind::target, alpha, cfg);
    const BoundaryRule rule(w.box(e), patch_grid, Density::leray, e);

    ImageFloorReport r;
    r.alpha = alpha;
    r.min_oriented_re = std::numeric_limits<double>::infinity();
    r.max_oriented_re = -std::numeric_limits<double>::infinity();
    r.min_re = std::numeric_limits<double>::infinity();
    r.max_re = -std::numeric_limits<double>::infinity();
    for (const auto& z : evaluation_points(v, v_grid, e)) {
        const Complex H = clf_apply_indicator(rule, z, alpha, e);
        r.min_oriented_re = std::min(r.min_oriented_re, oriented_real(H));
        r.max_oriented_re = std::max(r.max_oriented_re, oriented_real(H));
        r.min_re = std::min(r.min_re, H.real());
        r.max_re = std::max(r.max_re, H.real());
        ++r.points;
    }
    return r;
}

BlowupConfig BlowupConfig::defaults()
{
    BlowupConfig cfg;
    cfg.gammas = choose_gammas(cfg.ellipsoid, 0.9);
    return cfg;
}

LogScalar ImageTable::min_image_on_target(std::size_t k, std::size_t n) const
{
    const auto& vals = values.at(k - 1);
    LogScalar best;
    bool first = true;
    for (const auto& at_point : vals) {
        LogScalar sum;
        for (std::size_t j = 0; j < n; ++j)
            sum += h.terms()[j].weight * LogScalar::from_double(oriented_real(at_point[j]));
        if (first || sum < best) {
            best = sum;
            first = false;
        }
    }
    return best;
}

double ImageTable::min_diagonal(std::size_t k) const
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& at_point : values.at(k - 1))
        best = std::min(best, oriented_real(at_point[k - 1]));
    return best;
}

bool ImageTable::cross_positive(std::size_t n) const
{
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& at_point : values[k])
            for (std::size_t j = 0; j < n; ++j)
                if (j != k && !(oriented_real(at_point[j]) > 0))
                    return false;
    return true;
}

ImageTable build_image_table(const BlowupConfig& cfg)
{
    ImageTable t;
    t.schedule = select_alphas(cfg.n_max, cfg.field, cfg.log_budget);
    t.h = build_h(t.schedule, cfg.gammas);
    const ImageEvaluator image(t.h, cfg.patch_grid, cfg.ellipsoid);
    for (std::size_t k = 1; k <= t.schedule.size(); ++k) {
        t.targets.push_back(make_patch(PatchKind::target, t.schedule.alpha(k), cfg.gammas));
        t.points.push_back(evaluation_points(t.targets.back(), cfg.v_grid, cfg.ellipsoid));
        auto& vals = t.values.emplace_back();
        for (const auto& z : t.points.back()) {
            auto& row = vals.emplace_back();
            for (std::size_t j = 0; j < image.size(); ++j)
                row.push_back(image.unit_term(j, z));
        }
    }
    return t;
}

namespace {

/// sum_{k <= n} c_k chi_{V_k}, skipping targets whose lower value is not positive.
PatchSum lower_bound_sum(const ImageTable& t, std::size_t n)
{
    std::vector<PatchTerm> terms;
    for (std::size_t k = 1; k <= n; ++k) {
        const LogScalar c = t.min_image_on_target(k, n);
        if (c.sign() > 0)
            terms.push_back({c, t.targets[k - 1]});
    }
    return PatchSum(std::move(terms));
}

} // namespace

BlowupResult blowup_experiment(const BlowupConfig& cfg)
{
    return blowup_experiment(cfg, build_image_table(cfg));
}

BlowupResult blowup_experiment(const BlowupConfig& cfg, const ImageTable& t)
{
    if (cfg.n_max < 2)
        throw DomainError(fmt::format("blowup_experiment needs N_max >= 2 (got {})", cfg.n_max));
    const Ellipsoid& e = cfg.ellipsoid;

    BlowupResult res;
    res.schedule = t.schedule;
    res.source_coefficient = analytic_measure_coefficient(t.h.terms()[0].patch, e);
    res.target_coefficient = analytic_measure_coefficient(t.targets[0], e);

    const ModularEvaluator full(t.h, cfg.field, cfg.patch_grid, e);
    LogSumExp running;
    double min_diag = std::numeric_limits<double>::infinity();
    double bound = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
        BlowupRow row;
        row.n = n;
        row.increment_h = full.term(n - 1, LogScalar::one());
        running.add(row.increment_h);
        row.modular_h = running.value();
        row.norm_h = luxemburg_norm(ModularEvaluator(t.h.truncated(n), cfg.field, cfg.patch_grid, e),
                                    cfg.tol);

        const PatchSum lower = lower_bound_sum(t, n);
        const ModularEvaluator lower_mod(lower, cfg.field, cfg.patch_grid, e);
        row.modular_H_lower = lower_mod(LogScalar::one());
        row.norm_H_lower = luxemburg_norm(lower_mod, cfg.tol);

        min_diag = std::min(min_diag, t.min_diagonal(n));
        row.min_ReH_on_Vk = min_diag;
        row.cross_positivity_ok = t.cross_positive(n);
        res.rows.push_back(row);

        bound += res.source_coefficient * std::pow(4.0, -n);
        res.certified_bound.push_back(bound);
    }
    return res;
}

std::vector<ControlRow> positive_control(const BlowupConfig& cfg, double p_const)
{
    return positive_control(cfg, build_image_table(cfg), p_const);
}

std::vector<ControlRow> positive_control(const BlowupConfig& cfg, const ImageTable& t,
                                         double p_const)
{
    if (!(p_const > 1) || !std::isfinite(p_const))
        throw DomainError(fmt::format("positive control exponent must be in (1, inf) (got {})",
                                      p_const));
    ExponentField constant;
    constant.p0 = p_const;
    constant.psi.amplitude = 0.0;
    constant.psi.cap_point = cfg.field.psi.cap_point;

    std::vector<ControlRow> rows;
    for (int n = 1; n <= cfg.n_max; ++n) {
        ControlRow row;
        row.n = n;
        row.norm_h = luxemburg_norm(t.h.truncated(n), constant, cfg.patch_grid, cfg.tol,
                                    cfg.ellipsoid);
        row.norm_H_lower = luxemburg_norm(lower_bound_sum(t, n), constant, cfg.patch_grid, cfg.tol,
                                          cfg.ellipsoid);
        row.ratio = std::exp(row.norm_H_lower.ln_mag() - row.norm_h.ln_mag());
        rows.push_back(row);
    }
    return rows;
}

} // namespace clf
