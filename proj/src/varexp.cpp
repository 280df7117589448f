#include "clf/varexp.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "clf/errors.hpp"
#include "clf/kernel.hpp"
#include "clf/root_finding.hpp"

namespace clf {

void PsiParams::validate() const
{
    if (!(amplitude >= 0) || !std::isfinite(amplitude))
        throw DomainError(fmt::format("psi amplitude must be >= 0 (got {})", amplitude));
    if (!(cap_point > 0 && cap_point < 1))
        throw DomainError(fmt::format("psi cap_point must be in (0, 1) (got {})", cap_point));
}

double psi_at_log_scale(double ln_inv_theta, const PsiParams& psi)
{
    const double cap_log = -std::log(psi.cap_point);
    return psi.amplitude / std::sqrt(std::max(ln_inv_theta, cap_log));
}

double psi_eval(double theta, const PsiParams& psi)
{
    if (theta == 0.0 || psi.amplitude == 0.0)
        return 0.0;
    const double value = psi_at_log_scale(-std::log(std::abs(theta)), psi);
    return theta > 0 ? value : -value;
}

void ExponentField::validate() const
{
    psi.validate();
    if (!(p0 > 1) || !std::isfinite(p0))
        throw DomainError(fmt::format("exponent p0 must be > 1 (got {})", p0));
    if (!(p0 - psi.amplitude > 1))
        throw DomainError(fmt::format("exponent needs p0 - A > 1 (got p0={}, A={})", p0,
                                      psi.amplitude));
}

double exponent_eval(const BoundaryPoint& xi, const ExponentField& field)
{
    return field(xi);
}

double LogHolderControlField::at_theta2(double theta2) const
{
    if (theta2 == 0.0)
        return p0;
    const double v = 1.0 / std::log(std::numbers::e + 1.0 / std::abs(theta2));
    return theta2 > 0 ? p0 + v : p0 - v;
}

double quasimetric(const BoundaryPoint& xi, const BoundaryPoint& z, const Ellipsoid& e)
{
    return std::abs(w_eval(xi, z, e)) + std::abs(w_eval(z, xi, e));
}

PatchSum::PatchSum(std::vector<PatchTerm> terms) : terms_(std::move(terms))
{
    std::vector<PatchSpec> patches;
    for (const auto& t : terms_) {
        if (t.weight.sign() <= 0)
            throw DomainError("PatchSum weights must be positive");
        patches.push_back(t.patch);
    }
    if (!disjointness_check(patches))
        throw DomainError("PatchSum patches must be pairwise disjoint");
}

PatchSum PatchSum::truncated(std::size_t n) const
{
    PatchSum out;
    out.terms_.assign(terms_.begin(), terms_.begin() + std::min(n, terms_.size()));
    return out;
}

PatchSum PatchSum::scaled(const LogScalar& t) const
{
    if (t.sign() <= 0)
        throw DomainError("PatchSum::scaled needs a positive factor");
    PatchSum out = *this;
    for (auto& term : out.terms_)
        term.weight *= t;
    return out;
}

ModularEvaluator::ModularEvaluator(const PatchSum& f, const ExponentField& field,
                                   const QuadratureGrid& grid, const Ellipsoid& e)
{
    field.validate();
    for (const auto& term : f.terms()) {
        const BoundaryRule rule(term.patch.box(e), grid, Density::leray, e);
        TermData data{term.weight.ln_mag(), {}};
        data.nodes.reserve(rule.nodes().size());
        for (const auto& node : rule.nodes())
            data.nodes.push_back({field(node.point), node.ln_weight});
        terms_.push_back(std::move(data));
    }
}

void ModularEvaluator::accumulate(const TermData& t, double ln_lambda, LogSumExp& acc) const
{
    const double ln_ratio = t.ln_coeff - ln_lambda;
    for (const auto& n : t.nodes)
        acc.add(n.p * ln_ratio + n.ln_weight);
}

LogScalar ModularEvaluator::operator()(const LogScalar& lambda) const
{
    if (lambda.sign() <= 0)
        throw DomainError("modular: lambda must be positive");
    LogSumExp acc;
    for (const auto& t : terms_)
        accumulate(t, lambda.ln_mag(), acc);
    return acc.value();
}

LogScalar ModularEvaluator::term(std::size_t k, const LogScalar& lambda) const
{
    if (lambda.sign() <= 0)
        throw DomainError("modular: lambda must be positive");
    LogSumExp acc;
    accumulate(terms_.at(k), lambda.ln_mag(), acc);
    return acc.value();
}

double ModularEvaluator::min_ln_weight() const
{
    double v = std::numeric_limits<double>::infinity();
    for (const auto& t : terms_)
        v = std::min(v, t.ln_coeff);
    return v;
}

double ModularEvaluator::max_ln_weight() const
{
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms_)
        v = std::max(v, t.ln_coeff);
    return v;
}

LogScalar modular(const PatchSum& f, const LogScalar& lambda, const ExponentField& field,
                  const QuadratureGrid& grid, const Ellipsoid& e)
{
    return ModularEvaluator(f, field, grid, e)(lambda);
}

LogScalar luxemburg_norm(const ModularEvaluator& modular, double tol)
{
    if (modular.size() == 0)
        return LogScalar::zero();
    if (!(tol > 0))
        throw DomainError("luxemburg_norm: tolerance must be positive");

    auto ln_mod = [&](double ln_lambda) { return modular(LogScalar::from_log(ln_lambda)).ln_mag(); };
    const double lo0 = modular.min_ln_weight() - 50;
    const double hi0 = modular.max_ln_weight() + 50;
    if (!std::isfinite(ln_mod(hi0)))
        throw BracketError("luxemburg_norm: modular not finite at the initial upper bracket");

    auto small_enough = [&](double ln_lambda) { return ln_mod(ln_lambda) <= 0.0; };
    const Bracket start = expand_bracket(small_enough, lo0, hi0);
    const Bracket b = bisect_predicate(small_enough, start.lo, start.hi);

    const double m = std::exp(ln_mod(b.hi));
    if (std::abs(m - 1.0) > tol)
        throw BracketError(fmt::format(
            "luxemburg_norm: modular at the root is {:.17g}, outside 1 +- {}", m, tol));
    return LogScalar::from_log(b.hi);
}

LogScalar luxemburg_norm(const PatchSum& f, const ExponentField& field, const QuadratureGrid& grid,
                         double tol, const Ellipsoid& e)
{
    return luxemburg_norm(ModularEvaluator(f, field, grid, e), tol);
}

} // namespace clf
