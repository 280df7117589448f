#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "clf/geometry.hpp"
#include "clf/log_scalar.hpp"
#include "clf/patches.hpp"
#include "clf/quadrature.hpp"

namespace clf {

/// psi(theta) = A / sqrt(log(1/theta)) on (0, cap_point], constant
/// A / sqrt(log(1/cap_point)) above cap_point, psi(0) = 0, extended oddly.
struct PsiParams {
    double amplitude = 2.0;
    double cap_point = 0.36787944117144233; // e^-1

    /// Throws DomainError unless amplitude >= 0 and cap_point is in (0, 1).
    void validate() const;
};

double psi_eval(double theta, const PsiParams& psi);

/// psi(e^{-L}) for L = log(1/theta) > 0, usable when theta underflows.
double psi_at_log_scale(double ln_inv_theta, const PsiParams& psi);

/// p(xi) = p0 + psi(theta2).
struct ExponentField {
    double p0 = 4.0;
    PsiParams psi;

    /// Throws DomainError unless p0 - A > 1.
    void validate() const;
    double at_theta2(double theta2) const { return p0 + psi_eval(theta2, psi); }
    double operator()(const BoundaryPoint& xi) const { return at_theta2(xi.param.theta2); }
    double inf() const { return p0 - psi.amplitude; }
    double sup() const { return p0 + psi.amplitude; }
    bool is_constant() const { return psi.amplitude == 0.0; }
};

double exponent_eval(const BoundaryPoint& xi, const ExponentField& field);

/// A log-Hoelder exponent for comparison:
/// p0 + sign(theta2) / log(e + 1/|theta2|).
struct LogHolderControlField {
    double p0 = 4.0;

    double at_theta2(double theta2) const;
    double operator()(const BoundaryPoint& xi) const { return at_theta2(xi.param.theta2); }
};

/// d(xi, z) = |w(xi, z)| + |w(z, xi)|.
double quasimetric(const BoundaryPoint& xi, const BoundaryPoint& z, const Ellipsoid& e);

struct PointPair {
    BoundaryPoint xi;
    BoundaryPoint z;
};

/// max over pairs of |p(xi) - p(z)| * |log |xi - z||. Pairs must be
/// distinct with |xi - z| < 1.
template <class Field>
double log_holder_modulus(std::span<const PointPair> pairs, const Field& field)
{
    double best = 0.0;
    for (const auto& pr : pairs) {
        const double dz1 = std::abs(pr.xi.z1 - pr.z.z1);
        const double dz2 = std::abs(pr.xi.z2 - pr.z.z2);
        const double dist = std::hypot(dz1, dz2);
        if (!(dist > 0.0 && dist < 1.0))
            throw DomainError("log_holder_modulus: pair separation must be in (0, 1)");
        const double value = std::abs(field(pr.xi) - field(pr.z)) * std::abs(std::log(dist));
        best = std::max(best, value);
    }
    return best;
}

/// One weighted indicator term of a PatchSum.
struct PatchTerm {
    LogScalar weight;
    PatchSpec patch;
};

/// Finite sum of weighted indicators of pairwise disjoint patches.
class PatchSum {
public:
    PatchSum() = default;
    /// Throws DomainError if a weight is not positive or patches overlap.
    explicit PatchSum(std::vector<PatchTerm> terms);

    std::span<const PatchTerm> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    /// Sum restricted to the first n terms.
    PatchSum truncated(std::size_t n) const;
    /// Every weight multiplied by t > 0.
    PatchSum scaled(const LogScalar& t) const;

private:
    std::vector<PatchTerm> terms_;
};

/// Precomputed integrand of the modular: one quadrature rule per term with
/// the exponent sampled at every node. Evaluation is pure log-domain.
class ModularEvaluator {
public:
    ModularEvaluator(const PatchSum& f, const ExponentField& field, const QuadratureGrid& grid,
                     const Ellipsoid& e);

    /// sum_k integral over patch_k of (weight_k / lambda)^p(xi) dS.
    LogScalar operator()(const LogScalar& lambda) const;
    /// Contribution of term k alone.
    LogScalar term(std::size_t k, const LogScalar& lambda) const;

    std::size_t size() const { return terms_.size(); }
    double min_ln_weight() const;
    double max_ln_weight() const;

private:
    struct NodeData {
        double p;
        double ln_weight;
    };
    struct TermData {
        double ln_coeff;
        std::vector<NodeData> nodes;
    };
    void accumulate(const TermData& t, double ln_lambda, LogSumExp& acc) const;

    std::vector<TermData> terms_;
};

LogScalar modular(const PatchSum& f, const LogScalar& lambda, const ExponentField& field,
                  const QuadratureGrid& grid, const Ellipsoid& e);

/// inf { lambda > 0 : modular(f / lambda) <= 1 }, by bisection on log(lambda)
/// from [min log w - 50, max log w + 50], widened geometrically as needed.
/// Returns zero for the empty sum. Throws BracketError if the modular is not
/// finite at the initial upper bracket, or if the converged value misses 1
/// by more than `tol`.
LogScalar luxemburg_norm(const ModularEvaluator& modular, double tol = 1e-10);

LogScalar luxemburg_norm(const PatchSum& f, const ExponentField& field, const QuadratureGrid& grid,
                         double tol, const Ellipsoid& e);

} // namespace clf
