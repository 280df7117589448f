#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <fmt/format.h>

#include "clf/errors.hpp"
#include "clf/geometry.hpp"

namespace clf {

/// Open one-dimensional node families; neither touches the interval ends.
enum class NodeRule {
    gauss_legendre,
    midpoint,
};

/// One-dimensional rule on [-1, 1].
struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights, computed by Newton iteration and cached.
const Rule1D& gauss_legendre_rule(int n);
const Rule1D& midpoint_rule(int n);
const Rule1D& rule_1d(NodeRule rule, int n);

/// Node counts of a tensor-product rule over (r1, theta1, theta2).
struct QuadratureGrid {
    int n_r = 32;
    int n_t1 = 16;
    int n_t2 = 16;
    NodeRule rule = NodeRule::gauss_legendre;

    /// Throws DomainError unless every count is >= 2.
    void validate() const;
    QuadratureGrid refined(int factor = 2) const
    {
        return {n_r * factor, n_t1 * factor, n_t2 * factor, rule};
    }
    long size() const { return long(n_r) * n_t1 * n_t2; }
};

/// Closed box in chart coordinates.
struct ParamBox {
    double r_lo = 0.0;
    double r_hi = 1.0;
    double t1_lo = -pi;
    double t1_hi = pi;
    double t2_lo = -pi;
    double t2_hi = pi;

    static ParamBox full() { return {}; }
    /// Throws DomainError unless the box lies inside [0,1] x [-pi,pi] x [-pi,pi].
    void validate() const;
    bool contains(const ParamPoint& p) const
    {
        return p.r1 >= r_lo && p.r1 <= r_hi && p.theta1 >= t1_lo && p.theta1 <= t1_hi
            && p.theta2 >= t2_lo && p.theta2 <= t2_hi;
    }
};

/// Which surface weight multiplies the integrand.
enum class Density {
    leray, ///< exact pullback of the Leray form, m1^2 m2 r1^(2m1-1)
    sigma, ///< omega-weighted induced surface measure
};

double density_value(Density d, double r1, const Ellipsoid& e);
/// Natural log of `density_value`, evaluated without forming the density.
double ln_density_value(Density d, double r1, const Ellipsoid& e);

struct WeightedNode {
    BoundaryPoint point;
    double weight;    ///< quadrature weight times density
    double ln_weight; ///< log of `weight`, formed from logs (no underflow)
};

/// Tensor-product rule over a box with the density folded into the weights.
/// Nodes are ordered r1-major, then theta1, then theta2.
class BoundaryRule {
public:
    BoundaryRule(const ParamBox& box, const QuadratureGrid& grid, Density density,
                 const Ellipsoid& e);

    std::span<const WeightedNode> nodes() const { return nodes_; }
    const ParamBox& box() const { return box_; }
    const QuadratureGrid& grid() const { return grid_; }
    Density density() const { return density_; }

private:
    ParamBox box_;
    QuadratureGrid grid_;
    Density density_;
    std::vector<WeightedNode> nodes_;
};

/// Neumaier-compensated running sum of complex values.
class CompensatedSum {
public:
    void add(Complex x)
    {
        add_one(re_, re_c_, x.real());
        add_one(im_, im_c_, x.imag());
    }
    Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_one(double& s, double& c, double x)
    {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

[[noreturn]] void throw_non_finite(const WeightedNode& node, Complex value);

/// Sum of weight * f(point) over the rule, in node order.
template <class F>
Complex integrate(const BoundaryRule& rule, F&& f)
{
    CompensatedSum sum;
    for (const auto& node : rule.nodes()) {
        const Complex v = Complex(f(node.point));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw_non_finite(node, v);
        sum.add(node.weight * v);
    }
    return sum.value();
}

/// Integral of f against the chosen density over a chart box.
template <class F>
Complex integrate_boundary(F&& f, const ParamBox& box, const QuadratureGrid& grid,
                           Density density, const Ellipsoid& e)
{
    return integrate(BoundaryRule(box, grid, density, e), std::forward<F>(f));
}

} // namespace clf
