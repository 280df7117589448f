#include "clf/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace clf {

namespace {

Rule1D compute_gauss_legendre(int n)
{
    Rule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;
    return rule;
}

Rule1D compute_midpoint(int n)
{
    Rule1D rule;
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(-1.0 + (2.0 * i + 1.0) / n);
        rule.weights.push_back(2.0 / n);
    }
    return rule;
}

const Rule1D& cached(NodeRule kind, int n)
{
    static std::mutex mutex;
    static std::map<std::pair<NodeRule, int>, std::unique_ptr<Rule1D>> cache;
    if (n < 1)
        throw DomainError(fmt::format("quadrature rule needs n >= 1 (got {})", n));
    std::lock_guard lock(mutex);
    auto& slot = cache[{kind, n}];
    if (!slot) {
        slot = std::make_unique<Rule1D>(kind == NodeRule::gauss_legendre
                                            ? compute_gauss_legendre(n)
                                            : compute_midpoint(n));
    }
    return *slot;
}

void check_interval(double lo, double hi, double min, double max, const char* axis)
{
    if (!(lo >= min && hi <= max && lo <= hi))
        throw DomainError(fmt::format("box {} interval [{}, {}] not inside [{}, {}]", axis, lo,
                                      hi, min, max));
}

} // namespace

const Rule1D& gauss_legendre_rule(int n)
{
    return cached(NodeRule::gauss_legendre, n);
}

const Rule1D& midpoint_rule(int n)
{
    return cached(NodeRule::midpoint, n);
}

const Rule1D& rule_1d(NodeRule rule, int n)
{
    return cached(rule, n);
}

void QuadratureGrid::validate() const
{
    if (n_r < 2 || n_t1 < 2 || n_t2 < 2)
        throw DomainError(
            fmt::format("quadrature grid counts must be >= 2 (got {}x{}x{})", n_r, n_t1, n_t2));
}

void ParamBox::validate() const
{
    check_interval(r_lo, r_hi, 0.0, 1.0, "r1");
    check_interval(t1_lo, t1_hi, -pi, pi, "theta1");
    check_interval(t2_lo, t2_hi, -pi, pi, "theta2");
}

double density_value(Density d, double r1, const Ellipsoid& e)
{
    return d == Density::leray ? leray_density(r1, e) : sigma_density(r1, e);
}

double ln_density_value(Density d, double r1, const Ellipsoid& e)
{
    const double m1 = e.m1();
    const double m2 = e.m2();
    const double ln_r1 = std::log(r1);
    if (d == Density::leray)
        return std::log(m1 * m1 * m2) + (2 * m1 - 1) * ln_r1;
    const double ln_r2 = std::log1p(-std::exp(2 * m1 * ln_r1)) / (2 * m2);
    const double a = (4 * m2 - 2) * ln_r2;
    const double b = 2 * std::log(m1 / m2) + (4 * m1 - 2) * ln_r1;
    const double hi = std::max(a, b);
    const double ln_root = 0.5 * (hi + std::log1p(std::exp(std::min(a, b) - hi)));
    return std::log(m1 * m2) + (2 * m1 - 1) * ln_r1 + ln_root;
}

BoundaryRule::BoundaryRule(const ParamBox& box, const QuadratureGrid& grid, Density density,
                           const Ellipsoid& e)
    : box_(box), grid_(grid), density_(density)
{
    box.validate();
    grid.validate();
    const Rule1D& rr = rule_1d(grid.rule, grid.n_r);
    const Rule1D& r1 = rule_1d(grid.rule, grid.n_t1);
    const Rule1D& r2 = rule_1d(grid.rule, grid.n_t2);

    const double hr = 0.5 * (box.r_hi - box.r_lo);
    const double h1 = 0.5 * (box.t1_hi - box.t1_lo);
    const double h2 = 0.5 * (box.t2_hi - box.t2_lo);
    const double cr = 0.5 * (box.r_hi + box.r_lo);
    const double c1 = 0.5 * (box.t1_hi + box.t1_lo);
    const double c2 = 0.5 * (box.t2_hi + box.t2_lo);
    const double ln_h = std::log(hr) + std::log(h1) + std::log(h2);

    nodes_.reserve(grid.size());
    for (int i = 0; i < grid.n_r; ++i) {
        const double r = cr + hr * rr.nodes[i];
        const double dens = density_value(density, r, e);
        const double ln_dens = ln_density_value(density, r, e);
        for (int j = 0; j < grid.n_t1; ++j) {
            const double t1 = c1 + h1 * r1.nodes[j];
            for (int k = 0; k < grid.n_t2; ++k) {
                const double t2 = c2 + h2 * r2.nodes[k];
                const double qw = rr.weights[i] * r1.weights[j] * r2.weights[k];
                WeightedNode node{lift({r, t1, t2}, e), qw * hr * h1 * h2 * dens,
                                  std::log(qw) + ln_h + ln_dens};
                nodes_.push_back(node);
            }
        }
    }
}

void throw_non_finite(const WeightedNode& node, Complex value)
{
    throw NonFiniteError(fmt::format(
        "non-finite integrand ({}, {}) at node r1={:.17g} theta1={:.17g} theta2={:.17g}",
        value.real(), value.imag(), node.point.param.r1, node.point.param.theta1,
        node.point.param.theta2));
}

} // namespace clf
