#include "clf/geometry.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "clf/errors.hpp"

namespace clf {

Ellipsoid::Ellipsoid(double m1, double m2) : m1_(m1), m2_(m2)
{
    if (!(m1 >= 1.0) || !std::isfinite(m1))
        throw DomainError(fmt::format("ellipsoid exponent m1 must be >= 1 (got {})", m1));
    if (!(m2 >= 1.0) || !std::isfinite(m2))
        throw DomainError(fmt::format("ellipsoid exponent m2 must be >= 1 (got {})", m2));
}

double defining_rho(const ComplexPair& z, const Ellipsoid& e)
{
    return std::pow(std::abs(z.z1), 2 * e.m1()) + std::pow(std::abs(z.z2), 2 * e.m2()) - 1.0;
}

double radius2(double r1, const Ellipsoid& e)
{
    return std::exp(std::log1p(-std::pow(r1, 2 * e.m1())) / (2 * e.m2()));
}

double radius2_slope(double r1, const Ellipsoid& e)
{
    const double u = std::pow(r1, 2 * e.m1());
    return e.m1() / e.m2() * std::pow(r1, 2 * e.m1() - 1)
         * std::exp(std::log1p(-u) * (1.0 / (2 * e.m2()) - 1.0));
}

BoundaryPoint lift(const ParamPoint& p, const Ellipsoid& e)
{
    if (!(p.r1 >= 0.0 && p.r1 <= 1.0))
        throw DomainError(fmt::format("lift: r1 = {} outside [0, 1]", p.r1));
    BoundaryPoint b;
    b.param = p;
    b.u1 = std::pow(p.r1, 2 * e.m1());
    b.ln_r2 = std::log1p(-b.u1) / (2 * e.m2());
    b.r2 = std::exp(b.ln_r2);
    b.z1 = std::polar(p.r1, p.theta1);
    b.z2 = std::polar(b.r2, p.theta2);
    return b;
}

double leray_density(double r1, const Ellipsoid& e)
{
    return e.m1() * e.m1() * e.m2() * std::pow(r1, 2 * e.m1() - 1);
}

double sigma_density(double r1, const Ellipsoid& e)
{
    // r2^(2m2-1) sqrt(1 + r2'^2) = sqrt(r2^(4m2-2) + (m1/m2)^2 r1^(4m1-2)),
    // which stays finite as r1 -> 1.
    const double m1 = e.m1();
    const double m2 = e.m2();
    const double ln_r2 = std::log1p(-std::pow(r1, 2 * m1)) / (2 * m2);
    const double a = std::exp(ln_r2 * (4 * m2 - 2));
    const double b = (m1 / m2) * (m1 / m2) * std::pow(r1, 4 * m1 - 2);
    return m1 * m2 * std::pow(r1, 2 * m1 - 1) * std::sqrt(a + b);
}

double normalize_angle(double theta)
{
    double t = std::remainder(theta, 2 * pi);
    if (t >= pi)
        t -= 2 * pi;
    return t;
}

} // namespace clf
