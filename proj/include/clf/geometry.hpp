#pragma once

#include <complex>
#include <numbers>

namespace clf {

using Complex = std::complex<double>;

/// A point of C^2.
struct ComplexPair {
    Complex z1;
    Complex z2;
};

/// The complex ellipsoid { |z1|^(2 m1) + |z2|^(2 m2) < 1 }, m1, m2 >= 1.
class Ellipsoid {
public:
    /// Throws DomainError unless m1 >= 1 and m2 >= 1.
    Ellipsoid(double m1, double m2);

    double m1() const { return m1_; }
    double m2() const { return m2_; }

private:
    double m1_;
    double m2_;
};

/// Boundary chart coordinates: z1 = r1 e^{i theta1}, z2 = r2(r1) e^{i theta2}.
struct ParamPoint {
    double r1 = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/// A point of the ellipsoid boundary together with its chart coordinates.
///
/// `u1 = r1^(2 m1)` and `ln_r2 = log(1 - u1) / (2 m2)` are kept so that
/// differences of nearby points can be formed without cancellation.
struct BoundaryPoint {
    ParamPoint param;
    Complex z1;
    Complex z2;
    double u1 = 0.0;
    double r2 = 1.0;
    double ln_r2 = 0.0;

    ComplexPair coords() const { return {z1, z2}; }
};

/// |z1|^(2 m1) + |z2|^(2 m2) - 1: negative inside, zero on the boundary.
double defining_rho(const ComplexPair& z, const Ellipsoid& e);

/// r2(r1) = (1 - r1^(2 m1))^(1/(2 m2)).
double radius2(double r1, const Ellipsoid& e);

/// |dr2/dr1| = (m1/m2) r1^(2m1-1) (1 - r1^(2m1))^(1/(2m2) - 1).
double radius2_slope(double r1, const Ellipsoid& e);

/// Maps chart coordinates onto the boundary. Throws DomainError unless r1 is in [0, 1].
BoundaryPoint lift(const ParamPoint& p, const Ellipsoid& e);

/// Pullback of the Leray form d rho ^ dbar d rho to (r1, theta1, theta2),
/// up to the orientation sign: m1^2 m2 r1^(2 m1 - 1).
double leray_density(double r1, const Ellipsoid& e);

/// Weighted surface density m1 m2 |z1|^(2(m1-1)) |z2|^(2(m2-1)) times the
/// induced 3-volume element r1 r2 sqrt(1 + r2'^2).
double sigma_density(double r1, const Ellipsoid& e);

/// Wraps an angle into [-pi, pi).
double normalize_angle(double theta);

inline constexpr double pi = std::numbers::pi;

} // namespace clf
