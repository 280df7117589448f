#include <doctest.h>

#include <numeric>

#include "clf/errors.hpp"
#include "clf/quadrature.hpp"
#include "oracle.hpp"

using namespace clf;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly")
{
    for (int n : {2, 5, 16, 32, 64}) {
        const Rule1D& r = gauss_legendre_rule(n);
        REQUIRE(r.nodes.size() == std::size_t(n));
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                s += r.weights[i] * std::pow(r.nodes[i], deg);
            const double want = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(std::abs(s - want) <= 1e-14);
        }
        for (double x : r.nodes) {
            CHECK(x > -1);
            CHECK(x < 1);
        }
    }
}

TEST_CASE("midpoint rule is open and sums to the interval length")
{
    const Rule1D& r = midpoint_rule(7);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(2.0));
    CHECK(r.nodes.front() > -1);
    CHECK(r.nodes.back() < 1);
}

TEST_CASE("grid and box validation")
{
    CHECK_THROWS_AS((QuadratureGrid{1, 4, 4}).validate(), DomainError);
    CHECK_NOTHROW((QuadratureGrid{2, 2, 2}).validate());
    CHECK((QuadratureGrid{3, 4, 5}).size() == 60);
    CHECK((QuadratureGrid{3, 4, 5}).refined().n_t2 == 10);
    CHECK_THROWS_AS((ParamBox{0.0, 1.2, -1, 1, -1, 1}).validate(), DomainError);
    CHECK_THROWS_AS((ParamBox{0.5, 0.2, -1, 1, -1, 1}).validate(), DomainError);
}

TEST_CASE("boundary rule weights")
{
    const Ellipsoid e(2, 3);
    const ParamBox box{0.1, 0.4, -0.2, 0.0, 1e-3, 2e-3};
    const BoundaryRule rule(box, QuadratureGrid{4, 3, 2}, Density::leray, e);
    REQUIRE(rule.nodes().size() == 24);
    for (const auto& n : rule.nodes()) {
        CHECK(n.weight > 0);
        CHECK(n.ln_weight == doctest::Approx(std::log(n.weight)).epsilon(1e-14));
        CHECK(box.contains(n.point.param));
        CHECK(n.point.param.r1 > box.r_lo);
        CHECK(n.point.param.r1 < box.r_hi);
    }
    // r1-major ordering
    CHECK(rule.nodes()[0].point.param.r1 == rule.nodes()[5].point.param.r1);
    CHECK(rule.nodes()[0].point.param.r1 < rule.nodes()[6].point.param.r1);
}

TEST_CASE("non-finite integrand is reported with its node")
{
    const Ellipsoid e(1, 1);
    const BoundaryRule rule(ParamBox::full(), QuadratureGrid{4, 4, 4}, Density::leray, e);
    CHECK_THROWS_AS(integrate(rule, [](const BoundaryPoint& p) {
                        return p.param.r1 > 0.5 ? std::nan("") : 1.0;
                    }),
                    NonFiniteError);
    try {
        integrate(rule, [](const BoundaryPoint&) { return 1.0 / 0.0; });
    } catch (const NonFiniteError& err) {
        CHECK(std::string(err.what()).find("r1=") != std::string::npos);
    }
}

TEST_CASE("quadrature sums are reproducible")
{
    const Ellipsoid e(1.5, 2);
    auto f = [](const BoundaryPoint& p) { return p.z1 * std::conj(p.z2) + 0.1; };
    const Complex a = integrate_boundary(f, ParamBox::full(), QuadratureGrid{}, Density::leray, e);
    const Complex b = integrate_boundary(f, ParamBox::full(), QuadratureGrid{}, Density::leray, e);
    CHECK(a == b);
}

TEST_CASE("compensated summation")
{
    CompensatedSum s;
    s.add(1e16);
    for (int i = 0; i < 1000; ++i)
        s.add(1.0);
    s.add(-1e16);
    CHECK(s.value().real() == 1000.0);
}
