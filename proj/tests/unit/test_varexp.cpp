#include <doctest.h>

#include <vector>

#include "clf/commands.hpp"
#include "clf/errors.hpp"
#include "clf/random.hpp"
#include "clf/varexp.hpp"
#include "modular_oracle.hpp"

using namespace clf;
using oracle::hp;
using oracle::modular_hp;
using oracle::norm_hp;

namespace {

PatchSum single(double ln_weight, const PatchSpec& p)
{
    return PatchSum({{LogScalar::from_log(ln_weight), p}});
}

} // namespace

TEST_CASE("psi")
{
    const PsiParams psi;
    CHECK(psi_eval(0.0, psi) == 0.0);
    CHECK(psi_eval(std::exp(-25.0), psi) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(psi_eval(-std::exp(-25.0), psi) == doctest::Approx(-0.4).epsilon(1e-15));
    // plateau above the cap point
    CHECK(psi_eval(2.0, psi) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(psi_eval(0.5, psi) == psi_eval(3.0, psi));
    // non-decreasing on [0, pi]
    double prev = 0;
    for (int i = 1; i <= 4000; ++i) {
        const double t = pi * std::pow(i / 4000.0, 8);
        const double v = psi_eval(t, psi);
        CHECK(v >= prev);
        prev = v;
    }
    // psi(theta) log(1/theta) = A sqrt(log(1/theta)) grows without bound
    CHECK(psi_eval(1e-100, psi) * std::log(1e100) == doctest::Approx(2 * std::sqrt(std::log(1e100))));
    CHECK(psi_at_log_scale(400.0, psi) == doctest::Approx(0.1));
    CHECK_THROWS_AS((PsiParams{-1.0, 0.3}).validate(), DomainError);
    CHECK_THROWS_AS((PsiParams{1.0, 1.0}).validate(), DomainError);
}

TEST_CASE("exponent field")
{
    const ExponentField f;
    const Ellipsoid e(2, 3);
    CHECK(exponent_eval(lift({0.3, 0.0, 0.0}, e), f) == 4.0);
    CHECK(exponent_eval(lift({0.3, 0.0, std::exp(-25.0)}, e), f) == doctest::Approx(4.4));
    CHECK(exponent_eval(lift({0.3, 0.0, -std::exp(-25.0)}, e), f) == doctest::Approx(3.6));
    CHECK(f.inf() == 2.0);
    CHECK(f.sup() == 6.0);
    CHECK_THROWS_AS((ExponentField{2.5, PsiParams{2.0, 0.3}}).validate(), DomainError);
    CHECK_THROWS_AS((ExponentField{0.5, PsiParams{0.0, 0.3}}).validate(), DomainError);

    UniformSource rng(2);
    for (int i = 0; i < 5000; ++i) {
        const double p = f.at_theta2(rng.next(-pi, pi));
        CHECK(p > 1);
        CHECK(p <= f.sup());
    }
}

TEST_CASE("quasimetric")
{
    const Ellipsoid sphere(1, 1);
    const BoundaryPoint a = lift({1.0, 0.0, 0.0}, sphere);
    const BoundaryPoint b = lift({1.0, -pi, 0.0}, sphere);
    CHECK(quasimetric(a, b, sphere) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(quasimetric(a, a, sphere) == 0.0);

    // sphere formula d = 2 |1 - <z, xi>| at random pairs
    UniformSource rng(8);
    for (int i = 0; i < 200; ++i) {
        const BoundaryPoint p = lift({rng.next(), rng.next(-pi, pi), rng.next(-pi, pi)}, sphere);
        const BoundaryPoint q = lift({rng.next(), rng.next(-pi, pi), rng.next(-pi, pi)}, sphere);
        const Complex inner = q.z1 * std::conj(p.z1) + q.z2 * std::conj(p.z2);
        CHECK(quasimetric(p, q, sphere) == doctest::Approx(2 * std::abs(1.0 - inner)).epsilon(1e-12));
    }

    const QuasimetricBounds qb = quasimetric_bounds(Ellipsoid(2, 3), 10000, 1);
    CHECK(qb.samples == 10000);
    CHECK(qb.lower_constant > 0);
    CHECK(std::isfinite(qb.upper_constant));
    CHECK(qb.max_asymmetry == 0.0);
    MESSAGE("E=(2,3): " << qb.lower_constant << " |xi-z|^6 <= d <= " << qb.upper_constant << " |xi-z|");
}

TEST_CASE("log-Hoelder modulus on the straddling family")
{
    const Ellipsoid e(2, 3);
    const ExponentField f;
    const LogHolderControlField control{4.0};
    ExponentField flat;
    flat.psi.amplitude = 0;

    double first_control = 0;
    for (double alpha : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const PointPair pair = straddle_pair(alpha, e);
        const std::span<const PointPair> one(&pair, 1);
        // |p(xi) - p(z)| = 2 psi(alpha), |xi - z| = 2 sin(alpha)
        const double want = 2 * 2 / std::sqrt(std::log(1 / alpha)) * std::abs(std::log(2 * std::sin(alpha)));
        CHECK(log_holder_modulus(one, f) == doctest::Approx(want).epsilon(1e-12));
        CHECK(log_holder_modulus(one, flat) == 0.0);

        const double c = log_holder_modulus(one, control);
        const double want_c = 2 / std::log(std::exp(1.0) + 1 / alpha) * std::abs(std::log(2 * std::sin(alpha)));
        CHECK(c == doctest::Approx(want_c).epsilon(1e-12));
        if (first_control == 0)
            first_control = c;
        CHECK(c / first_control <= 1.5);
    }
    const PointPair same{lift({0.2, 0, 0}, e), lift({0.2, 0, 0}, e)};
    CHECK_THROWS_AS(log_holder_modulus(std::span<const PointPair>(&same, 1), f), DomainError);
}

TEST_CASE("patch sums")
{
    const GammaConfig g = choose_gammas(Ellipsoid(2, 3));
    const PatchSpec w = make_patch(PatchKind::source, 1e-3, g);
    CHECK_THROWS_AS(PatchSum({{LogScalar::from_double(-1.0), w}}), DomainError);
    CHECK_THROWS_AS(PatchSum({{LogScalar::one(), w},
                              {LogScalar::one(), make_patch(PatchKind::source, 0.9e-3, g)}}),
                    DomainError);
    const PatchSum two({{LogScalar::one(), w}, {LogScalar::one(), make_patch(PatchKind::target, 1e-3, g)}});
    CHECK(two.size() == 2);
    CHECK(two.truncated(1).size() == 1);
    CHECK(two.truncated(5).size() == 2);
    CHECK(two.scaled(LogScalar::from_log(3.0)).terms()[1].weight.ln_mag() == 3.0);
}

TEST_CASE("modular with a constant exponent")
{
    const Ellipsoid e(2, 3);
    const GammaConfig g = choose_gammas(e);
    const QuadratureGrid grid{8, 4, 4};
    const PatchSpec w = make_patch(PatchKind::source, 1e-2, g);
    const double s = patch_measure(w, grid, Density::leray, e);
    ExponentField p3;
    p3.p0 = 3.0;
    p3.psi.amplitude = 0;

    const PatchSum f = single(4.0, w);
    const LogScalar lambda = LogScalar::from_log(1.5);
    const double want = 3.0 * (4.0 - 1.5) + std::log(s);
    CHECK(modular(f, lambda, p3, grid, e).ln_mag() == doctest::Approx(want).epsilon(1e-14));

    // lambda -> t lambda scales the modular by t^-p
    const LogScalar t = LogScalar::from_log(0.7);
    CHECK(modular(f, lambda * t, p3, grid, e).ln_mag()
          == doctest::Approx(want - 3.0 * 0.7).epsilon(1e-14));
    CHECK_THROWS_AS(modular(f, LogScalar::zero(), p3, grid, e), DomainError);
}

TEST_CASE("modular against a 50-digit oracle at extreme magnitudes")
{
    const Ellipsoid e(2, 3);
    const GammaConfig g = choose_gammas(e);
    const QuadratureGrid toy{2, 2, 2};
    const ExponentField f;
    const PatchSum h({{LogScalar::from_log(500.0), make_patch(PatchKind::source, 1e-3, g)},
                      {LogScalar::from_log(-40.0), make_patch(PatchKind::target, 1e-3, g)}});
    for (double ln_lambda : {0.0, 330.0, 500.0, 650.0, -120.0}) {
        const double got = modular(h, LogScalar::from_log(ln_lambda), f, toy, e).ln_mag();
        const double want = double(modular_hp(h, ln_lambda, f, toy, e));
        INFO("ln lambda = " << ln_lambda << ", ln modular = " << want);
        CHECK(std::abs(got - want) <= 1e-10);
    }
}

TEST_CASE("modular is strictly decreasing in lambda")
{
    const Ellipsoid e(2, 3);
    const GammaConfig g = choose_gammas(e);
    const ExponentField f;
    const QuadratureGrid grid{6, 4, 4};
    UniformSource rng(3);
    for (int ladder = 0; ladder < 10; ++ladder) {
        const PatchSum h({{LogScalar::from_log(rng.next(-50, 50)), make_patch(PatchKind::source, 1e-2, g)},
                          {LogScalar::from_log(rng.next(-50, 50)), make_patch(PatchKind::target, 1e-3, g)}});
        const ModularEvaluator m(h, f, grid, e);
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 12; ++i) {
            const double v = m(LogScalar::from_log(-80.0 + 15.0 * i)).ln_mag();
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("Luxemburg norm")
{
    const Ellipsoid e(2, 3);
    const GammaConfig g = choose_gammas(e);
    const QuadratureGrid grid{8, 4, 4};
    const PatchSpec w = make_patch(PatchKind::source, 1e-2, g);
    const double s = patch_measure(w, grid, Density::leray, e);

    SUBCASE("constant exponent closed form")
    {
        for (double p : {1.5, 4.0, 6.0}) {
            ExponentField c;
            c.p0 = p;
            c.psi.amplitude = 0;
            const double got = luxemburg_norm(single(2.0, w), c, grid, 1e-10, e).ln_mag();
            CHECK(std::abs(got - (2.0 + std::log(s) / p)) <= 1e-10);
        }
    }

    SUBCASE("homogeneity")
    {
        const ExponentField f;
        const PatchSum h({{LogScalar::from_log(1.0), w},
                          {LogScalar::from_log(30.0), make_patch(PatchKind::target, 1e-3, g)}});
        const double base = luxemburg_norm(h, f, grid, 1e-10, e).ln_mag();
        for (double ln_t : {-200.0, 0.5, 300.0}) {
            const double scaled =
                luxemburg_norm(h.scaled(LogScalar::from_log(ln_t)), f, grid, 1e-10, e).ln_mag();
            CHECK(std::abs(scaled - (base + ln_t)) <= 1e-12 * std::abs(scaled));
        }
    }

    SUBCASE("two patches against a 50-digit root")
    {
        const ExponentField f;
        const QuadratureGrid toy{2, 2, 2};
        const PatchSum h({{LogScalar::from_log(300.0), make_patch(PatchKind::source, 1e-3, g)},
                          {LogScalar::from_log(-20.0), make_patch(PatchKind::target, 1e-4, g)}});
        const double got = luxemburg_norm(h, f, toy, 1e-10, e).ln_mag();
        const hp want = norm_hp(h, f, toy, e, 0.0, 400.0);
        CHECK(std::abs(got - double(want)) <= 1e-8 * std::abs(double(want)));

        const ModularEvaluator m(h, f, toy, e);
        const double at_norm = m(LogScalar::from_log(got)).to_double();
        CHECK(std::abs(at_norm - 1.0) <= 10 * 1e-10);
    }

    SUBCASE("empty sum")
    {
        CHECK(luxemburg_norm(PatchSum{}, ExponentField{}, grid, 1e-10, e).is_zero());
    }
}
