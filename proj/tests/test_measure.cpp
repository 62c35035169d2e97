#include <kreinspec/measure.hpp>
#include <kreinspec/quadrature.hpp>

#include <catch2/catch.hpp>

#include "oracles.hpp"

using namespace kreinspec;

namespace {

// sigma'(t) = 1/(pi sqrt(t)): the measure of the decaying square-root model
SpectralMeasure sqrt_measure() {
    return SpectralMeasure::power_density(1.0 / pi, -0.5, 0.0, 1.0);
}

} // namespace

TEST_CASE("adaptive rule reproduces closed-form integrals") {
    // int_0^1 t^{-1/2} dt = 2 after the flattening substitution
    const auto m = SpectralMeasure::power_density(1.0, -0.5, 0.0, 1.0, false);
    const cplx total = m.integrate_kernel([](double) { return cplx(1.0, 0.0); }, 1e-12);
    CHECK(total.real() == Approx(2.0).epsilon(1e-10));

    QuadOptions opt;
    opt.rel_tol = 1e-12;
    const cplx osc = integrate([](double t) { return cplx(std::cos(5 * t), std::sin(3 * t)); },
                               0.0, 2.0, opt);
    CHECK(osc.real() == Approx(std::sin(10.0) / 5.0).epsilon(1e-11));
    CHECK(osc.imag() == Approx((1.0 - std::cos(6.0)) / 3.0).epsilon(1e-11));
}

TEST_CASE("Cauchy transform of the square-root density is the half power") {
    const auto sigma = sqrt_measure();
    for (cplx z : {cplx(0, 1), cplx(-4, 0), cplx(2, 3), cplx(-0.5, 0.25)}) {
        const cplx got = sigma.cauchy_transform(z, 1e-10);
        const cplx want = oracle::sqrt_inv(z);
        CHECK(std::abs(got - want) <= 1e-8 * (1.0 + std::abs(want)));
    }
    // brute-force Simpson agrees with the adaptive path at one probe
    const cplx brute = oracle::sqrt_measure_transform(cplx(0, 1));
    CHECK(std::abs(sigma.cauchy_transform(cplx(0, 1)) - brute) < 1e-7);
}

TEST_CASE("distribution uses the midpoint convention and sigma(0) = 0") {
    SpectralMeasure s;
    s.atoms = {{1.0, 2.0}, {3.0, 4.0}};
    CHECK(s.distribution(0.0) == 0.0);
    CHECK(s.distribution(0.5) == 0.0);
    CHECK(s.distribution(1.0) == Approx(1.0)); // half of the jump at 1
    CHECK(s.distribution(2.0) == Approx(2.0));
    CHECK(s.distribution(3.0) == Approx(4.0));
    CHECK(s.distribution(10.0) == Approx(6.0));

    // sqrt density: sigma(t) = 2 sqrt(t)/pi
    const auto sigma = sqrt_measure();
    for (double t : {0.5, 1.0, 100.0, 1e4})
        CHECK(sigma.distribution(t) == Approx(2.0 * std::sqrt(t) / pi).epsilon(1e-12));
}

TEST_CASE("validation rejects non-measures") {
    SpectralMeasure bad;
    bad.atoms = {{-1.0, 1.0}};
    CHECK_THROWS_AS(bad.validate(), growth_condition_error);

    SpectralMeasure neg;
    neg.atoms = {{1.0, -1.0}};
    CHECK_THROWS_AS(neg.validate(), growth_condition_error);

    SpectralMeasure sing;
    sing.segments = {{0.0, 1.0, 1.0, -1.5}}; // t^{-3/2} not integrable at 0
    CHECK_THROWS_AS(sing.validate(), growth_condition_error);

    // a growing tail passes the Nevanlinna bound but not the Stieltjes one
    SpectralMeasure grow;
    grow.segments = {{0.0, 1.0, 1.0, 0.5}};
    grow.tail = PowerTail{1.0, -0.5};
    CHECK_NOTHROW(grow.validate());
    CHECK_THROWS_AS(grow.validate_stieltjes_growth(), growth_condition_error);

    SpectralMeasure toofast;
    toofast.segments = {{0.0, 1.0, 1.0, 0.5}};
    toofast.tail = PowerTail{1.0, -1.5};
    CHECK_THROWS_AS(toofast.validate(), growth_condition_error);
}

TEST_CASE("pair transform matches the closed form") {
    const auto sigma = sqrt_measure();
    const cplx z(0, 1), w(0, -2); // the (z, w*) pair with w = 2i
    const cplx got = sigma.pair_transform(z, w, 1e-10);
    // partial fractions: int dsigma/((t-z)(t-w)) = (m(z) - m(w))/(z - w)
    const cplx want = (oracle::sqrt_inv(z) - oracle::sqrt_inv(w)) / (z - w);
    CHECK(std::abs(got - want) <= 1e-8 * (1.0 + std::abs(want)));
}

TEST_CASE("growth integral is finite for conforming measures") {
    const auto sigma = sqrt_measure();
    // int dsigma/(1+t) = int t^{-1/2}/(pi(1+t)) dt = 1
    CHECK(sigma.growth_integral(1e-10) == Approx(1.0).epsilon(1e-8));
}
