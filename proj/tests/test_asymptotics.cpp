#include <kreinspec/asymptotics.hpp>
#include <kreinspec/catalog.hpp>

#include <catch2/catch.hpp>

#include "oracles.hpp"

using namespace kreinspec;

TEST_CASE("pure power laws are recovered by the fit") {
    // 1/sqrt(-z) at infinity
    auto fit = fit_power_law(NevanlinnaExpr::power_law(1.0, -0.5), Regime::at_inf);
    CHECK(fit.alpha0 == Approx(-0.5).margin(0.005));
    CHECK(fit.c0 == Approx(1.0).epsilon(0.01));
    CHECK(fit.residual < 1e-8);

    // the quarter-power model at zero
    fit = fit_power_law(NevanlinnaExpr::power_law(-std::sqrt(2.0), 0.25), Regime::at_zero);
    CHECK(fit.alpha0 == Approx(0.25).margin(0.005));
    CHECK(fit.c0 == Approx(-std::sqrt(2.0)).epsilon(0.01));

    // random exponents and coefficients across the admissible band
    for (int k = 0; k < 25; ++k) {
        const double a = oracle::uniform(-0.9, 0.9);
        if (std::abs(a) < 0.05) continue;
        const double c = (a > 0 ? -1.0 : 1.0) * oracle::uniform(0.1, 10.0);
        const auto f = NevanlinnaExpr::power_law(c, a);
        for (Regime r : {Regime::at_inf, Regime::at_zero}) {
            const auto pf = fit_power_law(f, r);
            CHECK(pf.alpha0 == Approx(a).margin(1e-3 * std::max(1.0, std::abs(a))));
            CHECK(pf.c0 == Approx(c).epsilon(1e-3));
        }
    }
}

TEST_CASE("constant-leading fits find the second term") {
    // a/(b + sqrt(-z)) with a = b = 1: m(rz) - 1 ~ -sqrt(-rz) at zero
    const auto f = closed_form("ex52-short-range(1,1)").closed_form;
    const auto fit = fit_power_law(f, Regime::at_zero);
    CHECK(fit.alpha0 == 0.0);
    CHECK(fit.c0 == Approx(1.0).epsilon(0.01));
    REQUIRE(fit.alpha1);
    CHECK(*fit.alpha1 == Approx(0.5).margin(0.02));
    CHECK(*fit.c1 == Approx(-1.0).epsilon(0.06));
}

TEST_CASE("dominant-term membership decisions") {
    const auto kak = closed_form("kakost-singular").closed_form;
    auto mem = class_membership(kak);
    CHECK(mem.in_A_inf == verdict3::yes);  // the half power wins at infinity
    CHECK(mem.in_A_zero == verdict3::no);  // the full pole wins at zero

    mem = class_membership(NevanlinnaExpr::power_law(1.0, -0.5));
    CHECK(mem.in_A_inf == verdict3::yes);
    CHECK(mem.in_A_zero == verdict3::yes);

    mem = class_membership(NevanlinnaExpr::power_law(-1.0, 0.5));
    CHECK(mem.in_A_inf == verdict3::yes);
    CHECK(mem.in_A_zero == verdict3::yes);

    // wrong coefficient sign is excluded
    mem = class_membership(NevanlinnaExpr::power_law(1.0, 0.5));
    CHECK(mem.in_A_inf == verdict3::no);
}

TEST_CASE("regime exchange as a metamorphic property") {
    // membership at infinity equals membership at zero of -m(1/z)
    const auto mu1 = MobiusMap::normalize(0, 1, 1, 0);
    const auto mu2 = MobiusMap::normalize(-1, 0, 0, 1);
    const std::vector<NevanlinnaExpr> catalog = {
        NevanlinnaExpr::power_law(1.0, -0.5),
        NevanlinnaExpr::power_law(-1.0, 0.5),
        NevanlinnaExpr::power_law(-std::sqrt(2.0), 0.25),
        closed_form("kakost-singular").closed_form,
    };
    for (const auto& f : catalog) {
        const auto mapped = mobius_transform(f, mu1, mu2);
        CHECK(class_membership(f).in_A_inf == class_membership(mapped).in_A_zero);
    }
}

TEST_CASE("measure-transform correspondence both ways") {
    // sigma(t) = 2 sqrt(t)/pi pairs with 1/sqrt(-z)
    const auto sigma = SpectralMeasure::power_density(1.0 / pi, -0.5, 0.0, 1.0);
    const auto rep = tauberian_check(sigma, 0.5, 1.0);
    CHECK(rep.ok);
    for (double r : rep.forward_residuals) CHECK(r <= 1e-3);
    for (double r : rep.inverse_residuals) CHECK(r <= 1e-3);

    // wrong growth: sigma(t) = t against alpha = 1/2
    const auto wrong = SpectralMeasure::power_density(1.0, 0.0, 0.0, 1.0);
    CHECK_THROWS_AS(tauberian_check(wrong, 0.5, 1.0), error);

    // inversion output feeds back through the forward direction
    std::vector<double> grid;
    for (int k = 0; k <= 48; ++k) grid.push_back(1e-2 * std::pow(1e8, k / 48.0));
    const auto inv = stieltjes_invert(NevanlinnaExpr::power_law(2.0, -0.75), grid);
    const auto rep2 = tauberian_check(inv, 0.75, 2.0, 0.01, 0.05);
    for (double r : rep2.forward_residuals) CHECK(r <= 1e-2);
    for (double r : rep2.inverse_residuals) CHECK(r <= 1e-2);
}

TEST_CASE("closed-form limit of the D-ratio") {
    auto fit_of = [](const NevanlinnaExpr& f, Regime r) { return fit_power_law(f, r); };

    // mirror pair -sqrt(-z): the ratio tends to 1
    const auto fd = NevanlinnaExpr::power_law(-1.0, 0.5);
    const auto fit_d = fit_of(fd, Regime::at_inf);
    CHECK(d_limit_predict(fit_d, fit_d) == Approx(1.0).epsilon(1e-3));

    // mixed exponents: the larger one dominates at infinity
    const auto fq = NevanlinnaExpr::power_law(-std::sqrt(2.0), 0.25);
    const auto fit_q = fit_of(fq, Regime::at_inf);
    CHECK(d_limit_predict(fit_d, fit_q) == Approx(std::sin(pi / 4)).epsilon(1e-2));
    CHECK(d_limit_predict(fit_q, fit_d) == Approx(std::sin(pi / 4)).epsilon(1e-2));
    CHECK(d_limit_predict(fit_q, fit_q) == Approx(std::tan(pi / 8)).epsilon(1e-2));

    // cancelling constants fall through to the second terms
    PowerFit gp, gm;
    gp.regime = gm.regime = Regime::at_inf;
    gp.alpha0 = gm.alpha0 = 0.0;
    gp.c0 = 1.0;
    gm.c0 = -1.0;
    gp.alpha1 = gm.alpha1 = -0.5;
    gp.c1 = gm.c1 = 1.0;
    CHECK(d_limit_predict(gp, gm) == Approx(1.0).epsilon(1e-12));

    // no second terms available: the excluded degenerate case
    gp.alpha1.reset();
    CHECK_THROWS_AS(d_limit_predict(gp, gm), degenerate_denominator_error);

    PowerFit other = gm;
    other.regime = Regime::at_zero;
    CHECK_THROWS_AS(d_limit_predict(gp, other), precondition_error);
}

TEST_CASE("predicted limits match the empirical ratio far out") {
    auto empirical_inf = [](const NevanlinnaExpr& p, const NevanlinnaExpr& m) {
        const double y = 1e8;
        const cplx vp = p.evaluate({0, y});
        const cplx vm = m.evaluate({0, y});
        const cplx vmd = m.evaluate({0, -y});
        return (vp.imag() + vm.imag()) / std::abs(vp + vmd);
    };
    const auto A = NevanlinnaExpr::power_law(-1.0, 0.5);
    const auto B = NevanlinnaExpr::power_law(1.0, -0.5);
    const auto C = NevanlinnaExpr::power_law(-std::sqrt(2.0), 0.25);
    const auto D = NevanlinnaExpr::power_law(2.0, -0.25);
    const std::vector<std::pair<NevanlinnaExpr, NevanlinnaExpr>> pairs = {
        {A, A}, {B, B}, {C, C}, {D, D}, {A, B}, {A, C}, {A, D}, {B, C}, {B, D}};
    for (const auto& [p, m] : pairs) {
        const auto fp = fit_power_law(p, Regime::at_inf);
        const auto fm = fit_power_law(m, Regime::at_inf);
        const double pred = d_limit_predict(fp, fm);
        const double emp = empirical_inf(p, m);
        CHECK(pred == Approx(emp).epsilon(0.02));
    }
}
