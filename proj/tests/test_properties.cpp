#include <kreinspec/catalog.hpp>
#include <kreinspec/properties.hpp>
#include <kreinspec/quadrature.hpp>

#include <catch2/catch.hpp>

#include "oracles.hpp"

using namespace kreinspec;

TEST_CASE("D-ratio of the mirror square-root pair is identically one") {
    const auto m = NevanlinnaExpr::power_law(-1.0, 0.5);
    const auto cert = d_certify(m, m, PropertyKind::d_inf);
    CHECK(cert.verdict == CertVerdict::bounded);
    CHECK(cert.sup_value == Approx(1.0).epsilon(1e-10));
    CHECK(cert.constants.at("C1") == Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(cert.tail_slope) < 1e-8);
}

TEST_CASE("singular model diverges at zero with the half-power slope") {
    const auto m = closed_form("kakost-singular").closed_form;
    const auto cert = d_certify(m, m, PropertyKind::d_zero);
    CHECK(cert.verdict == CertVerdict::divergent);
    CHECK(cert.tail_slope == Approx(-0.5).margin(0.02));

    // frozen spot value at y = 0.01: numerator 2(10 sin(pi/4) + 100),
    // denominator sqrt(2) * 10
    const cplx up = m.evaluate({0, 0.01});
    const cplx dn = m.evaluate({0, -0.01});
    const double ratio = 2.0 * up.imag() / std::abs(up + dn);
    CHECK(ratio == Approx(15.142135623730951).margin(1e-10));

    // ... while at infinity the pair stays bounded
    const auto inf_cert = d_certify(m, m, PropertyKind::d_inf);
    CHECK(inf_cert.verdict == CertVerdict::bounded);
}

TEST_CASE("identity cancellation flags the empty resolvent set") {
    const auto lin = NevanlinnaExpr::linear();
    const auto cert = d_certify(lin, lin, PropertyKind::d_inf);
    CHECK(cert.verdict == CertVerdict::empty_resolvent);
}

TEST_CASE("conjugate sampling leaves D-verdicts unchanged") {
    const std::vector<NevanlinnaExpr> fs = {
        NevanlinnaExpr::power_law(-1.0, 0.5),
        closed_form("kakost-singular").closed_form,
        NevanlinnaExpr::power_law(1.0, -0.5),
    };
    for (const auto& f : fs)
        for (PropertyKind k : {PropertyKind::d_inf, PropertyKind::d_zero}) {
            const auto a = d_certify(f, f, k);
            const auto b = d_certify(f, f, k, {}, true);
            CHECK(a.verdict == b.verdict);
            CHECK(a.sup_value == Approx(b.sup_value).epsilon(1e-9));
        }
}

TEST_CASE("analytic measures behind the catalog") {
    // decaying half power
    auto s = analytic_measure(NevanlinnaExpr::power_law(1.0, -0.5));
    REQUIRE(s);
    CHECK(s->density_value(4.0) == Approx(1.0 / (pi * 2.0)).epsilon(1e-12));

    // full pole: the origin atom
    s = analytic_measure(NevanlinnaExpr::power_law(1.0, -1.0));
    REQUIRE(s);
    REQUIRE(s->atoms.size() == 1);
    CHECK(s->atoms[0].t == 0.0);

    // growing half power (the regime-exchanged family)
    s = analytic_measure(NevanlinnaExpr::power_law(-1.0, 0.5));
    REQUIRE(s);
    CHECK(s->density_value(9.0) == Approx(3.0 / pi).epsilon(1e-12));

    // the two-term model merges atom and density
    s = analytic_measure(closed_form("kakost-singular").closed_form);
    REQUIRE(s);
    CHECK(s->atoms.size() == 1);
    CHECK(!s->segments.empty());

    // a linear term has no H-operator model
    CHECK(!analytic_measure(NevanlinnaExpr::linear()));
}

TEST_CASE("Schur certification of the decaying half power") {
    const auto m = NevanlinnaExpr::power_law(1.0, -0.5);
    const auto cert = b_certify_schur(m, PropertyKind::b_inf, 0.25);
    CHECK(cert.verdict == CertVerdict::bounded);
    CHECK(cert.constants.at("C2") > 0.0);
    CHECK(cert.tail_slope <= 0.02);

    // the zero-regime certificate goes through the regime exchange
    const auto cert0 = b_certify_schur(m, PropertyKind::b_zero);
    CHECK(cert0.verdict == CertVerdict::bounded);
    CHECK(cert0.property == PropertyKind::b_zero);

    // precondition alpha + beta < 1
    CHECK_THROWS_AS(b_certify_schur(m, PropertyKind::b_inf, 0.9), precondition_error);
}

TEST_CASE("discretized norms plateau exactly when Schur says bounded") {
    const auto m = NevanlinnaExpr::power_law(1.0, -0.5);
    DiscretizedLadder ladder;
    const auto cert = b_certify_discretized(m, PropertyKind::b_inf, 256, {}, &ladder);
    CHECK(cert.verdict == CertVerdict::bounded);
    REQUIRE(ladder.singular_values.size() == 4);
    const auto& s = ladder.singular_values;
    // window extensions contract toward the operator norm
    CHECK(s[3] - s[2] < s[2] - s[1]);
    CHECK((s[3] - s[2]) / s[2] <= 0.08);
    CHECK(cert.constants.at("C2") >= s[3]);

    const auto cert0 = b_certify_discretized(m, PropertyKind::b_zero, 256);
    CHECK(cert0.verdict == CertVerdict::bounded);
}

TEST_CASE("rank-one operator norm in closed form") {
    // single atom at 1: |H| on the window equals the weighted-kernel integral
    const auto m = NevanlinnaExpr::stieltjes_form(0.0, SpectralMeasure::point_mass(1.0, 1.0));
    DiscretizedLadder ladder;
    b_certify_discretized(m, PropertyKind::b_inf, 256, {}, &ladder);
    auto w = [&](double y) { return 1.0 / m.evaluate(cplx(0, y)).imag(); };
    for (size_t k = 0; k < ladder.window_hi.size(); ++k) {
        const double got = ladder.singular_values[k];
        const double want = std::sqrt(
            integrate_real([&](double y) { return w(y) / ((1 + y) * (1 + y)); }, 1.0,
                           ladder.window_hi[k], QuadOptions{1e-12, 0.0, 8000}));
        CHECK(got == Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("cross-method agreement on the catalog") {
    const std::vector<NevanlinnaExpr> catalog = {
        NevanlinnaExpr::power_law(1.0, -0.5),
        NevanlinnaExpr::power_law(-1.0, 0.5),
        NevanlinnaExpr::power_law(-std::sqrt(2.0), 0.25),
        closed_form("kakost-singular").closed_form,
        closed_form("ex52-short-range(1,1)").closed_form,
    };
    for (const auto& m : catalog)
        for (PropertyKind k : {PropertyKind::b_inf, PropertyKind::b_zero}) {
            CertVerdict schur = CertVerdict::inconclusive;
            CertVerdict disc = CertVerdict::inconclusive;
            try {
                schur = b_certify_schur(m, k).verdict;
            } catch (const error&) {}
            try {
                disc = b_certify_discretized(m, k).verdict;
            } catch (const error&) {}
            const bool contradict = (schur == CertVerdict::bounded && disc == CertVerdict::divergent) ||
                                    (schur == CertVerdict::divergent && disc == CertVerdict::bounded);
            CHECK(!contradict);
        }
}

TEST_CASE("B-verdicts are invariant under post-composition") {
    // a Moebius change of the second functional preserves both B-properties
    const auto m = NevanlinnaExpr::power_law(1.0, -0.5);
    const auto base = b_certify_discretized(m, PropertyKind::b_inf).verdict;
    const std::vector<MobiusMap> mu2s = {
        MobiusMap::normalize(1, 1, 0, 1),   // shift
        MobiusMap::normalize(2, 0, 0, 0.5), // scale
        MobiusMap::normalize(0, -1, 1, 0),  // reciprocal exchange
    };
    for (const auto& mu2 : mu2s) {
        const auto hat = mobius_transform(m, MobiusMap::identity(), mu2);
        const auto v = b_certify_discretized(hat, PropertyKind::b_inf).verdict;
        CHECK(v == base);
    }
}

TEST_CASE("conjugate sampling leaves B-verdicts unchanged") {
    const auto m = NevanlinnaExpr::power_law(1.0, -0.5);
    for (PropertyKind k : {PropertyKind::b_inf, PropertyKind::b_zero}) {
        const auto a = b_certify_discretized(m, k, 128);
        const auto b = b_certify_discretized(m, k, 128, {}, nullptr, true);
        CHECK(a.verdict == b.verdict);
        CHECK(a.sup_value == Approx(b.sup_value).epsilon(1e-9));
    }
}

TEST_CASE("linear terms escape the weighted space") {
    // z - sqrt(-z) arises as the regime exchange of the singular model
    const auto m = closed_form("kakost-singular").closed_form;
    const auto cert = b_certify_schur(m, PropertyKind::b_zero);
    CHECK(cert.verdict == CertVerdict::divergent);
    const auto cert2 = b_certify_discretized(m, PropertyKind::b_zero);
    CHECK(cert2.verdict == CertVerdict::divergent);
}

TEST_CASE("implied certificates from the class memberships") {
    const auto mp = NevanlinnaExpr::power_law(1.0, -0.5);
    const auto mm = NevanlinnaExpr::power_law(1.0, -0.5);
    PairAnalysis an;
    an.class_plus = classify(mp);
    an.class_minus = classify(mm);
    an.member_plus = class_membership(mp);
    an.member_minus = class_membership(mm);
    const auto certs = derive_properties(mp, mm, an);

    auto has = [&](PropertyKind p, const std::string& subject, const std::string& rule) {
        for (const auto& c : certs)
            if (c.property == p && c.subject == subject && c.rule == rule &&
                c.method == CertMethod::implied_by)
                return true;
        return false;
    };
    CHECK(has(PropertyKind::b_inf, "m_plus", "asymptotic-class-implies-b-at-infinity"));
    CHECK(has(PropertyKind::b_zero, "m_plus", "asymptotic-class-implies-b-at-zero"));
    CHECK(has(PropertyKind::d_inf, "pair", "asymptotic-pair-d-limit"));
    CHECK(has(PropertyKind::d_zero, "pair", "asymptotic-pair-d-limit"));
    CHECK(has(PropertyKind::d_inf, "pair", "stieltjes-pair-d-transfer"));
    CHECK(has(PropertyKind::b_inf, "m_plus", "reflexive-d-implies-b"));

    // partial information: only one side classified
    PairAnalysis partial;
    partial.class_plus = an.class_plus;
    partial.member_plus = an.member_plus;
    const auto some = derive_properties(mp, NevanlinnaExpr::linear(), partial);
    bool only_plus = true;
    for (const auto& c : some)
        if (c.subject == "m_minus" || c.subject == "pair") only_plus = false;
    CHECK(only_plus);
    CHECK(!some.empty());
}

