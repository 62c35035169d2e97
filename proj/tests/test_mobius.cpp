#include <kreinspec/mobius.hpp>

#include <catch2/catch.hpp>

#include "oracles.hpp"

using namespace kreinspec;

namespace {

MobiusMap random_map() {
    for (;;) {
        const double a = oracle::uniform(-2, 2), b = oracle::uniform(-2, 2);
        const double c = oracle::uniform(-2, 2), d = oracle::uniform(-2, 2);
        if (std::abs(a * d - b * c) > 0.3) return MobiusMap::normalize(a, b, c, d);
    }
}

} // namespace

TEST_CASE("normalize fixes the determinant to a sign") {
    const auto id = MobiusMap::normalize(1, 0, 0, 1);
    CHECK(id.a == 1.0);
    CHECK(id.epsilon == 1);

    const auto scaled = MobiusMap::normalize(2, 0, 0, 2);
    CHECK(scaled.a == Approx(1.0));
    CHECK(scaled.b == 0.0);
    CHECK(scaled.epsilon == 1);

    const auto transpose = MobiusMap::normalize(0, -1, 1, 0);
    CHECK(transpose.b == Approx(-1.0));
    CHECK(transpose.c == Approx(1.0));
    CHECK(transpose.epsilon == 1);

    CHECK_THROWS_AS(MobiusMap::normalize(1, 2, 2, 4), zero_determinant_error);

    for (int k = 0; k < 500; ++k) {
        const auto m = random_map();
        CHECK(m.det() == Approx(static_cast<double>(m.epsilon)).margin(1e-14));
    }
}

TEST_CASE("apply is the linear fractional action") {
    const auto id = MobiusMap::identity();
    CHECK(id.apply({3, 4}) == cplx(3, 4));

    const auto tr = MobiusMap::transpose_map();
    CHECK(std::abs(tr.apply({0, 1}) - cplx(0, 1)) < 1e-15); // -1/i = i

    CHECK_THROWS_AS(MobiusMap::normalize(0, -1, 1, 0).apply({0, 0}), pole_hit_error);

    // conjugate symmetry mu(z*) = mu(z)*
    for (int k = 0; k < 200; ++k) {
        const auto m = random_map();
        const cplx z = oracle::random_nonreal();
        CHECK(std::abs(m.apply(std::conj(z)) - std::conj(m.apply(z))) < 1e-12);
    }
}

TEST_CASE("difference identity over 1000 random samples") {
    // mu(z) - mu(w*) = (ad - bc) (z - w*) / ((cz + d)(cw* + d))
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto m = random_map();
        const cplx z = oracle::random_nonreal();
        const cplx w = oracle::random_nonreal();
        const cplx wb = std::conj(w);
        const cplx lhs = m.apply(z) - m.apply(wb);
        const cplx rhs = m.det() * (z - wb) / ((m.c * z + m.d) * (m.c * wb + m.d));
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("group laws hold on random samples") {
    for (int k = 0; k < 300; ++k) {
        const auto m1 = random_map();
        const auto m2 = random_map();
        const auto m3 = random_map();
        const cplx z = oracle::random_nonreal();

        // composition agrees with pointwise composition
        const cplx via_matrix = compose(m1, m2).apply(z);
        const cplx via_maps = m1.apply(m2.apply(z));
        CHECK(std::abs(via_matrix - via_maps) <= 1e-12 * (1.0 + std::abs(via_maps)));

        // associativity
        const auto left = compose(compose(m1, m2), m3);
        const auto right = compose(m1, compose(m2, m3));
        CHECK(std::abs(left.apply(z) - right.apply(z)) <= 1e-11 * (1.0 + std::abs(left.apply(z))));

        // identity and inverse
        CHECK(same_map(compose(m1, MobiusMap::identity()), m1, 1e-13));
        CHECK(compose(m1, m1.inverse()).is_identity(1e-12));
        CHECK(compose(m1, m1.inverse()).epsilon == 1);
    }

    CHECK(same_map(MobiusMap::identity().inverse(), MobiusMap::identity()));
    const auto shear = MobiusMap::normalize(1, 1, 0, 1);
    CHECK(same_map(shear.inverse(), MobiusMap::normalize(1, -1, 0, 1)));
    const auto tr = MobiusMap::transpose_map();
    CHECK(same_map(tr.inverse(), MobiusMap::normalize(0, 1, -1, 0)));
    // double transpose acts as the identity map
    CHECK(compose(tr, tr).is_identity(1e-15));
}

TEST_CASE("half-plane action follows the determinant sign") {
    for (int k = 0; k < 100; ++k) {
        const auto m = random_map();
        const cplx z = oracle::random_nonreal();
        const cplx v = m.apply(z);
        const double want = m.epsilon * (z.imag() > 0 ? 1.0 : -1.0);
        CHECK(v.imag() * want > 0.0);
        // the quantitative form Im mu(z)/Im z = eps/|cz+d|^2
        const double lhs = v.imag() / z.imag();
        const double rhs = m.epsilon / std::norm(m.c * z + m.d);
        CHECK(lhs == Approx(rhs).epsilon(1e-10));
    }
}
