#pragma once

// Independent oracles for the test suite.  Everything here is computed from
// first principles (polar decompositions, gamma functions, brute-force
// quadrature) without touching the library's evaluation paths, so agreement
// is evidence rather than tautology.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.141592653589793238462643383279502884;

/// (-z)^a from the polar form, Arg in (-pi, pi).
inline cplx neg_pow(cplx z, double a) {
    const cplx w = -z;
    const double r = std::hypot(w.real(), w.imag());
    const double th = std::atan2(w.imag(), w.real());
    return std::polar(std::pow(r, a), a * th);
}

inline cplx sqrt_inv(cplx z) { return neg_pow(z, -0.5); }        // 1/sqrt(-z)
inline cplx sqrt_neg(cplx z) { return -neg_pow(z, 0.5); }        // -sqrt(-z)
inline cplx quarter(cplx z) { return -std::sqrt(2.0) * neg_pow(z, 0.25); }
inline cplx kakost(cplx z) { return neg_pow(z, -0.5) - 1.0 / z; } // 1/sqrt(-z) - 1/z

/// The power-law half-line model constants (nu, C) from the gamma function.
struct PowerWeyl {
    double nu;
    double C;
};
inline PowerWeyl power_weyl(double alpha, double beta) {
    const double k = 0.5 * (alpha - beta + 2.0);
    const double nu = (1.0 - beta) / (alpha - beta + 2.0);
    const double C =
        std::pow(2.0 * k, 2.0 * nu) * std::tgamma(1.0 + nu) / ((1.0 - beta) * std::tgamma(1.0 - nu));
    return {nu, C};
}

/// Composite-Simpson quadrature, an independent check on the adaptive rule.
template <class F>
cplx simpson(F&& f, double a, double b, int n = 4000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    cplx acc = f(a) + f(b);
    for (int k = 1; k < n; ++k) acc += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

/// int_0^inf dt / (pi sqrt(t) (t - z)) computed brute-force via t = s^2,
/// with the analytic remainder of the truncated tail.
inline cplx sqrt_measure_transform(cplx z) {
    const double S = 4000.0;
    auto g = [z](double s) { return 2.0 / (pi * (s * s - z)); };
    const cplx body = simpson(g, 0.0, S, 2000000);
    const double T = S * S;
    const cplx tail = 2.0 / (pi * std::sqrt(T)) + 2.0 * z / (3.0 * pi * std::pow(T, 1.5));
    return body + tail;
}

/// Deterministic RNG for property-style sampling.
inline std::mt19937& rng() {
    static std::mt19937 gen(0x5eed1234u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng());
}

inline cplx random_nonreal(double mag = 5.0, double min_im = 0.05) {
    for (;;) {
        const cplx z(uniform(-mag, mag), uniform(-mag, mag));
        if (std::abs(z.imag()) >= min_im) return z;
    }
}

inline cplx random_upper(double mag = 5.0, double min_im = 0.05) {
    const cplx z = random_nonreal(mag, min_im);
    return {z.real(), std::abs(z.imag())};
}

} // namespace oracle
