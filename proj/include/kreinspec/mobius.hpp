#pragma once

#include "common.hpp"

#include <array>

namespace kreinspec {

// Real Moebius transformations stored with |det| = 1.  The sign of the
// determinant (epsilon) decides whether the map preserves or flips the
// half-planes: Im mu(z) / Im z = epsilon / |c z + d|^2.

struct MobiusMap {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    int epsilon = +1; // = a*d - b*c after normalization

    static MobiusMap identity() { return MobiusMap{}; }

    /// z -> -1/z; exchanging the two boundary functionals gives this action
    /// on the function side.
    static MobiusMap transpose_map() { return normalize(0.0, -1.0, 1.0, 0.0); }

    /// Normalize raw entries so |a d - b c| = 1, keeping the sign as epsilon.
    static MobiusMap normalize(double a, double b, double c, double d) {
        const double det = a * d - b * c;
        if (det == 0.0 || !std::isfinite(det))
            throw zero_determinant_error("MobiusMap: a*d - b*c = 0");
        const double s = std::sqrt(std::abs(det));
        MobiusMap m;
        m.a = a / s;
        m.b = b / s;
        m.c = c / s;
        m.d = d / s;
        m.epsilon = det > 0 ? +1 : -1;
        return m;
    }

    cplx apply(cplx z) const {
        const cplx den = c * z + d;
        if (den == cplx(0.0, 0.0))
            throw pole_hit_error("MobiusMap::apply: c*z + d = 0");
        return (a * z + b) / den;
    }

    cplx operator()(cplx z) const { return apply(z); }

    double det() const { return a * d - b * c; }

    MobiusMap inverse() const {
        MobiusMap m;
        m.a = d;
        m.b = -b;
        m.c = -c;
        m.d = a;
        m.epsilon = epsilon;
        return m;
    }

    bool is_identity(double tol = 0.0) const {
        // identity up to overall sign (the kernel of the homomorphism)
        double s = a < 0 ? -1.0 : 1.0;
        return std::abs(s * a - 1.0) <= tol && std::abs(b) <= tol && std::abs(c) <= tol &&
               std::abs(s * d - 1.0) <= tol;
    }
};

inline MobiusMap compose(const MobiusMap& m1, const MobiusMap& m2) {
    // matrix product; already normalized factors stay normalized up to roundoff
    MobiusMap m;
    m.a = m1.a * m2.a + m1.b * m2.c;
    m.b = m1.a * m2.b + m1.b * m2.d;
    m.c = m1.c * m2.a + m1.d * m2.c;
    m.d = m1.c * m2.b + m1.d * m2.d;
    m.epsilon = m1.epsilon * m2.epsilon;
    return m;
}

inline bool same_map(const MobiusMap& x, const MobiusMap& y, double tol = 1e-12) {
    // projective equality: same map iff entries agree up to overall sign
    auto close = [tol](double p, double q) { return std::abs(p - q) <= tol; };
    bool plus = close(x.a, y.a) && close(x.b, y.b) && close(x.c, y.c) && close(x.d, y.d);
    bool minus = close(x.a, -y.a) && close(x.b, -y.b) && close(x.c, -y.c) && close(x.d, -y.d);
    return (plus || minus) && x.epsilon == y.epsilon;
}

} // namespace kreinspec
