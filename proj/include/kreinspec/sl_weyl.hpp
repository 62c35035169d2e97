#pragma once

#include "common.hpp"

#include <functional>
#include <vector>
#include <string>
#include <algorithm>

namespace kreinspec {

// Half-line Sturm-Liouville problems  -(p f')' + q f = z w f  on (0, inf),
// assumed limit point at infinity, and their Titchmarsh-Weyl coefficients.
//
// Two boundary-functional choices are supported:
//   NEUMANN_STYLE:    G0 f = (p f')(0),  G1 f = -f(0)      ->  m = -1/u(0)
//   DIRICHLET_STYLE:  G0 f = f(0),       G1 f = f'(0)      ->  m = u(0)/p(0)
// where u = p psi' / psi is the Riccati variable of the decaying solution.

enum class TripleStyle { neumann, dirichlet };
enum class HalfLineSide { plus, minus };

struct Coefficients {
    enum class Kind { constant, power_law, tabulated } kind = Kind::constant;

    // constant: p, q, w
    double p0 = 1.0, q0 = 0.0, w0 = 1.0;
    // power_law: p(t) = t^beta, w(t) = t^alpha, q = 0
    double alpha = 0.0, beta = 0.0;
    // tabulated rows (t, p, q, w), t strictly increasing; log-linear in t
    std::vector<std::array<double, 4>> table;

    static Coefficients constant(double p, double q, double w) {
        Coefficients c;
        c.kind = Kind::constant;
        c.p0 = p;
        c.q0 = q;
        c.w0 = w;
        return c;
    }
    static Coefficients power_law(double alpha_, double beta_) {
        Coefficients c;
        c.kind = Kind::power_law;
        c.alpha = alpha_;
        c.beta = beta_;
        return c;
    }
    static Coefficients tabulated(std::vector<std::array<double, 4>> rows) {
        Coefficients c;
        c.kind = Kind::tabulated;
        c.table = std::move(rows);
        if (c.table.size() < 2) throw precondition_error("tabulated coefficients need >= 2 rows");
        return c;
    }

    double p(double t) const { return value(t, 1); }
    double q(double t) const { return value(t, 2); }
    double w(double t) const { return value(t, 3); }

    bool singular_at_origin() const {
        return kind == Kind::power_law && (alpha != 0.0 || beta != 0.0);
    }

private:
    double value(double t, int col) const {
        switch (kind) {
            case Kind::constant:
                return col == 1 ? p0 : col == 2 ? q0 : w0;
            case Kind::power_law:
                if (col == 2) return 0.0;
                return col == 1 ? std::pow(t, beta) : std::pow(t, alpha);
            case Kind::tabulated: {
                if (t <= table.front()[0]) return table.front()[col];
                if (t >= table.back()[0]) return table.back()[col];
                auto it = std::lower_bound(table.begin(), table.end(), t,
                                           [](const auto& row, double x) { return row[0] < x; });
                const auto& hi = *it;
                const auto& lo = *(it - 1);
                const double s = (t - lo[0]) / (hi[0] - lo[0]);
                return lo[col] + s * (hi[col] - lo[col]);
            }
        }
        return 0.0;
    }
};

struct Truncation {
    double initial_T = 8.0;
    double T_max = 1e7;
    double rtol = 1e-8;       // Cauchy criterion on m under T-doubling
    double ode_rel_tol = 1e-10;
};

struct HalfLineProblem {
    HalfLineSide side = HalfLineSide::plus;
    Coefficients coeff;
    TripleStyle triple = TripleStyle::neumann;
    Truncation trunc;
};

namespace detail {

// Embedded Cash-Karp RK45 step for a single complex state.
template <class F>
void rkck_step(F&& f, double t, cplx y, double h, cplx& y5, double& err) {
    static constexpr double b21 = 1.0 / 5.0;
    static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
    static constexpr double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
    static constexpr double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                            b54 = 35.0 / 27.0;
    static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                            b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
    static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                            c6 = 512.0 / 1771.0;
    static constexpr double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0,
                            d4 = 13525.0 / 55296.0, d5 = 277.0 / 14336.0, d6 = 1.0 / 4.0;

    const cplx k1 = f(t, y);
    const cplx k2 = f(t + 0.2 * h, y + h * (b21 * k1));
    const cplx k3 = f(t + 0.3 * h, y + h * (b31 * k1 + b32 * k2));
    const cplx k4 = f(t + 0.6 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
    const cplx k5 = f(t + h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    const cplx k6 = f(t + 0.875 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    y5 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    const cplx y4 = y + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
    err = std::abs(y5 - y4);
}

// Integrate dy/dt = f(t, y) from t0 to t1 (either direction), adaptive.
template <class F>
cplx rk_integrate(F&& f, double t0, double t1, cplx y0, double rel_tol) {
    if (t0 == t1) return y0;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    cplx y = y0;
    double h = dir * std::max(1e-12, std::abs(t1 - t0) / 64.0);
    int steps = 0;
    const int max_steps = 4000000;
    while (dir * (t1 - t) > 0.0) {
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        cplx ynew;
        double err;
        rkck_step(f, t, y, h, ynew, err);
        const double scale = rel_tol * (std::abs(y) + std::abs(ynew) + 1e-300);
        if (err <= scale) {
            t += h;
            y = ynew;
            const double grow = err > 0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
            h *= std::min(5.0, std::max(0.2, grow));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
        }
        if (++steps > max_steps)
            throw non_convergent_error("rk_integrate: step budget exhausted");
    }
    return y;
}

// Riccati state that switches to the reciprocal variable near blow-ups.
// u = p psi'/psi satisfies u' = (q - z w) - u^2/p; v = 1/u satisfies
// v' = 1/p - (q - z w) v^2.
struct RiccatiTracker {
    bool inverted = false;
    cplx y;

    cplx u() const { return inverted ? 1.0 / y : y; }
};

inline cplx wkb_seed(const Coefficients& c, double T, cplx z) {
    const cplx s = std::sqrt(cplx(c.p(T), 0.0) * (cplx(c.q(T), 0.0) - z * c.w(T)));
    // decaying branch: Re u < 0 (ties broken toward -|Re|)
    return (s.real() > 0.0) ? -s : s;
}

inline cplx riccati_m_at_T(const HalfLineProblem& prob, cplx z, double T) {
    const auto& c = prob.coeff;
    const double t_cut = c.singular_at_origin() ? 1e-5 : 0.0;

    RiccatiTracker st;
    st.y = wkb_seed(c, T, z);
    const double swap_hi = 1e6;

    auto fu = [&](double t, cplx u) { return (c.q(t) - z * c.w(t)) - u * u / c.p(t); };
    auto fv = [&](double t, cplx v) { return 1.0 / c.p(t) - (c.q(t) - z * c.w(t)) * v * v; };

    // integrate in segments, re-checking the variable swap between them
    double t = T;
    const int nseg = 64;
    for (int k = 0; k < nseg && t > t_cut; ++k) {
        const double tnext = std::max(t_cut, t - (t - t_cut) / (nseg - k));
        if (!st.inverted && std::abs(st.y) > swap_hi) {
            st.y = 1.0 / st.y;
            st.inverted = true;
        } else if (st.inverted && std::abs(st.y) > swap_hi) {
            st.y = 1.0 / st.y;
            st.inverted = false;
        }
        st.y = st.inverted ? rk_integrate(fv, t, tnext, st.y, prob.trunc.ode_rel_tol)
                           : rk_integrate(fu, t, tnext, st.y, prob.trunc.ode_rel_tol);
        t = tnext;
    }
    cplx u0 = st.u();

    if (t_cut > 0.0) {
        // Transfer over [0, t_cut] for power-law coefficients by the truncated
        // Peano series of the fundamental system Y' = A Y,
        // A = [[0, 1/p], [q - z w, 0]]; third- and higher-order products are
        // O(t_cut^{(1-beta) + (1+alpha) + min(..)}) and negligible at 1e-5.
        const double a = c.alpha, b = c.beta;
        const double I1 = std::pow(t_cut, 1.0 - b) / (1.0 - b);
        const cplx I2 = -z * std::pow(t_cut, 1.0 + a) / (1.0 + a);
        const cplx D1 = -z * std::pow(t_cut, 2.0 + a - b) / ((1.0 + a) * (2.0 + a - b));
        const cplx D2 = D1 * (1.0 + a) / (1.0 - b);
        // Phi maps data at 0 to data at t_cut; invert on (psi, p psi')
        const cplx f11 = 1.0 + D1, f12 = I1, f21 = I2, f22 = 1.0 + D2;
        // u(0) = (-f21 + f11 u)/(f22 - f12 u)
        u0 = (-f21 + f11 * u0) / (f22 - f12 * u0);
    }

    switch (prob.triple) {
        case TripleStyle::neumann:
            if (u0 == cplx(0.0, 0.0)) throw pole_hit_error("weyl_function: u(0) = 0");
            return -1.0 / u0;
        case TripleStyle::dirichlet: {
            const double p0 = c.singular_at_origin() ? 1.0 : c.p(0.0);
            if (c.singular_at_origin() && c.beta != 0.0)
                throw precondition_error("dirichlet triple with singular p(0)");
            return u0 / p0;
        }
    }
    return {};
}

} // namespace detail

/// Titchmarsh-Weyl coefficient by backward Riccati integration with WKB
/// seeding at T and doubling of T until the value is Cauchy-stable.
inline cplx weyl_function(const HalfLineProblem& prob, cplx z) {
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw branch_cut_error("weyl_function: z must be off [0, inf)");
    double T = prob.trunc.initial_T;
    // at large |z| the decay rate ~ sqrt(|z|) allows a smaller T
    const double zmag = std::abs(z);
    if (zmag > 4.0) T = std::max(1.0, T / std::sqrt(zmag / 4.0));
    cplx m_prev = detail::riccati_m_at_T(prob, z, T);
    while (true) {
        T *= 2.0;
        if (T > prob.trunc.T_max)
            throw non_convergent_error("weyl_function: truncation exceeded T_max");
        const cplx m_next = detail::riccati_m_at_T(prob, z, T);
        if (std::abs(m_next - m_prev) <= prob.trunc.rtol * std::abs(m_next) + 1e-300)
            return m_next;
        m_prev = m_next;
    }
}

} // namespace kreinspec
