#pragma once

#include "common.hpp"
#include "asymptotics.hpp"
#include "classify.hpp"
#include "nevanlinna.hpp"
#include "properties.hpp"
#include "sl_weyl.hpp"

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kreinspec {

// The coupled operator is carried purely through its pair of Weyl functions
// (m+, m-); every verdict below is a statement about that pair.  Whether the
// kernel chain condition ker A = ker A^2 holds is operator-level information
// the function pair cannot see, so it enters as a user-supplied flag.

enum class KernelCondition { holds, fails, unknown };

inline const char* to_string(KernelCondition k) {
    switch (k) {
        case KernelCondition::holds: return "TRUE";
        case KernelCondition::fails: return "FALSE";
        default: return "UNKNOWN";
    }
}

struct CouplingModel {
    NevanlinnaExpr m_plus;
    NevanlinnaExpr m_minus;
    KernelCondition kernel = KernelCondition::unknown;
    std::optional<HalfLineProblem> sl_problem_plus;
    std::string label;
    std::string note; // e.g. asymptotic stand-in provenance
};

/// d(z) = m+(z) + m-(-z); zeros of d off the real axis are eigenvalues of
/// the coupling, so the non-real resolvent set is exactly {d != 0}.
inline cplx denominator(const CouplingModel& model, cplx z) {
    if (z.imag() == 0.0) throw precondition_error("denominator: z must be non-real");
    const NevanlinnaExpr flipped = NevanlinnaExpr::flip(model.m_minus);
    return model.m_plus.evaluate(z) + flipped.evaluate(z);
}

// ---------------------------------------------------------------------------
// Nonnegativity of the coupling from the Weyl pair
// ---------------------------------------------------------------------------

enum class NonnegVerdict { nonnegative, not_nonnegative, inconclusive };

inline const char* to_string(NonnegVerdict v) {
    switch (v) {
        case NonnegVerdict::nonnegative: return "NONNEGATIVE";
        case NonnegVerdict::not_nonnegative: return "NOT_NONNEGATIVE";
        default: return "INCONCLUSIVE";
    }
}

struct NonnegativityReport {
    NonnegVerdict verdict = NonnegVerdict::inconclusive;
    std::string route;
    std::optional<double> zero_location; // a zero of m+(x) + m-(x) on R_-
    std::optional<double> endpoint_value;
};

namespace detail {

inline std::optional<double> bisect_zero(const std::function<double(double)>& g, double a,
                                         double b) {
    double fa = g(a), fb = g(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0)) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = g(m);
        if (fm == 0.0 || 0.5 * (b - a) < 1e-14 * std::abs(m)) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Zero-free route: no zero of m+(x)+m-(x) on the negative axis.
inline NonnegativityReport nonnegativity_zero_free(const CouplingModel& model,
                                                   const ClassifyGrid& grid = {}) {
    NonnegativityReport rep;
    rep.route = "zero-free-sum";
    auto sum_at = [&](double x) {
        return (model.m_plus.evaluate(cplx(x, 0.0)) + model.m_minus.evaluate(cplx(x, 0.0))).real();
    };
    auto xs = grid.negative_axis(); // increasing |x|
    std::sort(xs.begin(), xs.end()); // increasing x
    std::vector<std::pair<double, double>> vals;
    for (double x : xs) {
        try {
            const cplx v =
                model.m_plus.evaluate(cplx(x, 0.0)) + model.m_minus.evaluate(cplx(x, 0.0));
            if (std::abs(v.imag()) > 1e-8 * (1.0 + std::abs(v))) {
                rep.verdict = NonnegVerdict::inconclusive;
                return rep;
            }
            vals.emplace_back(x, v.real());
        } catch (const error&) {
            // node on a pole; adjacent stretches are still informative
        }
    }
    if (vals.size() < xs.size() / 2) {
        rep.verdict = NonnegVerdict::inconclusive;
        return rep;
    }
    const double huge = 1e6;
    for (size_t k = 0; k + 1 < vals.size(); ++k) {
        const auto [x1, v1] = vals[k];
        const auto [x2, v2] = vals[k + 1];
        if (v1 > huge && v2 < -huge) continue; // pole of the sum, not a zero
        if ((v1 > 0) != (v2 > 0) || v1 == 0.0 || v2 == 0.0) {
            rep.verdict = NonnegVerdict::not_nonnegative;
            rep.zero_location = detail::bisect_zero(sum_at, x1, x2).value_or(0.5 * (x1 + x2));
            return rep;
        }
    }
    rep.verdict = NonnegVerdict::nonnegative;
    return rep;
}

/// Krein-endpoint route: m+ of Krein type, m- pole-free on R_-, and
/// lim_{x -> -inf} (m+(x) + m-(x)) >= 0.
inline NonnegativityReport nonnegativity_krein_route(const CouplingModel& model,
                                                     const ClassifyGrid& grid = {}) {
    NonnegativityReport rep;
    rep.route = "krein-endpoint";
    const ClassReport cp = classify(model.m_plus, grid);
    const ClassReport cm = classify(model.m_minus, grid);
    if (cp.pole_on_negative_axis || cm.pole_on_negative_axis) return rep;
    if (cp.m_zero_minus.kind != ExtendedReal::Kind::plus_infinite) return rep;
    if (!cp.m_minus_inf.is_finite() || !cm.m_minus_inf.is_finite()) return rep;
    const double lim = cp.m_minus_inf.value + cm.m_minus_inf.value;
    rep.endpoint_value = lim;
    if (lim >= -1e-9 * (1.0 + std::abs(lim)))
        rep.verdict = NonnegVerdict::nonnegative;
    else
        rep.verdict = NonnegVerdict::not_nonnegative;
    return rep;
}

/// Friedrichs-endpoint route: m+ of Friedrichs type, m- pole-free, and
/// lim_{x -> 0-} (m+(x) + m-(x)) <= 0.
inline NonnegativityReport nonnegativity_friedrichs_route(const CouplingModel& model,
                                                          const ClassifyGrid& grid = {}) {
    NonnegativityReport rep;
    rep.route = "friedrichs-endpoint";
    const ClassReport cp = classify(model.m_plus, grid);
    const ClassReport cm = classify(model.m_minus, grid);
    if (cp.pole_on_negative_axis || cm.pole_on_negative_axis) return rep;
    if (cp.m_minus_inf.kind != ExtendedReal::Kind::minus_infinite) return rep;
    if (!cp.m_zero_minus.is_finite() || !cm.m_zero_minus.is_finite()) return rep;
    const double lim = cp.m_zero_minus.value + cm.m_zero_minus.value;
    rep.endpoint_value = lim;
    if (lim <= 1e-9 * (1.0 + std::abs(lim)))
        rep.verdict = NonnegVerdict::nonnegative;
    else
        rep.verdict = NonnegVerdict::not_nonnegative;
    return rep;
}

/// Umbrella check: the zero-free sweep decides almost always; the endpoint
/// routes back it up when the sweep is inconclusive.
inline NonnegativityReport nonnegativity(const CouplingModel& model,
                                         const ClassifyGrid& grid = {}) {
    auto rep = nonnegativity_zero_free(model, grid);
    if (rep.verdict != NonnegVerdict::inconclusive) return rep;
    rep = nonnegativity_krein_route(model, grid);
    if (rep.verdict != NonnegVerdict::inconclusive) return rep;
    return nonnegativity_friedrichs_route(model, grid);
}

// ---------------------------------------------------------------------------
// Boundary-condition classification (M G1 = N G0 with rank-2 (M N))
// ---------------------------------------------------------------------------

struct BoundaryMatrixPair {
    Eigen::Matrix2cd M;
    Eigen::Matrix2cd N;
};

struct BoundaryClassification {
    int canonical_type = 0; // 1..4
    bool separated = false;
    bool mirrored = false; // the half-line roles are exchanged (type 2 only)
    std::map<std::string, cplx> parameters;
};

inline BoundaryClassification classify_boundary(const BoundaryMatrixPair& pair) {
    using Mat24 = Eigen::Matrix<cplx, 2, 4>;
    Mat24 B;
    B << pair.M(0, 0), pair.M(0, 1), pair.N(0, 0), pair.N(0, 1), pair.M(1, 0), pair.M(1, 1),
        pair.N(1, 0), pair.N(1, 1);

    const double scale = B.cwiseAbs().maxCoeff();
    if (scale == 0.0) throw rank_deficient_error("classify_boundary: zero matrix");
    const double tol = 1e-10 * scale;

    // self-adjointness: M N* Hermitian
    const Eigen::Matrix2cd H = pair.M * pair.N.adjoint();
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff()))
        throw non_self_adjoint_error("classify_boundary: M N* is not Hermitian");

    // reduced row echelon form with pivot tolerance
    Mat24 R = B;
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < 4 && row < 2; ++col) {
        int best = row;
        for (int r = row; r < 2; ++r)
            if (std::abs(R(r, col)) > std::abs(R(best, col))) best = r;
        if (std::abs(R(best, col)) <= tol) continue;
        R.row(row).swap(R.row(best));
        R.row(row) /= R(row, col);
        for (int r = 0; r < 2; ++r)
            if (r != row) R.row(r) -= R(r, col) * R.row(row);
        pivots.push_back(col);
        ++row;
    }
    if (pivots.size() != 2) throw rank_deficient_error("classify_boundary: rank(M N) < 2");

    auto realpart = [&](cplx v, const char* what) {
        if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v)))
            throw non_self_adjoint_error(std::string("classify_boundary: ") + what +
                                         " must be real");
        return cplx(v.real(), 0.0);
    };

    BoundaryClassification out;
    if (pivots == std::vector<int>{2, 3}) {
        out.canonical_type = 1;
        out.separated = true;
        return out;
    }
    if (pivots == std::vector<int>{0, 3}) {
        out.canonical_type = 2;
        out.separated = true;
        out.parameters["alpha"] = realpart(R(0, 2), "alpha");
        return out;
    }
    if (pivots == std::vector<int>{1, 2}) {
        // the +/- mirrored companion of type 2: G0+ = 0, G1- = alpha G0-
        out.canonical_type = 2;
        out.separated = true;
        out.mirrored = true;
        out.parameters["alpha"] = realpart(R(0, 3), "alpha");
        return out;
    }
    if (pivots == std::vector<int>{0, 2}) {
        out.canonical_type = 3;
        out.separated = false;
        const cplx e13 = R(1, 3); // = -exp(i theta)/rho
        if (std::abs(e13) <= tol) throw non_self_adjoint_error("classify_boundary: type 3 shape");
        const double rho = 1.0 / std::abs(e13);
        const cplx eith = -e13 * rho;
        const double theta = std::arg(eith);
        const cplx sigma = realpart(R(0, 3) / eith, "sigma");
        out.parameters["rho"] = rho;
        out.parameters["theta"] = theta;
        out.parameters["sigma"] = sigma;
        return out;
    }
    if (pivots == std::vector<int>{0, 1}) {
        out.canonical_type = 4;
        const cplx alpha = realpart(R(0, 2), "alpha");
        const cplx beta = realpart(R(1, 3), "beta");
        const cplx omega = R(0, 3);
        if (std::abs(R(1, 2) - std::conj(omega)) > 1e-9 * (1.0 + std::abs(omega)))
            throw non_self_adjoint_error("classify_boundary: type 4 off-diagonal mismatch");
        out.parameters["alpha"] = alpha;
        out.parameters["beta"] = beta;
        out.parameters["omega"] = omega;
        out.separated = std::abs(omega) <= 1e-12 * (1.0 + scale);
        return out;
    }
    // pivots {1,3} cannot carry a Hermitian M N*
    throw non_self_adjoint_error("classify_boundary: shape admits no self-adjoint extension");
}

// ---------------------------------------------------------------------------
// Resolvent compression onto the positive half-line
// ---------------------------------------------------------------------------

namespace detail {

struct Vec2c {
    cplx a{0.0, 0.0}, b{0.0, 0.0};
    Vec2c operator+(const Vec2c& o) const { return {a + o.a, b + o.b}; }
    Vec2c operator-(const Vec2c& o) const { return {a - o.a, b - o.b}; }
    Vec2c operator*(double s) const { return {a * s, b * s}; }
    double norm() const { return std::abs(a) + std::abs(b); }
};
inline Vec2c operator*(double s, const Vec2c& v) { return v * s; }
inline Vec2c operator*(cplx s, const Vec2c& v) { return {s * v.a, s * v.b}; }

// adaptive Cash-Karp for the first-order system Y = (f, p f')
template <class F>
Vec2c rk2_integrate(F&& rhs, double t0, double t1, Vec2c y, double rel_tol) {
    if (t0 == t1) return y;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::max(1e-12, std::abs(t1 - t0) / 16.0);
    int guard = 0;
    while (dir * (t1 - t) > 0.0) {
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        const Vec2c k1 = rhs(t, y);
        const Vec2c k2 = rhs(t + 0.2 * h, y + (0.2 * h) * k1);
        const Vec2c k3 = rhs(t + 0.3 * h, y + h * (0.075 * k1 + 0.225 * k2));
        const Vec2c k4 = rhs(t + 0.6 * h, y + h * (0.3 * k1 + (-0.9) * k2 + 1.2 * k3));
        const Vec2c k5 =
            rhs(t + h, y + h * ((-11.0 / 54.0) * k1 + 2.5 * k2 + (-70.0 / 27.0) * k3 +
                                (35.0 / 27.0) * k4));
        const Vec2c k6 =
            rhs(t + 0.875 * h,
                y + h * ((1631.0 / 55296.0) * k1 + (175.0 / 512.0) * k2 + (575.0 / 13824.0) * k3 +
                         (44275.0 / 110592.0) * k4 + (253.0 / 4096.0) * k5));
        const Vec2c y5 = y + h * ((37.0 / 378.0) * k1 + (250.0 / 621.0) * k3 +
                                  (125.0 / 594.0) * k4 + (512.0 / 1771.0) * k6);
        const Vec2c y4 = y + h * ((2825.0 / 27648.0) * k1 + (18575.0 / 48384.0) * k3 +
                                  (13525.0 / 55296.0) * k4 + (277.0 / 14336.0) * k5 + 0.25 * k6);
        const double err = (y5 - y4).norm();
        const double scale = rel_tol * (y.norm() + y5.norm() + 1e-300);
        if (err <= scale) {
            t += h;
            y = y5;
            h *= std::min(5.0, std::max(0.2, err > 0 ? 0.9 * std::pow(scale / err, 0.2) : 5.0));
        } else {
            h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
        }
        if (++guard > 2000000) throw non_convergent_error("rk2_integrate: step budget");
    }
    return y;
}

} // namespace detail

struct ResolventOptions {
    double T_grid = 10.0;
    int cells = 2000;        // Simpson cells; the stored grid has 2*cells+1 nodes
    double ode_rel_tol = 1e-11;
    double decay_margin = 40.0; // exponent budget for damping the seed error
};

struct ResolventSolution {
    std::vector<double> t;   // fine grid over [0, T_grid]
    std::vector<cplx> f;     // solution values
    std::vector<cplx> pf;    // p f'
    std::vector<cplx> psi;   // Weyl solution on the same grid (G0 psi = 1)
    cplx m_plus_z;           // G1 psi
    cplx m_minus_at;         // m-(-z)
    cplx denom;              // m+(z) + m-(-z)
    cplx weyl_inner;         // int h psi w dt
    cplx psi_coeff;          // coefficient of psi in the solution
    double boundary_residual = 0.0;
    double ode_residual = 0.0;
};

/// Solves (S+* - z) f = h on the half-line with the z-dependent boundary
/// condition  G1 f + m-(-z) G0 f = 0  by variation of parameters: the
/// regular solution u0 (G0 u0 = 0) integrated out, the Weyl solution psi
/// integrated back from deep in the decay region, and Simpson quadrature of
/// the source couplings.
inline ResolventSolution resolvent_solve(const CouplingModel& model, cplx z,
                                         const std::function<cplx(double)>& h,
                                         const ResolventOptions& opt = {}) {
    if (!model.sl_problem_plus)
        throw precondition_error("resolvent_solve: model carries no half-line problem");
    const HalfLineProblem& prob = *model.sl_problem_plus;
    const auto& co = prob.coeff;
    if (z.imag() == 0.0) throw precondition_error("resolvent_solve: z must be non-real");

    const int n = 2 * opt.cells;
    ResolventSolution out;
    out.t.resize(n + 1);
    for (int k = 0; k <= n; ++k) out.t[k] = opt.T_grid * k / n;

    auto rhs = [&](double t, detail::Vec2c y) {
        return detail::Vec2c{y.b / co.p(t), (co.q(t) - z * co.w(t)) * y.a};
    };

    // u0: the solution annihilated by G0, stepped across the stored grid
    std::vector<detail::Vec2c> u0(n + 1);
    u0[0] = prob.triple == TripleStyle::neumann ? detail::Vec2c{1.0, 0.0}
                                                : detail::Vec2c{0.0, 1.0};
    for (int k = 0; k < n; ++k)
        u0[k + 1] = detail::rk2_integrate(rhs, out.t[k], out.t[k + 1], u0[k], opt.ode_rel_tol);

    // psi: decaying solution seeded beyond the grid and integrated back
    std::vector<detail::Vec2c> psi(n + 1);
    {
        const cplx kappa = std::sqrt((cplx(co.q(opt.T_grid), 0.0) - z * co.w(opt.T_grid)) /
                                     co.p(opt.T_grid));
        const double rate = std::abs(kappa.real()) > 1e-6 ? std::abs(kappa.real()) : 1e-6;
        const double T_far = opt.T_grid + opt.decay_margin / (2.0 * rate);
        const cplx u_seed = detail::wkb_seed(co, T_far, z);
        detail::Vec2c y{1.0, u_seed};
        y = detail::rk2_integrate(rhs, T_far, opt.T_grid, y, opt.ode_rel_tol);
        psi[n] = y;
        for (int k = n; k-- > 0;)
            psi[k] = detail::rk2_integrate(rhs, out.t[k + 1], out.t[k], psi[k + 1],
                                           opt.ode_rel_tol);
        // normalize G0 psi = 1
        const cplx g0 = prob.triple == TripleStyle::neumann ? psi[0].b : psi[0].a;
        if (std::abs(g0) == 0.0) throw pole_hit_error("resolvent_solve: G0 psi = 0");
        for (auto& v : psi) v = (1.0 / g0) * v;
    }

    const double p0 = co.p(0.0);
    auto gamma0 = [&](const detail::Vec2c& y) {
        return prob.triple == TripleStyle::neumann ? y.b : y.a;
    };
    auto gamma1 = [&](const detail::Vec2c& y) {
        return prob.triple == TripleStyle::neumann ? -y.a : y.b / p0;
    };

    out.m_plus_z = gamma1(psi[0]);
    out.m_minus_at = model.m_minus.evaluate(-z);
    out.denom = out.m_plus_z + out.m_minus_at;
    if (std::abs(out.denom) < 1e-12 * (1.0 + std::abs(out.m_plus_z) + std::abs(out.m_minus_at)))
        throw denominator_zero_error("resolvent_solve: m+(z) + m-(-z) = 0");

    // Wronskian p (u0 psi' - u0' psi) = u0 (p psi') - (p u0') psi, constant in t
    const cplx wronski = u0[0].a * psi[0].b - u0[0].b * psi[0].a;

    // cumulative Simpson for I1(t) = int_0^t u0 h w  and  I2(t) = int_t^T psi h w
    std::vector<cplx> g1(n + 1), g2(n + 1), I1(n + 1), I2(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double wk = co.w(out.t[k]);
        const cplx hk = h(out.t[k]);
        g1[k] = u0[k].a * hk * wk;
        g2[k] = psi[k].a * hk * wk;
    }
    const double hstep = out.t[1] - out.t[0];
    I1[0] = 0.0;
    for (int k = 0; k + 2 <= n; k += 2) {
        I1[k + 1] = I1[k] + hstep / 12.0 * (5.0 * g1[k] + 8.0 * g1[k + 1] - g1[k + 2]);
        I1[k + 2] = I1[k] + hstep / 3.0 * (g1[k] + 4.0 * g1[k + 1] + g1[k + 2]);
    }
    I2[n] = 0.0;
    for (int k = n; k - 2 >= 0; k -= 2) {
        I2[k - 1] = I2[k] + hstep / 12.0 * (5.0 * g2[k] + 8.0 * g2[k - 1] - g2[k - 2]);
        I2[k - 2] = I2[k] + hstep / 3.0 * (g2[k] + 4.0 * g2[k - 1] + g2[k - 2]);
    }
    out.weyl_inner = I2[0];

    // f_part = -(u0 I2 + psi I1)/W;  f = f_part + c psi with the boundary
    // condition  G1 f + m-(-z) G0 f = 0
    const cplx g1_fpart = gamma1(detail::Vec2c{-(u0[0].a * I2[0]) / wronski,
                                               -(u0[0].b * I2[0]) / wronski});
    out.psi_coeff = -g1_fpart / out.denom;

    out.f.resize(n + 1);
    out.pf.resize(n + 1);
    out.psi.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        const cplx fv = -(u0[k].a * I2[k] + psi[k].a * I1[k]) / wronski + out.psi_coeff * psi[k].a;
        const cplx pv = -(u0[k].b * I2[k] + psi[k].b * I1[k]) / wronski + out.psi_coeff * psi[k].b;
        out.f[k] = fv;
        out.pf[k] = pv;
        out.psi[k] = psi[k].a;
    }

    // boundary residual through the triple functionals
    {
        const detail::Vec2c y0{out.f[0], out.pf[0]};
        out.boundary_residual = std::abs(gamma1(y0) + out.m_minus_at * gamma0(y0)) /
                                (1.0 + std::abs(out.m_minus_at));
    }

    // integrated-form residual of (p f')' = (q - z w) f - h w per Simpson cell
    {
        double worst = 0.0;
        double scale = 0.0;
        std::vector<cplx> rhsv(n + 1);
        for (int k = 0; k <= n; ++k) {
            rhsv[k] = (co.q(out.t[k]) - z * co.w(out.t[k])) * out.f[k] -
                      h(out.t[k]) * co.w(out.t[k]);
            scale = std::max(scale, std::abs(rhsv[k]));
        }
        for (int k = 0; k + 2 <= n; k += 2) {
            const cplx integ = hstep / 3.0 * (rhsv[k] + 4.0 * rhsv[k + 1] + rhsv[k + 2]);
            const cplx defect = out.pf[k + 2] - out.pf[k] - integ;
            worst = std::max(worst, std::abs(defect) / (2.0 * hstep));
        }
        out.ode_residual = worst / (1.0 + scale);
    }
    return out;
}

/// Certified uniform bound 2 C1 C2^2 on the pairing of the coupled resolvent
/// integrals against unit vectors, from a bounded pair-D certificate and the
/// two B-certificates (C2 the larger of the two).
inline double veselic_bound(const PropertyCertificate& d_cert,
                            const PropertyCertificate& b_cert_plus,
                            const PropertyCertificate& b_cert_minus) {
    auto get = [](const PropertyCertificate& c, const char* key) {
        if (c.verdict != CertVerdict::bounded || !c.constants.count(key))
            throw missing_constant_error(std::string("veselic_bound: missing ") + key);
        return c.constants.at(key);
    };
    const double c1 = get(d_cert, "C1");
    const double c2 = std::max(get(b_cert_plus, "C2"), get(b_cert_minus, "C2"));
    return 2.0 * c1 * c2 * c2;
}

// ---------------------------------------------------------------------------
// Regularity verdict engine
// ---------------------------------------------------------------------------

struct JustificationStep {
    std::string conclusion; // e.g. "infinity_regular = YES"
    std::string rule;
    std::vector<std::string> certificates;
};

struct RegularityVerdict {
    verdict3 infinity_regular = verdict3::inconclusive;
    verdict3 zero_regular = verdict3::inconclusive;
    verdict3 fundamentally_reducible = verdict3::inconclusive;
    std::vector<JustificationStep> justification;
    bool necessity_fired_at_inf = false;
    bool necessity_fired_at_zero = false;
};

namespace detail {

inline std::string cert_tag(const PropertyCertificate& c, size_t idx) {
    return "cert[" + std::to_string(idx) + "]:" + to_string(c.property) + "/" +
           to_string(c.method) + "/" + c.subject;
}

} // namespace detail

/// Rule evaluation in fixed priority order; a slot once decided is never
/// overwritten, so adding certificates can only resolve INCONCLUSIVE slots.
inline RegularityVerdict verdict(const CouplingModel& model, const PairAnalysis& analysis,
                                 const std::vector<PropertyCertificate>& certs,
                                 const NonnegativityReport& nonneg) {
    if (nonneg.verdict != NonnegVerdict::nonnegative)
        throw not_nonnegative_error("verdict: model is not certified nonnegative");

    RegularityVerdict out;

    auto find = [&](PropertyKind p, const std::string& subject,
                    CertVerdict v) -> std::optional<size_t> {
        for (size_t i = 0; i < certs.size(); ++i)
            if (certs[i].property == p && certs[i].verdict == v &&
                (subject.empty() || certs[i].subject == subject))
                return i;
        return std::nullopt;
    };
    auto decide = [&](verdict3& slot, verdict3 value, const std::string& conclusion,
                      const std::string& rule, std::vector<size_t> used) {
        if (slot != verdict3::inconclusive) return;
        slot = value;
        JustificationStep step;
        step.conclusion = conclusion + std::string(" = ") + to_string(value);
        step.rule = rule;
        for (size_t i : used) step.certificates.push_back(detail::cert_tag(certs[i], i));
        out.justification.push_back(std::move(step));
    };

    const bool ainf = analysis.member_plus.in_A_inf == verdict3::yes &&
                      analysis.member_minus.in_A_inf == verdict3::yes;
    const bool azer = analysis.member_plus.in_A_zero == verdict3::yes &&
                      analysis.member_minus.in_A_zero == verdict3::yes;

    auto decide_with_evidence = [&](verdict3& slot, verdict3 value,
                                    const std::string& conclusion, const std::string& rule,
                                    std::vector<std::string> evidence) {
        if (slot != verdict3::inconclusive) return;
        slot = value;
        JustificationStep step;
        step.conclusion = conclusion + std::string(" = ") + to_string(value);
        step.rule = rule;
        step.certificates = std::move(evidence);
        out.justification.push_back(std::move(step));
    };

    // (1) both Weyl functions in the asymptotic class
    if (ainf)
        decide_with_evidence(out.infinity_regular, verdict3::yes, "infinity_regular",
                             "asymptotic-class-regularity",
                             {"membership:m_plus:A_inf=YES", "membership:m_minus:A_inf=YES"});
    if (azer && model.kernel == KernelCondition::holds)
        decide_with_evidence(out.zero_regular, verdict3::yes, "zero_regular",
                             "asymptotic-class-regularity",
                             {"membership:m_plus:A_zero=YES", "membership:m_minus:A_zero=YES",
                              "kernel_condition=TRUE"});

    // (2) B at infinity for both plus the pair D at infinity
    {
        const auto bp = find(PropertyKind::b_inf, "m_plus", CertVerdict::bounded);
        const auto bm = find(PropertyKind::b_inf, "m_minus", CertVerdict::bounded);
        if (bp && bm) {
            if (const auto d = find(PropertyKind::d_inf, "pair", CertVerdict::bounded))
                decide(out.infinity_regular, verdict3::yes, "infinity_regular",
                       "b-plus-d-regularity-at-infinity", {*bp, *bm, *d});
            if (const auto d = find(PropertyKind::d_inf, "pair", CertVerdict::divergent))
                decide(out.infinity_regular, verdict3::no, "infinity_regular",
                       "b-plus-d-regularity-at-infinity", {*bp, *bm, *d});
        }
    }

    // (3) B at zero for both plus the pair D at zero and the kernel chain
    {
        const auto bp = find(PropertyKind::b_zero, "m_plus", CertVerdict::bounded);
        const auto bm = find(PropertyKind::b_zero, "m_minus", CertVerdict::bounded);
        if (bp && bm) {
            if (const auto d = find(PropertyKind::d_zero, "pair", CertVerdict::bounded);
                d && model.kernel == KernelCondition::holds)
                decide(out.zero_regular, verdict3::yes, "zero_regular",
                       "b-plus-d-regularity-at-zero", {*bp, *bm, *d});
            if (const auto d = find(PropertyKind::d_zero, "pair", CertVerdict::divergent))
                decide(out.zero_regular, verdict3::no, "zero_regular",
                       "b-plus-d-regularity-at-zero", {*bp, *bm, *d});
        }
    }

    // (4) Stieltjes pair with single-function D-properties
    {
        const bool sti = analysis.class_plus.is_stieltjes == verdict3::yes &&
                         analysis.class_minus.is_stieltjes == verdict3::yes;
        if (sti) {
            const auto dp = find(PropertyKind::d_inf, "single", CertVerdict::bounded);
            if (dp)
                decide(out.infinity_regular, verdict3::yes, "infinity_regular",
                       "stieltjes-pair-d-regularity", {*dp});
            const auto dz = find(PropertyKind::d_zero, "single", CertVerdict::bounded);
            if (dz && model.kernel == KernelCondition::holds)
                decide(out.zero_regular, verdict3::yes, "zero_regular",
                       "stieltjes-pair-d-regularity", {*dz});
        }
    }

    // (5) necessity: a divergent pair D-certificate forces the singular
    // conclusion regardless of any B-evidence
    if (const auto d = find(PropertyKind::d_inf, "pair", CertVerdict::divergent)) {
        out.necessity_fired_at_inf = true;
        decide(out.infinity_regular, verdict3::no, "infinity_regular", "d-divergence-necessity",
               {*d});
    }
    if (const auto d = find(PropertyKind::d_zero, "pair", CertVerdict::divergent)) {
        out.necessity_fired_at_zero = true;
        decide(out.zero_regular, verdict3::no, "zero_regular", "d-divergence-necessity", {*d});
    }
    // a broken kernel chain alone rules out regularity of 0
    if (model.kernel == KernelCondition::fails)
        decide_with_evidence(out.zero_regular, verdict3::no, "zero_regular",
                             "kernel-chain-necessity", {"kernel_condition=FALSE"});

    // fundamental reducibility needs both endpoints and the kernel chain
    if (out.infinity_regular == verdict3::yes && out.zero_regular == verdict3::yes &&
        model.kernel == KernelCondition::holds)
        decide_with_evidence(out.fundamentally_reducible, verdict3::yes,
                             "fundamentally_reducible", "regular-endpoints-and-kernel-chain",
                             {"infinity_regular=YES", "zero_regular=YES",
                              "kernel_condition=TRUE"});
    else if (out.infinity_regular == verdict3::no || out.zero_regular == verdict3::no ||
             model.kernel == KernelCondition::fails)
        decide_with_evidence(out.fundamentally_reducible, verdict3::no,
                             "fundamentally_reducible", "regular-endpoints-and-kernel-chain",
                             {out.infinity_regular == verdict3::no ? "infinity_regular=NO"
                              : out.zero_regular == verdict3::no   ? "zero_regular=NO"
                                                                   : "kernel_condition=FALSE"});

    return out;
}

} // namespace kreinspec
