#pragma once

#include "common.hpp"
#include "classify.hpp"
#include "measure.hpp"
#include "nevanlinna.hpp"

#include <array>
#include <optional>
#include <vector>

namespace kreinspec {

// Asymptotic-class detection: pure power laws C0 (-rz)^{a0}, optionally a
// constant plus a second power term, fitted at infinity or at zero along
// fixed probe directions.

enum class Regime { at_inf, at_zero };

inline const char* to_string(Regime r) { return r == Regime::at_inf ? "AT_INF" : "AT_ZERO"; }

struct PowerFit {
    Regime regime = Regime::at_inf;
    double alpha0 = 0.0;
    double c0 = 0.0;
    // second term present only for the constant-leading branch (alpha0 ~ 0);
    // c1 is the raw coefficient of (-rz)^{alpha1} in  m(rz) - c0
    std::optional<double> alpha1;
    std::optional<double> c1;
    double residual = 0.0; // max relative model deviation over the window
    double r_min = 0.0, r_max = 0.0;
};

struct FitOptions {
    int nodes = 16;
    std::array<cplx, 3> probes{cplx(0.0, 1.0), cplx(-1.0, 1.0), cplx(1.0, 2.0)};
    double inf_r_min = 1e3, inf_r_max = 1e7;
    double zero_r_min = 1e-7, zero_r_max = 1e-3;
    double alpha_zero_band = 0.01; // |alpha0| below this triggers the two-term branch
    double max_residual = 0.05;
};

namespace detail {

struct FitSamples {
    std::vector<double> r;
    std::vector<std::vector<cplx>> vals; // [probe][node]
};

inline FitSamples collect_samples(const NevanlinnaExpr& f, Regime regime, const FitOptions& opt) {
    FitSamples s;
    const double r0 = regime == Regime::at_inf ? opt.inf_r_min : opt.zero_r_min;
    const double r1 = regime == Regime::at_inf ? opt.inf_r_max : opt.zero_r_max;
    s.r.resize(opt.nodes);
    for (int k = 0; k < opt.nodes; ++k)
        s.r[k] = r0 * std::pow(r1 / r0, static_cast<double>(k) / (opt.nodes - 1));
    s.vals.resize(opt.probes.size());
    for (size_t p = 0; p < opt.probes.size(); ++p) {
        s.vals[p].resize(opt.nodes);
        for (int k = 0; k < opt.nodes; ++k) s.vals[p][k] = f.evaluate(s.r[k] * opt.probes[p]);
    }
    return s;
}

inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const size_t n = x.size();
    for (size_t k = 0; k < n; ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

/// Log-log least-squares fit of m(r z) ~ c0 (-rz)^{alpha0} over the regime
/// window, averaged across the probe directions.  A near-zero exponent falls
/// through to the constant-plus-power model  m(rz) ~ c0 + c1 (-rz)^{alpha1}.
inline PowerFit fit_power_law(const NevanlinnaExpr& f, Regime regime, const FitOptions& opt = {}) {
    const auto s = detail::collect_samples(f, regime, opt);
    const size_t np = opt.probes.size();
    std::vector<double> logr(s.r.size());
    for (size_t k = 0; k < s.r.size(); ++k) logr[k] = std::log(s.r[k]);

    PowerFit fit;
    fit.regime = regime;
    fit.r_min = s.r.front();
    fit.r_max = s.r.back();

    double slope_acc = 0.0;
    for (size_t p = 0; p < np; ++p) {
        std::vector<double> lv(s.r.size());
        for (size_t k = 0; k < s.r.size(); ++k) lv[k] = std::log(std::abs(s.vals[p][k]));
        slope_acc += detail::ls_slope(logr, lv);
    }
    fit.alpha0 = slope_acc / np;

    // phase-consistent coefficient: average of m / (-rz)^alpha over the
    // window and the probe directions
    auto phase_avg_coeff = [&](double alpha) {
        cplx acc{0.0, 0.0};
        size_t cnt = 0;
        for (size_t p = 0; p < np; ++p) {
            for (size_t k = 0; k < s.r.size(); ++k) {
                acc += s.vals[p][k] / neg_z_pow(s.r[k] * opt.probes[p], alpha);
                ++cnt;
            }
        }
        return acc / static_cast<double>(cnt);
    };

    if (std::abs(fit.alpha0) >= opt.alpha_zero_band) {
        const cplx c = phase_avg_coeff(fit.alpha0);
        fit.c0 = c.real();
        double resid = 0.0;
        for (size_t p = 0; p < np; ++p)
            for (size_t k = 0; k < s.r.size(); ++k) {
                const cplx model = fit.c0 * neg_z_pow(s.r[k] * opt.probes[p], fit.alpha0);
                resid = std::max(resid, std::abs(s.vals[p][k] / model - 1.0));
            }
        fit.residual = resid;
    } else {
        // constant-leading branch: alternate between the constant estimate and
        // the second-term fit; the endpoint node alone is contaminated by the
        // power correction, so one refinement pass matters.
        fit.alpha0 = 0.0;
        const size_t k_lim = regime == Regime::at_inf ? s.r.size() - 1 : 0;
        cplx c0_acc{0.0, 0.0};
        for (size_t p = 0; p < np; ++p) c0_acc += s.vals[p][k_lim];
        fit.c0 = (c0_acc / static_cast<double>(np)).real();

        // the correction term dominates away from the regime endpoint; the
        // exponent is fitted there, the coefficients globally
        const size_t half = s.r.size() / 2;
        const size_t term_lo = regime == Regime::at_inf ? 0 : half;
        const size_t term_hi = regime == Regime::at_inf ? half : s.r.size();

        // joint least squares for the real pair (c0, c1) in
        // m ~ c0 + c1 (-rz)^{a1} at a trial exponent, returning the residual.
        // Residuals are weighted by 1/|term|^2, which keeps exact two-term
        // models exact and stops higher-order contamination from bending the
        // exponent toward the far end of the window.
        auto solve_ls = [&](double a1, double& c0_out, double& c1_out) {
            double sw = 0.0, swb = 0.0, swbb = 0.0, swm = 0.0, swbm = 0.0;
            for (size_t p = 0; p < np; ++p)
                for (size_t k = 0; k < s.r.size(); ++k) {
                    const cplx b = neg_z_pow(s.r[k] * opt.probes[p], a1);
                    const cplx m_k = s.vals[p][k];
                    const double w = 1.0 / std::norm(b);
                    sw += w;
                    swb += w * b.real();
                    swbb += w * std::norm(b);
                    swm += w * m_k.real();
                    swbm += w * (std::conj(b) * m_k).real();
                }
            const double det = sw * swbb - swb * swb;
            if (std::abs(det) < 1e-12 * sw * swbb)
                return std::numeric_limits<double>::infinity();
            c0_out = (swm * swbb - swb * swbm) / det;
            c1_out = (sw * swbm - swb * swm) / det;
            double sse = 0.0;
            for (size_t p = 0; p < np; ++p)
                for (size_t k = 0; k < s.r.size(); ++k) {
                    const cplx b = neg_z_pow(s.r[k] * opt.probes[p], a1);
                    sse += std::norm(s.vals[p][k] - c0_out - c1_out * b) / std::norm(b);
                }
            return sse;
        };

        double a1 = 0.0;
        double c0_ls = fit.c0, c1_ls = 0.0;
        bool have_term = false;
        {
            std::vector<double> lv, lr;
            for (size_t p = 0; p < np; ++p)
                for (size_t k = term_lo; k < term_hi; ++k) {
                    const double d = std::abs(s.vals[p][k] - fit.c0);
                    if (d <= 1e-13 * (1.0 + std::abs(fit.c0))) continue;
                    lv.push_back(std::log(d));
                    lr.push_back(logr[k]);
                }
            if (lv.size() >= 4) {
                have_term = true;
                a1 = detail::ls_slope(lr, lv);
                // golden-section refinement of the exponent against the
                // full least-squares residual; kills the slope-estimate bias
                double lo = a1 - 0.1, hi = a1 + 0.1;
                const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
                double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
                double d0, d1c;
                double f1 = solve_ls(x1, d0, d1c), f2 = solve_ls(x2, d0, d1c);
                for (int it = 0; it < 48; ++it) {
                    if (f1 < f2) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = hi - gr * (hi - lo);
                        f1 = solve_ls(x1, d0, d1c);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = lo + gr * (hi - lo);
                        f2 = solve_ls(x2, d0, d1c);
                    }
                }
                a1 = 0.5 * (lo + hi);
                solve_ls(a1, c0_ls, c1_ls);
                fit.c0 = c0_ls;
            }
        }
        const cplx c1 = {c1_ls, 0.0};
        if (have_term) {
            fit.alpha1 = a1;
            fit.c1 = c1.real();
            double resid = 0.0;
            for (size_t p = 0; p < np; ++p)
                for (size_t k = 0; k < s.r.size(); ++k) {
                    const cplx model = fit.c0 + *fit.c1 * neg_z_pow(s.r[k] * opt.probes[p], a1);
                    resid = std::max(resid, std::abs(s.vals[p][k] / model - 1.0));
                }
            fit.residual = resid;
        } else {
            fit.residual = 1.0;
        }
    }
    if (!(fit.residual <= opt.max_residual))
        throw fit_failed_error("fit_power_law: residual " + std::to_string(fit.residual) +
                               " exceeds " + std::to_string(opt.max_residual));
    return fit;
}

// ---------------------------------------------------------------------------
// Membership in the two asymptotic classes
// ---------------------------------------------------------------------------

struct ClassMembership {
    verdict3 in_A_inf = verdict3::inconclusive;
    verdict3 in_A_zero = verdict3::inconclusive;
    std::optional<PowerFit> fit_inf;
    std::optional<PowerFit> fit_zero;
};

namespace detail {

// admissible leading term: exponent inside (-1,0) u (0,1) with the margin
// that keeps fitted estimates of the excluded endpoints out, and the
// coefficient sign forced by Im m >= 0 on the upper half-plane.
inline verdict3 admissible(const PowerFit& fit) {
    const double edge = 0.01;
    const double a = fit.alpha0;
    if (std::abs(a) >= edge && std::abs(a) <= 1.0 - edge) {
        const bool sign_ok = (a < 0.0 && fit.c0 > 0.0) || (a > 0.0 && fit.c0 < 0.0);
        return sign_ok ? verdict3::yes : verdict3::no;
    }
    if (std::abs(a) < edge) {
        // constant branch: needs the second term with the regime-correct range
        if (!fit.alpha1 || !fit.c1 || fit.c0 == 0.0) return verdict3::inconclusive;
        const double a1 = *fit.alpha1;
        const double k1 = *fit.c1;
        if (fit.regime == Regime::at_inf)
            return (a1 > -1.0 + edge && a1 < -edge && k1 > 0.0) ? verdict3::yes : verdict3::no;
        return (a1 > edge && a1 < 1.0 - edge && k1 < 0.0) ? verdict3::yes : verdict3::no;
    }
    if (std::abs(a) > 1.0 + edge) return verdict3::no;
    if (std::abs(a) >= 1.0 - edge) return verdict3::no; // at the excluded endpoint
    return verdict3::inconclusive;
}

} // namespace detail

inline ClassMembership class_membership(const NevanlinnaExpr& f, const ClassifyGrid& grid = {},
                                        const FitOptions& opt = {}) {
    ClassMembership out;
    const ClassReport rep = classify(f, grid);
    if (rep.in_SM == verdict3::no) {
        out.in_A_inf = verdict3::no;
        out.in_A_zero = verdict3::no;
        return out;
    }
    auto one = [&](Regime regime, std::optional<PowerFit>& slot) -> verdict3 {
        try {
            slot = fit_power_law(f, regime, opt);
        } catch (const fit_failed_error&) {
            return verdict3::inconclusive;
        }
        const verdict3 adm = detail::admissible(*slot);
        if (adm == verdict3::yes && rep.in_SM != verdict3::yes) return verdict3::inconclusive;
        return adm;
    };
    out.in_A_inf = one(Regime::at_inf, out.fit_inf);
    out.in_A_zero = one(Regime::at_zero, out.fit_zero);
    return out;
}

// ---------------------------------------------------------------------------
// Tauberian measure <-> transform verification at desk scale
// ---------------------------------------------------------------------------

struct TauberianReport {
    std::vector<double> forward_residuals; // at r in {1e2, 1e3, 1e4}, probe z = i
    std::vector<double> inverse_residuals; // sigma(t) ratio at t in {1e2, 1e3, 1e4}
    bool ok = false;
};

/// Verifies both directions of the power-law correspondence: the transform
/// of sigma behaves like C (-rz)^{-alpha} at infinity iff sigma(t) grows
/// like C sin(pi alpha)/pi * t^{1-alpha}/(1-alpha).
inline TauberianReport tauberian_check(const SpectralMeasure& sigma, double alpha, double C,
                                       double pass_tol = 0.01, double fail_tol = 0.05) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw precondition_error("tauberian_check: alpha in (0,1)");
    if (!(C > 0.0)) throw precondition_error("tauberian_check: C > 0");
    sigma.validate_stieltjes_growth();
    // gamma-term exclusion: the representation must vanish at infinity
    {
        const cplx far = sigma.cauchy_transform(cplx(0.0, 1e8));
        if (std::abs(far) > pass_tol)
            throw precondition_error("tauberian_check: transform does not vanish at infinity");
    }
    TauberianReport rep;
    const std::array<double, 3> rs{1e2, 1e3, 1e4};
    for (double r : rs) {
        const cplx z = cplx(0.0, r);
        const cplx got = sigma.cauchy_transform(z);
        const cplx want = C * neg_z_pow(z, -alpha);
        rep.forward_residuals.push_back(std::abs(got / want - 1.0));
    }
    const double c_inv = C * std::sin(pi * alpha) / (pi * (1.0 - alpha));
    for (double t : rs) {
        const double got = sigma.distribution(t);
        const double want = c_inv * std::pow(t, 1.0 - alpha);
        rep.inverse_residuals.push_back(std::abs(got / want - 1.0));
    }
    double worst = 0.0;
    for (double v : rep.forward_residuals) worst = std::max(worst, v);
    for (double v : rep.inverse_residuals) worst = std::max(worst, v);
    if (worst > fail_tol)
        throw mismatched_pair_error("tauberian_check: residual " + std::to_string(worst));
    rep.ok = worst <= pass_tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Closed-form limit of the D-ratio from a pair of power fits
// ---------------------------------------------------------------------------

/// Limit of (Im m+(iy) + Im m-(iy)) / |m+(iy) + m-(-iy)| toward the regime
/// endpoint, from the fitted leading terms.  The dominant exponent is the
/// larger one at infinity and the smaller one at zero; ties keep both terms.
/// When both leading terms are constants that cancel, the second-order terms
/// decide.
inline double d_limit_predict(const PowerFit& fit_plus, const PowerFit& fit_minus) {
    if (fit_plus.regime != fit_minus.regime)
        throw precondition_error("d_limit_predict: fits from different regimes");
    const bool at_inf = fit_plus.regime == Regime::at_inf;
    const double eq_tol = 0.02;

    auto evaluate = [&](double ap, double cp, double am, double cm) {
        const double dominant =
            at_inf ? std::max(ap, am) : std::min(ap, am);
        const double eps_p = std::abs(ap - dominant) <= eq_tol ? 1.0 : 0.0;
        const double eps_m = std::abs(am - dominant) <= eq_tol ? 1.0 : 0.0;
        const double num =
            std::abs(eps_p * cp * std::sin(pi * ap / 2.0) + eps_m * cm * std::sin(pi * am / 2.0));
        const cplx i_pow = std::polar(1.0, pi * ap / 2.0);  // i^ap
        const cplx mi_pow = std::polar(1.0, -pi * am / 2.0); // (-i)^am
        const double den = std::abs(eps_p * cp * i_pow + eps_m * cm * mi_pow);
        if (den <= 1e-12 * (std::abs(cp) + std::abs(cm)))
            throw degenerate_denominator_error("d_limit_predict: vanishing denominator");
        return num / den;
    };

    const bool both_const = std::abs(fit_plus.alpha0) <= eq_tol && std::abs(fit_minus.alpha0) <= eq_tol;
    if (both_const &&
        std::abs(fit_plus.c0 + fit_minus.c0) <= 1e-6 * (std::abs(fit_plus.c0) + std::abs(fit_minus.c0))) {
        if (!fit_plus.alpha1 || !fit_minus.alpha1)
            throw degenerate_denominator_error(
                "d_limit_predict: cancelling constants without second terms");
        return evaluate(*fit_plus.alpha1, *fit_plus.c1, *fit_minus.alpha1, *fit_minus.c1);
    }
    return evaluate(fit_plus.alpha0, fit_plus.c0, fit_minus.alpha0, fit_minus.c0);
}

} // namespace kreinspec
