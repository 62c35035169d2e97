#pragma once

#include "common.hpp"
#include "nevanlinna.hpp"
#include "rkhs.hpp"

#include <optional>
#include <vector>

namespace kreinspec {

// Numerical class membership for Nevanlinna / Stieltjes / inverse Stieltjes
// functions and the Moebius-reducible class (functions carried to Stieltjes
// form by a real Moebius map).  Sampling can never prove a global
// inequality, so YES/NO are only issued with a 10x margin over the working
// tolerance; everything else stays INCONCLUSIVE.

struct ExtendedReal {
    enum class Kind { finite, minus_infinite, plus_infinite, unknown } kind = Kind::unknown;
    double value = 0.0;

    static ExtendedReal finite(double v) { return {Kind::finite, v}; }
    static ExtendedReal minus_inf() { return {Kind::minus_infinite, 0.0}; }
    static ExtendedReal plus_inf() { return {Kind::plus_infinite, 0.0}; }
    static ExtendedReal unknown() { return {Kind::unknown, 0.0}; }
    bool is_finite() const { return kind == Kind::finite; }
};

struct ClassifyGrid {
    SamplePlan uhp = SamplePlan::upper_half_plane_default();
    double x_abs_lo = 1e-8; // |x| range of the negative-real sweep
    double x_abs_hi = 1e8;
    int per_decade = 64;

    std::vector<double> negative_axis() const {
        std::vector<double> xs;
        const int decades = static_cast<int>(std::round(std::log10(x_abs_hi / x_abs_lo)));
        const int n = decades * per_decade;
        xs.reserve(n + 1);
        for (int k = 0; k <= n; ++k)
            xs.push_back(-x_abs_lo * std::pow(10.0, static_cast<double>(k) * decades / n));
        return xs; // increasing |x|, i.e. walking away from the origin
    }
};

struct ClassReport {
    verdict3 is_nevanlinna = verdict3::inconclusive;
    verdict3 is_stieltjes = verdict3::inconclusive;
    verdict3 is_inverse_stieltjes = verdict3::inconclusive;
    verdict3 in_SM = verdict3::inconclusive;
    ExtendedReal m_minus_inf;
    ExtendedReal m_zero_minus;
    std::optional<double> pole_on_negative_axis;
    double gram_min_eig = 0.0;
    double gram_trace = 0.0;
    double sym_residual = 0.0;
};

namespace detail {

struct AxisSample {
    double x;
    double v;
    bool valid; // evaluation succeeded and value is real within tolerance
};

inline std::vector<AxisSample> sweep_negative_axis(const NevanlinnaExpr& f,
                                                   const ClassifyGrid& grid) {
    std::vector<AxisSample> out;
    auto xs = grid.negative_axis(); // increasing |x|
    // store in increasing x order (from -1e8 up to -1e-8)
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) {
        AxisSample s{*it, 0.0, false};
        try {
            const cplx v = f.evaluate(cplx(*it, 0.0));
            if (std::abs(v.imag()) <= 1e-9 * (1.0 + std::abs(v))) {
                s.v = v.real();
                s.valid = true;
            }
        } catch (const error&) {
            s.valid = false; // pole or branch trouble at this node
        }
        out.push_back(s);
    }
    return out;
}

} // namespace detail

inline ClassReport classify(const NevanlinnaExpr& f, const ClassifyGrid& grid = {}) {
    const NumericPolicy& pol = default_policy();
    ClassReport rep;

    // --- upper-half-plane evidence: Gram PSD, Im >= 0, conjugate symmetry ---
    {
        const auto G = gram(f, grid.uhp);
        const auto spec = gram_spectrum(G);
        rep.gram_min_eig = spec.min_eigenvalue;
        rep.gram_trace = spec.trace;
        double min_im = std::numeric_limits<double>::infinity();
        double sym = 0.0;
        for (cplx z : grid.uhp.points) {
            const cplx v = f.evaluate(z);
            const cplx vc = f.evaluate(std::conj(z));
            min_im = std::min(min_im, v.imag() / (1.0 + std::abs(v)));
            sym = std::max(sym, std::abs(vc - std::conj(v)) / (1.0 + std::abs(v)));
        }
        rep.sym_residual = sym;
        const double tr = std::max(spec.trace, 1e-300);
        const bool psd_ok = spec.min_eigenvalue >= -pol.psd_tol * tr;
        const bool psd_bad = spec.min_eigenvalue < -pol.margin_factor * pol.psd_tol * tr;
        const bool im_ok = min_im >= -pol.eval_sym_tol;
        const bool im_bad = min_im < -pol.margin_factor * pol.eval_sym_tol;
        const bool sym_ok = sym <= pol.eval_sym_tol;
        if (psd_ok && im_ok && sym_ok)
            rep.is_nevanlinna = verdict3::yes;
        else if (psd_bad || im_bad)
            rep.is_nevanlinna = verdict3::no;
        else
            rep.is_nevanlinna = verdict3::inconclusive;
    }

    // --- negative real axis sweep ---
    auto axis = detail::sweep_negative_axis(f, grid);
    const size_t n = axis.size();
    size_t n_valid = 0;
    for (const auto& s : axis)
        if (s.valid) ++n_valid;
    if (n_valid < n / 2) {
        // not meromorphic-real on R_-; no axis-based classification possible
        rep.in_SM = verdict3::no;
        rep.is_stieltjes = rep.is_nevanlinna == verdict3::no ? verdict3::no : verdict3::inconclusive;
        rep.is_inverse_stieltjes = rep.is_stieltjes;
        return rep;
    }

    // pole detection: the restriction is nondecreasing between poles, so the
    // only admissible decreasing step is the + to - jump across a pole.  A
    // failed evaluation flanked by such a jump is a pole hit on the node.
    int poles = 0;
    std::optional<double> pole_loc;
    bool monotone_ok = true;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (!axis[k].valid) continue;
        size_t k2 = k + 1;
        bool node_hit = false;
        if (!axis[k2].valid) {
            // skip one failed node; two in a row leaves the stretch unusable
            if (k + 2 >= n || !axis[k + 2].valid) continue;
            k2 = k + 2;
            node_hit = true;
        }
        const double a = axis[k].v, b = axis[k2].v;
        const double scale = 1.0 + std::abs(a) + std::abs(b);
        if (b >= a - 1e-8 * scale) continue; // nondecreasing within tolerance
        if (a > 0.0 && b < 0.0) {
            if (std::abs(a) <= 1e-6 * scale && std::abs(b) <= 1e-6 * scale)
                throw insufficient_grid_error("classify: ambiguous sign jump on R_-");
            ++poles;
            pole_loc = node_hit ? axis[k + 1].x : 0.5 * (axis[k].x + axis[k2].x);
        } else {
            monotone_ok = false;
        }
    }
    if (poles > 0) rep.pole_on_negative_axis = pole_loc;

    // sign bounds for Stieltjes / inverse Stieltjes
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (const auto& s : axis) {
        if (!s.valid) continue;
        vmin = std::min(vmin, s.v);
        vmax = std::max(vmax, s.v);
    }

    const double sgn_tol = 1e-10;
    auto signed_verdict = [&](double worst, bool want_nonneg) {
        const double signed_worst = want_nonneg ? worst : -worst;
        if (signed_worst >= -sgn_tol) return verdict3::yes;
        if (signed_worst < -pol.margin_factor * sgn_tol) return verdict3::no;
        return verdict3::inconclusive;
    };

    const bool axis_clean = (poles == 0) && monotone_ok && n_valid == n;
    if (rep.is_nevanlinna == verdict3::yes && axis_clean) {
        rep.is_stieltjes = signed_verdict(vmin, true);
        rep.is_inverse_stieltjes = signed_verdict(vmax, false);
    } else if (rep.is_nevanlinna == verdict3::no || poles > 0 || !monotone_ok) {
        rep.is_stieltjes = verdict3::no;
        rep.is_inverse_stieltjes = verdict3::no;
    }

    // --- limits m(-infinity) and m(0-) by monotone extrapolation ---
    // Values are stored with x increasing from -1e8 to -1e-8; m is
    // nondecreasing on pole-free stretches.  A limit is declared infinite
    // when log|m| grows along the last three decades toward the endpoint,
    // finite when the endpoint values have settled.
    auto endpoint_limit = [&](bool toward_minus_inf) -> ExtendedReal {
        std::vector<const detail::AxisSample*> span;
        const size_t want = static_cast<size_t>(3 * grid.per_decade);
        if (toward_minus_inf) {
            for (size_t k = 0; k < n && span.size() < want; ++k)
                if (axis[k].valid) span.push_back(&axis[k]);
        } else {
            for (size_t k = n; k-- > 0 && span.size() < want;)
                if (axis[k].valid) span.push_back(&axis[k]);
        }
        if (span.size() < 8) return ExtendedReal::unknown();
        // span[0] is the node closest to the endpoint
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        size_t m_fit = 0;
        for (const auto* s : span) {
            if (std::abs(s->v) < 1e-300) continue;
            const double lx = std::log(std::abs(s->x));
            const double lv = std::log(std::abs(s->v));
            sx += lx;
            sy += lv;
            sxx += lx * lx;
            sxy += lx * lv;
            ++m_fit;
        }
        const double v_end = span.front()->v;
        const double v_far = span.back()->v;
        if (m_fit >= 8) {
            // slope of log|v| against log|x|
            const double slope = (m_fit * sxy - sx * sy) / (m_fit * sxx - sx * sx);
            const bool grows = toward_minus_inf ? slope > 0.02 : slope < -0.02;
            if (grows && std::abs(v_end) > std::abs(v_far)) {
                if (toward_minus_inf && v_end < 0.0) return ExtendedReal::minus_inf();
                if (!toward_minus_inf && v_end > 0.0) return ExtendedReal::plus_inf();
                return ExtendedReal::unknown(); // growth with the wrong sign
            }
        }
        // geometric extrapolation over the last three decade values; exact
        // for constant-plus-power endpoint behavior
        if (span.size() >= static_cast<size_t>(2 * grid.per_decade) + 1) {
            const double v0 = v_end;
            const double v1 = span[grid.per_decade]->v;
            const double v2 = span[2 * grid.per_decade]->v;
            const double d1 = v0 - v1, d2 = v1 - v2;
            const double scale = 1.0 + std::abs(v0);
            if (std::abs(d1) <= 1e-6 * scale) return ExtendedReal::finite(v0);
            if (std::abs(d1) < 0.9 * std::abs(d2)) {
                const double q = d1 / d2;
                return ExtendedReal::finite(v0 + d1 * q / (1.0 - q));
            }
            return ExtendedReal::unknown();
        }
        if (std::abs(v_end - v_far) <= 0.05 * (1.0 + std::abs(v_end)))
            return ExtendedReal::finite(v_end);
        return ExtendedReal::unknown();
    };
    rep.m_minus_inf = endpoint_limit(true);
    rep.m_zero_minus = endpoint_limit(false);

    // cross-check against the imaginary-axis limits: m(-inf) finite iff
    // m(iy) -> the same real number as y -> +inf, and similarly at 0.
    {
        const cplx far = f.evaluate(cplx(0.0, grid.x_abs_hi));
        if (rep.m_minus_inf.is_finite() &&
            std::abs(far - rep.m_minus_inf.value) > 0.05 * (1.0 + std::abs(far)))
            rep.m_minus_inf = ExtendedReal::unknown();
        const cplx near0 = f.evaluate(cplx(0.0, grid.x_abs_lo));
        if (rep.m_zero_minus.is_finite() &&
            std::abs(near0 - rep.m_zero_minus.value) > 0.05 * (1.0 + std::abs(near0)))
            rep.m_zero_minus = ExtendedReal::unknown();
    }

    // --- membership in the Moebius-reducible class ---
    // a couple of failed nodes (pole hits) do not spoil the sweep
    const bool axis_usable = n_valid + 2 >= n;
    if (rep.is_nevanlinna != verdict3::yes || !axis_usable || !monotone_ok || poles > 1) {
        rep.in_SM = (rep.is_nevanlinna == verdict3::no || !monotone_ok || poles > 1)
                        ? verdict3::no
                        : verdict3::inconclusive;
    } else if (poles == 1) {
        rep.in_SM = (rep.m_minus_inf.is_finite() && rep.m_zero_minus.is_finite())
                        ? verdict3::yes
                        : verdict3::inconclusive;
    } else {
        if (rep.m_minus_inf.is_finite() || rep.m_zero_minus.is_finite())
            rep.in_SM = verdict3::yes;
        else if (rep.m_minus_inf.kind == ExtendedReal::Kind::minus_infinite &&
                 rep.m_zero_minus.kind == ExtendedReal::Kind::plus_infinite)
            rep.in_SM = verdict3::no; // image fills the whole line
        else
            rep.in_SM = verdict3::inconclusive;
    }
    if (rep.is_stieltjes == verdict3::yes) rep.in_SM = verdict3::yes;
    return rep;
}

// ---------------------------------------------------------------------------
// Friedrichs / Krein recognition from the endpoint limits
// ---------------------------------------------------------------------------

enum class ExtensionType { friedrichs, krein, neither, both_indeterminate };

inline const char* to_string(ExtensionType t) {
    switch (t) {
        case ExtensionType::friedrichs: return "FRIEDRICHS";
        case ExtensionType::krein: return "KREIN";
        case ExtensionType::neither: return "NEITHER";
        default: return "BOTH-INDETERMINATE";
    }
}

inline ExtensionType extension_type(const NevanlinnaExpr& f, const ClassifyGrid& grid = {}) {
    const ClassReport rep = classify(f, grid);
    if (rep.pole_on_negative_axis)
        throw pole_on_axis_error("extension_type: pole on the negative axis");
    const bool fr = rep.m_minus_inf.kind == ExtendedReal::Kind::minus_infinite;
    const bool kr = rep.m_zero_minus.kind == ExtendedReal::Kind::plus_infinite;
    if (fr && kr) return ExtensionType::both_indeterminate;
    if (fr) return ExtensionType::friedrichs;
    if (kr) return ExtensionType::krein;
    return ExtensionType::neither;
}

// ---------------------------------------------------------------------------
// Stieltjes inversion: recover the measure from boundary values
// ---------------------------------------------------------------------------

struct InversionOptions {
    std::vector<double> epsilons = {1e-2, 2.5e-3, 6.25e-4, 1.5625e-4};
    double rel_tol = 2e-2;       // convergence demand on the extrapolated density
    double atom_threshold = 1e-4; // eps*Im m limit below this (x scale) is no atom
};

/// Density estimate sigma'(t) = lim Im f(t + i eps)/pi, extrapolated to the
/// boundary along the epsilon ladder, plus atom detection where eps*Im f
/// converges to a positive limit.  Returns a measure with per-interval
/// power-law segments.
inline SpectralMeasure stieltjes_invert(const NevanlinnaExpr& f, const std::vector<double>& t_grid,
                                        const InversionOptions& opt = {}) {
    if (t_grid.size() < 2) throw precondition_error("stieltjes_invert: need >= 2 grid points");
    const size_t ne = opt.epsilons.size();
    if (ne < 3) throw precondition_error("stieltjes_invert: need >= 3 epsilons");

    std::vector<double> density(t_grid.size(), 0.0);
    SpectralMeasure out;

    for (size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (t <= 0.0) throw precondition_error("stieltjes_invert: t_grid must be positive");
        std::vector<double> im(ne), atom_probe(ne);
        for (size_t j = 0; j < ne; ++j) {
            const cplx v = f.evaluate(cplx(t, opt.epsilons[j]));
            im[j] = v.imag();
            atom_probe[j] = opt.epsilons[j] * v.imag();
        }
        // atom: eps * Im m converges to a positive limit
        const double ap = atom_probe[ne - 1];
        if (ap > opt.atom_threshold * (1.0 + t) &&
            std::abs(atom_probe[ne - 2] - ap) <= 0.1 * std::abs(ap)) {
            out.atoms.push_back({t, ap});
            continue;
        }
        // Neville extrapolation of Im m(t + i eps) to eps = 0: the boundary
        // expansion carries every power of eps, not just the even ones
        std::vector<double> T = im;
        double prev_diag = T[0];
        for (size_t lev = 1; lev < ne; ++lev) {
            for (size_t j = ne - 1; j >= lev; --j) {
                const double e_hi = opt.epsilons[j - lev];
                const double e_lo = opt.epsilons[j];
                T[j] = (e_hi * T[j] - e_lo * T[j - 1]) / (e_hi - e_lo);
                if (j == lev) break;
            }
            if (lev == ne - 2) prev_diag = T[ne - 1];
        }
        const double est = T[ne - 1] / pi;
        const double prev = prev_diag / pi;
        // the boundary value at the smallest epsilon bounds the density scale
        // that is resolvable at this point
        const double floor = 0.01 * std::abs(im[ne - 1]) / pi + 1e-300;
        if (std::abs(est - prev) > opt.rel_tol * (std::abs(est) + floor))
            throw non_convergent_error("stieltjes_invert: extrapolation not settling at t = " +
                                       std::to_string(t));
        density[i] = std::max(0.0, est);
    }

    // piecewise power-law segments between adjacent grid nodes
    const double tiny = 1e-14;
    for (size_t i = 0; i + 1 < t_grid.size(); ++i) {
        const double t1 = t_grid[i], t2 = t_grid[i + 1];
        const double d1 = density[i], d2 = density[i + 1];
        if (d1 <= tiny || d2 <= tiny) continue;
        const double g = std::log(d2 / d1) / std::log(t2 / t1);
        const double c = d1 / std::pow(t1, g);
        out.segments.push_back({t1, t2, c, g});
    }
    // extend to 0 with the leading power law when integrable
    if (!out.segments.empty() && out.segments.front().lo == t_grid.front()) {
        auto& s0 = out.segments.front();
        if (s0.exponent > -1.0 && density.front() > tiny) s0.lo = 0.0;
    }
    // power tail beyond the grid from the last segment, when representable
    if (!out.segments.empty()) {
        const auto& sl = out.segments.back();
        if (-sl.exponent > -1.0) out.tail = PowerTail{sl.coeff, -sl.exponent};
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Densely-defined criterion:  Im m(iy)/y -> 0  and  y Im m(iy) -> +inf
// ---------------------------------------------------------------------------

struct DenselyDefinedReport {
    verdict3 verdict = verdict3::inconclusive;
    double ratio_end = 0.0;   // Im m(iy)/y at the top of the window
    double ratio_slope = 0.0; // log-log slope of Im m(iy)/y
    double prod_end = 0.0;    // y Im m(iy) at the top of the window
    double prod_slope = 0.0;
};

inline DenselyDefinedReport densely_defined_check(const NevanlinnaExpr& f, double y_lo = 1e2,
                                                  double y_hi = 1e8, int nodes = 64) {
    DenselyDefinedReport rep;
    std::vector<double> ly, lr, lp;
    bool zero_im = false;
    for (int k = 0; k < nodes; ++k) {
        const double y = y_lo * std::pow(y_hi / y_lo, static_cast<double>(k) / (nodes - 1));
        const double im = f.evaluate(cplx(0.0, y)).imag();
        if (im <= 0.0) {
            zero_im = true;
            break;
        }
        ly.push_back(std::log(y));
        lr.push_back(std::log(im / y));
        lp.push_back(std::log(im * y));
    }
    if (zero_im) {
        rep.verdict = verdict3::no; // no mass at all: the multiplication operator degenerates
        return rep;
    }
    auto slope = [&](const std::vector<double>& v) {
        // least squares over the top half of the window
        const size_t a = v.size() / 2;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const size_t m = v.size() - a;
        for (size_t k = a; k < v.size(); ++k) {
            sx += ly[k];
            sy += v[k];
            sxx += ly[k] * ly[k];
            sxy += ly[k] * v[k];
        }
        return (m * sxy - sx * sy) / (m * sxx - sx * sx);
    };
    rep.ratio_end = std::exp(lr.back());
    rep.prod_end = std::exp(lp.back());
    rep.ratio_slope = slope(lr);
    rep.prod_slope = slope(lp);

    const bool ratio_to_zero = rep.ratio_slope < -0.01 || rep.ratio_end < 1e-12;
    const bool ratio_stuck = rep.ratio_slope > -0.005 && rep.ratio_end > 1e-8;
    const bool prod_to_inf = rep.prod_slope > 0.01 && rep.prod_end > 1e2;
    const bool prod_stuck = rep.prod_slope < 0.005 && rep.prod_end < 1e8;

    if (ratio_to_zero && prod_to_inf)
        rep.verdict = verdict3::yes;
    else if (ratio_stuck || prod_stuck)
        rep.verdict = verdict3::no;
    else
        rep.verdict = verdict3::inconclusive;
    return rep;
}

} // namespace kreinspec
