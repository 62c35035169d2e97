#pragma once

#include "common.hpp"
#include "quadrature.hpp"

#include <optional>
#include <vector>
#include <algorithm>

namespace kreinspec {

// A measure on [0, +inf): point masses, a piecewise power-law density, and an
// optional power-law tail beyond the last segment.  Normalization follows the
// usual Stieltjes convention: sigma(0) = 0 and midpoint values at jumps.

struct MassPoint {
    double t = 0.0; // location, >= 0
    double w = 0.0; // weight, > 0
};

struct DensitySegment {
    double lo = 0.0, hi = 0.0;
    double coeff = 0.0;    // density coeff * t^exponent on [lo, hi]
    double exponent = 0.0; // > -1 when lo == 0
};

struct PowerTail {
    double coeff = 0.0;
    double exponent = 0.0; // density ~ coeff * t^(-exponent), exponent > 0
};

class SpectralMeasure {
public:
    std::vector<MassPoint> atoms;
    std::vector<DensitySegment> segments; // sorted by lo, non-overlapping
    std::optional<PowerTail> tail;        // starts at tail_start()

    SpectralMeasure() = default;

    static SpectralMeasure point_mass(double t, double w) {
        SpectralMeasure s;
        s.atoms.push_back({t, w});
        s.validate();
        return s;
    }

    /// density c * t^g on [lo, hi] plus the matching tail beyond hi.
    static SpectralMeasure power_density(double c, double g, double lo, double hi,
                                         bool with_tail = true) {
        SpectralMeasure s;
        s.segments.push_back({lo, hi, c, g});
        if (with_tail) s.tail = PowerTail{c, -g};
        s.validate();
        return s;
    }

    double tail_start() const {
        return segments.empty() ? 0.0 : segments.back().hi;
    }

    bool empty() const { return atoms.empty() && segments.empty() && !tail; }

    /// Construction-time checks: positivity, integrability at 0, and the
    /// Nevanlinna-level growth bound  integral dsigma/(1+t^2) < infinity.
    void validate() const {
        for (const auto& a : atoms) {
            if (a.t < 0.0) throw growth_condition_error("atom location < 0");
            if (a.w <= 0.0) throw growth_condition_error("atom weight <= 0");
        }
        double prev_hi = 0.0;
        for (const auto& s : segments) {
            if (s.lo < 0.0 || s.hi <= s.lo)
                throw growth_condition_error("bad density segment bounds");
            if (s.lo < prev_hi) throw growth_condition_error("overlapping density segments");
            if (s.coeff < 0.0) throw growth_condition_error("negative density");
            if (s.lo == 0.0 && s.exponent <= -1.0)
                throw growth_condition_error("density not integrable at 0");
            prev_hi = s.hi;
        }
        if (tail) {
            if (tail->coeff < 0.0) throw growth_condition_error("negative tail density");
            if (tail->exponent <= -1.0)
                throw growth_condition_error("tail outgrows every Nevanlinna representation");
            if (segments.empty())
                throw growth_condition_error("tail requires a last segment endpoint");
        }
    }

    /// The stronger Stieltjes-representation bound integral dsigma/(1+t),
    /// required wherever the uncompensated transform is used.
    void validate_stieltjes_growth() const {
        validate();
        if (tail && tail->exponent <= 0.0)
            throw growth_condition_error("tail violates the Stieltjes growth condition");
    }

    /// Density value at x (atoms excluded); zero off the carried segments.
    double density_value(double x) const {
        for (const auto& s : segments)
            if (x >= s.lo && x <= s.hi) return s.coeff * std::pow(x, s.exponent);
        if (tail && x > tail_start()) return tail->coeff * std::pow(x, -tail->exponent);
        return 0.0;
    }

    /// Numerical check of integral dsigma/(1+t); throws if divergent.
    double growth_integral(double rel_tol = 1e-9) const {
        validate();
        return integrate_kernel([](double t) { return cplx(1.0 / (1.0 + t), 0.0); }, rel_tol)
            .real();
    }

    /// sigma(t): cumulative distribution with sigma(0) = 0 and midpoint
    /// convention at jumps.
    double distribution(double t) const {
        double v = 0.0;
        for (const auto& a : atoms) {
            if (a.t < t) v += a.w;
            else if (a.t == t) v += 0.5 * a.w;
        }
        for (const auto& s : segments) {
            if (t <= s.lo) continue;
            const double up = std::min(t, s.hi);
            v += primitive(s.coeff, s.exponent, s.lo, up);
        }
        if (tail && t > tail_start())
            v += primitive(tail->coeff, -tail->exponent, tail_start(), t);
        return v;
    }

    /// integral of f dsigma over [0, inf); f supplied as a complex-valued
    /// kernel of the real variable.  Atoms are summed exactly, power
    /// segments are flattened by the substitution ds = t^g dt, the tail by
    /// u = 1/t, so the adaptive rule only ever sees smooth integrands.
    template <class F>
    cplx integrate_kernel(F&& f, double rel_tol = 1e-9) const {
        cplx total{0.0, 0.0};
        for (const auto& a : atoms) total += a.w * f(a.t);
        QuadOptions opt;
        opt.rel_tol = rel_tol;
        for (const auto& s : segments) {
            if (s.coeff == 0.0) continue;
            if (s.exponent == 0.0) {
                total += s.coeff * integrate(f, s.lo, s.hi, opt);
            } else {
                const double g1 = s.exponent + 1.0;
                const double slo = std::pow(s.lo, g1) / g1;
                const double shi = std::pow(s.hi, g1) / g1;
                auto sub = [&](double s_) {
                    const double t = std::pow(g1 * s_, 1.0 / g1);
                    return f(t);
                };
                total += s.coeff * integrate(sub, slo, shi, opt);
            }
        }
        if (tail && tail->coeff != 0.0) {
            // int_T^inf c t^{-e} f(t) dt via u = 1/t and u = v^8; the high
            // substitution order keeps the endpoint integrable for every
            // admissible exponent and any kernel decaying at least like 1/t
            const double T = tail_start();
            const double e = tail->exponent;
            const double c = tail->coeff;
            const double v_hi = std::pow(1.0 / T, 1.0 / 8.0);
            auto sub = [&](double v) {
                const double u = std::pow(v, 8.0);
                return 8.0 * std::pow(v, 8.0 * e - 9.0) * f(1.0 / u);
            };
            total += c * integrate(sub, 0.0, v_hi, opt);
        }
        return total;
    }

    /// Stieltjes transform  integral dsigma(t) / (t - z).
    cplx cauchy_transform(cplx z, double rel_tol = 1e-9) const {
        check_off_support(z);
        return integrate_kernel([z](double t) { return 1.0 / (cplx(t, 0.0) - z); }, rel_tol);
    }

    /// integral (1/(t - z) - t/(1+t^2)) dsigma(t)  (the compensated kernel).
    cplx compensated_transform(cplx z, double rel_tol = 1e-9) const {
        check_off_support(z);
        return integrate_kernel(
            [z](double t) { return 1.0 / (cplx(t, 0.0) - z) - t / (1.0 + t * t); }, rel_tol);
    }

    /// integral dsigma(t) / ((t - z)(t - w)), the resolvent-pair kernel.
    cplx pair_transform(cplx z, cplx w, double rel_tol = 1e-9) const {
        check_off_support(z);
        check_off_support(w);
        return integrate_kernel(
            [z, w](double t) { return 1.0 / ((cplx(t, 0.0) - z) * (cplx(t, 0.0) - w)); },
            rel_tol);
    }

private:
    static double primitive(double c, double g, double a, double b) {
        if (g == -1.0) return c * std::log(b / a);
        return c * (std::pow(b, g + 1.0) - std::pow(a, g + 1.0)) / (g + 1.0);
    }

    void check_off_support(cplx z) const {
        if (z.imag() != 0.0) return;
        if (z.real() < 0.0) return; // support is [0, inf)
        throw pole_hit_error("measure transform evaluated on the support");
    }
};

} // namespace kreinspec
