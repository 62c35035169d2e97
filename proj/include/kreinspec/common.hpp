#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <cmath>
#include <limits>

namespace kreinspec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct zero_determinant_error : error { using error::error; };
struct pole_hit_error : error { using error::error; };
struct branch_cut_error : error { using error::error; };
struct growth_condition_error : error { using error::error; };
struct quadrature_error : error { using error::error; };
struct insufficient_grid_error : error { using error::error; };
struct pole_on_axis_error : error { using error::error; };
struct non_convergent_error : error { using error::error; };
struct fit_failed_error : error { using error::error; };
struct mismatched_pair_error : error { using error::error; };
struct degenerate_denominator_error : error { using error::error; };
struct measure_unavailable_error : error { using error::error; };
struct precondition_error : error { using error::error; };
struct denominator_zero_error : error { using error::error; };
struct rank_deficient_error : error { using error::error; };
struct non_self_adjoint_error : error { using error::error; };
struct not_nonnegative_error : error { using error::error; };
struct missing_constant_error : error { using error::error; };
struct unknown_id_error : error { using error::error; };
struct degenerate_pair_error : error { using error::error; };

// ---------------------------------------------------------------------------
// Three-valued verdicts for sampled predicates
// ---------------------------------------------------------------------------

enum class verdict3 { yes, no, inconclusive };

inline const char* to_string(verdict3 v) {
    switch (v) {
        case verdict3::yes: return "YES";
        case verdict3::no: return "NO";
        default: return "INCONCLUSIVE";
    }
}

// ---------------------------------------------------------------------------
// Branch-correct powers.  (-z)^a is always taken on the principal branch,
// Arg in (-pi, pi); the cut of z -> (-z)^a is the ray z in [0, +inf).
// ---------------------------------------------------------------------------

/// Principal power w^a, Arg(w) in (-pi, pi).  Throws on the cut w <= 0.
inline cplx principal_pow(cplx w, double a) {
    if (w.imag() == 0.0 && w.real() <= 0.0)
        throw branch_cut_error("principal_pow: argument on the branch cut");
    double r = std::abs(w);
    double th = std::arg(w);
    double lr = a * std::log(r);
    return std::polar(std::exp(lr), a * th);
}

/// (-z)^a on the principal branch.  Defined for z off [0, +inf).
inline cplx neg_z_pow(cplx z, double a) {
    cplx w = -z;
    if (w.imag() == 0.0 && w.real() <= 0.0)
        throw branch_cut_error("neg_z_pow: z on [0, +inf)");
    // -0.0 imaginary parts would flip Arg from 0 to -0; normalize
    if (w.imag() == 0.0) w = cplx(w.real(), 0.0);
    return principal_pow(w, a);
}

/// sqrt(-z) with Re >= 0 on the principal branch (decaying exponent side).
inline cplx sqrt_neg_z(cplx z) { return neg_z_pow(z, 0.5); }

// ---------------------------------------------------------------------------
// Classification tolerances.  Pinned contracts, not calibration knobs;
// YES/NO verdicts demand a margin_factor cushion over the base tolerance.
// ---------------------------------------------------------------------------

struct NumericPolicy {
    double eval_sym_tol = 1e-10; // conjugate-symmetry / Im-positivity slack
    double psd_tol = 1e-9;       // Gram min eigenvalue >= -psd_tol * trace
    double margin_factor = 10.0;
};

inline const NumericPolicy& default_policy() {
    static const NumericPolicy p{};
    return p;
}

} // namespace kreinspec
