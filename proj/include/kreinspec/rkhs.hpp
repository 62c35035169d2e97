#pragma once

#include "common.hpp"
#include "nevanlinna.hpp"

#include <Eigen/Dense>

#include <vector>

namespace kreinspec {

// Reproducing-kernel machinery for K(z, w) = (m(z) - m(w)*)/(z - w*).
// The kernel sections span a dense set, so every identity is tested
// pointwise on sections; the abstract space is never materialized.

struct SamplePlan {
    std::vector<cplx> points;

    void validate() const {
        for (size_t i = 0; i < points.size(); ++i) {
            if (points[i].imag() == 0.0)
                throw degenerate_pair_error("SamplePlan: real sample point");
            for (size_t j = 0; j < i; ++j) {
                if (points[i] == points[j])
                    throw degenerate_pair_error("SamplePlan: duplicate points");
                if (points[i] == std::conj(points[j]))
                    throw degenerate_pair_error("SamplePlan: conjugate pair z = w*");
            }
        }
    }

    static SamplePlan upper_half_plane_default() {
        // log-spread moduli, three directions
        return SamplePlan{{cplx(0.0, 0.03), cplx(0.0, 1.0), cplx(0.0, 30.0), cplx(-1.0, 0.3),
                           cplx(1.5, 2.0), cplx(-4.0, 5.0), cplx(0.2, 0.01), cplx(8.0, 90.0)}};
    }
};

/// K_m(z, w); the diagonal z = w is the limit Im m(z) / Im z.
inline cplx kernel(const NevanlinnaExpr& f, cplx z, cplx w) {
    if (z.imag() == 0.0 || w.imag() == 0.0)
        throw degenerate_pair_error("kernel: real argument");
    if (z == w) return cplx(f.evaluate(z).imag() / z.imag(), 0.0);
    if (z == std::conj(w)) throw degenerate_pair_error("kernel: z = w* requested");
    return (f.evaluate(z) - std::conj(f.evaluate(w))) / (z - std::conj(w));
}

inline Eigen::MatrixXcd gram(const NevanlinnaExpr& f, const SamplePlan& plan) {
    plan.validate();
    const int n = static_cast<int>(plan.points.size());
    std::vector<cplx> vals(n);
    for (int i = 0; i < n; ++i) vals[i] = f.evaluate(plan.points[i]);
    Eigen::MatrixXcd G(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const cplx zi = plan.points[i], zj = plan.points[j];
            cplx k;
            if (i == j) {
                k = cplx(vals[i].imag() / zi.imag(), 0.0);
            } else {
                k = (vals[i] - std::conj(vals[j])) / (zi - std::conj(zj));
            }
            G(i, j) = k;
            G(j, i) = std::conj(k);
        }
    }
    return G;
}

struct GramSpectrum {
    double min_eigenvalue = 0.0;
    double trace = 0.0;
};

inline GramSpectrum gram_spectrum(const Eigen::MatrixXcd& G) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    GramSpectrum s;
    s.min_eigenvalue = es.eigenvalues().minCoeff();
    s.trace = G.real().trace();
    return s;
}

/// PSD check used by the classifier: min eigenvalue >= -tol * trace.
inline bool gram_psd(const NevanlinnaExpr& f, const SamplePlan& plan, double tol = 1e-9) {
    const auto s = gram_spectrum(gram(f, plan));
    return s.min_eigenvalue >= -tol * std::max(s.trace, 1e-300);
}

/// Residual of  m(z) - m(w)* = (z - w*) <psi(z), psi(w)>  in the measure
/// model, where psi(z) = (x -> 1/(x - z)) in the sigma-weighted space.
inline double q_identity_residual(const NevanlinnaExpr& f, const SpectralMeasure& sigma_model,
                                  cplx z, cplx w, double quad_rel_tol = 1e-10) {
    const cplx lhs = f.evaluate(z) - std::conj(f.evaluate(w));
    const cplx inner = sigma_model.pair_transform(z, std::conj(w), quad_rel_tol);
    const cplx rhs = (z - std::conj(w)) * inner;
    return std::abs(lhs - rhs);
}

// kernel() without the plan-level degeneracy checks; mapped points may
// coincide after mu1, where the diagonal limit is the right value.
inline cplx kernel_raw(const NevanlinnaExpr& f, cplx z, cplx w) {
    if (z == w) return cplx(f.evaluate(z).imag() / z.imag(), 0.0);
    return (f.evaluate(z) - std::conj(f.evaluate(w))) / (z - std::conj(w));
}

struct VTransformResiduals {
    double section_map = 0.0;   // defect of V K_m(., w) against the target section
    double gram_preserve = 0.0; // defect of <V K_v, V K_w> = <K_v, K_w>
};

/// Pointwise verification of the isomorphism between the kernel spaces of m
/// and of eps1 eps2 mu2(m(mu1(.))).  The first residual tests the section
/// mapping  (V K_m(., w))(z) = ((c2 m(w*)+d2)/(c1 w* - a1)) K_mhat(z, mu1^{-1}(w));
/// the second tests preservation of all pairwise kernel inner products.
inline VTransformResiduals v_transform_check(const NevanlinnaExpr& f, const MobiusMap& mu1,
                                             const MobiusMap& mu2, const SamplePlan& plan) {
    plan.validate();
    const NevanlinnaExpr fhat = mobius_transform(f, mu1, mu2);
    const MobiusMap mu1_inv = mu1.inverse();
    VTransformResiduals out;

    auto lambda = [&](cplx w) {
        // (c2 m(w*) + d2)/(c1 w* - a1)
        const cplx wbar = std::conj(w);
        const cplx num = mu2.c * f.evaluate(wbar) + mu2.d;
        const cplx den = mu1.c * wbar - mu1.a;
        if (den == cplx(0, 0)) throw pole_hit_error("v_transform_check: c1 w* = a1");
        return num / den;
    };

    for (cplx w : plan.points) {
        const cplx w_pre = mu1_inv.apply(w);
        const cplx lam = lambda(w);
        for (cplx z : plan.points) {
            const cplx z1 = mu1.apply(z);
            // (V K_m(., w))(z) = ((c1 mu1(z) - a1)/(c2 m(mu1(z)) + d2)) K_m(mu1(z), w)
            const cplx front = (mu1.c * z1 - mu1.a) / (mu2.c * f.evaluate(z1) + mu2.d);
            const cplx lhs = front * kernel_raw(f, z1, w);
            const cplx rhs = lam * kernel_raw(fhat, z, w_pre);
            const double scale = 1.0 + std::abs(rhs);
            out.section_map = std::max(out.section_map, std::abs(lhs - rhs) / scale);
        }
    }

    for (cplx v : plan.points) {
        for (cplx w : plan.points) {
            // <V K_v, V K_w>_mhat = lam(v) lam(w)* K_mhat(mu1^{-1}(w), mu1^{-1}(v))
            const cplx lhs = lambda(v) * std::conj(lambda(w)) *
                             kernel_raw(fhat, mu1_inv.apply(w), mu1_inv.apply(v));
            const cplx rhs = kernel_raw(f, w, v);
            const double scale = 1.0 + std::abs(rhs);
            out.gram_preserve = std::max(out.gram_preserve, std::abs(lhs - rhs) / scale);
        }
    }
    return out;
}

} // namespace kreinspec
