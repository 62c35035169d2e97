#pragma once

#include "common.hpp"

#include <functional>
#include <vector>
#include <algorithm>

namespace kreinspec {

// Adaptive Gauss-Kronrod (G7, K15) for complex-valued integrands on a finite
// interval.  Bisects until the Kronrod-Gauss discrepancy meets the tolerance.

namespace detail {

// K15 nodes on [0,1] of |x|; weights from the standard table.
inline constexpr double gk_nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double gk_wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct GKResult {
    cplx integral{0.0, 0.0};
    double err = 0.0;
};

template <class F>
GKResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx kron{0, 0}, gauss{0, 0};
    for (int j = 0; j < 8; ++j) {
        const double x = gk_nodes[j] * h;
        cplx fv;
        if (j == 7) {
            fv = f(c);
        } else {
            fv = f(c - x) + f(c + x);
        }
        kron += gk_wk[j] * fv;
        if (j % 2 == 1) gauss += gk_wg[j / 2] * fv;
    }
    GKResult r;
    r.integral = kron * h;
    double raw = std::abs(kron - gauss) * std::abs(h);
    // QUADPACK-style sharpening of the raw Gauss-Kronrod discrepancy
    double scale = std::abs(r.integral);
    r.err = (scale > 0.0 && raw > 0.0)
                ? std::min(raw, scale * std::pow(std::min(1.0, 200.0 * raw / scale), 1.5))
                : raw;
    return r;
}

} // namespace detail

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

/// Adaptive integral of f over [a, b].  Throws quadrature_error when the
/// interval budget is exhausted before the tolerance is met.
template <class F>
cplx integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
    if (a == b) return {0.0, 0.0};
    struct Piece {
        double a, b;
        detail::GKResult r;
    };
    std::vector<Piece> heap;
    heap.push_back({a, b, detail::gk15(f, a, b)});
    cplx total = heap[0].r.integral;
    double toterr = heap[0].r.err;
    auto tol = [&](void) {
        return std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    };
    int n = 1;
    while (toterr > tol() && n < opt.max_intervals) {
        // split the piece with the largest error
        auto it = std::max_element(heap.begin(), heap.end(),
                                   [](const Piece& x, const Piece& y) { return x.r.err < y.r.err; });
        Piece p = *it;
        heap.erase(it);
        const double m = 0.5 * (p.a + p.b);
        Piece l{p.a, m, detail::gk15(f, p.a, m)};
        Piece r{m, p.b, detail::gk15(f, m, p.b)};
        total += l.r.integral + r.r.integral - p.r.integral;
        toterr += l.r.err + r.r.err - p.r.err;
        heap.push_back(l);
        heap.push_back(r);
        ++n;
        if ((n & 63) == 0) {
            // refresh accumulated sums to suppress cancellation drift
            total = {0, 0};
            toterr = 0;
            for (const auto& q : heap) {
                total += q.r.integral;
                toterr += q.r.err;
            }
        }
    }
    if (toterr > 10.0 * std::max(tol(), 1e-300))
        throw quadrature_error("integrate: tolerance not reached on [" + std::to_string(a) +
                               ", " + std::to_string(b) + "]");
    return total;
}

inline double integrate_real(const std::function<double(double)>& f, double a, double b,
                             const QuadOptions& opt = {}) {
    return integrate([&](double t) { return cplx(f(t), 0.0); }, a, b, opt).real();
}

} // namespace kreinspec
