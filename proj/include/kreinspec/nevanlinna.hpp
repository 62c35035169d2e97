#pragma once

#include "common.hpp"
#include "measure.hpp"
#include "mobius.hpp"
#include "sl_weyl.hpp"

#include <memory>
#include <variant>

namespace kreinspec {

// Closed expression trees over Nevanlinna-function atoms and combinators.
// Expressions are immutable after construction; evaluation is pure, so trees
// can be shared freely across threads and grid sweeps.

class NevanlinnaExpr;

namespace detail {

struct PowerLawNode {
    double C;
    double alpha; // z -> C * (-z)^alpha
};

struct AffinePlusPowerNode {
    double C0;
    double C1;
    double alpha; // z -> C0 + C1 * (-z)^alpha
};

struct FromMeasureNode {
    double a;
    double b; // >= 0
    SpectralMeasure sigma;
};

struct StieltjesFormNode {
    double gamma; // >= 0
    SpectralMeasure sigma;
};

struct MobiusOfNode {
    MobiusMap mu1;
    MobiusMap mu2;
    std::shared_ptr<const NevanlinnaExpr> inner; // eps1*eps2 * mu2(m(mu1(z)))
};

struct SumNode {
    std::shared_ptr<const NevanlinnaExpr> left;
    std::shared_ptr<const NevanlinnaExpr> right;
};

struct TransposeNode {
    std::shared_ptr<const NevanlinnaExpr> inner; // -1/m
};

struct FlipNode {
    std::shared_ptr<const NevanlinnaExpr> inner; // z -> m(-z), no branch games
};

struct SLWeylNode {
    HalfLineProblem problem;
};

using ExprVariant = std::variant<PowerLawNode, AffinePlusPowerNode, FromMeasureNode,
                                 StieltjesFormNode, MobiusOfNode, SumNode, TransposeNode,
                                 FlipNode, SLWeylNode>;

} // namespace detail

class NevanlinnaExpr {
public:
    using Variant = detail::ExprVariant;

    static NevanlinnaExpr power_law(double C, double alpha) {
        return NevanlinnaExpr(detail::PowerLawNode{C, alpha});
    }
    static NevanlinnaExpr affine_plus_power(double C0, double C1, double alpha) {
        return NevanlinnaExpr(detail::AffinePlusPowerNode{C0, C1, alpha});
    }
    static NevanlinnaExpr constant(double C0) {
        return NevanlinnaExpr(detail::AffinePlusPowerNode{C0, 0.0, 0.5});
    }
    static NevanlinnaExpr linear() {
        // z itself: a = 0, b = 1, empty measure
        return NevanlinnaExpr(detail::FromMeasureNode{0.0, 1.0, SpectralMeasure{}});
    }
    static NevanlinnaExpr from_measure(double a, double b, SpectralMeasure sigma) {
        if (b < 0.0) throw precondition_error("from_measure: b must be >= 0");
        sigma.validate();
        return NevanlinnaExpr(detail::FromMeasureNode{a, b, std::move(sigma)});
    }
    static NevanlinnaExpr stieltjes_form(double gamma, SpectralMeasure sigma) {
        if (gamma < 0.0) throw precondition_error("stieltjes_form: gamma must be >= 0");
        sigma.validate_stieltjes_growth();
        return NevanlinnaExpr(detail::StieltjesFormNode{gamma, std::move(sigma)});
    }
    static NevanlinnaExpr sum(NevanlinnaExpr l, NevanlinnaExpr r) {
        return NevanlinnaExpr(detail::SumNode{l.share(), r.share()});
    }
    static NevanlinnaExpr transpose(NevanlinnaExpr inner) {
        return NevanlinnaExpr(detail::TransposeNode{inner.share()});
    }
    static NevanlinnaExpr flip(NevanlinnaExpr inner) {
        return NevanlinnaExpr(detail::FlipNode{inner.share()});
    }
    static NevanlinnaExpr sl_weyl(HalfLineProblem prob) {
        return NevanlinnaExpr(detail::SLWeylNode{std::move(prob)});
    }
    static NevanlinnaExpr mobius_of(MobiusMap mu1, MobiusMap mu2, NevanlinnaExpr inner) {
        return NevanlinnaExpr(detail::MobiusOfNode{mu1, mu2, inner.share()});
    }

    cplx evaluate(cplx z) const {
        return std::visit([z, this](const auto& n) { return eval_node(n, z); }, *node_);
    }

    cplx operator()(cplx z) const { return evaluate(z); }

    const Variant& node() const { return *node_; }

    /// The measure behind the expression when it is directly available
    /// (StieltjesForm / FromMeasure at the root).
    const SpectralMeasure* direct_measure() const {
        if (const auto* s = std::get_if<detail::StieltjesFormNode>(node_.get()))
            return &s->sigma;
        if (const auto* f = std::get_if<detail::FromMeasureNode>(node_.get())) return &f->sigma;
        return nullptr;
    }

private:
    explicit NevanlinnaExpr(Variant v) : node_(std::make_shared<Variant>(std::move(v))) {}

    std::shared_ptr<const NevanlinnaExpr> share() const {
        return std::make_shared<NevanlinnaExpr>(*this);
    }

    static cplx eval_node(const detail::PowerLawNode& n, cplx z) {
        return n.C * neg_z_pow(z, n.alpha);
    }
    static cplx eval_node(const detail::AffinePlusPowerNode& n, cplx z) {
        if (n.C1 == 0.0) return {n.C0, 0.0};
        return n.C0 + n.C1 * neg_z_pow(z, n.alpha);
    }
    static cplx eval_node(const detail::FromMeasureNode& n, cplx z) {
        cplx v = n.a + n.b * z;
        if (!n.sigma.empty()) v += n.sigma.compensated_transform(z);
        return v;
    }
    static cplx eval_node(const detail::StieltjesFormNode& n, cplx z) {
        cplx v = {n.gamma, 0.0};
        if (!n.sigma.empty()) v += n.sigma.cauchy_transform(z);
        return v;
    }
    static cplx eval_node(const detail::MobiusOfNode& n, cplx z) {
        const cplx inner = n.inner->evaluate(n.mu1.apply(z));
        const double sgn = n.mu1.epsilon * n.mu2.epsilon;
        return sgn * n.mu2.apply(inner);
    }
    static cplx eval_node(const detail::SumNode& n, cplx z) {
        return n.left->evaluate(z) + n.right->evaluate(z);
    }
    static cplx eval_node(const detail::TransposeNode& n, cplx z) {
        const cplx v = n.inner->evaluate(z);
        if (v == cplx(0.0, 0.0)) throw pole_hit_error("transpose: m(z) = 0");
        return -1.0 / v;
    }
    static cplx eval_node(const detail::FlipNode& n, cplx z) { return n.inner->evaluate(-z); }
    static cplx eval_node(const detail::SLWeylNode& n, cplx z) {
        return weyl_function(n.problem, z);
    }

    std::shared_ptr<const Variant> node_;
};

inline NevanlinnaExpr operator+(const NevanlinnaExpr& l, const NevanlinnaExpr& r) {
    return NevanlinnaExpr::sum(l, r);
}

/// mu2-post / mu1-pre composition with the sign bookkeeping of the
/// boundary-triple change of coordinates.  Identity factors collapse; the
/// pure transpose pattern is recognized and stored as a Transpose node.
inline NevanlinnaExpr mobius_transform(const NevanlinnaExpr& f, const MobiusMap& mu1,
                                       const MobiusMap& mu2) {
    const double tol = 1e-14;
    if (mu1.is_identity(tol) && mu2.is_identity(tol)) return f;
    if (mu1.is_identity(tol) && same_map(mu2, MobiusMap::transpose_map(), tol))
        return NevanlinnaExpr::transpose(f);
    return NevanlinnaExpr::mobius_of(mu1, mu2, f);
}

} // namespace kreinspec
