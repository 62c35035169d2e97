#pragma once

#include "common.hpp"
#include "nevanlinna.hpp"

#include <optional>
#include <string>

namespace kreinspec {

// Closed-form Titchmarsh-Weyl coefficients for the worked half-line models,
// each paired (when representable) with the ODE problem it solves.

struct SLCatalogEntry {
    std::string id;
    NevanlinnaExpr closed_form;
    std::optional<HalfLineProblem> problem; // absent when no second-order model backs it
    std::string note;
};

/// Power-law half-line model  -(t^beta f')' = z t^alpha f  with the
/// Neumann-type boundary functionals: m(z) = C (-z)^{-nu},
/// nu = (1-beta)/(alpha-beta+2), C = (2k)^{2 nu} Gamma(1+nu) /
/// ((1-beta) Gamma(1-nu)), k = (alpha-beta+2)/2.
struct PowerLawWeyl {
    double nu;
    double C;
};

inline PowerLawWeyl power_law_weyl_constants(double alpha, double beta) {
    if (!(alpha > -1.0) || !(beta < 1.0))
        throw precondition_error("power-law model requires alpha > -1 and beta < 1");
    PowerLawWeyl r;
    const double k = (alpha - beta + 2.0) / 2.0;
    r.nu = (1.0 - beta) / (alpha - beta + 2.0);
    r.C = std::pow(2.0 * k, 2.0 * r.nu) * std::tgamma(1.0 + r.nu) /
          ((1.0 - beta) * std::tgamma(1.0 - r.nu));
    return r;
}

namespace detail {

inline std::optional<std::pair<double, double>> parse_two_args(const std::string& id,
                                                               const std::string& prefix) {
    if (id.rfind(prefix + "(", 0) != 0 || id.back() != ')') return std::nullopt;
    const std::string body = id.substr(prefix.size() + 1, id.size() - prefix.size() - 2);
    const auto comma = body.find(',');
    if (comma == std::string::npos) return std::nullopt;
    try {
        return std::make_pair(std::stod(body.substr(0, comma)), std::stod(body.substr(comma + 1)));
    } catch (...) {
        return std::nullopt;
    }
}

} // namespace detail

inline SLCatalogEntry closed_form(const std::string& id) {
    if (id == "free-neumann") {
        HalfLineProblem prob;
        prob.coeff = Coefficients::constant(1.0, 0.0, 1.0);
        prob.triple = TripleStyle::neumann;
        return {id, NevanlinnaExpr::power_law(1.0, -0.5), prob, ""};
    }
    if (id == "free-dirichlet") {
        HalfLineProblem prob;
        prob.coeff = Coefficients::constant(1.0, 0.0, 1.0);
        prob.triple = TripleStyle::dirichlet;
        return {id, NevanlinnaExpr::power_law(-1.0, 0.5), prob, ""};
    }
    if (id == "kakost-singular") {
        // 1/sqrt(-z) - 1/z; the -1/z term is the point mass at the origin
        return {id,
                NevanlinnaExpr::power_law(1.0, -0.5) + NevanlinnaExpr::power_law(1.0, -1.0),
                std::nullopt,
                "half-line side of the model with a singular critical point at 0"};
    }
    if (id == "fourth-order-quarter") {
        return {id, NevanlinnaExpr::power_law(-std::sqrt(2.0), 0.25), std::nullopt,
                "fourth-order operator on the negative half-line; no second-order model"};
    }
    if (auto ab = detail::parse_two_args(id, "ex53-powerlaw")) {
        const auto [alpha, beta] = *ab;
        const auto pw = power_law_weyl_constants(alpha, beta);
        HalfLineProblem prob;
        prob.coeff = Coefficients::power_law(alpha, beta);
        prob.triple = TripleStyle::neumann;
        return {id, NevanlinnaExpr::power_law(pw.C, -pw.nu), prob, ""};
    }
    if (auto ab = detail::parse_two_args(id, "ex52-short-range")) {
        const auto [a, b] = *ab;
        if (a <= 0.0 || b <= 0.0)
            throw precondition_error("ex52-short-range requires a, b > 0");
        // a / (b + sqrt(-z)): Moebius image of -sqrt(-z); reproduces the
        // short-range asymptotics m(rz) - a/b ~ -(a/b^2) sqrt(-rz) at 0 and
        // m(rz) ~ a (-rz)^{-1/2} at infinity.  Asymptotic stand-in: the true
        // potential-dependent coefficient is not closed-form.
        const MobiusMap mu2 = MobiusMap::normalize(0.0, a, -1.0, b);
        return {id,
                NevanlinnaExpr::mobius_of(MobiusMap::identity(), mu2,
                                          NevanlinnaExpr::power_law(-1.0, 0.5)),
                std::nullopt,
                "asymptotic stand-in: matches the short-range boundary asymptotics only"};
    }
    throw unknown_id_error("closed_form: unknown catalog id '" + id + "'");
}

/// Exchange of the two boundary functionals: a Neumann-style coefficient and
/// its Dirichlet-style counterpart are related by m -> -1/m.
inline NevanlinnaExpr triple_convert(const NevanlinnaExpr& m, TripleStyle from, TripleStyle to) {
    if (from == to) return m;
    return mobius_transform(m, MobiusMap::identity(), MobiusMap::transpose_map());
}

inline std::vector<std::string> catalog_ids() {
    return {"free-neumann",       "free-dirichlet",
            "kakost-singular",    "fourth-order-quarter",
            "ex53-powerlaw(0,0)", "ex53-powerlaw(1,0)",
            "ex53-powerlaw(0,-1)", "ex53-powerlaw(2,0.5)",
            "ex52-short-range(1,1)"};
}

} // namespace kreinspec
