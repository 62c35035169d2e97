#pragma once

#include "common.hpp"
#include "asymptotics.hpp"
#include "catalog.hpp"
#include "classify.hpp"
#include "coupling.hpp"
#include "nevanlinna.hpp"
#include "properties.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace kreinspec {

// JSON mirrors of the domain types.  Reports use ordered_json so identical
// inputs serialize byte-identically.

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// SpectralMeasure
// ---------------------------------------------------------------------------

inline json to_json(const SpectralMeasure& s) {
    json j;
    j["atoms"] = json::array();
    for (const auto& a : s.atoms) j["atoms"].push_back({{"t", a.t}, {"w", a.w}});
    j["segments"] = json::array();
    for (const auto& seg : s.segments)
        j["segments"].push_back(
            {{"lo", seg.lo}, {"hi", seg.hi}, {"coeff", seg.coeff}, {"exponent", seg.exponent}});
    if (s.tail)
        j["tail"] = {{"coeff", s.tail->coeff}, {"exponent", s.tail->exponent}};
    else
        j["tail"] = nullptr;
    return j;
}

inline SpectralMeasure measure_from_json(const json& j) {
    SpectralMeasure s;
    for (const auto& a : j.at("atoms")) s.atoms.push_back({a.at("t"), a.at("w")});
    for (const auto& seg : j.at("segments"))
        s.segments.push_back({seg.at("lo"), seg.at("hi"), seg.at("coeff"), seg.at("exponent")});
    if (j.contains("tail") && !j.at("tail").is_null())
        s.tail = PowerTail{j.at("tail").at("coeff"), j.at("tail").at("exponent")};
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// HalfLineProblem
// ---------------------------------------------------------------------------

inline json to_json(const HalfLineProblem& p) {
    json j;
    j["side"] = p.side == HalfLineSide::plus ? "plus" : "minus";
    j["triple"] = p.triple == TripleStyle::neumann ? "neumann" : "dirichlet";
    json c;
    switch (p.coeff.kind) {
        case Coefficients::Kind::constant:
            c = {{"kind", "constant"}, {"p", p.coeff.p0}, {"q", p.coeff.q0}, {"w", p.coeff.w0}};
            break;
        case Coefficients::Kind::power_law:
            c = {{"kind", "power-law"}, {"alpha", p.coeff.alpha}, {"beta", p.coeff.beta}};
            break;
        case Coefficients::Kind::tabulated: {
            c["kind"] = "tabulated";
            c["rows"] = json::array();
            for (const auto& r : p.coeff.table) c["rows"].push_back({r[0], r[1], r[2], r[3]});
            break;
        }
    }
    j["coefficients"] = c;
    j["truncation"] = {{"initial_T", p.trunc.initial_T},
                       {"T_max", p.trunc.T_max},
                       {"rtol", p.trunc.rtol}};
    return j;
}

inline HalfLineProblem problem_from_json(const json& j) {
    HalfLineProblem p;
    p.side = j.value("side", "plus") == std::string("minus") ? HalfLineSide::minus
                                                             : HalfLineSide::plus;
    p.triple = j.value("triple", "neumann") == std::string("dirichlet") ? TripleStyle::dirichlet
                                                                        : TripleStyle::neumann;
    const json& c = j.at("coefficients");
    const std::string kind = c.at("kind");
    if (kind == "constant") {
        p.coeff = Coefficients::constant(c.value("p", 1.0), c.value("q", 0.0), c.value("w", 1.0));
    } else if (kind == "power-law") {
        p.coeff = Coefficients::power_law(c.at("alpha"), c.at("beta"));
    } else if (kind == "tabulated") {
        std::vector<std::array<double, 4>> rows;
        if (c.contains("csv")) {
            std::ifstream in(c.at("csv").get<std::string>());
            if (!in) throw precondition_error("tabulated coefficients: cannot open csv");
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                std::array<double, 4> r{};
                if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r[0], &r[1], &r[2], &r[3]) == 4)
                    rows.push_back(r);
            }
        } else {
            for (const auto& r : c.at("rows"))
                rows.push_back({r.at(0).get<double>(), r.at(1).get<double>(),
                                r.at(2).get<double>(), r.at(3).get<double>()});
        }
        p.coeff = Coefficients::tabulated(std::move(rows));
    } else {
        throw precondition_error("unknown coefficient kind: " + kind);
    }
    if (j.contains("truncation")) {
        const json& t = j.at("truncation");
        p.trunc.initial_T = t.value("initial_T", p.trunc.initial_T);
        p.trunc.T_max = t.value("T_max", p.trunc.T_max);
        p.trunc.rtol = t.value("rtol", p.trunc.rtol);
    }
    return p;
}

// ---------------------------------------------------------------------------
// NevanlinnaExpr (tagged union mirror of the node variant)
// ---------------------------------------------------------------------------

inline json to_json(const MobiusMap& m) { return json::array({m.a, m.b, m.c, m.d}); }

inline MobiusMap mobius_from_json(const json& j) {
    return MobiusMap::normalize(j.at(0), j.at(1), j.at(2), j.at(3));
}

inline json to_json(const NevanlinnaExpr& e);

namespace detail {

struct ExprToJson {
    json operator()(const PowerLawNode& n) const {
        return {{"type", "power_law"}, {"c", n.C}, {"alpha", n.alpha}};
    }
    json operator()(const AffinePlusPowerNode& n) const {
        return {{"type", "affine_plus_power"}, {"c0", n.C0}, {"c1", n.C1}, {"alpha", n.alpha}};
    }
    json operator()(const FromMeasureNode& n) const {
        return {{"type", "from_measure"}, {"a", n.a}, {"b", n.b}, {"sigma", to_json(n.sigma)}};
    }
    json operator()(const StieltjesFormNode& n) const {
        return {{"type", "stieltjes_form"}, {"gamma", n.gamma}, {"sigma", to_json(n.sigma)}};
    }
    json operator()(const MobiusOfNode& n) const {
        return {{"type", "mobius_of"},
                {"mu1", to_json(n.mu1)},
                {"mu2", to_json(n.mu2)},
                {"inner", kreinspec::to_json(*n.inner)}};
    }
    json operator()(const SumNode& n) const {
        return {{"type", "sum"},
                {"left", kreinspec::to_json(*n.left)},
                {"right", kreinspec::to_json(*n.right)}};
    }
    json operator()(const TransposeNode& n) const {
        return {{"type", "transpose"}, {"inner", kreinspec::to_json(*n.inner)}};
    }
    json operator()(const FlipNode& n) const {
        return {{"type", "flip"}, {"inner", kreinspec::to_json(*n.inner)}};
    }
    json operator()(const SLWeylNode& n) const {
        return {{"type", "sl_weyl"}, {"problem", kreinspec::to_json(n.problem)}};
    }
};

} // namespace detail

inline json to_json(const NevanlinnaExpr& e) {
    return std::visit(detail::ExprToJson{}, e.node());
}

inline NevanlinnaExpr expr_from_json(const json& j) {
    const std::string type = j.at("type");
    if (type == "power_law") return NevanlinnaExpr::power_law(j.at("c"), j.at("alpha"));
    if (type == "affine_plus_power")
        return NevanlinnaExpr::affine_plus_power(j.at("c0"), j.at("c1"), j.at("alpha"));
    if (type == "from_measure")
        return NevanlinnaExpr::from_measure(j.at("a"), j.at("b"),
                                            measure_from_json(j.at("sigma")));
    if (type == "stieltjes_form")
        return NevanlinnaExpr::stieltjes_form(j.at("gamma"), measure_from_json(j.at("sigma")));
    if (type == "mobius_of")
        return NevanlinnaExpr::mobius_of(mobius_from_json(j.at("mu1")),
                                         mobius_from_json(j.at("mu2")),
                                         expr_from_json(j.at("inner")));
    if (type == "sum")
        return NevanlinnaExpr::sum(expr_from_json(j.at("left")), expr_from_json(j.at("right")));
    if (type == "transpose") return NevanlinnaExpr::transpose(expr_from_json(j.at("inner")));
    if (type == "flip") return NevanlinnaExpr::flip(expr_from_json(j.at("inner")));
    if (type == "sl_weyl") return NevanlinnaExpr::sl_weyl(problem_from_json(j.at("problem")));
    if (type == "catalog") return closed_form(j.at("id").get<std::string>()).closed_form;
    throw precondition_error("expr_from_json: unknown type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Certificates, fits, reports
// ---------------------------------------------------------------------------

inline json to_json(const PowerFit& f) {
    json j;
    j["regime"] = to_string(f.regime);
    j["alpha0"] = f.alpha0;
    j["c0"] = f.c0;
    if (f.alpha1) {
        j["alpha1"] = *f.alpha1;
        j["c1"] = *f.c1;
    }
    j["residual"] = f.residual;
    j["window"] = {f.r_min, f.r_max};
    return j;
}

inline json to_json(const PropertyCertificate& c, size_t idx) {
    json j;
    j["id"] = "cert[" + std::to_string(idx) + "]:" + std::string(to_string(c.property)) + "/" +
              to_string(c.method) + "/" + c.subject;
    j["property"] = to_string(c.property);
    j["verdict"] = to_string(c.verdict);
    j["method"] = to_string(c.method);
    j["subject"] = c.subject;
    if (!c.rule.empty()) j["rule"] = c.rule;
    j["sup_value"] = c.sup_value;
    j["tail_slope"] = c.tail_slope;
    j["slope_residual"] = c.slope_residual;
    j["grid"] = c.grid;
    j["constants"] = json::object();
    for (const auto& [k, v] : c.constants) j["constants"][k] = v;
    return j;
}

inline json to_json(const ClassReport& r) {
    auto ext = [](const ExtendedReal& e) -> json {
        switch (e.kind) {
            case ExtendedReal::Kind::finite: return e.value;
            case ExtendedReal::Kind::minus_infinite: return "-inf";
            case ExtendedReal::Kind::plus_infinite: return "+inf";
            default: return nullptr;
        }
    };
    json j;
    j["is_nevanlinna"] = to_string(r.is_nevanlinna);
    j["is_stieltjes"] = to_string(r.is_stieltjes);
    j["is_inverse_stieltjes"] = to_string(r.is_inverse_stieltjes);
    j["in_SM"] = to_string(r.in_SM);
    j["m_minus_inf"] = ext(r.m_minus_inf);
    j["m_zero_minus"] = ext(r.m_zero_minus);
    j["pole_on_negative_axis"] =
        r.pole_on_negative_axis ? json(*r.pole_on_negative_axis) : json(nullptr);
    j["gram_min_eig"] = r.gram_min_eig;
    j["gram_trace"] = r.gram_trace;
    return j;
}

inline json to_json(const NonnegativityReport& r) {
    json j;
    j["verdict"] = to_string(r.verdict);
    j["route"] = r.route;
    j["zero_location"] = r.zero_location ? json(*r.zero_location) : json(nullptr);
    j["endpoint_value"] = r.endpoint_value ? json(*r.endpoint_value) : json(nullptr);
    return j;
}

inline json to_json(const RegularityVerdict& v) {
    json j;
    j["infinity_regular"] = to_string(v.infinity_regular);
    j["zero_regular"] = to_string(v.zero_regular);
    j["fundamentally_reducible"] = to_string(v.fundamentally_reducible);
    j["necessity_fired_at_inf"] = v.necessity_fired_at_inf;
    j["necessity_fired_at_zero"] = v.necessity_fired_at_zero;
    j["justification"] = json::array();
    for (const auto& s : v.justification) {
        json step;
        step["conclusion"] = s.conclusion;
        step["rule"] = s.rule;
        step["certificates"] = s.certificates;
        j["justification"].push_back(step);
    }
    return j;
}

// ---------------------------------------------------------------------------
// Scenario configuration
// ---------------------------------------------------------------------------

struct ScenarioConfig {
    CouplingModel model;
    CertOptions cert;
    FitOptions fit;
    std::string report_path;
    std::vector<json> grid_dumps; // forwarded grid requests
};

inline ScenarioConfig config_from_json(const json& j) {
    const json& m = j.at("model");
    NevanlinnaExpr mp = expr_from_json(m.at("m_plus"));
    NevanlinnaExpr mm = expr_from_json(m.at("m_minus"));
    ScenarioConfig cfg{CouplingModel{std::move(mp), std::move(mm), KernelCondition::unknown,
                                     std::nullopt, "", ""},
                       {}, {}, "", {}};
    const std::string k = m.value("kernel_condition", "unknown");
    cfg.model.kernel = k == "true"    ? KernelCondition::holds
                       : k == "false" ? KernelCondition::fails
                                      : KernelCondition::unknown;
    if (m.contains("sl_problem_plus"))
        cfg.model.sl_problem_plus = problem_from_json(m.at("sl_problem_plus"));
    cfg.model.label = m.value("label", "");
    cfg.model.note = m.value("note", "");
    if (j.contains("certification")) {
        const json& c = j.at("certification");
        cfg.cert.per_decade = c.value("per_decade", cfg.cert.per_decade);
        cfg.cert.y_lo = c.value("y_lo", cfg.cert.y_lo);
        cfg.cert.y_hi = c.value("y_hi", cfg.cert.y_hi);
        cfg.cert.slope_tol = c.value("slope_tol", cfg.cert.slope_tol);
        cfg.cert.discretize_nodes = c.value("discretize_nodes", cfg.cert.discretize_nodes);
        if (cfg.cert.per_decade <= 0 || cfg.cert.slope_tol <= 0.0 || cfg.cert.y_lo <= 0.0 ||
            cfg.cert.y_hi <= cfg.cert.y_lo || cfg.cert.discretize_nodes < 8)
            throw precondition_error("config: certification tolerances must be positive");
    }
    if (j.contains("outputs")) {
        cfg.report_path = j.at("outputs").value("report", "");
        if (j.at("outputs").contains("grids"))
            for (const auto& g : j.at("outputs").at("grids")) cfg.grid_dumps.push_back(g);
    }
    return cfg;
}

} // namespace kreinspec
