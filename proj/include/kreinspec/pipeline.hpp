#pragma once

#include "common.hpp"
#include "catalog.hpp"
#include "coupling.hpp"
#include "serialize.hpp"

#include <fstream>
#include <functional>
#include <string>

namespace kreinspec {

inline constexpr int report_schema_version = 1;
inline constexpr const char* library_version = "0.1.0";

// ---------------------------------------------------------------------------
// Full analysis pipeline: classify -> fit -> certify -> verdict; every stage
// failure is recorded in the report rather than aborting the run.
// ---------------------------------------------------------------------------

struct AnalysisResult {
    json report;
    std::optional<RegularityVerdict> verdict;
    bool empty_resolvent_flag = false;
};

inline AnalysisResult run_analyze(const ScenarioConfig& cfg) {
    AnalysisResult out;
    json& rep = out.report;
    rep["schema_version"] = report_schema_version;
    rep["library_version"] = library_version;
    rep["label"] = cfg.model.label;
    if (!cfg.model.note.empty()) rep["note"] = cfg.model.note;
    rep["kernel_condition"] = to_string(cfg.model.kernel);
    rep["tolerances"] = {{"slope_tol", cfg.cert.slope_tol},
                         {"per_decade", cfg.cert.per_decade},
                         {"fit_max_residual", cfg.fit.max_residual},
                         {"discretize_nodes", cfg.cert.discretize_nodes}};
    rep["errors"] = json::array();
    auto record_error = [&](const std::string& stage, const std::exception& e) {
        rep["errors"].push_back({{"stage", stage}, {"what", e.what()}});
    };

    // resolvent-set probe: an identically vanishing denominator means the
    // machinery below has no operator to speak about
    {
        bool all_zero = true;
        for (cplx z : {cplx(0, 1), cplx(0.5, 2), cplx(-1, 3), cplx(2, 0.25)}) {
            try {
                const cplx d = denominator(cfg.model, z);
                const double scl = std::abs(cfg.model.m_plus.evaluate(z)) + 1.0;
                if (std::abs(d) > 1e-12 * scl) {
                    all_zero = false;
                    break;
                }
            } catch (const error&) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) {
            rep["empty_resolvent_set"] = true;
            rep["verdict"] = nullptr;
            out.empty_resolvent_flag = true;
            return out;
        }
        rep["empty_resolvent_set"] = false;
    }

    PairAnalysis an{};
    try {
        an.class_plus = classify(cfg.model.m_plus);
        an.class_minus = classify(cfg.model.m_minus);
        rep["class_reports"] = {{"m_plus", to_json(an.class_plus)},
                                {"m_minus", to_json(an.class_minus)}};
    } catch (const error& e) {
        record_error("classify", e);
    }
    try {
        an.member_plus = class_membership(cfg.model.m_plus, {}, cfg.fit);
        an.member_minus = class_membership(cfg.model.m_minus, {}, cfg.fit);
        auto memb = [](const ClassMembership& m) {
            json j;
            j["in_A_inf"] = to_string(m.in_A_inf);
            j["in_A_zero"] = to_string(m.in_A_zero);
            if (m.fit_inf) j["fit_inf"] = to_json(*m.fit_inf);
            if (m.fit_zero) j["fit_zero"] = to_json(*m.fit_zero);
            return j;
        };
        rep["class_membership"] = {{"m_plus", memb(an.member_plus)},
                                   {"m_minus", memb(an.member_minus)}};
    } catch (const error& e) {
        record_error("asymptotic-fit", e);
    }

    NonnegativityReport nonneg;
    try {
        nonneg = nonnegativity(cfg.model);
        rep["nonnegativity"] = to_json(nonneg);
    } catch (const error& e) {
        record_error("nonnegativity", e);
    }

    // certificates: direct pair-D on both regimes plus implied certificates
    std::vector<PropertyCertificate> certs;
    for (PropertyKind k : {PropertyKind::d_inf, PropertyKind::d_zero}) {
        try {
            certs.push_back(d_certify(cfg.model.m_plus, cfg.model.m_minus, k, cfg.cert));
        } catch (const error& e) {
            record_error(std::string("d-certify-") + to_string(k), e);
        }
    }
    try {
        auto implied = derive_properties(cfg.model.m_plus, cfg.model.m_minus, an, cfg.cert);
        for (auto& c : implied) certs.push_back(std::move(c));
    } catch (const error& e) {
        record_error("derive-properties", e);
    }
    // direct B-certification wherever the implication engine left a gap
    for (const char* side : {"m_plus", "m_minus"}) {
        const NevanlinnaExpr& m =
            side == std::string("m_plus") ? cfg.model.m_plus : cfg.model.m_minus;
        for (PropertyKind k : {PropertyKind::b_inf, PropertyKind::b_zero}) {
            bool have = false;
            for (const auto& c : certs)
                if (c.property == k && c.subject == side) have = true;
            if (have) continue;
            try {
                auto c = b_certify_schur(m, k, -1.0, cfg.cert);
                c.subject = side;
                certs.push_back(std::move(c));
            } catch (const error& e) {
                record_error(std::string("b-certify-") + to_string(k) + "-" + side, e);
            }
        }
    }
    rep["certificates"] = json::array();
    for (size_t i = 0; i < certs.size(); ++i) rep["certificates"].push_back(to_json(certs[i], i));
    for (const auto& c : certs)
        if (c.verdict == CertVerdict::empty_resolvent) {
            rep["empty_resolvent_set"] = true;
            out.empty_resolvent_flag = true;
        }

    // certified uniform bound on the coupled-resolvent pairing, when the
    // three ingredient certificates carry their constants
    rep["certified_bounds"] = json::object();
    for (PropertyKind dk : {PropertyKind::d_inf, PropertyKind::d_zero}) {
        const PropertyKind bk =
            dk == PropertyKind::d_inf ? PropertyKind::b_inf : PropertyKind::b_zero;
        const PropertyCertificate* dcert = nullptr;
        try {
            for (const auto& c : certs)
                if (c.property == dk && c.subject == "pair" &&
                    c.verdict == CertVerdict::bounded && c.constants.count("C1"))
                    dcert = &c;
            if (!dcert) continue;
            const auto bp = b_certify_schur(cfg.model.m_plus, bk, -1.0, cfg.cert);
            const auto bm = b_certify_schur(cfg.model.m_minus, bk, -1.0, cfg.cert);
            const double bound = veselic_bound(*dcert, bp, bm);
            rep["certified_bounds"][dk == PropertyKind::d_inf
                                        ? "resolvent_pairing_at_inf"
                                        : "resolvent_pairing_at_zero"] = bound;
        } catch (const error&) {
            // no bound available on this side
        }
    }

    if (out.empty_resolvent_flag) {
        rep["verdict"] = nullptr;
        return out;
    }

    try {
        const RegularityVerdict v = verdict(cfg.model, an, certs, nonneg);
        rep["verdict"] = to_json(v);
        out.verdict = v;
    } catch (const error& e) {
        record_error("verdict", e);
        rep["verdict"] = nullptr;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pre-baked example scenarios with their published conclusions
// ---------------------------------------------------------------------------

struct ExampleExpectation {
    std::function<bool(const AnalysisResult&)> check;
    std::string description;
};

inline ScenarioConfig example_config(const std::string& id) {
    ScenarioConfig cfg{CouplingModel{NevanlinnaExpr::power_law(1.0, -0.5),
                                     NevanlinnaExpr::power_law(1.0, -0.5),
                                     KernelCondition::unknown, std::nullopt, "", ""},
                       {}, {}, "", {}};
    if (id == "ex-5.1") {
        const auto e = closed_form("free-neumann");
        cfg.model.m_plus = e.closed_form;
        cfg.model.m_minus = e.closed_form;
        cfg.model.sl_problem_plus = e.problem;
        cfg.model.kernel = KernelCondition::unknown;
        cfg.model.label = "ex-5.1";
        return cfg;
    }
    if (id == "ex-5.2") {
        const auto e = closed_form("ex52-short-range(1,1)");
        cfg.model.m_plus = e.closed_form;
        cfg.model.m_minus = e.closed_form;
        cfg.model.kernel = KernelCondition::holds; // trivial kernel for the model
        cfg.model.label = "ex-5.2";
        cfg.model.note = e.note;
        return cfg;
    }
    if (id == "ex-5.3") {
        const auto e = closed_form("ex53-powerlaw(0,0)");
        cfg.model.m_plus = e.closed_form;
        cfg.model.m_minus = e.closed_form;
        cfg.model.sl_problem_plus = e.problem;
        cfg.model.kernel = KernelCondition::holds; // no kernel: p y' has no L2 zero mode
        cfg.model.label = "ex-5.3";
        return cfg;
    }
    if (id == "ex-singular") {
        const auto e = closed_form("kakost-singular");
        cfg.model.m_plus = e.closed_form;
        cfg.model.m_minus = e.closed_form;
        cfg.model.kernel = KernelCondition::holds; // one-dimensional kernel, no chain defect
        cfg.model.label = "ex-singular";
        cfg.model.note = e.note;
        return cfg;
    }
    if (id == "ex-coupling-24") {
        cfg.model.m_plus = closed_form("free-dirichlet").closed_form;
        cfg.model.m_minus = closed_form("fourth-order-quarter").closed_form;
        cfg.model.sl_problem_plus = closed_form("free-dirichlet").problem;
        cfg.model.kernel = KernelCondition::holds;
        cfg.model.label = "ex-coupling-24";
        return cfg;
    }
    throw unknown_id_error("example_config: unknown id '" + id + "'");
}

inline ExampleExpectation example_expectation(const std::string& id) {
    auto v = [](const AnalysisResult& r) -> const RegularityVerdict* {
        return r.verdict ? &*r.verdict : nullptr;
    };
    if (id == "ex-5.1")
        return {[v](const AnalysisResult& r) {
                    return v(r) && v(r)->infinity_regular == verdict3::yes;
                },
                "infinity is a regular critical point"};
    if (id == "ex-5.2" || id == "ex-5.3" || id == "ex-coupling-24")
        return {[v](const AnalysisResult& r) {
                    return v(r) && v(r)->fundamentally_reducible == verdict3::yes;
                },
                "the coupling is fundamentally reducible"};
    if (id == "ex-singular")
        return {[v](const AnalysisResult& r) {
                    return v(r) && v(r)->zero_regular == verdict3::no &&
                           v(r)->infinity_regular == verdict3::yes;
                },
                "zero is singular, infinity is regular"};
    throw unknown_id_error("example_expectation: unknown id '" + id + "'");
}

inline std::vector<std::string> example_ids() {
    return {"ex-5.1", "ex-5.2", "ex-5.3", "ex-singular", "ex-coupling-24"};
}

struct ExampleRun {
    AnalysisResult analysis;
    bool pass = false;
    std::string description;
};

inline ExampleRun run_example(const std::string& id) {
    ExampleRun run;
    const auto cfg = example_config(id);
    run.analysis = run_analyze(cfg);
    const auto expect = example_expectation(id);
    run.pass = expect.check(run.analysis);
    run.description = expect.description;
    run.analysis.report["expectation"] = expect.description;
    run.analysis.report["pass"] = run.pass;
    return run;
}

// ---------------------------------------------------------------------------
// Grid emission (plot data): '.' decimal, ',' separator, LF line endings
// ---------------------------------------------------------------------------

struct GridSpec {
    enum class Kind { function, d_ratio } kind = Kind::function;
    NevanlinnaExpr expr = NevanlinnaExpr::power_law(1.0, -0.5); // function kind
    NevanlinnaExpr m_minus = NevanlinnaExpr::power_law(1.0, -0.5); // d_ratio kind
    double y_lo = 1.0, y_hi = 1e4;
    int per_decade = 16;
};

inline GridSpec grid_spec_from_json(const json& j) {
    GridSpec g;
    const std::string kind = j.value("kind", "function");
    if (kind == "d_ratio") {
        g.kind = GridSpec::Kind::d_ratio;
        g.expr = expr_from_json(j.at("m_plus"));
        g.m_minus = expr_from_json(j.at("m_minus"));
    } else {
        g.kind = GridSpec::Kind::function;
        g.expr = expr_from_json(j.at("expr"));
    }
    const json& w = j.at("window");
    g.y_lo = w.at("lo");
    g.y_hi = w.at("hi");
    g.per_decade = w.value("per_decade", 16);
    return g;
}

inline void emit_grid(const GridSpec& spec, std::ostream& os) {
    if (!(spec.y_hi > spec.y_lo) || spec.y_lo <= 0.0)
        throw precondition_error("emit_grid: empty or invalid window");
    const int n = std::max(
        1, static_cast<int>(std::round(std::log10(spec.y_hi / spec.y_lo) * spec.per_decade)));
    os.precision(17);
    if (spec.kind == GridSpec::Kind::function) {
        os << "y,re,im\n";
        for (int k = 0; k <= n; ++k) {
            const double y = spec.y_lo * std::pow(spec.y_hi / spec.y_lo,
                                                  static_cast<double>(k) / n);
            const cplx v = spec.expr.evaluate(cplx(0.0, y));
            os << y << "," << v.real() << "," << v.imag() << "\n";
        }
    } else {
        os << "y,ratio\n";
        for (int k = 0; k <= n; ++k) {
            const double y = spec.y_lo * std::pow(spec.y_hi / spec.y_lo,
                                                  static_cast<double>(k) / n);
            const cplx vp = spec.expr.evaluate(cplx(0.0, y));
            const cplx vm = spec.m_minus.evaluate(cplx(0.0, y));
            const cplx vmd = spec.m_minus.evaluate(cplx(0.0, -y));
            os << y << "," << (vp.imag() + vm.imag()) / std::abs(vp + vmd) << "\n";
        }
    }
}

inline void emit_grid_file(const GridSpec& spec, const std::string& path) {
    std::ofstream os(path, std::ios::binary); // LF endings on every platform
    if (!os) throw precondition_error("emit_grid: cannot open " + path);
    emit_grid(spec, os);
}

} // namespace kreinspec
