// Batch front-end: load a scenario, run the full pipeline, emit a
// machine-readable report and optional plot grids.
//
//   kreinspec analyze <config.json>   deterministic report to stdout / file
//   kreinspec example <id>            run a built-in scenario, assert its
//                                     published conclusion, PASS/FAIL
//   kreinspec grid <spec.json>        CSV plot data (y, re, im) or (y, ratio)
//
// Exit codes: 0 complete/PASS, 2 failed assertion, 1 error.

#include <kreinspec/pipeline.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

kreinspec::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kreinspec::precondition_error("cannot open " + path);
    kreinspec::json j;
    in >> j;
    return j;
}

void write_or_print(const kreinspec::json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw kreinspec::precondition_error("cannot open " + path);
        os << text;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weyl-function analysis of coupled operators"};
    app.require_subcommand(1);

    std::string config_path, example_id, grid_path, out_path;

    auto* analyze = app.add_subcommand("analyze", "run the pipeline on a scenario config");
    analyze->add_option("config", config_path, "scenario JSON")->required();
    analyze->add_option("-o,--output", out_path, "report path (default: stdout)");

    auto* example = app.add_subcommand("example", "reproduce a built-in scenario");
    example->add_option("id", example_id, "one of the built-in ids")->required();
    example->add_option("-o,--output", out_path, "report path (default: stdout)");

    auto* grid = app.add_subcommand("grid", "emit CSV plot data");
    grid->add_option("spec", grid_path, "grid spec JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) {
            const auto cfg = kreinspec::config_from_json(load_json(config_path));
            auto result = kreinspec::run_analyze(cfg);
            for (const auto& g : cfg.grid_dumps)
                kreinspec::emit_grid_file(kreinspec::grid_spec_from_json(g),
                                          g.at("path").get<std::string>());
            write_or_print(result.report,
                           out_path.empty() ? cfg.report_path : out_path);
            return 0;
        }
        if (*example) {
            if (example_id == "list") {
                for (const auto& id : kreinspec::example_ids()) std::cout << id << "\n";
                return 0;
            }
            auto run = kreinspec::run_example(example_id);
            write_or_print(run.analysis.report, out_path);
            std::cerr << (run.pass ? "PASS" : "FAIL") << " " << example_id << ": "
                      << run.description << "\n";
            return run.pass ? 0 : 2;
        }
        if (*grid) {
            const auto j = load_json(grid_path);
            kreinspec::emit_grid_file(kreinspec::grid_spec_from_json(j),
                                      j.at("path").get<std::string>());
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
