#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gerbeloop/errors.hpp"
#include "verbs.hpp"

namespace {

std::string verb_list() {
    std::string out;
    for (const auto& v : gerbeloop::cli::verb_names()) {
        if (!out.empty()) out += ", ";
        out += v;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    using namespace gerbeloop::cli;

    RunConfig cfg;
    CLI::App app{"lifting-gerbe computations over lattice bundles"};
    app.add_option("verb", cfg.verb, "one of: " + verb_list())->required();
    app.add_option("--extension", cfg.extension,
                   "central extension: a builtin like spin(2), spinc(2), heisenberg, "
                   "or a .json descriptor file");
    app.add_option("--bundle", cfg.bundle, "builtin bundle, e.g. so3-sphere-clutch-1");
    app.add_option("--surface", cfg.surface,
                   "builtin surface, e.g. torus, sphere, genus2, torus_grid(3)");
    app.add_option("--rho", cfg.rho_path, "JSON input: face values or Fourier modes");
    app.add_option("--twist", cfg.twist_path, "JSON input: kernel-valued edge cochain");
    app.add_option("--loop", cfg.loop_path, "JSON input: sampled group loop");
    app.add_option("--loops-config", cfg.loops_config_path,
                   "JSON input: loop registry parameters");
    app.add_option("--seed", cfg.seed, "seed for every randomized choice");
    auto* tol_opt = app.add_option("--tol", cfg.tol, "tolerance override");
    app.add_option("--quad-depth", cfg.quad_depth, "quadrature depth control");
    app.add_option("--json-out", cfg.json_out, "also write the report to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.tol_set = tol_opt->count() > 0;

    const auto& names = verb_names();
    if (std::find(names.begin(), names.end(), cfg.verb) == names.end()) {
        std::cerr << "gerbeloop: unknown verb \"" << cfg.verb << "\" (expected one of "
                  << verb_list() << ")\n";
        return 2;
    }

    try {
        VerbResult res = run_verb(cfg);
        Json report = Json::object();
        report["verb"] = cfg.verb;
        report["inputs"] = res.inputs;
        report["results"] = res.results;
        report["maxError"] = res.max_error;
        report["passed"] = res.passed;
        std::string text = dump_report(report);
        std::cout << text;
        if (!cfg.json_out.empty()) {
            std::ofstream out(cfg.json_out);
            if (!out) {
                std::cerr << "gerbeloop: cannot write " << cfg.json_out << "\n";
                return 2;
            }
            out << text;
        }
        return res.passed ? 0 : 1;
    } catch (const gerbeloop::Error& e) {
        std::cerr << "gerbeloop: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "gerbeloop: " << e.what() << "\n";
        return 2;
    }
}
