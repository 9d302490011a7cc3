// Command-line front end: run scenario files, list model presets, verify
// golden reports. Output root defaults to $RPF_OUT (or ./out).

#include "rpf/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

static std::string default_out_root() {
    if (const char* env = std::getenv("RPF_OUT")) return env;
    return "out";
}

int main(int argc, char** argv) {
    CLI::App app{"rough-path filtering laboratory"};
    app.require_subcommand(1);

    std::string scenario_file;
    std::string out_root = default_out_root();
    bool force = false;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    int mesh_refine = -1;

    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenario_file, "scenario JSON file")->required();
    run->add_option("--out", out_root, "output root directory");
    run->add_flag("--force", force, "overwrite an existing output directory");
    run->add_option("--seed", seed, "override the scenario seed")
        ->each([&](const std::string&) { seed_set = true; });
    run->add_option("--threads", threads, "worker thread count (results are thread-invariant)");
    run->add_option("--mesh-refine", mesh_refine, "extra dyadic grid refinements");

    auto* list = app.add_subcommand("list-presets", "list bundled observation models");

    std::string scenario_dir, golden_dir;
    auto* verify = app.add_subcommand("verify", "re-run scenarios and diff against goldens");
    verify->add_option("scenarios", scenario_dir, "directory of scenario JSON files")->required();
    verify->add_option("goldens", golden_dir, "directory of golden reports")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            rpf::Scenario sc = rpf::Scenario::from_json(rpf::json::parse(rpf::read_file(scenario_file)));
            if (seed_set) sc.seed = seed;
            if (threads > 0) sc.threads = threads;
            if (mesh_refine >= 0) sc.mesh_refine = mesh_refine;
            fs::path dir = fs::path(out_root) / sc.name;
            int code = rpf::run_scenario_to_dir(sc, dir.string(), force);
            if (code == 2)
                std::cout << sc.name << ": skipped (precondition not met), artifacts in " << dir
                          << "\n";
            else
                std::cout << sc.name << ": ok, artifacts in " << dir << "\n";
            return code;
        }
        if (list->parsed()) {
            for (const auto& name : rpf::preset_names()) {
                rpf::FilterModel m = rpf::preset_model(name);
                std::cout << name << "  dx=" << m.dx << " dy=" << m.dy
                          << (m.outside_assumptions ? "  [outside standing assumptions]" : "")
                          << "\n";
            }
            return 0;
        }
        if (verify->parsed()) {
            auto entries = rpf::verify_goldens(scenario_dir, golden_dir);
            bool any_diff = false;
            for (const auto& e : entries) {
                std::cout << e.scenario << ": " << e.status;
                if (!e.detail.empty()) std::cout << " (" << e.detail << ")";
                std::cout << "\n";
                if (e.status == "diff") any_diff = true;
            }
            return any_diff ? 1 : 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
