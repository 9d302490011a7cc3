#ifndef RPF_SCENARIO_HPP
#define RPF_SCENARIO_HPP

#include "rpf/filter_experiments.hpp"
#include "rpf/io.hpp"
#include "rpf/rsde_experiments.hpp"

namespace rpf {

struct Scenario {
    std::string name;
    std::string experiment; // simulate | filter | consistency | stability | skorokhod |
                            // robustness | lm | moments
    std::string preset = "jump-desk";
    std::size_t cells = 128;
    double T = 1.0;
    std::size_t particles = 2000;
    std::size_t n_outer = 50;
    std::size_t n_inner = 20;
    std::vector<double> checkpoints;
    std::uint64_t seed = 42;
    int threads = 1;
    int mesh_refine = 0; // extra dyadic refinements of the base grid
    double p = 2.5;
    double base_eps = 0.5;
    int levels = 6;
    bool with_oracle = false;

    static Scenario from_json(const json& j);
    json to_json() const;
    std::uint64_t hash() const; // over the canonical serialization
};

struct RunResult {
    int exit_code = 0; // 0 ok, 2 precondition skip
    json report;
    std::vector<std::pair<std::string, std::string>> tables; // (filename, csv)
};

// Bounded multiplicative scalar jump-diffusion coefficients used by the solver
// experiments.
CoefficientSet desk_coefficients();
MarkMeasure desk_jump_marks();

RunResult run_scenario(const Scenario& sc);

// Writes report.json, CSV tables and manifest.json under out_dir; errors on
// collision unless force. Returns the exit code of the run.
int run_scenario_to_dir(const Scenario& sc, const std::string& out_dir, bool force);

struct VerifyEntry {
    std::string scenario;
    std::string status; // match | diff | new
    std::string detail;
};
std::vector<VerifyEntry> verify_goldens(const std::string& scenario_dir,
                                        const std::string& golden_dir);

} // namespace rpf

#endif
