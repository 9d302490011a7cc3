#include "rpf/scenario.hpp"

#include "rpf/moments.hpp"

#include <cmath>
#include <filesystem>

namespace rpf {

namespace fs = std::filesystem;

Scenario Scenario::from_json(const json& j) {
    Scenario sc;
    sc.name = j.at("name").get<std::string>();
    sc.experiment = j.at("experiment").get<std::string>();
    if (j.contains("preset")) sc.preset = j["preset"].get<std::string>();
    if (j.contains("cells")) sc.cells = j["cells"].get<std::size_t>();
    if (j.contains("T")) sc.T = j["T"].get<double>();
    if (j.contains("particles")) sc.particles = j["particles"].get<std::size_t>();
    if (j.contains("n_outer")) sc.n_outer = j["n_outer"].get<std::size_t>();
    if (j.contains("n_inner")) sc.n_inner = j["n_inner"].get<std::size_t>();
    if (j.contains("checkpoints")) sc.checkpoints = j["checkpoints"].get<std::vector<double>>();
    if (j.contains("seed")) sc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) sc.threads = j["threads"].get<int>();
    if (j.contains("mesh_refine")) sc.mesh_refine = j["mesh_refine"].get<int>();
    if (j.contains("p")) sc.p = j["p"].get<double>();
    if (j.contains("base_eps")) sc.base_eps = j["base_eps"].get<double>();
    if (j.contains("levels")) sc.levels = j["levels"].get<int>();
    if (j.contains("with_oracle")) sc.with_oracle = j["with_oracle"].get<bool>();
    if (sc.checkpoints.empty())
        for (int q = 1; q <= 5; ++q) sc.checkpoints.push_back(sc.T * double(q) / 5.0);
    return sc;
}

json Scenario::to_json() const {
    json j;
    j["name"] = name;
    j["experiment"] = experiment;
    j["preset"] = preset;
    j["cells"] = cells;
    j["T"] = T;
    j["particles"] = particles;
    j["n_outer"] = n_outer;
    j["n_inner"] = n_inner;
    j["checkpoints"] = checkpoints;
    j["seed"] = seed;
    j["mesh_refine"] = mesh_refine;
    j["p"] = p;
    j["base_eps"] = base_eps;
    j["levels"] = levels;
    j["with_oracle"] = with_oracle;
    // threads intentionally excluded: results must not depend on it
    return j;
}

std::uint64_t Scenario::hash() const { return canonical_hash(to_json()); }

CoefficientSet desk_coefficients() {
    CoefficientSet cs;
    cs.state_dim = 1;
    cs.b = [](double, const Vec& y) { return Vec::Constant(1, -0.2 * std::tanh(y[0])); };
    cs.sigma = [](double, const Vec& y) {
        return Mat::Constant(1, 1, 0.3 + 0.1 * std::tanh(y[0]));
    };
    cs.f = [](double, const Vec& y) { return Mat::Constant(1, 1, 0.5 + 0.4 * std::tanh(y[0])); };
    cs.df = [](double, const Vec& y) {
        double th = std::tanh(y[0]);
        return std::vector<Mat>{Mat::Constant(1, 1, 0.4 * (1.0 - th * th))};
    };
    cs.g = [](double, const Vec& y, const Vec& u) {
        return Vec::Constant(1, 0.3 * u[0] * (0.5 + 0.5 * std::tanh(y[0])));
    };
    return cs;
}

MarkMeasure desk_jump_marks() {
    MarkMeasure nu;
    nu.atoms.emplace_back(Vec::Constant(1, -0.5), 0.5);
    nu.atoms.emplace_back(Vec::Constant(1, 0.5), 0.5);
    return nu;
}

namespace {

json filter_run_to_json(const FilterRun& run) {
    json j;
    j["checkpoints"] = run.checkpoints;
    j["gF"] = run.gF;
    j["g1"] = run.g1;
    j["theta"] = run.theta;
    j["se"] = run.se;
    j["particles"] = run.particles;
    j["diverged"] = run.diverged;
    return j;
}

std::string filter_run_to_csv(const FilterRun& run) {
    std::ostringstream os;
    os << "time,gF,g1,theta,se\n";
    for (std::size_t q = 0; q < run.checkpoints.size(); ++q)
        os << fmt17(run.checkpoints[q]) << "," << fmt17(run.gF[q]) << "," << fmt17(run.g1[q])
           << "," << fmt17(run.theta[q]) << "," << fmt17(run.se[q]) << "\n";
    return os.str();
}

} // namespace

RunResult run_scenario(const Scenario& sc) {
    RunResult res;
    std::size_t cells = sc.cells << std::max(0, sc.mesh_refine);
    RngStream root(sc.seed);
    EnsembleSpec ens{sc.n_outer, sc.n_inner, sc.seed, sc.threads};
    json& rep = res.report;
    rep["scenario"] = sc.to_json();
    rep["scenario_hash"] = sc.hash();

    if (sc.experiment == "simulate") {
        FilterModel model = preset_model(sc.preset);
        ObservationRealization obs =
            simulate_observation(model, root.child("obs"), TimeGrid::uniform(sc.T, cells));
        rep["events"] = obs.events.events.size();
        rep["grid_points"] = obs.grid.size();
        rep["terminal_Y"] = obs.Y.value(obs.grid.size() - 1)[0];
        rep["outside_assumptions"] = model.outside_assumptions;
        res.tables.emplace_back("G.csv", grid_path_to_csv(obs.G));
        res.tables.emplace_back("Y.csv", grid_path_to_csv(obs.Y));
        res.tables.emplace_back("events.csv", events_to_csv(obs.events));
    } else if (sc.experiment == "filter") {
        FilterModel model = preset_model(sc.preset);
        ObservationRealization obs =
            simulate_observation(model, root.child("obs"), TimeGrid::uniform(sc.T, cells));
        FilterRun run = robust_filter(model, obs, sc.particles, sc.checkpoints,
                                      root.child("robust"), sc.threads);
        rep["robust"] = filter_run_to_json(run);
        res.tables.emplace_back("filter.csv", filter_run_to_csv(run));
        if (sc.with_oracle) {
            FilterRun orun =
                oracle_filter(model, obs, sc.particles, sc.checkpoints, root, sc.threads);
            rep["oracle"] = filter_run_to_json(orun);
            res.tables.emplace_back("oracle.csv", filter_run_to_csv(orun));
            json agree = json::array();
            for (std::size_t q = 0; q < sc.checkpoints.size(); ++q) {
                double comb = std::sqrt(run.se[q] * run.se[q] + orun.se[q] * orun.se[q]);
                agree.push_back(std::abs(run.theta[q] - orun.theta[q]) <= 3.0 * comb);
            }
            rep["within_3se"] = agree;
        }
    } else if (sc.experiment == "consistency") {
        ConsistencyReport r = consistency_check(desk_coefficients(), Vec::Constant(1, 1.0), sc.T,
                                                cells, desk_jump_marks(), ens);
        rep["mesh_cells"] = r.mesh_cells;
        rep["mean_terminal_gap"] = r.mean_terminal_gap;
        rep["mean_sup_gap"] = r.mean_sup_gap;
        rep["gap_ratio"] = r.gap_ratio;
        rep["aborted"] = r.aborted;
        std::ostringstream os;
        os << "mesh_cells,mean_terminal_gap,mean_sup_gap\n";
        for (std::size_t i = 0; i < r.mesh_cells.size(); ++i)
            os << r.mesh_cells[i] << "," << fmt17(r.mean_terminal_gap[i]) << ","
               << fmt17(r.mean_sup_gap[i]) << "\n";
        res.tables.emplace_back("consistency.csv", os.str());
    } else if (sc.experiment == "stability") {
        StabilityReport r = stability_experiment(desk_coefficients(), Vec::Constant(1, 1.0), sc.T,
                                                 cells, sc.p, sc.base_eps, sc.levels, ens);
        json rows = json::array();
        std::ostringstream os;
        os << "eps,driver_distance,solution_distance,ratio\n";
        for (const auto& row : r.rows) {
            rows.push_back({{"eps", row.eps},
                            {"driver_distance", row.driver_distance},
                            {"solution_distance", row.solution_distance},
                            {"ratio", row.ratio}});
            os << fmt17(row.eps) << "," << fmt17(row.driver_distance) << ","
               << fmt17(row.solution_distance) << "," << fmt17(row.ratio) << "\n";
        }
        rep["rows"] = rows;
        rep["max_ratio"] = r.max_ratio;
        rep["bounded"] = r.bounded;
        res.tables.emplace_back("stability.csv", os.str());
    } else if (sc.experiment == "skorokhod") {
        SkorokhodConvergenceReport r = skorokhod_convergence_experiment(
            desk_coefficients(), Vec::Constant(1, 1.0), sc.T, cells, sc.levels, ens);
        rep["shift_sizes"] = r.shift_sizes;
        rep["gaps"] = r.gaps;
        rep["decreasing"] = r.decreasing;
        rep["counterexample_gap"] = r.counterexample_gap;
        rep["counterexample_gaps"] = r.counterexample_gaps;
        std::ostringstream os;
        os << "shift,gap\n";
        for (std::size_t i = 0; i < r.gaps.size(); ++i)
            os << fmt17(r.shift_sizes[i]) << "," << fmt17(r.gaps[i]) << "\n";
        res.tables.emplace_back("skorokhod.csv", os.str());
    } else if (sc.experiment == "robustness") {
        FilterModel model = preset_model(sc.preset);
        ObservationRealization obs =
            simulate_observation(model, root.child("obs"), TimeGrid::uniform(sc.T, cells));
        RobustnessReport r = robustness_pvar(model, obs, sc.base_eps, sc.levels, sc.particles,
                                             sc.p, root.child("rob"), sc.threads);
        json rows = json::array();
        std::ostringstream os;
        os << "eps,driver_distance,sup_dtheta,dtheta_pvar,ratio\n";
        for (const auto& row : r.rows) {
            rows.push_back({{"eps", row.eps},
                            {"driver_distance", row.driver_distance},
                            {"sup_dtheta", row.sup_dtheta},
                            {"dtheta_pvar", row.dtheta_pvar},
                            {"ratio", row.ratio}});
            os << fmt17(row.eps) << "," << fmt17(row.driver_distance) << ","
               << fmt17(row.sup_dtheta) << "," << fmt17(row.dtheta_pvar) << ","
               << fmt17(row.ratio) << "\n";
        }
        rep["rows"] = rows;
        rep["decreasing"] = r.decreasing;
        rep["ratio_band"] = r.ratio_band;
        res.tables.emplace_back("robustness.csv", os.str());
    } else if (sc.experiment == "lm") {
        FilterModel model = preset_model(sc.preset);
        ModelUncertaintyReport r =
            model_uncertainty_lm(model, sc.T, cells, {cells / 8, cells / 4}, 2, sc.n_outer,
                                 sc.particles, sc.p, 1.0, 0.05, root.child("lm"), sc.threads);
        rep["skipped"] = r.skipped;
        rep["precondition_moment"] = r.precondition_moment;
        rep["precondition_saturated"] = r.precondition_saturated;
        json rows = json::array();
        for (const auto& row : r.rows)
            rows.push_back({{"coarse_cells", row.coarse_cells},
                            {"lm_dtheta", row.lm_dtheta},
                            {"lm_driver", row.lm_driver},
                            {"ratio", row.ratio}});
        rep["rows"] = rows;
        if (r.skipped) res.exit_code = 2;
    } else if (sc.experiment == "moments") {
        std::vector<GridPath> paths =
            brownian_max_ensemble(root.child("bm"), sc.T, 64, sc.particles);
        json moments = json::array();
        for (double lam : {0.5, 1.0}) {
            MomentReport mr = empirical_exp_moment(paths, lam, 1.0, sc.p, sc.seed + 1);
            double oracle = brownian_max_exp_moment(lam, sc.T);
            moments.push_back({{"lambda", lam},
                               {"empirical", mr.exp_moment_onesided},
                               {"bootstrap_se", mr.bootstrap_se_onesided},
                               {"closed_form", oracle},
                               {"fitted_constant", mr.fitted_constant},
                               {"saturated", mr.saturated},
                               {"generator", "brownian-cell-max"}});
        }
        rep["moments"] = moments;
        MartingaleSample W =
            sample_brownian(root.child("w"), TimeGrid::uniform(sc.T, 64), 1);
        NAlphaBoundReport nb = rough_norm_via_nalpha_bound(ito_lift(W.path), sc.p, 1.0);
        rep["nalpha_bound"] = {{"rough_norm", nb.rough_norm_value},
                               {"count", nb.n_alpha_count},
                               {"sup_jump", nb.sup_jump_value},
                               {"fitted_constant", nb.fitted_constant}};
    } else {
        throw std::invalid_argument("run_scenario: unknown experiment '" + sc.experiment + "'");
    }
    return res;
}

int run_scenario_to_dir(const Scenario& sc, const std::string& out_dir, bool force) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    fs::path report_path = dir / "report.json";
    if (fs::exists(report_path) && !force)
        throw std::runtime_error("output collision: " + report_path.string() +
                                 " exists (use --force)");
    auto t0 = std::chrono::steady_clock::now();
    RunResult res = run_scenario(sc);
    auto wall =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
            .count();
    write_file(report_path.string(), res.report.dump(2) + "\n");
    for (const auto& [name, csv] : res.tables) write_file((dir / name).string(), csv);
    json manifest;
    manifest["scenario_hash"] = sc.hash();
    manifest["seed"] = sc.seed;
    manifest["threads"] = sc.threads;
    manifest["version"] = "0.1.0";
    manifest["wall_ms"] = wall;
    manifest["exit_code"] = res.exit_code;
    write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    return res.exit_code;
}

std::vector<VerifyEntry> verify_goldens(const std::string& scenario_dir,
                                        const std::string& golden_dir) {
    std::vector<VerifyEntry> out;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(scenario_dir))
        if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        Scenario sc = Scenario::from_json(json::parse(read_file(f.string())));
        VerifyEntry entry;
        entry.scenario = sc.name;
        fs::path golden = fs::path(golden_dir) / (sc.name + ".report.json");
        if (!fs::exists(golden)) {
            entry.status = "new";
            out.push_back(entry);
            continue;
        }
        RunResult res = run_scenario(sc);
        json want = json::parse(read_file(golden.string()));
        if (want == res.report) {
            entry.status = "match";
        } else {
            entry.status = "diff";
            for (auto it = want.begin(); it != want.end(); ++it) {
                if (!res.report.contains(it.key()) || res.report[it.key()] != it.value()) {
                    entry.detail = "field '" + it.key() + "' differs";
                    break;
                }
            }
        }
        out.push_back(entry);
    }
    return out;
}

} // namespace rpf
