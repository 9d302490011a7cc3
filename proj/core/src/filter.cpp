#include "rpf/filter.hpp"

#include "rpf/parallel.hpp"

#include <cmath>

namespace rpf {

double FilterModel::lambda(double t, const Vec& x, const Vec& u) const {
    return std::exp(kappa(t, x) * gamma_factor(t, u));
}

Vec FilterModel::h(double t, const Vec& x, const Vec& y) const {
    Vec num = b2 ? b2(t, x, y) : Vec(Vec::Zero(dy));
    for (const auto& atom : nu2.atoms) {
        double lam = lambda(t, x, atom.first);
        num += h3(t, y) * (g3(t, atom.first) * (1.0 - lam) * atom.second);
    }
    Mat s2 = sigma2(t, y);
    return s2.partialPivLu().solve(num);
}

Vec FilterModel::b1_tilde(double t, const Vec& x, const Vec& y) const {
    Vec out = b1 ? b1(t, x, y) : Vec(Vec::Zero(dx));
    Vec hv = h(t, x, y);
    if (sigma1) out -= sigma1(t, x, y) * hv;
    for (const auto& atom : nu2.atoms) {
        double lam = lambda(t, x, atom.first);
        out -= h2(t, x, y) * (g2(t, atom.first) * (1.0 - lam) * atom.second);
    }
    return out;
}

namespace {

double sq(double x) { return x * x; }

FilterModel base_scalar_model() {
    FilterModel m;
    m.dx = m.dy = m.db = 1;
    m.b1 = [](double, const Vec& x, const Vec&) { return Vec::Constant(1, -0.5 * std::tanh(x[0])); };
    m.sigma0 = [](double, const Vec&, const Vec&) { return Mat::Constant(1, 1, 0.4); };
    m.sigma1 = [](double, const Vec& x, const Vec& y) {
        return Mat::Constant(1, 1, 0.25 + 0.1 * std::tanh(x[0] + y[0]));
    };
    m.b2 = [](double, const Vec& x, const Vec&) { return Vec::Constant(1, 0.5 * std::tanh(x[0])); };
    m.sigma2 = [](double, const Vec& y) { return Mat::Constant(1, 1, 1.0 + 0.2 * std::tanh(y[0])); };
    m.h2 = [](double, const Vec& x, const Vec&) { return Vec::Constant(1, 0.2 * std::tanh(x[0])); };
    m.g2 = [](double, const Vec& u) { return u[0]; };
    m.h3 = [](double, const Vec&) { return Vec::Constant(1, 0.6); };
    m.g3 = [](double, const Vec& u) { return u[0]; };
    m.kappa = [](double, const Vec& x) { return 0.4 * std::tanh(x[0]); };
    m.gamma_factor = [](double, const Vec& u) { return u[0] / (1.0 + sq(u[0])); };
    m.f1 = [](double, const Vec& x, const Vec& u) {
        return Vec::Constant(1, 0.25 * u[0] * (0.5 + 0.5 * std::tanh(x[0])));
    };
    m.sample_x0 = [](RngStream& s) { return Vec::Constant(1, 0.2 + 0.5 * s.normal()); };
    m.y0 = Vec::Zero(1);
    m.F = [](const Vec& x, const Vec&) { return std::tanh(x[0]); };
    m.F_bound = 1.0;
    return m;
}

MarkMeasure atoms1d(std::initializer_list<std::pair<double, double>> list) {
    MarkMeasure nu;
    for (const auto& [u, w] : list) nu.atoms.emplace_back(Vec::Constant(1, u), w);
    return nu;
}

} // namespace

FilterModel preset_model(const std::string& name) {
    if (name == "jump-desk") {
        FilterModel m = base_scalar_model();
        m.name = name;
        m.nu1 = atoms1d({{-0.6, 0.4}, {0.6, 0.4}});
        m.nu2 = atoms1d({{-0.8, 0.4}, {0.5, 0.6}, {1.2, 0.5}});
        m.lambda_min = 0.8;
        m.lambda_max = 1.25;
        return m;
    }
    if (name == "scalar-correlated") {
        FilterModel m = base_scalar_model();
        m.name = name;
        m.kappa = [](double, const Vec&) { return 0.0; };
        m.b2 = [](double, const Vec& x, const Vec&) {
            return Vec::Constant(1, 0.8 * std::tanh(x[0]));
        };
        m.sigma2 = [](double, const Vec&) { return Mat::Constant(1, 1, 1.0); };
        return m; // no jumps: nu1, nu2 empty
    }
    if (name == "degenerate") {
        FilterModel m = base_scalar_model();
        m.name = name;
        m.kappa = [](double, const Vec&) { return 0.0; };
        m.b2 = [](double, const Vec&, const Vec&) { return Vec::Zero(1); };
        m.nu1 = atoms1d({{-0.6, 0.4}, {0.6, 0.4}});
        m.nu2 = atoms1d({{-0.8, 0.4}, {0.5, 0.6}, {1.2, 0.5}});
        return m;
    }
    if (name == "additive") {
        FilterModel m = base_scalar_model();
        m.name = name;
        m.additive = true;
        m.kappa = [](double, const Vec&) { return 0.0; };
        m.b2 = [](double, const Vec& x, const Vec&) {
            return Vec::Constant(1, 0.3 * std::tanh(x[0]));
        };
        m.sigma2 = [](double, const Vec&) { return Mat::Constant(1, 1, 1.0); };
        m.h3 = [](double, const Vec&) { return Vec::Constant(1, 1.0); };
        m.nu2 = atoms1d({{-1.0, 0.3}, {0.05, 0.8}, {0.9, 0.4}});
        return m;
    }
    if (name == "linear-gaussian") {
        FilterModel m = base_scalar_model();
        m.name = name;
        m.outside_assumptions = true;
        m.b1 = [](double, const Vec& x, const Vec&) { return Vec::Constant(1, -0.5 * x[0]); };
        m.sigma0 = [](double, const Vec&, const Vec&) { return Mat::Constant(1, 1, 0.3); };
        m.sigma1 = [](double, const Vec&, const Vec&) { return Mat::Constant(1, 1, 0.2); };
        m.kappa = [](double, const Vec&) { return 0.0; };
        m.b2 = [](double, const Vec& x, const Vec&) { return Vec::Constant(1, 0.8 * x[0]); };
        m.sigma2 = [](double, const Vec&) { return Mat::Constant(1, 1, 1.0); };
        m.F = [](const Vec& x, const Vec&) { return x[0]; };
        m.F_bound = 1e12;
        return m;
    }
    throw std::invalid_argument("preset_model: unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
    return {"jump-desk", "scalar-correlated", "degenerate", "additive", "linear-gaussian"};
}

ObservationRealization simulate_observation(const FilterModel& model, RngStream stream,
                                            const TimeGrid& base_grid) {
    ObservationRealization obs;
    obs.events = sample_poisson_measure(stream.child("n2"), base_grid, model.nu2);
    obs.grid = base_grid.with_times(obs.events.event_times());
    obs.Wtilde = sample_brownian(stream.child("wtilde"), obs.grid, model.dy);

    const int dg = model.dg();
    const std::size_t n = obs.grid.size();
    GridPath dummy = GridPath::zero(obs.grid, 1);
    GridPath J2 = compensated_integral(
        obs.events,
        [&](double t, const Vec&, const Vec& u) { return Vec::Constant(1, model.g2(t, u)); },
        dummy, obs.grid, 1);
    GridPath J3 = compensated_integral(
        obs.events,
        [&](double t, const Vec&, const Vec& u) { return Vec::Constant(1, model.g3(t, u)); },
        dummy, obs.grid, 1);
    GridPath Jg = compensated_integral(
        obs.events,
        [&](double t, const Vec&, const Vec& u) {
            return Vec::Constant(1, model.gamma_factor(t, u));
        },
        dummy, obs.grid, 1);

    std::vector<Vec> gv(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vec g(dg);
        g.head(model.dy) = obs.Wtilde.path.value(k);
        g[model.dy] = J2.value(k)[0];
        g[model.dy + 1] = J3.value(k)[0];
        g[model.dy + 2] = Jg.value(k)[0];
        gv[k] = g;
    }
    obs.G = GridPath(obs.grid, std::move(gv));
    obs.lift = ito_lift(obs.G);

    // Y driven by the observation blocks: dY = sigma2 dWtilde + h3 dJ3
    std::vector<Vec> yv(n);
    Vec y = model.y0;
    yv[0] = y;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double t = obs.grid[k];
        y = y + model.sigma2(t, y) * obs.Wtilde.path.delta(k, k + 1) +
            model.h3(t, y) * (J3.value(k + 1)[0] - J3.value(k)[0]);
        yv[k + 1] = y;
    }
    obs.Y = GridPath(obs.grid, std::move(yv));
    return obs;
}

namespace {

// Particle state is z = (x, y); the rough coefficient against the (dy+3)-block
// driver is [[sigma1, h2, 0, 0], [sigma2, 0, h3, 0]].
Mat rough_coefficient(const FilterModel& m, double t, const Vec& z) {
    const int dx = m.dx, dy = m.dy, dg = m.dg();
    Vec x = z.head(dx), y = z.tail(dy);
    Mat f = Mat::Zero(dx + dy, dg);
    f.block(0, 0, dx, dy) = m.sigma1(t, x, y);
    f.block(0, dy, dx, 1) = m.h2(t, x, y);
    f.block(dx, 0, dy, dy) = m.sigma2(t, y);
    f.block(dx, dy + 1, dy, 1) = m.h3(t, y);
    return f;
}

Vec big_h(const FilterModel& m, double t, const Vec& z) {
    const int dx = m.dx, dy = m.dy;
    Vec x = z.head(dx), y = z.tail(dy);
    Vec H = Vec::Zero(m.dg());
    H.head(dy) = m.h(t, x, y);
    H[dy + 2] = m.kappa(t, x);
    return H;
}

struct ParticleResult {
    std::vector<double> F_at, I_at; // per checkpoint
    std::vector<double> F_path, I_path; // per obs-grid time (optional)
    bool diverged = false;
};

ParticleResult run_particle(const FilterModel& model, const RoughPath& driver,
                            const std::vector<double>& checkpoints, RngStream s,
                            bool use_level2, bool keep_path,
                            const std::vector<double>& path_times) {
    const int dx = model.dx, dy = model.dy, dg = model.dg();
    ParticleResult res;

    RngStream sx = s.child("x0");
    Vec x0 = model.sample_x0(sx);
    Vec z0(dx + dy);
    z0.head(dx) = x0;
    z0.tail(dy) = model.y0;

    MarkedEventStream n1 = sample_poisson_measure(s.child("n1"), driver.grid(), model.nu1);
    TimeGrid grid = driver.grid().with_times(n1.event_times());
    RoughPath eta = grid.size() == driver.grid().size() ? driver : insert_times(driver, grid);
    MartingaleSample B = sample_brownian(s.child("b"), grid, model.db);

    CoefficientSet cs;
    cs.state_dim = dx + dy;
    cs.b = [&](double t, const Vec& z) {
        Vec out = Vec::Zero(dx + dy);
        out.head(dx) = model.b1_tilde(t, z.head(dx), z.tail(dy));
        return out;
    };
    cs.sigma = [&](double t, const Vec& z) {
        Mat out = Mat::Zero(dx + dy, model.db);
        out.topRows(dx) = model.sigma0(t, z.head(dx), z.tail(dy));
        return out;
    };
    cs.f = [&](double t, const Vec& z) { return rough_coefficient(model, t, z); };
    if (!model.nu1.atoms.empty()) {
        cs.g = [&](double t, const Vec& z, const Vec& u) {
            Vec out = Vec::Zero(dx + dy);
            out.head(dx) = model.f1(t, z.head(dx), u);
            return out;
        };
    }

    ControlledSolution sol = solve_rsde(cs, z0, eta, &B, model.nu1.atoms.empty() ? nullptr : &n1,
                                        use_level2);
    res.diverged = sol.aborted;

    // log-likelihood along the driver: rough integral of H plus the exact
    // compensator part, accumulated cell by cell
    const std::size_t n = grid.size();
    std::vector<double> I(n, 0.0);
    const double fd_eps = 1e-6;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double t = grid[k], dt = grid[k + 1] - grid[k];
        const Vec& z = sol.y.value(k);
        Vec H = big_h(model, t, z);
        Vec de = eta.path().delta(k, k + 1);
        double di = H.dot(de);
        if (use_level2) {
            const Mat& s2 = eta.cell_level2(k);
            if (s2.cwiseAbs().sum() != 0.0) {
                // H'(a,b) = sum_c dH_b/dz_c f(c,a), contracted against the block
                Mat f = rough_coefficient(model, t, z);
                Mat dH(dx + dy, dg); // row c: dH/dz_c
                for (int c = 0; c < dx + dy; ++c) {
                    Vec zp = z;
                    zp[c] += fd_eps;
                    dH.row(c) = ((big_h(model, t, zp) - H) / fd_eps).transpose();
                }
                for (int a = 0; a < dg; ++a)
                    for (int b = 0; b < dg; ++b) {
                        double hp = 0.0;
                        for (int c = 0; c < dx + dy; ++c) hp += dH(c, b) * f(c, a);
                        di += hp * s2(a, b);
                    }
            }
        }
        Vec hv = H.head(dy);
        di -= 0.5 * hv.squaredNorm() * dt;
        // compensator part: (1 - lambda + log lambda) nu2(du) dt
        double comp = 0.0;
        for (const auto& atom : model.nu2.atoms) {
            double lam = model.lambda(t, z.head(dx), atom.first);
            comp += (1.0 - lam + std::log(lam)) * atom.second;
        }
        di += comp * dt;
        I[k + 1] = I[k] + di;
    }

    auto record = [&](double tq, double& Fout, double& Iout) {
        std::size_t idx = grid.index_at(tq);
        const Vec& z = sol.y.value(idx);
        Fout = model.F(z.head(dx), z.tail(dy));
        Iout = I[idx];
    };
    res.F_at.resize(checkpoints.size());
    res.I_at.resize(checkpoints.size());
    for (std::size_t q = 0; q < checkpoints.size(); ++q)
        record(checkpoints[q], res.F_at[q], res.I_at[q]);
    if (keep_path) {
        res.F_path.resize(path_times.size());
        res.I_path.resize(path_times.size());
        for (std::size_t q = 0; q < path_times.size(); ++q)
            record(path_times[q], res.F_path[q], res.I_path[q]);
    }
    return res;
}

FilterRun reduce_particles(const std::vector<ParticleResult>& parts,
                           const std::vector<double>& checkpoints, bool keep_path,
                           const std::vector<double>& path_times) {
    FilterRun run;
    run.checkpoints = checkpoints;
    run.particles = parts.size();
    const std::size_t n = parts.size();
    const std::size_t q = checkpoints.size();
    run.gF.resize(q);
    run.g1.resize(q);
    run.theta.resize(q);
    run.se.resize(q);
    std::vector<double> w(n), fw(n), dev(n);
    for (const auto& p : parts)
        if (p.diverged) ++run.diverged;

    auto ratio_at = [&](auto get_f, auto get_i, double& gF, double& g1, double& theta,
                        double* se) {
        double m = -1e300;
        for (std::size_t j = 0; j < n; ++j)
            if (!parts[j].diverged) m = std::max(m, get_i(j));
        if (m == -1e300) m = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (parts[j].diverged) {
                w[j] = 0.0;
                fw[j] = 0.0;
            } else {
                w[j] = std::exp(get_i(j) - m);
                fw[j] = get_f(j) * w[j];
            }
        }
        double ws = pairwise_sum(w), fws = pairwise_sum(fw);
        if (ws <= 1e-12 * double(n))
            throw std::runtime_error("filter: degenerate normalization (g1 below guard)");
        g1 = std::exp(m) * ws / double(n);
        gF = std::exp(m) * fws / double(n);
        theta = fws / ws;
        if (se) {
            for (std::size_t j = 0; j < n; ++j)
                dev[j] = parts[j].diverged ? 0.0 : sq(w[j] * (get_f(j) - theta));
            *se = std::sqrt(pairwise_sum(dev)) / ws;
        }
    };

    for (std::size_t c = 0; c < q; ++c) {
        ratio_at([&](std::size_t j) { return parts[j].F_at[c]; },
                 [&](std::size_t j) { return parts[j].I_at[c]; }, run.gF[c], run.g1[c],
                 run.theta[c], &run.se[c]);
    }
    if (keep_path) {
        run.grid_times = path_times;
        run.theta_path.resize(path_times.size());
        for (std::size_t c = 0; c < path_times.size(); ++c) {
            double gF, g1;
            ratio_at([&](std::size_t j) { return parts[j].F_path[c]; },
                     [&](std::size_t j) { return parts[j].I_path[c]; }, gF, g1,
                     run.theta_path[c], nullptr);
        }
    }
    return run;
}

FilterRun filter_impl(const FilterModel& model, const RoughPath& driver,
                      std::size_t n_particles, const std::vector<double>& checkpoints,
                      RngStream stream, int threads, bool use_level2, bool keep_path,
                      const std::vector<double>& path_times) {
    if (n_particles < 2) throw std::invalid_argument("filter: need at least 2 particles");
    std::vector<ParticleResult> parts(n_particles);
    RngStream base = stream.child("particle");
    parallel_for(n_particles, threads, [&](std::size_t j) {
        parts[j] = run_particle(model, driver, checkpoints, base.child(j), use_level2, keep_path,
                                path_times);
    });
    FilterRun run = reduce_particles(parts, checkpoints, keep_path, path_times);
    run.seed = stream.key();
    return run;
}

} // namespace

FilterRun robust_filter(const FilterModel& model, const ObservationRealization& obs,
                        std::size_t n_particles, const std::vector<double>& checkpoints,
                        RngStream stream, int threads, bool keep_theta_path) {
    return filter_impl(model, obs.lift, n_particles, checkpoints, stream, threads, true,
                       keep_theta_path, obs.grid.times());
}

FilterRun robust_filter_along(const FilterModel& model, const ObservationRealization& obs,
                              const RoughPath& driver, std::size_t n_particles,
                              const std::vector<double>& checkpoints, RngStream stream,
                              int threads, bool keep_theta_path) {
    return filter_impl(model, driver, n_particles, checkpoints, stream, threads, true,
                       keep_theta_path, obs.grid.times());
}

FilterRun oracle_filter(const FilterModel& model, const ObservationRealization& obs,
                        std::size_t n_particles, const std::vector<double>& checkpoints,
                        RngStream stream, int threads) {
    TimeGrid fine = obs.grid.refined();
    RoughPath driver = ito_lift(obs.G.on_grid(fine));
    return filter_impl(model, driver, n_particles, checkpoints, stream.child("oracle"), threads,
                       false, false, {});
}

} // namespace rpf
