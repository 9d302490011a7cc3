#include "rpf/rsde_experiments.hpp"

#include "rpf/parallel.hpp"

#include <cmath>

namespace rpf {

namespace {

double diff_pvar(const GridPath& a, const GridPath& b, double p) {
    GridPath d = a - b;
    return p_variation(d, p);
}

} // namespace

ConsistencyReport consistency_check(const CoefficientSet& coeffs, const Vec& y0, double T,
                                    std::size_t coarse_cells, const MarkMeasure& jump_marks,
                                    const EnsembleSpec& ens) {
    ConsistencyReport rep;
    rep.mesh_cells = {coarse_cells, 2 * coarse_cells};
    rep.n_outer = ens.n_outer;
    rep.n_inner = ens.n_inner;
    const std::size_t fine_cells = 4 * coarse_cells;
    const int d = static_cast<int>(coeffs.f(0.0, y0).cols());
    const int dM = coeffs.sigma ? static_cast<int>(coeffs.sigma(0.0, y0).cols()) : 0;
    const TimeGrid fine = TimeGrid::uniform(T, fine_cells);
    RngStream root(ens.seed);

    const std::size_t total = ens.n_outer * ens.n_inner;
    std::vector<double> gapT0(total), gapT1(total), sup0(total), sup1(total);
    std::vector<double> aborted(total, 0.0);

    parallel_for(ens.n_outer, ens.threads, [&](std::size_t i) {
        RngStream so = root.child("consistency").child(i);
        MartingaleSample Xs = sample_brownian(so.child("driver"), fine, d);
        for (std::size_t j = 0; j < ens.n_inner; ++j) {
            RngStream sj = so.child("inner").child(j);
            MarkedEventStream events = sample_poisson_measure(sj.child("events"), fine, jump_marks);
            TimeGrid grid_f = fine.with_times(events.event_times());
            GridPath Xf = Xs.path.on_grid(grid_f);
            RoughPath rp_f = ito_lift(Xf);
            MartingaleSample M{GridPath::zero(grid_f, std::max(dM, 1)),
                               GridPath::zero(grid_f, std::max(dM, 1))};
            if (dM > 0) M = sample_brownian(sj.child("mart"), grid_f, dM);
            const std::size_t slot = i * ens.n_inner + j;
            for (int lvl = 0; lvl < 2; ++lvl) {
                TimeGrid grid_c =
                    TimeGrid::uniform(T, rep.mesh_cells[lvl]).with_times(events.event_times());
                RoughPath rp_c = restrict_rough_path(rp_f, grid_c);
                MartingaleSample Mc{M.path.restrict(grid_c), M.bracket.restrict(grid_c)};
                ControlledSolution a =
                    solve_rsde(coeffs, y0, rp_c, dM > 0 ? &Mc : nullptr, &events, true);
                GridPath b =
                    solve_doubly_sde(coeffs, y0, rp_c.path(), dM > 0 ? &Mc : nullptr, &events);
                if (a.aborted) aborted[slot] = 1.0;
                double sup = 0.0;
                for (std::size_t k = 0; k < grid_c.size(); ++k)
                    sup = std::max(sup, (a.y.value(k) - b.value(k)).norm());
                double gt = (a.y.value(grid_c.size() - 1) - b.value(grid_c.size() - 1)).norm();
                (lvl == 0 ? gapT0 : gapT1)[slot] = gt;
                (lvl == 0 ? sup0 : sup1)[slot] = sup;
            }
        }
    });

    rep.mean_terminal_gap = {pairwise_sum(gapT0) / double(total), pairwise_sum(gapT1) / double(total)};
    rep.mean_sup_gap = {pairwise_sum(sup0) / double(total), pairwise_sum(sup1) / double(total)};
    rep.aborted = static_cast<std::size_t>(pairwise_sum(aborted));
    rep.gap_ratio = rep.mean_terminal_gap[1] > 0.0
                        ? rep.mean_terminal_gap[0] / rep.mean_terminal_gap[1]
                        : (rep.mean_terminal_gap[0] == 0.0 ? 1.0 : 1e300);
    return rep;
}

StabilityReport stability_experiment(const CoefficientSet& coeffs, const Vec& y0, double T,
                                     std::size_t cells, double p, double base_eps, int levels,
                                     const EnsembleSpec& ens) {
    StabilityReport rep;
    const int d = static_cast<int>(coeffs.f(0.0, y0).cols());
    const int dM = coeffs.sigma ? static_cast<int>(coeffs.sigma(0.0, y0).cols()) : 0;
    const TimeGrid grid = TimeGrid::uniform(T, cells);
    RngStream root(ens.seed);
    MartingaleSample Xs = sample_brownian(root.child("stability").child("driver"), grid, d);
    RoughPath rp = ito_lift(Xs.path);

    for (int k = 1; k <= levels; ++k) {
        const double eps = base_eps * std::pow(2.0, -k);
        std::vector<Vec> vals = Xs.path.values();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            double bump = std::sin(3.14159265358979323846 * grid[i] / T);
            for (int c = 0; c < d; ++c) vals[i][c] += eps * bump;
        }
        RoughPath rp_eps = ito_lift(GridPath(grid, std::move(vals)));
        double driver_dist = rough_distance(rp, rp_eps, p);

        std::vector<double> sq(ens.n_inner);
        parallel_for(ens.n_inner, ens.threads, [&](std::size_t j) {
            RngStream sj = root.child("stability").child("inner").child(j);
            MartingaleSample M{GridPath::zero(grid, std::max(dM, 1)),
                               GridPath::zero(grid, std::max(dM, 1))};
            if (dM > 0) M = sample_brownian(sj, grid, dM);
            ControlledSolution a = solve_rsde(coeffs, y0, rp, dM > 0 ? &M : nullptr, nullptr, true);
            ControlledSolution b =
                solve_rsde(coeffs, y0, rp_eps, dM > 0 ? &M : nullptr, nullptr, true);
            double v = diff_pvar(a.y, b.y, p);
            sq[j] = v * v;
        });
        double sol_dist = std::sqrt(pairwise_sum(sq) / double(ens.n_inner));
        StabilityRow row{eps, driver_dist, sol_dist,
                         driver_dist > 0.0 ? sol_dist / driver_dist : 0.0};
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        rep.rows.push_back(row);
    }
    rep.bounded = std::isfinite(rep.max_ratio);
    return rep;
}

SkorokhodConvergenceReport skorokhod_convergence_experiment(const CoefficientSet& coeffs,
                                                            const Vec& y0, double T,
                                                            std::size_t cells, int n_shifts,
                                                            const EnsembleSpec& ens) {
    SkorokhodConvergenceReport rep;
    const int d = static_cast<int>(coeffs.f(0.0, y0).cols());
    const int dM = coeffs.sigma ? static_cast<int>(coeffs.sigma(0.0, y0).cols()) : 0;
    const TimeGrid grid = TimeGrid::uniform(T, cells);
    RngStream root(ens.seed);

    std::vector<std::vector<double>> sq(n_shifts, std::vector<double>(ens.n_inner, 0.0));
    parallel_for(ens.n_inner, ens.threads, [&](std::size_t j) {
        RngStream sj = root.child("skorokhod").child(j);
        MartingaleSample Xs = sample_brownian(sj.child("driver"), grid, d);
        RoughPath rp = ito_lift(Xs.path);
        MartingaleSample M{GridPath::zero(grid, std::max(dM, 1)),
                           GridPath::zero(grid, std::max(dM, 1))};
        if (dM > 0) M = sample_brownian(sj.child("mart"), grid, dM);
        ControlledSolution base = solve_rsde(coeffs, y0, rp, dM > 0 ? &M : nullptr, nullptr, true);
        Vec yT = base.y.value(grid.size() - 1);
        for (int n = 1; n <= n_shifts; ++n) {
            double dev = T * std::pow(2.0, -n);
            TimeChange lam(T, {{T / 2.0, T / 2.0 - dev * (1.0 - 1e-9)}});
            RoughPath shifted = apply_time_change(rp, lam);
            TimeGrid uni = shifted.grid().merged_with(grid);
            RoughPath rp_n = insert_times(shifted, uni);
            MartingaleSample Mu{M.path.on_grid(uni), M.bracket.on_grid(uni)};
            ControlledSolution yn =
                solve_rsde(coeffs, y0, rp_n, dM > 0 ? &Mu : nullptr, nullptr, true);
            Vec ynT = yn.y.value(uni.size() - 1);
            sq[n - 1][j] = (ynT - yT).squaredNorm();
        }
    });
    for (int n = 1; n <= n_shifts; ++n) {
        rep.shift_sizes.push_back(T * std::pow(2.0, -n) * (1.0 - 1e-9));
        rep.gaps.push_back(std::sqrt(pairwise_sum(sq[n - 1]) / double(ens.n_inner)));
    }
    for (std::size_t k = 1; k < rep.gaps.size(); ++k)
        if (rep.gaps[k] > rep.gaps[k - 1]) rep.decreasing = false;

    std::vector<int> ns = {4, 8, 16, 32, 64};
    rep.counterexample_gaps = skorokhod_counterexample_gaps(T / 2.0, T, 1.0, ns);
    rep.counterexample_gap = rep.counterexample_gaps.back();
    return rep;
}

std::vector<double> skorokhod_counterexample_gaps(double t0, double T, double xi,
                                                  const std::vector<int>& ns) {
    // dY = Y_- dM + dX with M = xi 1_{[t0,T]}: a driver step at t0 gives Y_T = 1,
    // a step at t0 - 1/n gives Y_T = 1 + xi for every n.
    CoefficientSet cs;
    cs.state_dim = 1;
    cs.sigma = [](double, const Vec& y) { return Mat::Constant(1, 1, y[0]); };
    cs.f = [](double, const Vec&) { return Mat::Constant(1, 1, 1.0); };
    Vec y0 = Vec::Zero(1);

    auto solve_with_step_at = [&](double step_time) {
        std::vector<double> ts = {0.0, step_time, t0, T};
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        TimeGrid g(ts);
        std::vector<Vec> xv(g.size()), mv(g.size()), bv(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            xv[i] = Vec::Constant(1, g[i] >= step_time ? 1.0 : 0.0);
            mv[i] = Vec::Constant(1, g[i] >= t0 ? xi : 0.0);
            bv[i] = Vec::Constant(1, g[i] >= t0 ? xi * xi : 0.0);
        }
        MartingaleSample M{GridPath(g, mv), GridPath(g, bv)};
        RoughPath rp = ito_lift(GridPath(g, xv));
        ControlledSolution sol = solve_rsde(cs, y0, rp, &M, nullptr, true);
        return sol.y.value(g.size() - 1)[0];
    };

    const double yT = solve_with_step_at(t0);
    std::vector<double> gaps;
    gaps.reserve(ns.size());
    for (int n : ns) gaps.push_back(std::abs(solve_with_step_at(t0 - 1.0 / n) - yT));
    return gaps;
}

} // namespace rpf
