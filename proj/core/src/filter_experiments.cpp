#include "rpf/filter_experiments.hpp"

#include "rpf/control.hpp"
#include "rpf/parallel.hpp"

#include <cmath>

namespace rpf {

RobustnessReport robustness_pvar(const FilterModel& model, const ObservationRealization& obs,
                                 double base_eps, int levels, std::size_t n_particles, double p,
                                 RngStream stream, int threads) {
    RobustnessReport rep;
    const double T = obs.grid.horizon();
    std::vector<double> cps = {T};
    FilterRun base = robust_filter(model, obs, n_particles, cps, stream, threads, true);

    double rmin = 1e300, rmax = 0.0;
    double prev_sup = 1e300;
    for (int k = 1; k <= levels; ++k) {
        const double eps = base_eps * std::pow(2.0, -k);
        std::vector<Vec> gv = obs.G.values();
        for (std::size_t i = 0; i < obs.grid.size(); ++i) {
            double bump = std::sin(3.14159265358979323846 * obs.grid[i] / T);
            for (int c = 0; c < model.dy; ++c) gv[i][c] += eps * bump;
        }
        RoughPath lift_k = ito_lift(GridPath(obs.grid, std::move(gv)));
        FilterRun run_k =
            robust_filter_along(model, obs, lift_k, n_particles, cps, stream, threads, true);

        RobustnessRow row{};
        row.eps = eps;
        row.driver_distance = rough_distance(obs.lift, lift_k, p);
        std::vector<Vec> dth(obs.grid.size());
        for (std::size_t i = 0; i < obs.grid.size(); ++i) {
            double d = base.theta_path[i] - run_k.theta_path[i];
            row.sup_dtheta = std::max(row.sup_dtheta, std::abs(d));
            dth[i] = Vec::Constant(1, d);
        }
        row.dtheta_pvar = p_variation(GridPath(obs.grid, std::move(dth)), p);
        row.ratio = row.driver_distance > 0.0 ? row.sup_dtheta / row.driver_distance : 0.0;
        if (row.sup_dtheta > prev_sup * (1.0 + 1e-9)) rep.decreasing = false;
        prev_sup = row.sup_dtheta;
        rmin = std::min(rmin, row.ratio);
        rmax = std::max(rmax, row.ratio);
        rep.rows.push_back(row);
    }
    rep.ratio_band = rmin > 0.0 ? rmax / rmin : 1e300;
    return rep;
}

ModelUncertaintyReport model_uncertainty_lm(const FilterModel& model, double T,
                                            std::size_t fine_cells,
                                            std::vector<std::size_t> coarse_levels, int m,
                                            std::size_t n_outer, std::size_t n_particles,
                                            double p, double alpha, double beta,
                                            RngStream stream, int threads) {
    ModelUncertaintyReport rep;
    const TimeGrid base = TimeGrid::uniform(T, fine_cells);
    std::vector<ObservationRealization> obses;
    obses.reserve(n_outer);
    for (std::size_t i = 0; i < n_outer; ++i)
        obses.push_back(simulate_observation(model, stream.child("outer").child(i), base));

    // precondition: exponential moment of beta (N_alpha + 1)(1 + sup jump) over
    // the coarsest driver family
    {
        std::vector<double> vals(n_outer);
        const std::size_t pre_cells = coarse_levels.empty() ? 16 : coarse_levels.front();
        for (std::size_t i = 0; i < n_outer; ++i) {
            TimeGrid cg = TimeGrid::uniform(T, pre_cells).with_times(obses[i].events.event_times());
            RoughPath coarse = restrict_rough_path(obses[i].lift, cg);
            Control w = rough_norm_control(coarse, p);
            double N = double(n_alpha(w, alpha).count);
            double x = beta * (N + 1.0) * (1.0 + sup_jump(coarse));
            if (x > 690.0) rep.precondition_saturated = true;
            vals[i] = std::exp(std::min(x, 690.0));
        }
        rep.precondition_moment = pairwise_sum(vals) / double(n_outer);
        if (rep.precondition_saturated) {
            rep.skipped = true;
            return rep;
        }
    }

    std::vector<double> cps;
    for (int q = 1; q <= 5; ++q) cps.push_back(T * double(q) / 5.0);
    for (std::size_t cc : coarse_levels) {
        std::vector<double> dth(n_outer), dd(n_outer);
        for (std::size_t i = 0; i < n_outer; ++i) {
            const auto& obs = obses[i];
            TimeGrid cg = TimeGrid::uniform(T, cc).with_times(obs.events.event_times());
            RoughPath coarse = restrict_rough_path(obs.lift, cg);
            RngStream ps = stream.child("particles").child(i);
            FilterRun a = robust_filter(model, obs, n_particles, cps, ps, threads, false);
            FilterRun b =
                robust_filter_along(model, obs, coarse, n_particles, cps, ps, threads, false);
            double s = 0.0;
            for (std::size_t q = 0; q < cps.size(); ++q)
                s = std::max(s, std::abs(a.theta[q] - b.theta[q]));
            dth[i] = std::pow(s, double(m));
            RoughPath expanded = insert_times(coarse, obs.grid);
            dd[i] = std::pow(rough_distance(obs.lift, expanded, p), double(m + 1));
        }
        ModelUncertaintyRow row{};
        row.coarse_cells = cc;
        row.lm_dtheta = std::pow(pairwise_sum(dth) / double(n_outer), 1.0 / double(m));
        row.lm_driver = std::pow(pairwise_sum(dd) / double(n_outer), 1.0 / double(m + 1));
        row.ratio = row.lm_driver > 0.0 ? row.lm_dtheta / row.lm_driver : 0.0;
        rep.rows.push_back(row);
    }
    return rep;
}

SplitResult split_observation(const FilterModel& model, const ObservationRealization& obs,
                              const std::vector<double>& cutoffs) {
    if (!model.additive)
        throw std::invalid_argument("split_observation: model is not in additive mode");
    SplitResult res;
    const TimeGrid& g = obs.grid;
    const std::size_t n = g.size();
    const int dy = model.dy;

    std::vector<double> truth_times;
    std::vector<double> truth_sizes;
    for (const auto& e : obs.events.events)
        if (e.kept) {
            truth_times.push_back(e.time);
            truth_sizes.push_back(std::abs(model.g3(e.time, e.mark)));
        }

    for (double cutoff : cutoffs) {
        // compensator drift of the retained jump sizes
        double comp = 0.0;
        for (const auto& atom : model.nu2.atoms) {
            double gv = model.g3(0.0, atom.first);
            if (std::abs(gv) >= cutoff) comp += gv * atom.second;
        }
        std::vector<Vec> yd(n, Vec::Zero(dy));
        SplitRow row{};
        row.cutoff = cutoff;
        row.true_events = truth_times.size();
        for (double sz : truth_sizes)
            if (sz >= cutoff) ++row.true_above_cutoff;
        Vec acc = Vec::Zero(dy);
        std::size_t ti = 0;
        for (std::size_t k = 1; k < n; ++k) {
            Vec d = obs.Y.delta(k - 1, k);
            bool detected = d.norm() >= cutoff;
            if (detected) {
                acc += d;
                ++row.detected;
            }
            // a true event lies in this cell?
            bool has_true = false;
            while (ti < truth_times.size() && truth_times[ti] <= g[k] + 1e-12) {
                if (truth_times[ti] > g[k - 1] + 1e-12 && truth_sizes[ti] >= cutoff)
                    has_true = true;
                ++ti;
            }
            if (detected && has_true) ++row.matched;
            yd[k] = acc - Vec::Constant(dy, comp * g[k]);
        }
        row.recall = row.true_above_cutoff > 0
                         ? double(row.matched) / double(row.true_above_cutoff)
                         : 1.0;
        res.rows.push_back(row);
        GridPath y_d(g, yd);
        res.y_d = y_d;
        res.y_c = obs.Y - y_d;
    }
    // joint lift of the stacked pair at the finest cutoff
    std::vector<Vec> joint(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vec v(2 * dy);
        v.head(dy) = res.y_c.value(k);
        v.tail(dy) = res.y_d.value(k);
        joint[k] = v;
    }
    res.joint_lift = ito_lift(GridPath(g, std::move(joint)));
    return res;
}

} // namespace rpf
