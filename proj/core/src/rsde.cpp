#include "rpf/rsde.hpp"

#include <cmath>

namespace rpf {

std::vector<Mat> CoefficientSet::f_jacobian(double t, const Vec& y) const {
    if (df) return df(t, y);
    const int m = static_cast<int>(y.size());
    Mat f0 = f(t, y);
    std::vector<Mat> out(m);
    for (int c = 0; c < m; ++c) {
        Vec yp = y;
        yp[c] += fd_eps;
        out[c] = (f(t, yp) - f0) / fd_eps;
    }
    return out;
}

Vec ControlledSolution::remainder(const RoughPath& rp, std::size_t i, std::size_t j) const {
    const int m = y.dim();
    const int d = static_cast<int>(rough_dim);
    Vec dy = y.delta(i, j);
    Vec dx = rp.path().delta(i, j);
    Vec yp = y_prime.value(i);
    Vec corr = Vec::Zero(m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < d; ++c) corr[r] += yp[r * d + c] * dx[c];
    return dy - corr;
}

std::vector<WindowDiagnostic> remainder_diagnostics(const ControlledSolution& sol,
                                                    const RoughPath& rp, double p,
                                                    int dyadic_levels) {
    std::vector<WindowDiagnostic> out;
    const std::size_t n = sol.y.size();
    for (int lvl = 0; lvl < dyadic_levels; ++lvl) {
        std::size_t pieces = std::size_t(1) << lvl;
        for (std::size_t q = 0; q < pieces; ++q) {
            std::size_t lo = q * (n - 1) / pieces;
            std::size_t hi = (q + 1) * (n - 1) / pieces;
            if (hi <= lo) continue;
            WindowDiagnostic wd{};
            wd.t0 = sol.y.grid()[lo];
            wd.t1 = sol.y.grid()[hi];
            wd.y_pvar = p_variation(sol.y, p, IndexWindow{lo, hi});
            wd.yprime_pvar = p_variation(sol.y_prime, p, IndexWindow{lo, hi});
            double s = partition_supremum(lo, hi, [&](std::size_t i, std::size_t j) {
                return std::pow(sol.remainder(rp, i, j).norm(), p / 2.0);
            });
            wd.remainder_var = std::pow(s, 2.0 / p);
            out.push_back(wd);
        }
    }
    return out;
}

GridPath rough_stochastic_integral(const GridPath& y, const GridPath& y_prime,
                                   const RoughPath& rp, IndexWindow window) {
    if (!(y.grid() == rp.grid()))
        throw std::invalid_argument("rough_stochastic_integral: grid mismatch");
    const int d = rp.dim();
    if (y.dim() % d != 0)
        throw std::invalid_argument("rough_stochastic_integral: integrand dim not a multiple of driver dim");
    const int m = y.dim() / d;
    if (y_prime.dim() != m * d * d)
        throw std::invalid_argument("rough_stochastic_integral: derivative dim mismatch");
    const std::size_t n = y.size();
    std::vector<Vec> vals(n, Vec::Zero(m));
    Vec acc = Vec::Zero(m);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (k >= window.lo && k < window.hi) {
            Vec dx = rp.path().delta(k, k + 1);
            const Mat& s2 = rp.cell_level2(k);
            const Vec& yv = y.value(k);
            const Vec& ypv = y_prime.value(k);
            for (int r = 0; r < m; ++r) {
                double z = 0.0;
                for (int a = 0; a < d; ++a) z += yv[r * d + a] * dx[a];
                for (int a = 0; a < d; ++a)
                    for (int bb = 0; bb < d; ++bb) z += ypv[(r * d + a) * d + bb] * s2(a, bb);
                acc[r] += z;
            }
        }
        vals[k + 1] = acc;
    }
    return GridPath(y.grid(), std::move(vals));
}

GridPath rough_stochastic_integral(const GridPath& y, const GridPath& y_prime,
                                   const RoughPath& rp) {
    return rough_stochastic_integral(y, y_prime, rp, IndexWindow{0, rp.size() - 1});
}

namespace {

ControlledSolution solve_impl(const CoefficientSet& coeffs, const Vec& y0, const TimeGrid& grid,
                              const GridPath& x_path, const std::vector<Mat>* level2,
                              const MartingaleSample* M, const MarkedEventStream* events) {
    const int m = static_cast<int>(y0.size());
    const int d = x_path.dim();
    const std::size_t n = grid.size();
    if (M && !(M->path.grid() == grid))
        throw std::invalid_argument("solve_rsde: martingale grid mismatch");

    std::vector<Vec> yv(n), ypv(n);
    ControlledSolution sol;
    sol.rough_dim = static_cast<std::size_t>(d);
    Vec y = y0;
    auto flatten_f = [&](double t, const Vec& yy) {
        Mat fm = coeffs.f ? coeffs.f(t, yy) : Mat::Zero(m, d);
        Vec out(m * d);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < d; ++c) out[r * d + c] = fm(r, c);
        return out;
    };
    yv[0] = y;
    ypv[0] = flatten_f(grid[0], y);
    std::size_t e = 0;
    const std::vector<MarkedEvent>* evts = events ? &events->events : nullptr;
    bool aborted = false;
    double abort_time = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double t0 = grid[k], t1 = grid[k + 1];
        const double dt = t1 - t0;
        if (!aborted) {
            Vec upd = Vec::Zero(m);
            if (coeffs.b) upd += coeffs.b(t0, y) * dt;
            if (coeffs.sigma && M) upd += coeffs.sigma(t0, y) * M->path.delta(k, k + 1);
            Mat fm = coeffs.f ? coeffs.f(t0, y) : Mat();
            if (coeffs.f) {
                upd += fm * x_path.delta(k, k + 1);
                if (level2) {
                    const Mat& s2 = (*level2)[k];
                    if (s2.cwiseAbs().sum() != 0.0) {
                        std::vector<Mat> J = coeffs.f_jacobian(t0, y);
                        // [Df f S]_i = d_c f_{i b} f_{c a} S_{a b}
                        Mat Q = fm * s2; // Q(c, b) = sum_a f(c, a) S(a, b)
                        for (int i = 0; i < m; ++i) {
                            double z = 0.0;
                            for (int c = 0; c < m; ++c) z += J[c].row(i).dot(Q.row(c));
                            upd[i] += z;
                        }
                    }
                }
            }
            if (events && coeffs.g) {
                // compensator over the cell, left-point quadrature, atom-exact
                if (!events->nu.atoms.empty()) {
                    Vec comp = Vec::Zero(m);
                    for (const auto& atom : events->nu.atoms) {
                        double lam =
                            events->intensity ? events->intensity->lambda(t0, y, atom.first) : 1.0;
                        comp += coeffs.g(t0, y, atom.first) * (lam * atom.second);
                    }
                    upd -= comp * dt;
                }
                while (e < evts->size() && (*evts)[e].time <= t1 + 1e-12) {
                    if ((*evts)[e].time > t0 + 1e-12 && (*evts)[e].kept)
                        upd += coeffs.g((*evts)[e].time, y, (*evts)[e].mark);
                    ++e;
                }
            }
            y += upd;
            if (!y.allFinite() || y.norm() > kDivergenceGuard) {
                aborted = true;
                abort_time = t1;
            }
        }
        yv[k + 1] = y;
        ypv[k + 1] = aborted ? ypv[k] : flatten_f(t1, y);
    }
    sol.y = GridPath(grid, std::move(yv));
    sol.y_prime = GridPath(grid, std::move(ypv));
    sol.aborted = aborted;
    sol.abort_time = abort_time;
    return sol;
}

} // namespace

ControlledSolution solve_rsde(const CoefficientSet& coeffs, const Vec& y0, const RoughPath& rp,
                              const MartingaleSample* M, const MarkedEventStream* events,
                              bool use_level2) {
    return solve_impl(coeffs, y0, rp.grid(), rp.path(), use_level2 ? &rp.level2() : nullptr, M,
                      events);
}

GridPath solve_doubly_sde(const CoefficientSet& coeffs, const Vec& y0, const GridPath& x_path,
                          const MartingaleSample* M, const MarkedEventStream* events) {
    return solve_impl(coeffs, y0, x_path.grid(), x_path, nullptr, M, events).y;
}

} // namespace rpf
