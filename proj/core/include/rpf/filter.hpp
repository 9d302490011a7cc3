#ifndef RPF_FILTER_HPP
#define RPF_FILTER_HPP

#include "rpf/moments.hpp"
#include "rpf/noise.hpp"
#include "rpf/rsde.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace rpf {

// Correlated signal/observation model with finite-activity jumps. The signal X
// couples into the observation through the drift b2, the correlation sigma1 and
// the jump intensity lambda(t, x, u) = exp(kappa(t,x) gamma(t,u)). Jump
// coefficients factorize: f2 = h2(t,x,y) g2(t,u), f3 = h3(t,y) g3(t,u).
struct FilterModel {
    std::string name;
    int dx = 1, dy = 1, db = 1;
    bool outside_assumptions = false;
    bool additive = false; // sigma2 constant and f3 state-free (split mode valid)

    std::function<Vec(double, const Vec&, const Vec&)> b1;     // (t,x,y) -> dx
    std::function<Mat(double, const Vec&, const Vec&)> sigma0; // dx x db
    std::function<Mat(double, const Vec&, const Vec&)> sigma1; // dx x dy
    std::function<Vec(double, const Vec&, const Vec&)> b2;     // (t,x,y) -> dy
    std::function<Mat(double, const Vec&)> sigma2;             // (t,y) -> dy x dy, invertible
    std::function<Vec(double, const Vec&, const Vec&)> h2;     // (t,x,y) -> dx
    std::function<double(double, const Vec&)> g2;              // (t,u)
    std::function<Vec(double, const Vec&)> h3;                 // (t,y) -> dy
    std::function<double(double, const Vec&)> g3;              // (t,u)
    std::function<double(double, const Vec&)> kappa;           // (t,x)
    std::function<double(double, const Vec&)> gamma_factor;    // (t,u)
    std::function<Vec(double, const Vec&, const Vec&)> f1;     // (t,x,u) -> dx
    MarkMeasure nu1, nu2;
    double lambda_min = 1.0, lambda_max = 1.0;

    std::function<Vec(RngStream&)> sample_x0;
    Vec y0;
    std::function<double(const Vec&, const Vec&)> F; // test functional F(x,y)
    double F_bound = 1.0;

    int dg() const { return dy + 3; }
    double lambda(double t, const Vec& x, const Vec& u) const;
    // h = sigma2^{-1} (b2 + sum_j h3 g3(u_j) (1 - lambda(u_j)) w_j)
    Vec h(double t, const Vec& x, const Vec& y) const;
    // b1 - sigma1 h - h2 sum_j g2(u_j)(1 - lambda(u_j)) w_j
    Vec b1_tilde(double t, const Vec& x, const Vec& y) const;
};

FilterModel preset_model(const std::string& name);
std::vector<std::string> preset_names();

// Observation simulated under the reference measure: the (dy+3)-block driver
// (Brownian part, compensated g2/g3/gamma jump integrals), its lift, the raw
// event stream and the reconstructed observation path Y.
struct ObservationRealization {
    TimeGrid grid;
    GridPath G;
    RoughPath lift;
    MarkedEventStream events;
    GridPath Y;
    MartingaleSample Wtilde;
};

ObservationRealization simulate_observation(const FilterModel& model, RngStream stream,
                                            const TimeGrid& base_grid);

struct FilterRun {
    std::vector<double> checkpoints;
    std::vector<double> gF, g1, theta, se;
    std::size_t particles = 0;
    std::size_t diverged = 0;
    std::uint64_t seed = 0;
    // full-resolution conditional-mean path (same grid as the observation)
    std::vector<double> theta_path;
    std::vector<double> grid_times;
};

// Particle evaluation of the likelihood-weighted mean along the lifted
// observation: per particle, the driven pair (X, Y), the rough integral part of
// the log-likelihood and its compensator part; ratio with delta-method errors.
FilterRun robust_filter(const FilterModel& model, const ObservationRealization& obs,
                        std::size_t n_particles, const std::vector<double>& checkpoints,
                        RngStream stream, int threads = 1, bool keep_theta_path = false);

// Classical route: once-refined grid, plain Euler consumption of the fixed
// observation driver, left-point Ito quadrature of the log-likelihood,
// independent particle substreams.
FilterRun oracle_filter(const FilterModel& model, const ObservationRealization& obs,
                        std::size_t n_particles, const std::vector<double>& checkpoints,
                        RngStream stream, int threads = 1);

// As robust_filter but along an arbitrary driver lift on the observation grid.
FilterRun robust_filter_along(const FilterModel& model, const ObservationRealization& obs,
                              const RoughPath& driver, std::size_t n_particles,
                              const std::vector<double>& checkpoints, RngStream stream,
                              int threads = 1, bool keep_theta_path = false);

} // namespace rpf

#endif
