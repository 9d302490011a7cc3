#ifndef RPF_MOMENTS_HPP
#define RPF_MOMENTS_HPP

#include "rpf/control.hpp"
#include "rpf/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace rpf {

// Greedy accumulation times of a control at level alpha over a window.
struct AlphaPartition {
    double alpha = 0.0;
    std::vector<double> times; // interior stopping times t_1 < ... (strictly before the window end)
    std::size_t count = 0;     // N = #{n : t_n < end}
};

AlphaPartition n_alpha(const Control& w, double alpha, IndexWindow window);
AlphaPartition n_alpha(const Control& w, double alpha);

struct InequalityCheck {
    std::string name;
    bool hypothesis_met = true;
    bool holds = true;
    double lhs = 0.0, rhs = 0.0;
    std::string witness;
};

struct NAlphaSuiteReport {
    std::vector<InequalityCheck> checks;
    bool all_hold = true;
    double fitted_comparison_constant = 0.0; // N_alpha / (N_beta + 1) worst case
};

// Three count inequalities: domination (w1 <= C w2 where w2 <= alpha implies
// N_{C alpha}(w1) <= N_alpha(w2)); level comparison (N_alpha <= C'(N_beta + 1)
// for alpha <= beta, C' fitted); subadditivity (N_alpha(w1 + w2) <=
// N_{alpha/2}(w1) + N_{alpha/2}(w2)).
NAlphaSuiteReport n_alpha_inequality_suite(const Control& w1, const Control& w2, double alpha,
                                      double beta, double C);

struct NAlphaBoundReport {
    double rough_norm_value = 0.0;
    std::size_t n_alpha_count = 0;
    double sup_jump_value = 0.0;
    double fitted_constant = 0.0; // norm / ((N+1)^3 (1 + sup jump)^2)
    bool holds_with_fitted = true;
};

// Cubic-count bound on the rough norm: norm <= C (N+1)^3 (1 + sup jump)^2.
NAlphaBoundReport rough_norm_via_nalpha_bound(const RoughPath& rp, double p, double alpha);

struct MomentReport {
    double lambda = 0.0;
    double alpha = 0.0;
    double exp_moment_abs = 0.0;      // E exp(lambda sup_t |V_t - V_0|)
    double exp_moment_onesided = 0.0; // E exp(lambda sup_t (V_t - V_0))
    double bootstrap_se_abs = 0.0;
    double bootstrap_se_onesided = 0.0;
    double fitted_constant = 0.0; // log(moment) / mean((N+1)(1 + sup jump))
    double mean_count_factor = 0.0;
    double sup_jump_value = 0.0;
    std::size_t ensemble = 0;
    std::size_t grid_points = 0;
    bool saturated = false;
    std::string generator;
};

// Sample-mean estimate of the exponential moment of the running supremum, with
// bootstrap standard errors and a fitted bound constant of the form
// exp(C (N_alpha + 1)(1 + sup jump)).
MomentReport empirical_exp_moment(const std::vector<GridPath>& paths, double lambda,
                                  double alpha = 1.0, double p = 2.5,
                                  std::uint64_t bootstrap_seed = 7,
                                  std::size_t bootstrap_reps = 200);

// Scalar Brownian ensemble whose recorded values include the exact maximum of
// each cell (Brownian-bridge reflection sampling), so the grid supremum has no
// discretization bias. Used against the reflection-principle closed form.
std::vector<GridPath> brownian_max_ensemble(RngStream stream, double T, std::size_t cells,
                                            std::size_t n_paths);

// E exp(lambda max_{[0,T]} W) = 2 exp(lambda^2 T / 2) Phi(lambda sqrt(T)).
double brownian_max_exp_moment(double lambda, double T);

} // namespace rpf

#endif
