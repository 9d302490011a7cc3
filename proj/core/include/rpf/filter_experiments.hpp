#ifndef RPF_FILTER_EXPERIMENTS_HPP
#define RPF_FILTER_EXPERIMENTS_HPP

#include "rpf/filter.hpp"
#include "rpf/time_change.hpp"

namespace rpf {

struct RobustnessRow {
    double eps;
    double driver_distance;   // p-variation distance between lifts
    double sup_dtheta;        // sup over grid times of |theta - theta_k|
    double dtheta_pvar;       // p-variation of the theta difference path
    double ratio;             // sup_dtheta / driver_distance
};

struct RobustnessReport {
    std::vector<RobustnessRow> rows;
    bool decreasing = true;   // sup_dtheta decreasing in k
    double ratio_band = 0.0;  // max ratio / min ratio across k
};

// Additive smooth bump of amplitude base * 2^{-k} on the Brownian block of the
// observation driver; common particle randomness across all runs.
RobustnessReport robustness_pvar(const FilterModel& model, const ObservationRealization& obs,
                                 double base_eps, int levels, std::size_t n_particles, double p,
                                 RngStream stream, int threads = 1);

struct ModelUncertaintyRow {
    std::size_t coarse_cells;
    double lm_dtheta;     // L^m norm of sup_checkpoint |theta_A - theta_B|
    double lm_driver;     // L^{m+1} norm of the driver p-variation distance
    double ratio;
};

struct ModelUncertaintyReport {
    std::vector<ModelUncertaintyRow> rows;
    bool skipped = false; // exponential-moment precondition failed
    double precondition_moment = 0.0;
    bool precondition_saturated = false;
};

// Coupled drivers: the fine observation lift vs its dyadic coarsening at two
// consecutive levels. The exponential-moment precondition
// E exp(beta (N_alpha + 1)(1 + sup jump)) is estimated first; failure skips.
ModelUncertaintyReport model_uncertainty_lm(const FilterModel& model, double T,
                                            std::size_t fine_cells,
                                            std::vector<std::size_t> coarse_levels, int m,
                                            std::size_t n_outer, std::size_t n_particles,
                                            double p, double alpha, double beta,
                                            RngStream stream, int threads = 1);

struct SplitRow {
    double cutoff;
    std::size_t detected = 0;
    std::size_t true_events = 0;
    std::size_t true_above_cutoff = 0;
    std::size_t matched = 0; // detected cells containing a true event
    double recall = 1.0;     // matched / true_above_cutoff
};

struct SplitResult {
    GridPath y_c, y_d;        // at the finest cutoff
    RoughPath joint_lift;     // lift of the stacked (y_c, y_d) path
    std::vector<SplitRow> rows;
};

// Threshold reconstruction of the purely discontinuous observation part for
// additive-noise models; ground truth from the simulated event stream.
SplitResult split_observation(const FilterModel& model, const ObservationRealization& obs,
                              const std::vector<double>& cutoffs);

} // namespace rpf

#endif
