#ifndef RPF_RSDE_EXPERIMENTS_HPP
#define RPF_RSDE_EXPERIMENTS_HPP

#include "rpf/rsde.hpp"
#include "rpf/time_change.hpp"

#include <cstdint>

namespace rpf {

struct EnsembleSpec {
    std::size_t n_outer = 200;
    std::size_t n_inner = 50;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Two solver routes on the same coarsened grid: the level-2 scheme vs the
// classical one (their difference is exactly the level-2 term). The driver is
// sampled on a fine grid and restricted, so the coarse cell blocks carry the
// sub-cell cross terms.
struct ConsistencyReport {
    std::vector<std::size_t> mesh_cells;   // coarse cell counts, coarser first
    std::vector<double> mean_terminal_gap; // per mesh level
    std::vector<double> mean_sup_gap;
    double gap_ratio = 0.0; // coarser / finer terminal gap
    std::size_t n_outer = 0, n_inner = 0;
    std::size_t aborted = 0;
};

ConsistencyReport consistency_check(const CoefficientSet& coeffs, const Vec& y0, double T,
                                    std::size_t coarse_cells, const MarkMeasure& jump_marks,
                                    const EnsembleSpec& ens);

struct StabilityRow {
    double eps;
    double driver_distance;  // rough distance between base and perturbed driver
    double solution_distance; // ensemble (p,2)-distance between solutions
    double ratio;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    double max_ratio = 0.0;
    bool bounded = true;
};

// Perturbs the driver by eps * smooth bump for eps = base * 2^{-1..-levels};
// same martingale/event substreams feed both routes.
StabilityReport stability_experiment(const CoefficientSet& coeffs, const Vec& y0, double T,
                                     std::size_t cells, double p, double base_eps, int levels,
                                     const EnsembleSpec& ens);

struct SkorokhodConvergenceReport {
    std::vector<double> shift_sizes; // |lambda_n|
    std::vector<double> gaps;        // terminal L2 gap per shift
    bool decreasing = true;
    // deterministic-time counterexample: persistent gap when a martingale jump
    // sits exactly at the approached time
    double counterexample_gap = 0.0;
    std::vector<double> counterexample_gaps; // per n
};

SkorokhodConvergenceReport skorokhod_convergence_experiment(const CoefficientSet& coeffs,
                                                            const Vec& y0, double T,
                                                            std::size_t cells, int n_shifts,
                                                            const EnsembleSpec& ens);

// Deterministic reproduction of the persistent-gap example: a unit martingale
// jump at t0 and driver step moved to t0 - 1/n. Returns the gaps |Y^n_T - Y_T|.
std::vector<double> skorokhod_counterexample_gaps(double t0, double T, double xi,
                                                  const std::vector<int>& ns);

} // namespace rpf

#endif
