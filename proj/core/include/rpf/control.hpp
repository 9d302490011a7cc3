#ifndef RPF_CONTROL_HPP
#define RPF_CONTROL_HPP

#include "rpf/rough_path.hpp"

#include <functional>

namespace rpf {

// Superadditive nonnegative two-parameter function on grid-index pairs.
struct Control {
    TimeGrid grid;
    std::function<double(std::size_t, std::size_t)> w; // i <= j
    bool regular_from_inside = true;

    double operator()(std::size_t i, std::size_t j) const { return w(i, j); }
};

Control linear_control(const TimeGrid& grid);                        // w = t_j - t_i
Control jump_control(const TimeGrid& grid, double tau, double c);    // c * 1{i < tau <= j}
// phi(sum of cell masses) with phi(x) = x^r, r >= 1: superadditive by convexity.
Control power_sum_control(const TimeGrid& grid, std::vector<double> cell_mass, double r);
Control sum_control(const Control& w1, const Control& w2);
Control scaled_control(const Control& w, double c);
// w(i,j) = p-variation norm of the path over [i,j] raised to p (a control).
Control pvar_control(const GridPath& path, double p);
// w(i,j) = rough_norm^p over the half-open window [t_i, t_j).
Control rough_norm_control(const RoughPath& rp, double p);

// Checks w(i,k) + w(k,j) <= w(i,j) (up to tol) on all grid triples; returns the
// worst signed violation (positive = violated).
double superadditivity_defect(const Control& w, double tol = 0.0);

} // namespace rpf

#endif
