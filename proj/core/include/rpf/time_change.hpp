#ifndef RPF_TIME_CHANGE_HPP
#define RPF_TIME_CHANGE_HPP

#include "rpf/rough_path.hpp"

#include <string>

namespace rpf {

// Strictly increasing piecewise-linear bijection of [0, T] given by knot pairs
// (t, lambda(t)); endpoints (0,0) and (T,T) are implicit.
class TimeChange {
public:
    TimeChange(double T, std::vector<std::pair<double, double>> knots = {});
    static TimeChange identity(double T) { return TimeChange(T); }

    double horizon() const { return T_; }
    double operator()(double t) const;
    double inverse(double s) const;
    // sup_t |lambda(t) - t|, attained at a knot.
    double sup_deviation() const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    double T_;
    std::vector<std::pair<double, double>> knots_; // includes endpoints
};

// Reparametrized rough path: grid times mapped through the inverse, values and
// cell blocks unchanged. Variation norms are invariant.
RoughPath apply_time_change(const RoughPath& rp, const TimeChange& lambda);

struct SkorokhodSearch {
    double max_shift = 0.5;         // only match jumps within this time window
    bool full_matching = true;      // monotone matching when jump counts agree
    bool pairwise_matching = true;  // all single-pair matchings
};

struct SkorokhodResult {
    double value = 0.0;          // certified upper bound
    double identity_value = 0.0; // score of the identity reparametrization
    std::size_t candidates = 0;
    std::string family;
    TimeChange best;
};

// min over a finite candidate family of max(|lambda|, dist_p(a o lambda, b)).
// Upper bound on the true infimum over all increasing bijections.
SkorokhodResult skorokhod_distance_upper(const RoughPath& a, const RoughPath& b, double p,
                                         const SkorokhodSearch& search = {});

} // namespace rpf

#endif
