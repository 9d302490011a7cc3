#ifndef RPF_P_VARIATION_HPP
#define RPF_P_VARIATION_HPP

#include "rpf/path.hpp"

#include <functional>

namespace rpf {

enum class Closure { Closed, HalfOpen };

struct IndexWindow {
    std::size_t lo = 0;
    std::size_t hi = 0; // inclusive grid index
};

// sup over partitions lo = u_0 < ... < u_m = hi of sum_k weight(u_{k-1}, u_k),
// by dynamic programming over grid indices. weight must vanish on the diagonal.
// Ties are broken toward fewer partition points.
double partition_supremum(std::size_t lo, std::size_t hi,
                          const std::function<double(std::size_t, std::size_t)>& weight);

// p-variation norm (sum of |increment|^p, then ^(1/p)) of a grid path over a window.
// HalfOpen drops the terminal jump (limit from inside).
double p_variation(const GridPath& path, double p, IndexWindow window,
                   Closure closure = Closure::Closed);
double p_variation(const GridPath& path, double p);

} // namespace rpf

#endif
