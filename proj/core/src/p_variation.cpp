#include "rpf/p_variation.hpp"

#include <cmath>

namespace rpf {

double partition_supremum(std::size_t lo, std::size_t hi,
                          const std::function<double(std::size_t, std::size_t)>& weight) {
    if (hi <= lo) return 0.0;
    const std::size_t n = hi - lo + 1;
    std::vector<double> best(n, 0.0);
    std::vector<std::size_t> npts(n, 0);
    for (std::size_t k = 1; k < n; ++k) {
        double b = -1.0;
        std::size_t bp = 0;
        for (std::size_t l = 0; l < k; ++l) {
            double cand = best[l] + weight(lo + l, lo + k);
            std::size_t cp = npts[l] + 1;
            if (cand > b || (cand == b && cp < bp)) {
                b = cand;
                bp = cp;
            }
        }
        best[k] = b;
        npts[k] = bp;
    }
    return best[n - 1];
}

double p_variation(const GridPath& path, double p, IndexWindow window, Closure closure) {
    if (p < 1.0) throw std::invalid_argument("p_variation: p must be >= 1");
    std::size_t lo = window.lo, hi = window.hi;
    if (hi >= path.size()) throw std::invalid_argument("p_variation: window outside grid");
    if (closure == Closure::HalfOpen && hi > lo) --hi; // path constant on [t_{hi-1}, t_hi)
    if (hi <= lo) return 0.0;
    double s = partition_supremum(lo, hi, [&](std::size_t i, std::size_t j) {
        return std::pow(path.delta(i, j).norm(), p);
    });
    return std::pow(s, 1.0 / p);
}

double p_variation(const GridPath& path, double p) {
    return p_variation(path, p, IndexWindow{0, path.size() - 1}, Closure::Closed);
}

} // namespace rpf
