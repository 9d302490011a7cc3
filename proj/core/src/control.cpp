#include "rpf/control.hpp"

#include <cmath>
#include <memory>

namespace rpf {

Control linear_control(const TimeGrid& grid) {
    auto g = std::make_shared<TimeGrid>(grid);
    return Control{grid, [g](std::size_t i, std::size_t j) { return (*g)[j] - (*g)[i]; }, true};
}

Control jump_control(const TimeGrid& grid, double tau, double c) {
    auto g = std::make_shared<TimeGrid>(grid);
    return Control{grid,
                   [g, tau, c](std::size_t i, std::size_t j) {
                       return ((*g)[i] < tau && tau <= (*g)[j]) ? c : 0.0;
                   },
                   true};
}

Control power_sum_control(const TimeGrid& grid, std::vector<double> cell_mass, double r) {
    if (cell_mass.size() != grid.cells())
        throw std::invalid_argument("power_sum_control: one mass per cell required");
    if (r < 1.0) throw std::invalid_argument("power_sum_control: r must be >= 1");
    auto prefix = std::make_shared<std::vector<double>>(grid.size(), 0.0);
    for (std::size_t k = 0; k < cell_mass.size(); ++k) {
        if (cell_mass[k] < 0.0) throw std::invalid_argument("power_sum_control: negative mass");
        (*prefix)[k + 1] = (*prefix)[k] + cell_mass[k];
    }
    return Control{grid,
                   [prefix, r](std::size_t i, std::size_t j) {
                       return std::pow((*prefix)[j] - (*prefix)[i], r);
                   },
                   true};
}

Control sum_control(const Control& w1, const Control& w2) {
    if (!(w1.grid == w2.grid)) throw std::invalid_argument("sum_control: grid mismatch");
    auto a = std::make_shared<Control>(w1);
    auto b = std::make_shared<Control>(w2);
    return Control{w1.grid,
                   [a, b](std::size_t i, std::size_t j) { return (*a)(i, j) + (*b)(i, j); },
                   w1.regular_from_inside && w2.regular_from_inside};
}

Control scaled_control(const Control& w, double c) {
    auto a = std::make_shared<Control>(w);
    return Control{w.grid, [a, c](std::size_t i, std::size_t j) { return c * (*a)(i, j); },
                   w.regular_from_inside};
}

Control pvar_control(const GridPath& path, double p) {
    auto pp = std::make_shared<GridPath>(path);
    return Control{path.grid(),
                   [pp, p](std::size_t i, std::size_t j) {
                       if (j <= i) return 0.0;
                       return partition_supremum(i, j, [&](std::size_t l, std::size_t k) {
                           return std::pow(pp->delta(l, k).norm(), p);
                       });
                   },
                   true};
}

Control rough_norm_control(const RoughPath& rp, double p) {
    auto table = std::make_shared<Mat>(rp.level2_norm_table());
    auto rpp = std::make_shared<RoughPath>(rp);
    return Control{rp.grid(),
                   [table, rpp, p](std::size_t i, std::size_t j) {
                       if (j > i) --j; // half-open window: drop the terminal jump
                       if (j <= i) return 0.0;
                       double s1 = partition_supremum(i, j, [&](std::size_t l, std::size_t k) {
                           return std::pow(rpp->path().delta(l, k).norm(), p);
                       });
                       double s2 = partition_supremum(i, j, [&](std::size_t l, std::size_t k) {
                           return std::pow((*table)(l, k), p / 2.0);
                       });
                       return s1 + s2 * s2;
                   },
                   true};
}

double superadditivity_defect(const Control& w, double tol) {
    const std::size_t n = w.grid.size();
    double worst = -1e300;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k)
            for (std::size_t j = k; j < n; ++j)
                worst = std::max(worst, w(i, k) + w(k, j) - w(i, j) - tol);
    return worst;
}

} // namespace rpf
