#ifndef RPF_PATH_HPP
#define RPF_PATH_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rpf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Strictly increasing instants on [0, T], with times[0] == 0 and times.back() == T.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> times);
    static TimeGrid uniform(double T, std::size_t cells);

    std::size_t size() const { return times_.size(); }
    std::size_t cells() const { return times_.size() - 1; }
    double operator[](std::size_t i) const { return times_[i]; }
    double horizon() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }

    // Largest index i with times[i] <= t (t clamped into [0, T]).
    std::size_t index_at(double t) const;
    // Index of t if it is a grid time; throws otherwise.
    std::size_t index_of(double t, double tol = 1e-12) const;
    bool contains(double t, double tol = 1e-12) const;

    TimeGrid merged_with(const TimeGrid& other) const;
    TimeGrid with_times(const std::vector<double>& extra) const;
    // Inserts the midpoint of every cell.
    TimeGrid refined() const;

    bool operator==(const TimeGrid& o) const { return times_ == o.times_; }

private:
    std::vector<double> times_;
};

// Piecewise-constant cadlag path on a grid: value on [t_i, t_{i+1}) is values[i].
class GridPath {
public:
    GridPath() = default;
    GridPath(TimeGrid grid, std::vector<Vec> values);
    static GridPath zero(const TimeGrid& grid, int dim);
    static GridPath constant(const TimeGrid& grid, const Vec& v);

    const TimeGrid& grid() const { return grid_; }
    int dim() const { return values_.empty() ? 0 : static_cast<int>(values_[0].size()); }
    std::size_t size() const { return values_.size(); }
    const Vec& value(std::size_t i) const { return values_[i]; }
    Vec& value(std::size_t i) { return values_[i]; }
    const std::vector<Vec>& values() const { return values_; }

    Vec at(double t) const { return values_[grid_.index_at(t)]; }
    // Left limit at grid time t_i (i >= 1); at i == 0 returns values[0].
    Vec left_limit(std::size_t i) const { return values_[i > 0 ? i - 1 : 0]; }
    Vec delta(std::size_t i, std::size_t j) const { return values_[j] - values_[i]; }

    // Piecewise-constant extension onto a finer grid that contains all of this grid's times.
    GridPath on_grid(const TimeGrid& fine) const;
    // Restriction to a subgrid (coarse times must be grid times here).
    GridPath restrict(const TimeGrid& coarse) const;

    GridPath operator+(const GridPath& o) const;
    GridPath operator-(const GridPath& o) const;

private:
    TimeGrid grid_;
    std::vector<Vec> values_;
};

} // namespace rpf

#endif
