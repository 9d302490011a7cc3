#include "rpf/path.hpp"

namespace rpf {

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
    if (times_.size() < 2) throw std::invalid_argument("TimeGrid: need at least 2 times");
    if (times_.front() != 0.0) throw std::invalid_argument("TimeGrid: must start at 0");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("TimeGrid: times must be strictly increasing");
}

TimeGrid TimeGrid::uniform(double T, std::size_t cells) {
    if (cells < 1 || !(T > 0)) throw std::invalid_argument("TimeGrid::uniform: bad arguments");
    std::vector<double> ts(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) ts[i] = T * static_cast<double>(i) / static_cast<double>(cells);
    ts.back() = T;
    return TimeGrid(std::move(ts));
}

std::size_t TimeGrid::index_at(double t) const {
    if (t <= times_.front()) return 0;
    if (t >= times_.back()) return times_.size() - 1;
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    return static_cast<std::size_t>(it - times_.begin()) - 1;
}

std::size_t TimeGrid::index_of(double t, double tol) const {
    std::size_t i = index_at(t);
    if (std::abs(times_[i] - t) <= tol) return i;
    if (i + 1 < times_.size() && std::abs(times_[i + 1] - t) <= tol) return i + 1;
    throw std::invalid_argument("TimeGrid::index_of: not a grid time");
}

bool TimeGrid::contains(double t, double tol) const {
    std::size_t i = index_at(t);
    if (std::abs(times_[i] - t) <= tol) return true;
    return i + 1 < times_.size() && std::abs(times_[i + 1] - t) <= tol;
}

TimeGrid TimeGrid::merged_with(const TimeGrid& other) const {
    if (std::abs(horizon() - other.horizon()) > 1e-12)
        throw std::invalid_argument("TimeGrid::merged_with: horizons differ");
    std::vector<double> ts;
    ts.reserve(times_.size() + other.times_.size());
    std::merge(times_.begin(), times_.end(), other.times_.begin(), other.times_.end(),
               std::back_inserter(ts));
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts)
        if (out.empty() || t > out.back() + 1e-14 * std::max(1.0, horizon())) out.push_back(t);
    out.back() = horizon();
    return TimeGrid(std::move(out));
}

TimeGrid TimeGrid::with_times(const std::vector<double>& extra) const {
    std::vector<double> ts = times_;
    for (double t : extra) {
        if (t <= 0.0 || t >= horizon()) continue;
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts)
        if (out.empty() || t > out.back() + 1e-14 * std::max(1.0, horizon())) out.push_back(t);
    out.back() = horizon();
    return TimeGrid(std::move(out));
}

TimeGrid TimeGrid::refined() const {
    std::vector<double> ts;
    ts.reserve(2 * times_.size());
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        ts.push_back(times_[i]);
        ts.push_back(0.5 * (times_[i] + times_[i + 1]));
    }
    ts.push_back(times_.back());
    return TimeGrid(std::move(ts));
}

GridPath::GridPath(TimeGrid grid, std::vector<Vec> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("GridPath: values length must equal grid length");
    for (const auto& v : values_)
        if (v.size() != values_[0].size())
            throw std::invalid_argument("GridPath: inconsistent value dimensions");
}

GridPath GridPath::zero(const TimeGrid& grid, int dim) {
    return GridPath(grid, std::vector<Vec>(grid.size(), Vec::Zero(dim)));
}

GridPath GridPath::constant(const TimeGrid& grid, const Vec& v) {
    return GridPath(grid, std::vector<Vec>(grid.size(), v));
}

GridPath GridPath::on_grid(const TimeGrid& fine) const {
    std::vector<Vec> vals(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) vals[i] = at(fine[i]);
    return GridPath(fine, std::move(vals));
}

GridPath GridPath::restrict(const TimeGrid& coarse) const {
    std::vector<Vec> vals(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) vals[i] = values_[grid_.index_of(coarse[i])];
    return GridPath(coarse, std::move(vals));
}

GridPath GridPath::operator+(const GridPath& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("GridPath+: grid mismatch");
    std::vector<Vec> vals(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) vals[i] = values_[i] + o.values_[i];
    return GridPath(grid_, std::move(vals));
}

GridPath GridPath::operator-(const GridPath& o) const {
    if (!(grid_ == o.grid_)) throw std::invalid_argument("GridPath-: grid mismatch");
    std::vector<Vec> vals(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) vals[i] = values_[i] - o.values_[i];
    return GridPath(grid_, std::move(vals));
}

} // namespace rpf
