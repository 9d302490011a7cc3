#include "rpf/rough_path.hpp"

#include <cmath>

namespace rpf {

RoughPath::RoughPath(GridPath path, std::vector<Mat> level2)
    : path_(std::move(path)), level2_(std::move(level2)) {
    if (level2_.size() + 1 != path_.size())
        throw std::invalid_argument("RoughPath: need one level-2 block per cell");
    const int d = path_.dim();
    for (const auto& m : level2_)
        if (m.rows() != d || m.cols() != d)
            throw std::invalid_argument("RoughPath: level-2 block dimension mismatch");
}

Mat RoughPath::reconstruct(std::size_t i, std::size_t j) const {
    if (i > j) throw std::invalid_argument("RoughPath::reconstruct: i > j");
    const int d = dim();
    Mat acc = Mat::Zero(d, d);
    Vec inc = Vec::Zero(d);
    for (std::size_t k = i; k < j; ++k) {
        Vec dx = path_.delta(k, k + 1);
        acc += level2_[k] + inc * dx.transpose();
        inc += dx;
    }
    return acc;
}

Mat RoughPath::level2_norm_table() const {
    const std::size_t n = size();
    const int d = dim();
    Mat table = Mat::Zero(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Mat acc = Mat::Zero(d, d);
        Vec inc = Vec::Zero(d);
        for (std::size_t k = i; k + 1 < n; ++k) {
            Vec dx = path_.delta(k, k + 1);
            acc += level2_[k] + inc * dx.transpose();
            inc += dx;
            table(i, k + 1) = acc.norm();
        }
    }
    return table;
}

RoughPath ito_lift(const GridPath& path) {
    const int d = path.dim();
    // delta X_{t_i, u-} vanishes inside a cell of a piecewise-constant path, so
    // every consecutive block is zero; multi-cell increments arise from the
    // composition rule's cross terms.
    return RoughPath(path, std::vector<Mat>(path.size() - 1, Mat::Zero(d, d)));
}

double rough_norm(const RoughPath& rp, double p, IndexWindow window, Closure closure) {
    if (p < 2.0 || p >= 3.0) throw std::invalid_argument("rough_norm: p must be in [2,3)");
    std::size_t lo = window.lo, hi = window.hi;
    if (hi >= rp.size()) throw std::invalid_argument("rough_norm: window outside grid");
    if (closure == Closure::HalfOpen && hi > lo) --hi;
    if (hi <= lo) return 0.0;
    double s1 = partition_supremum(lo, hi, [&](std::size_t i, std::size_t j) {
        return std::pow(rp.path().delta(i, j).norm(), p);
    });
    Mat table = rp.level2_norm_table();
    double s2 = partition_supremum(lo, hi, [&](std::size_t i, std::size_t j) {
        return std::pow(table(i, j), p / 2.0);
    });
    return std::pow(s1 + s2 * s2, 1.0 / p);
}

double rough_norm(const RoughPath& rp, double p) {
    return rough_norm(rp, p, IndexWindow{0, rp.size() - 1}, Closure::Closed);
}

double rough_distance(const RoughPath& a, const RoughPath& b, double p) {
    if (!(a.grid() == b.grid()) || a.dim() != b.dim())
        throw std::invalid_argument("rough_distance: grid/dimension mismatch");
    if (p < 2.0 || p >= 3.0) throw std::invalid_argument("rough_distance: p must be in [2,3)");
    const std::size_t n = a.size();
    const int d = a.dim();
    double s1 = partition_supremum(0, n - 1, [&](std::size_t i, std::size_t j) {
        return std::pow((a.path().delta(i, j) - b.path().delta(i, j)).norm(), p);
    });
    // Norm table of the level-2 difference.
    Mat table = Mat::Zero(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Mat acc_a = Mat::Zero(d, d), acc_b = Mat::Zero(d, d);
        Vec inc_a = Vec::Zero(d), inc_b = Vec::Zero(d);
        for (std::size_t k = i; k + 1 < n; ++k) {
            Vec dxa = a.path().delta(k, k + 1), dxb = b.path().delta(k, k + 1);
            acc_a += a.cell_level2(k) + inc_a * dxa.transpose();
            acc_b += b.cell_level2(k) + inc_b * dxb.transpose();
            inc_a += dxa;
            inc_b += dxb;
            table(i, k + 1) = (acc_a - acc_b).norm();
        }
    }
    double s2 = partition_supremum(0, n - 1, [&](std::size_t i, std::size_t j) {
        return std::pow(table(i, j), p / 2.0);
    });
    return std::pow(s1 + s2 * s2, 1.0 / p);
}

RoughPath slice_rough_path(const RoughPath& rp, double tau1, double tau2) {
    if (tau1 > tau2) throw std::invalid_argument("slice_rough_path: tau1 > tau2");
    const TimeGrid& g = rp.grid();
    const std::size_t i1 = g.index_of(tau1);
    const std::size_t i2 = g.index_of(tau2);
    const int d = rp.dim();
    const std::size_t n = rp.size();
    std::vector<Vec> vals(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k < i1)
            vals[k] = Vec::Zero(d);
        else if (k < i2)
            vals[k] = rp.path().delta(i1, k);
        else
            vals[k] = i2 > i1 ? Vec(rp.path().delta(i1, i2 - 1)) : Vec(Vec::Zero(d));
    }
    std::vector<Mat> lvl(n - 1, Mat::Zero(d, d));
    // Interior cells keep their blocks; the cell ending at tau2 carries the
    // increment up to the left limit of tau2, which is zero for a single cell.
    for (std::size_t k = i1; k + 1 < i2 && k + 1 < n; ++k)
        if (k + 1 < i2) lvl[k] = rp.cell_level2(k);
    return RoughPath(GridPath(g, std::move(vals)), std::move(lvl));
}

std::vector<JumpRecord> jump_profile(const RoughPath& rp) {
    std::vector<JumpRecord> out;
    for (std::size_t i = 1; i < rp.size(); ++i) {
        double l1 = rp.path().delta(i - 1, i).norm();
        double l2 = rp.cell_level2(i - 1).norm();
        if (l1 > 0.0 || l2 > 0.0)
            out.push_back(JumpRecord{rp.grid()[i], l1, l2});
    }
    return out;
}

double sup_jump(const RoughPath& rp) {
    double s = 0.0;
    for (std::size_t i = 1; i < rp.size(); ++i)
        s = std::max(s, rp.path().delta(i - 1, i).norm() + rp.cell_level2(i - 1).norm());
    return s;
}

RoughPath insert_times(const RoughPath& rp, const TimeGrid& fine) {
    const int d = rp.dim();
    std::vector<Vec> vals(fine.size());
    std::vector<Mat> lvl(fine.size() - 1, Mat::Zero(d, d));
    const TimeGrid& g = rp.grid();
    for (std::size_t i = 0; i < fine.size(); ++i) vals[i] = rp.path().at(fine[i]);
    // Each original cell block rides with the sub-cell that ends at the original
    // right endpoint; all other sub-cells carry zero increment and zero block.
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        std::size_t j = fine.index_of(g[k + 1]);
        lvl[j - 1] = rp.cell_level2(k);
    }
    return RoughPath(GridPath(fine, std::move(vals)), std::move(lvl));
}

RoughPath restrict_rough_path(const RoughPath& rp, const TimeGrid& coarse) {
    const int d = rp.dim();
    std::vector<Vec> vals(coarse.size());
    std::vector<Mat> lvl(coarse.size() - 1, Mat::Zero(d, d));
    const TimeGrid& g = rp.grid();
    std::vector<std::size_t> idx(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) idx[i] = g.index_of(coarse[i]);
    for (std::size_t i = 0; i < coarse.size(); ++i) vals[i] = rp.path().value(idx[i]);
    for (std::size_t i = 0; i + 1 < coarse.size(); ++i) lvl[i] = rp.reconstruct(idx[i], idx[i + 1]);
    return RoughPath(GridPath(coarse, std::move(vals)), std::move(lvl));
}

} // namespace rpf
