#ifndef RPF_ROUGH_PATH_HPP
#define RPF_ROUGH_PATH_HPP

#include "rpf/p_variation.hpp"
#include "rpf/path.hpp"

namespace rpf {

// Level-2 rough path over a grid: the path plus the level-2 increment over each
// consecutive cell; arbitrary second-level increments follow from the
// multiplicative (Chen) composition rule.
class RoughPath {
public:
    RoughPath() = default;
    RoughPath(GridPath path, std::vector<Mat> level2);

    const GridPath& path() const { return path_; }
    const TimeGrid& grid() const { return path_.grid(); }
    int dim() const { return path_.dim(); }
    std::size_t size() const { return path_.size(); }
    const std::vector<Mat>& level2() const { return level2_; }
    const Mat& cell_level2(std::size_t i) const { return level2_[i]; }

    // Level-2 increment over [t_i, t_j], accumulated left to right in O(j - i).
    Mat reconstruct(std::size_t i, std::size_t j) const;

    // Frobenius norms |level2(i, j)| for all i <= j in a dense matrix (row i, col j).
    Mat level2_norm_table() const;

private:
    GridPath path_;
    std::vector<Mat> level2_;
};

// Canonical lift of a piecewise-constant path: sum over jumps of
// (increment up to the left limit) tensor (jump); zero on single cells.
RoughPath ito_lift(const GridPath& path);

// (|X|_p^p + |XX|_{p/2}^p)^{1/p} over a window; p in [2,3).
double rough_norm(const RoughPath& rp, double p, IndexWindow window,
                  Closure closure = Closure::Closed);
double rough_norm(const RoughPath& rp, double p);

// Same functional applied to level-wise differences; requires a common grid.
double rough_distance(const RoughPath& a, const RoughPath& b, double p);

// Zero before tau1; increments from tau1 on [tau1, tau2); frozen just before tau2
// afterwards. Both slice times must be grid times.
RoughPath slice_rough_path(const RoughPath& rp, double tau1, double tau2);

struct JumpRecord {
    double time;
    double level1; // |jump of X|
    double level2; // |jump of the second level|
};
std::vector<JumpRecord> jump_profile(const RoughPath& rp);
double sup_jump(const RoughPath& rp); // sup over jumps of (level1 + level2)

// Piecewise-constant extension of a rough path onto a finer grid containing its
// times: inserted sub-cells before an original time get zero increment and zero
// level-2 block.
RoughPath insert_times(const RoughPath& rp, const TimeGrid& fine);

// Restriction onto a subgrid; cell blocks are the reconstructed increments.
RoughPath restrict_rough_path(const RoughPath& rp, const TimeGrid& coarse);

} // namespace rpf

#endif
