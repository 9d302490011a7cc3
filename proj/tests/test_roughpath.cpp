#include "rpf/control.hpp"
#include "rpf/io.hpp"
#include "rpf/noise.hpp"
#include "rpf/p_variation.hpp"
#include "rpf/rough_path.hpp"
#include "rpf/time_change.hpp"

#include <doctest.h>

#include <cmath>

using namespace rpf;

namespace {

GridPath random_path(RngStream s, std::size_t cells, int dim, double T = 1.0) {
    TimeGrid g = TimeGrid::uniform(T, cells);
    std::vector<Vec> v(g.size());
    v[0] = Vec::Zero(dim);
    for (std::size_t k = 1; k < g.size(); ++k) {
        Vec d(dim);
        for (int c = 0; c < dim; ++c) d[c] = s.normal() * 0.3;
        v[k] = v[k - 1] + d;
    }
    return GridPath(g, std::move(v));
}

// exhaustive partition search, feasible for small grids
double brute_force_pvar(const GridPath& x, double p) {
    const std::size_t n = x.size();
    double best = 0.0;
    const std::size_t interior = n - 2;
    for (std::size_t mask = 0; mask < (std::size_t(1) << interior); ++mask) {
        std::vector<std::size_t> pts = {0};
        for (std::size_t b = 0; b < interior; ++b)
            if (mask & (std::size_t(1) << b)) pts.push_back(b + 1);
        pts.push_back(n - 1);
        double s = 0.0;
        for (std::size_t k = 1; k < pts.size(); ++k)
            s += std::pow(x.delta(pts[k - 1], pts[k]).norm(), p);
        best = std::max(best, s);
    }
    return std::pow(best, 1.0 / p);
}

RoughPath random_rough(RngStream s, std::size_t cells, int dim) {
    GridPath x = random_path(s.child("path"), cells, dim);
    std::vector<Mat> lvl(cells);
    for (std::size_t k = 0; k < cells; ++k) {
        Mat m(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) m(r, c) = s.normal() * 0.05;
        lvl[k] = m;
    }
    return RoughPath(std::move(x), std::move(lvl));
}

} // namespace

TEST_CASE("p-variation matches exhaustive partition search") {
    RngStream root(101);
    for (int trial = 0; trial < 30; ++trial) {
        RngStream s = root.child(std::uint64_t(trial));
        std::size_t cells = 3 + trial % 8; // up to 11 points
        GridPath x = random_path(s, cells, 1 + trial % 2);
        for (double p : {1.0, 2.0, 2.5}) {
            double dp = p_variation(x, p);
            double bf = brute_force_pvar(x, p);
            CHECK(dp == doctest::Approx(bf).epsilon(1e-12));
        }
    }
}

TEST_CASE("half-open variation drops the terminal jump") {
    TimeGrid g = TimeGrid::uniform(1.0, 2);
    GridPath x(g, {Vec::Constant(1, 0.0), Vec::Constant(1, 0.0), Vec::Constant(1, 5.0)});
    CHECK(p_variation(x, 2.0) == doctest::Approx(5.0));
    CHECK(p_variation(x, 2.0, IndexWindow{0, 2}, Closure::HalfOpen) == doctest::Approx(0.0));
}

TEST_CASE("reconstruct satisfies the multiplicative composition rule") {
    RngStream root(7);
    for (int trial = 0; trial < 20; ++trial) {
        RoughPath rp = random_rough(root.child(std::uint64_t(trial)), 12, 2);
        for (std::size_t i = 0; i < 12; i += 3)
            for (std::size_t u = i + 1; u < 12; u += 2)
                for (std::size_t j = u + 1; j <= 12; j += 3) {
                    Mat lhs = rp.reconstruct(i, j);
                    Mat rhs = rp.reconstruct(i, u) + rp.reconstruct(u, j) +
                              rp.path().delta(i, u) * rp.path().delta(u, j).transpose();
                    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
                }
    }
}

TEST_CASE("piecewise-constant canonical lift has zero cell blocks") {
    GridPath x = random_path(RngStream(3), 20, 3);
    RoughPath rp = ito_lift(x);
    for (const auto& m : rp.level2()) CHECK(m.cwiseAbs().maxCoeff() == 0.0);
    // two-cell increment picks up the cross term
    Mat r = rp.reconstruct(0, 2);
    Mat expect = x.delta(0, 1) * x.delta(1, 2).transpose();
    CHECK((r - expect).norm() <= 1e-14);
}

TEST_CASE("restriction blocks are the reconstructed increments") {
    RoughPath rp = random_rough(RngStream(9), 16, 2);
    TimeGrid coarse = TimeGrid::uniform(1.0, 4);
    RoughPath res = restrict_rough_path(rp, coarse);
    for (std::size_t k = 0; k < 4; ++k) {
        std::size_t i = rp.grid().index_of(coarse[k]);
        std::size_t j = rp.grid().index_of(coarse[k + 1]);
        CHECK((res.cell_level2(k) - rp.reconstruct(i, j)).norm() <= 1e-13);
    }
}

TEST_CASE("extension to a finer grid keeps all level-2 increments") {
    RoughPath rp = random_rough(RngStream(11), 8, 2);
    TimeGrid fine = rp.grid().refined();
    RoughPath ext = insert_times(rp, fine);
    for (std::size_t i = 0; i <= 8; ++i)
        for (std::size_t j = i; j <= 8; ++j) {
            std::size_t fi = fine.index_of(rp.grid()[i]);
            std::size_t fj = fine.index_of(rp.grid()[j]);
            CHECK((ext.reconstruct(fi, fj) - rp.reconstruct(i, j)).norm() <= 1e-12);
        }
}

TEST_CASE("rough norm is invariant under reparametrization") {
    RoughPath rp = random_rough(RngStream(13), 32, 2);
    TimeChange lam(1.0, {{0.25, 0.4}, {0.7, 0.55}});
    RoughPath moved = apply_time_change(rp, lam);
    for (double p : {2.0, 2.5, 2.9})
        CHECK(rough_norm(moved, p) == doctest::Approx(rough_norm(rp, p)).epsilon(1e-12));
}

TEST_CASE("rough distance vanishes only on equal inputs") {
    RoughPath rp = random_rough(RngStream(17), 16, 2);
    CHECK(rough_distance(rp, rp, 2.5) == 0.0);
    RoughPath other = random_rough(RngStream(18), 16, 2);
    CHECK(rough_distance(rp, other, 2.5) > 0.1);
}

TEST_CASE("reparametrized-distance bound: shifted step path") {
    // unit step at 0.5 vs at 0.5 - 1/n: matching the jumps certifies <= 1/n
    for (int n : {4, 8, 16, 32}) {
        double t1 = 0.5, t2 = 0.5 - 1.0 / double(n);
        TimeGrid g({0.0, t2, t1, 1.0});
        auto step = [&](double at) {
            std::vector<Vec> v;
            for (double t : g.times()) v.push_back(Vec::Constant(1, t >= at - 1e-15 ? 1.0 : 0.0));
            return GridPath(g, v);
        };
        RoughPath a = ito_lift(step(t1)), b = ito_lift(step(t2));
        SkorokhodResult res = skorokhod_distance_upper(a, b, 2.0);
        CHECK(res.value <= 1.0 / double(n) + 1e-12);
        CHECK(res.identity_value >= 1.0); // sup-distance without reparametrization
        CHECK(res.value <= res.identity_value);
    }
}

TEST_CASE("window slice freezes outside the window") {
    RoughPath rp = random_rough(RngStream(21), 8, 2);
    const TimeGrid& g = rp.grid();
    RoughPath sl = slice_rough_path(rp, g[2], g[6]);
    for (std::size_t k = 0; k <= 2; ++k) CHECK(sl.path().value(k).norm() == 0.0);
    for (std::size_t k = 3; k < 6; ++k)
        CHECK((sl.path().value(k) - rp.path().delta(2, k)).norm() <= 1e-14);
    // frozen strictly before the window end
    for (std::size_t k = 6; k <= 8; ++k)
        CHECK((sl.path().value(k) - rp.path().delta(2, 5)).norm() <= 1e-14);
    for (std::size_t k = 0; k < 8; ++k) {
        if (k >= 2 && k < 5)
            CHECK((sl.cell_level2(k) - rp.cell_level2(k)).norm() <= 1e-14);
        else
            CHECK(sl.cell_level2(k).norm() == 0.0);
    }
}

TEST_CASE("jump profile and sup jump") {
    TimeGrid g = TimeGrid::uniform(1.0, 4);
    std::vector<Vec> v = {Vec::Constant(1, 0.0), Vec::Constant(1, 0.0), Vec::Constant(1, 2.0),
                          Vec::Constant(1, 2.0), Vec::Constant(1, 2.5)};
    std::vector<Mat> lvl(4, Mat::Zero(1, 1));
    lvl[2](0, 0) = 0.75;
    RoughPath rp(GridPath(g, v), lvl);
    auto prof = jump_profile(rp); // only nonzero jumps are recorded
    REQUIRE(prof.size() == 3);
    CHECK(prof[0].time == doctest::Approx(0.5));
    CHECK(prof[0].level1 == doctest::Approx(2.0));
    CHECK(prof[1].level2 == doctest::Approx(0.75));
    CHECK(prof[2].level1 == doctest::Approx(0.5));
    CHECK(sup_jump(rp) == doctest::Approx(2.0));
}

TEST_CASE("variation controls are superadditive") {
    RngStream root(31);
    GridPath x = random_path(root, 12, 2);
    CHECK(superadditivity_defect(pvar_control(x, 2.5), 1e-12) <= 0.0);
    RoughPath rp = random_rough(root.child("r"), 10, 2);
    CHECK(superadditivity_defect(rough_norm_control(rp, 2.5), 1e-10) <= 0.0);
    CHECK(superadditivity_defect(linear_control(x.grid()), 1e-12) <= 0.0);
    Control j = jump_control(x.grid(), 0.37, 2.0);
    CHECK(superadditivity_defect(j, 1e-12) <= 0.0);
}

TEST_CASE("serialization round-trips bit-exactly") {
    RoughPath rp = random_rough(RngStream(41), 12, 2);
    RoughPath back = rough_path_from_json(rough_path_to_json(rp));
    CHECK(back.grid() == rp.grid());
    for (std::size_t k = 0; k < rp.size(); ++k)
        CHECK(back.path().value(k) == rp.path().value(k));
    for (std::size_t k = 0; k < rp.level2().size(); ++k)
        CHECK(back.cell_level2(k) == rp.cell_level2(k));

    GridPath x = random_path(RngStream(43), 9, 3);
    GridPath xb = grid_path_from_csv(grid_path_to_csv(x));
    CHECK(xb.grid() == x.grid());
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(xb.value(k) == x.value(k));
}

TEST_CASE("rough norm over windows: half-open drops the terminal jump") {
    TimeGrid g = TimeGrid::uniform(1.0, 2);
    std::vector<Vec> v = {Vec::Constant(1, 0.0), Vec::Constant(1, 1.0), Vec::Constant(1, 9.0)};
    RoughPath rp = ito_lift(GridPath(g, v));
    double closed = rough_norm(rp, 2.0, IndexWindow{0, 2}, Closure::Closed);
    double open = rough_norm(rp, 2.0, IndexWindow{0, 2}, Closure::HalfOpen);
    CHECK(closed > 8.0);
    CHECK(open == doctest::Approx(1.0));
}
