#include "rpf/moments.hpp"
#include "rpf/noise.hpp"
#include "rpf/rough_path.hpp"

#include <doctest.h>

#include <cmath>

using namespace rpf;

TEST_CASE("linear accumulation at level 0.3: three interior stopping times") {
    TimeGrid g = TimeGrid::uniform(1.0, 10);
    AlphaPartition part = n_alpha(linear_control(g), 0.3);
    REQUIRE(part.count == 3);
    CHECK(part.times[0] == doctest::Approx(0.3));
    CHECK(part.times[1] == doctest::Approx(0.6));
    CHECK(part.times[2] == doctest::Approx(0.9));
}

TEST_CASE("level at or above the total mass: zero count") {
    TimeGrid g = TimeGrid::uniform(1.0, 10);
    CHECK(n_alpha(linear_control(g), 1.0).count == 0);
    CHECK(n_alpha(linear_control(g), 1.5).count == 0);
}

TEST_CASE("single interior burst: exactly one stopping time") {
    TimeGrid g = TimeGrid::uniform(1.0, 10);
    AlphaPartition part = n_alpha(jump_control(g, 0.45, 5.0), 1.0);
    REQUIRE(part.count == 1);
    CHECK(part.times[0] == doctest::Approx(0.5)); // first grid time past the burst
}

TEST_CASE("count is monotone decreasing in the level") {
    TimeGrid g = TimeGrid::uniform(1.0, 20);
    RngStream s(3);
    std::vector<double> mass(20);
    for (auto& m : mass) m = s.uniform();
    Control w = power_sum_control(g, mass, 1.5);
    std::size_t prev = SIZE_MAX;
    for (double a : {0.05, 0.1, 0.3, 0.8, 2.0}) {
        std::size_t c = n_alpha(w, a).count;
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("count inequalities hold on a random control family") {
    RngStream root(7);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        RngStream s = root.child(std::uint64_t(trial));
        std::size_t cells = 8 + std::size_t(s.uniform() * 16.0);
        TimeGrid g = TimeGrid::uniform(1.0, cells);
        std::vector<double> m1(cells), m2(cells);
        for (auto& m : m1) m = s.uniform() * 0.4;
        for (auto& m : m2) m = s.uniform() * 0.4;
        double r1 = 1.0 + s.uniform(), r2 = 1.0 + s.uniform();
        Control w1 = power_sum_control(g, m1, r1);
        Control w2 = power_sum_control(g, m2, r2);
        double alpha = 0.2 + s.uniform();
        double beta = alpha + s.uniform();
        double C = 1.0 + 2.0 * s.uniform();
        NAlphaSuiteReport rep = n_alpha_inequality_suite(w1, w2, alpha, beta, C);
        if (!rep.all_hold) ++violations;
        CHECK(std::isfinite(rep.fitted_comparison_constant));
    }
    CHECK(violations == 0);
}

TEST_CASE("count-based bound on the rough norm holds and is refinement-stable") {
    RngStream root(11);
    MartingaleSample w = sample_brownian(root, TimeGrid::uniform(1.0, 64), 1);
    RoughPath rp = ito_lift(w.path);
    NAlphaBoundReport a = rough_norm_via_nalpha_bound(rp, 2.5, 1.0);
    CHECK(a.holds_with_fitted);
    CHECK(a.fitted_constant > 0.0);
    // same path on a refined grid: the bound constant stays comparable
    RoughPath fine = insert_times(rp, rp.grid().refined());
    NAlphaBoundReport b = rough_norm_via_nalpha_bound(fine, 2.5, 1.0);
    CHECK(b.rough_norm_value == doctest::Approx(a.rough_norm_value).epsilon(1e-12));
    CHECK(b.n_alpha_count == a.n_alpha_count);
}

TEST_CASE("exponential moment of the zero path is one") {
    TimeGrid g = TimeGrid::uniform(1.0, 8);
    std::vector<GridPath> paths(10, GridPath::zero(g, 1));
    MomentReport rep = empirical_exp_moment(paths, 1.0);
    CHECK(rep.exp_moment_abs == doctest::Approx(1.0));
    CHECK(rep.exp_moment_onesided == doctest::Approx(1.0));
    CHECK(!rep.saturated);
}

TEST_CASE("bounded paths: moment below the deterministic envelope") {
    TimeGrid g = TimeGrid::uniform(1.0, 16);
    RngStream root(13);
    std::vector<GridPath> paths;
    double bound = 0.8;
    for (int i = 0; i < 50; ++i) {
        RngStream s = root.child(std::uint64_t(i));
        std::vector<Vec> v(g.size());
        for (std::size_t k = 0; k < g.size(); ++k)
            v[k] = Vec::Constant(1, bound * std::sin(6.0 * g[k] + s.uniform()));
        paths.emplace_back(g, std::move(v));
    }
    double lambda = 1.3;
    MomentReport rep = empirical_exp_moment(paths, lambda);
    CHECK(rep.exp_moment_abs <= std::exp(2.0 * lambda * bound));
}

TEST_CASE("running-maximum ensemble matches the reflection closed form") {
    std::vector<GridPath> paths = brownian_max_ensemble(RngStream(17), 1.0, 32, 20000);
    for (double lam : {0.5, 1.0}) {
        MomentReport rep = empirical_exp_moment(paths, lam);
        double oracle = brownian_max_exp_moment(lam, 1.0);
        CHECK(std::abs(rep.exp_moment_onesided - oracle) <= 3.0 * rep.bootstrap_se_onesided);
    }
}

TEST_CASE("closed form sanity: lambda -> 0 limit is one") {
    CHECK(brownian_max_exp_moment(1e-12, 1.0) == doctest::Approx(1.0));
    CHECK(brownian_max_exp_moment(1.0, 1.0) > 1.0);
}
