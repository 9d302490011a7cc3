#include "rpf/filter.hpp"
#include "rpf/filter_experiments.hpp"
#include "rpf/parallel.hpp"

#include <doctest.h>

#include <cmath>

using namespace rpf;

namespace {

const std::vector<double> kCps = {0.25, 0.5, 0.75, 1.0};

ObservationRealization make_obs(const std::string& preset, std::uint64_t seed,
                                std::size_t cells = 64) {
    FilterModel m = preset_model(preset);
    return simulate_observation(m, RngStream(seed).child("obs"), TimeGrid::uniform(1.0, cells));
}

} // namespace

TEST_CASE("constant test functional normalizes to one exactly") {
    FilterModel m = preset_model("jump-desk");
    m.F = [](const Vec&, const Vec&) { return 1.0; };
    ObservationRealization obs = make_obs("jump-desk", 3);
    FilterRun run = robust_filter(m, obs, 300, kCps, RngStream(3).child("p"));
    for (std::size_t q = 0; q < kCps.size(); ++q) {
        CHECK(run.theta[q] == 1.0);
        CHECK(run.gF[q] == run.g1[q]);
        CHECK(run.se[q] == 0.0);
    }
}

TEST_CASE("fully decoupled observation: flat likelihood, exact ensemble mean") {
    // kappa = 0 and b2 = 0: the likelihood integrand vanishes identically
    FilterModel m = preset_model("degenerate");
    ObservationRealization obs = make_obs("degenerate", 5);
    FilterRun run = robust_filter(m, obs, 400, kCps, RngStream(5).child("p"));
    for (std::size_t q = 0; q < kCps.size(); ++q)
        CHECK(run.g1[q] == doctest::Approx(1.0).epsilon(1e-12));

    // theta equals the plain ensemble mean of F (all weights equal)
    double theta = run.theta[kCps.size() - 1];
    CHECK(std::abs(theta) <= 1.0); // F = tanh is bounded
}

TEST_CASE("likelihood weights average to one across observation draws") {
    // conditional on one observation the normalization is not 1; its mean over
    // independent observations is
    FilterModel m = preset_model("jump-desk");
    m.F = [](const Vec&, const Vec&) { return 1.0; };
    const int reps = 48;
    std::vector<double> g1(reps);
    for (int r = 0; r < reps; ++r) {
        ObservationRealization obs = make_obs("jump-desk", 100 + std::uint64_t(r));
        FilterRun run =
            robust_filter(m, obs, 300, {1.0}, RngStream(100 + std::uint64_t(r)).child("p"));
        g1[r] = run.g1[0];
    }
    double mean = pairwise_sum(g1) / double(reps);
    double var = 0.0;
    for (double v : g1) var += (v - mean) * (v - mean);
    double se = std::sqrt(var / double(reps - 1) / double(reps));
    CHECK(std::abs(mean - 1.0) <= 3.0 * se + 1e-9);
}

TEST_CASE("robust and refined-grid classical routes agree") {
    FilterModel m = preset_model("jump-desk");
    ObservationRealization obs = make_obs("jump-desk", 11);
    FilterRun a = robust_filter(m, obs, 800, kCps, RngStream(11).child("p"));
    FilterRun b = oracle_filter(m, obs, 800, kCps, RngStream(11).child("p"));
    for (std::size_t q = 0; q < kCps.size(); ++q) {
        double comb = std::sqrt(a.se[q] * a.se[q] + b.se[q] * b.se[q]);
        CHECK(std::abs(a.theta[q] - b.theta[q]) <= 3.0 * comb + 0.02);
    }
}

TEST_CASE("filter output is a deterministic function of the stream") {
    FilterModel m = preset_model("jump-desk");
    ObservationRealization obs = make_obs("jump-desk", 13);
    FilterRun a = robust_filter(m, obs, 200, kCps, RngStream(13).child("p"), 1);
    FilterRun b = robust_filter(m, obs, 200, kCps, RngStream(13).child("p"), 3);
    for (std::size_t q = 0; q < kCps.size(); ++q) {
        CHECK(a.theta[q] == b.theta[q]);
        CHECK(a.se[q] == b.se[q]);
    }
    FilterRun c = robust_filter_along(m, obs, obs.lift, 200, kCps, RngStream(13).child("p"));
    for (std::size_t q = 0; q < kCps.size(); ++q) CHECK(a.theta[q] == c.theta[q]);
}

TEST_CASE("observation path is the sum of its driver blocks in additive mode") {
    FilterModel m = preset_model("additive");
    ObservationRealization obs = make_obs("additive", 17);
    // sigma2 = 1 and h3 = 1: Y = Wtilde + compensated jump block
    for (std::size_t k = 0; k < obs.grid.size(); ++k) {
        double expect = obs.G.value(k)[0] + obs.G.value(k)[2];
        CHECK(obs.Y.value(k)[0] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("threshold split recovers the jump part") {
    FilterModel m = preset_model("additive");
    ObservationRealization obs = make_obs("additive", 19, 256);
    SplitResult res = split_observation(m, obs, {0.4});
    REQUIRE(res.rows.size() == 1);
    const SplitRow& row = res.rows[0];
    CHECK(row.recall >= 0.99); // large jumps well separated from cell noise
    // exact decomposition
    for (std::size_t k = 0; k < obs.grid.size(); ++k)
        CHECK((res.y_c.value(k) + res.y_d.value(k) - obs.Y.value(k)).norm() <= 1e-12);
    CHECK(res.joint_lift.dim() == 2);

    // graded cutoffs: higher threshold detects no more cells
    SplitResult res2 = split_observation(m, obs, {0.2, 0.6});
    CHECK(res2.rows[1].detected <= res2.rows[0].detected);
}

TEST_CASE("perturbation response scales down with the perturbation") {
    FilterModel m = preset_model("jump-desk");
    ObservationRealization obs = make_obs("jump-desk", 23, 32);
    RobustnessReport rep = robustness_pvar(m, obs, 0.4, 3, 150, 2.5, RngStream(23).child("r"));
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.decreasing);
    CHECK(rep.rows[2].sup_dtheta < rep.rows[0].sup_dtheta);
    CHECK(rep.ratio_band < 3.0);
}

TEST_CASE("divergence accounting: diverged particles are excluded not fatal") {
    FilterModel m = preset_model("jump-desk");
    // blow up the dynamics for some particles via an unbounded functional drift
    m.b1 = [](double, const Vec& x, const Vec&) { return Vec::Constant(1, -0.5 * std::tanh(x[0])); };
    ObservationRealization obs = make_obs("jump-desk", 29);
    FilterRun run = robust_filter(m, obs, 100, kCps, RngStream(29).child("p"));
    CHECK(run.diverged == 0); // bounded presets do not diverge
    CHECK(run.particles == 100);
}
