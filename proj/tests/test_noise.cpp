#include "rpf/noise.hpp"
#include "rpf/parallel.hpp"

#include <doctest.h>

#include <cmath>

using namespace rpf;

TEST_CASE("brownian increments: mean, variance, bracket") {
    TimeGrid g = TimeGrid::uniform(2.0, 64);
    RngStream root(17);
    const std::size_t n = 2000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        MartingaleSample s = sample_brownian(root.child(i), g, 1);
        double wT = s.path.value(g.size() - 1)[0];
        sum += wT;
        sumsq += wT * wT;
        CHECK(s.bracket.value(g.size() - 1)[0] > 0.0);
        CHECK(s.path.value(0)[0] == 0.0);
    }
    double mean = sum / double(n);
    double var = sumsq / double(n) - mean * mean;
    CHECK(std::abs(mean) < 4.0 * std::sqrt(2.0 / double(n)));
    CHECK(var == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("streams are reproducible and label-separated") {
    TimeGrid g = TimeGrid::uniform(1.0, 16);
    MartingaleSample a = sample_brownian(RngStream(5).child("w"), g, 2);
    MartingaleSample b = sample_brownian(RngStream(5).child("w"), g, 2);
    MartingaleSample c = sample_brownian(RngStream(5).child("v"), g, 2);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(a.path.value(k) == b.path.value(k));
    double diff = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) diff += (a.path.value(k) - c.path.value(k)).norm();
    CHECK(diff > 1e-6);
}

TEST_CASE("indexed children differ from each other") {
    RngStream root(9);
    double x = root.child(std::uint64_t(0)).uniform();
    double y = root.child(std::uint64_t(1)).uniform();
    CHECK(x != y);
    CHECK(x > 0.0);
    CHECK(x < 1.0);
}

TEST_CASE("event stream: counts follow the intensity mass") {
    MarkMeasure nu;
    nu.atoms.emplace_back(Vec::Constant(1, 1.0), 1.5);
    nu.atoms.emplace_back(Vec::Constant(1, -1.0), 0.5);
    TimeGrid g = TimeGrid::uniform(1.0, 8);
    RngStream root(23);
    const std::size_t n = 4000;
    double total = 0.0;
    std::size_t plus = 0, all = 0;
    for (std::size_t i = 0; i < n; ++i) {
        MarkedEventStream es = sample_poisson_measure(root.child(i), g, nu);
        total += double(es.events.size());
        double prev = 0.0;
        for (const auto& e : es.events) {
            CHECK(e.time > prev);
            CHECK(e.time <= 1.0);
            prev = e.time;
            ++all;
            if (e.mark[0] > 0.0) ++plus;
        }
    }
    // mean count = mass * T = 2; mark split 3:1
    CHECK(total / double(n) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(double(plus) / double(all) == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("thinning keeps events at rate lambda / lambda_max") {
    MarkMeasure nu;
    nu.atoms.emplace_back(Vec::Constant(1, 1.0), 4.0);
    TimeGrid g = TimeGrid::uniform(1.0, 4);
    GridPath state = GridPath::constant(g, Vec::Constant(1, 0.0));
    IntensitySpec spec;
    spec.lambda = [](double, const Vec&, const Vec&) { return 0.6; };
    spec.lambda_min = 0.6;
    spec.lambda_max = 2.0;
    RngStream root(31);
    std::size_t kept = 0, total = 0;
    for (std::size_t i = 0; i < 3000; ++i) {
        MarkedEventStream base = sample_poisson_measure(root.child(i).child("b"), g, nu);
        MarkedEventStream thin = thin_by_intensity(root.child(i).child("t"), base, spec, state);
        CHECK(thin.events.size() == base.events.size()); // events retained, flagged
        for (const auto& e : thin.events) {
            ++total;
            if (e.kept) ++kept;
        }
    }
    CHECK(double(kept) / double(total) == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("compensated sum: single deterministic event by hand") {
    MarkMeasure nu;
    nu.atoms.emplace_back(Vec::Constant(1, 1.0), 1.0);
    MarkedEventStream es;
    es.nu = nu;
    es.events.push_back(MarkedEvent{0.5, Vec::Constant(1, 1.0), true});
    TimeGrid g({0.0, 0.5, 1.0});
    GridPath state = GridPath::constant(g, Vec::Constant(1, 0.0));
    auto unit = [](double, const Vec&, const Vec&) { return Vec::Constant(1, 1.0); };
    GridPath out = compensated_integral(es, unit, state, g, 1);
    CHECK(out.value(0)[0] == doctest::Approx(0.0));
    CHECK(out.value(1)[0] == doctest::Approx(0.5));  // +1 jump - 0.5 drift
    CHECK(out.value(2)[0] == doctest::Approx(0.0));  // fully compensated at T
}

TEST_CASE("compensated sum has small ensemble mean at every grid time") {
    MarkMeasure nu;
    nu.atoms.emplace_back(Vec::Constant(1, -0.5), 0.5);
    nu.atoms.emplace_back(Vec::Constant(1, 0.5), 1.0);
    TimeGrid base = TimeGrid::uniform(1.0, 10);
    auto gfun = [](double, const Vec&, const Vec& u) { return Vec::Constant(1, u[0]); };
    RngStream root(41);
    const std::size_t n = 20000;
    std::vector<double> terminal(n);
    for (std::size_t i = 0; i < n; ++i) {
        MarkedEventStream es = sample_poisson_measure(root.child(i), base, nu);
        TimeGrid g = base.with_times(es.event_times());
        GridPath state = GridPath::constant(g, Vec::Constant(1, 0.0));
        GridPath out = compensated_integral(es, gfun, state, g, 1);
        terminal[i] = out.value(g.size() - 1)[0];
    }
    double mean = pairwise_sum(terminal) / double(n);
    // var of the compensated sum = T * sum u^2 w = 0.375; 4 sigma band
    CHECK(std::abs(mean) < 4.0 * std::sqrt(0.375 / double(n)));
}
