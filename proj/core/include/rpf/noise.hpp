#ifndef RPF_NOISE_HPP
#define RPF_NOISE_HPP

#include "rpf/path.hpp"
#include "rpf/rng.hpp"

#include <functional>
#include <optional>

namespace rpf {

// Finite mark measure given as atoms (mark, weight).
struct MarkMeasure {
    std::vector<std::pair<Vec, double>> atoms;

    double mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.second;
        return m;
    }
};

struct MarkedEvent {
    double time;
    Vec mark;
    bool kept = true;
};

// State-dependent multiplicative intensity: compensator is
// lambda(t, x(t-), u) nu(du) dt, with 0 < lambda_min <= lambda <= lambda_max.
struct IntensitySpec {
    std::function<double(double, const Vec&, const Vec&)> lambda; // (t, x, u)
    double lambda_min = 1.0;
    double lambda_max = 1.0;
};

struct MarkedEventStream {
    std::vector<MarkedEvent> events; // strictly increasing times in (0, T]
    MarkMeasure nu;
    std::optional<IntensitySpec> intensity;

    std::vector<double> event_times() const {
        std::vector<double> ts;
        ts.reserve(events.size());
        for (const auto& e : events)
            if (e.kept) ts.push_back(e.time);
        return ts;
    }
};

struct MartingaleSample {
    GridPath path;    // cadlag accumulation of the increments
    GridPath bracket; // realized quadratic variation, diagonal components
};

MartingaleSample sample_brownian(RngStream stream, const TimeGrid& grid, int dim);

// Homogeneous Poisson measure: count ~ Poisson(mass * T), times uniform, marks
// iid from nu's atoms.
MarkedEventStream sample_poisson_measure(RngStream stream, const TimeGrid& grid,
                                         const MarkMeasure& nu);

// Keeps each base event with probability lambda(t, x(t-), u) / lambda_max.
MarkedEventStream thin_by_intensity(RngStream stream, const MarkedEventStream& base,
                                    const IntensitySpec& intensity, const GridPath& x_path);

// sum_{events <= t} g(tau, state(tau-), u) minus the compensator
// int_0^t sum_atoms g(s, state(s), u_j) lambda(s, state(s), u_j) w_j ds
// with left-point time quadrature; grid must contain all event times.
GridPath compensated_integral(const MarkedEventStream& events,
                              const std::function<Vec(double, const Vec&, const Vec&)>& g,
                              const GridPath& state_path, const TimeGrid& grid, int out_dim);

} // namespace rpf

#endif
