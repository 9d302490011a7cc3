#include "rpf/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rpf {

MartingaleSample sample_brownian(RngStream stream, const TimeGrid& grid, int dim) {
    if (dim < 1) throw std::invalid_argument("sample_brownian: dim must be >= 1");
    const std::size_t n = grid.size();
    std::vector<Vec> vals(n), brk(n);
    vals[0] = Vec::Zero(dim);
    brk[0] = Vec::Zero(dim);
    for (std::size_t k = 1; k < n; ++k) {
        double sd = std::sqrt(grid[k] - grid[k - 1]);
        Vec inc(dim);
        for (int c = 0; c < dim; ++c) inc[c] = sd * stream.normal();
        vals[k] = vals[k - 1] + inc;
        brk[k] = brk[k - 1] + inc.cwiseProduct(inc);
    }
    return MartingaleSample{GridPath(grid, std::move(vals)), GridPath(grid, std::move(brk))};
}

MarkedEventStream sample_poisson_measure(RngStream stream, const TimeGrid& grid,
                                         const MarkMeasure& nu) {
    MarkedEventStream out;
    out.nu = nu;
    const double mass = nu.mass();
    const double T = grid.horizon();
    if (mass <= 0.0) return out;
    std::uint64_t count = stream.poisson(mass * T);
    std::vector<double> weights(nu.atoms.size());
    for (std::size_t j = 0; j < nu.atoms.size(); ++j) weights[j] = nu.atoms[j].second;
    std::vector<MarkedEvent> evts;
    evts.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double t = stream.uniform() * T;
        std::size_t j = stream.categorical(weights.data(), weights.size());
        evts.push_back(MarkedEvent{t, nu.atoms[j].first, true});
    }
    std::sort(evts.begin(), evts.end(),
              [](const MarkedEvent& a, const MarkedEvent& b) { return a.time < b.time; });
    // enforce strictly increasing times (ties have probability zero; nudge if hit)
    for (std::size_t i = 1; i < evts.size(); ++i)
        if (evts[i].time <= evts[i - 1].time)
            evts[i].time = std::nextafter(evts[i - 1].time, T);
    out.events = std::move(evts);
    return out;
}

MarkedEventStream thin_by_intensity(RngStream stream, const MarkedEventStream& base,
                                    const IntensitySpec& intensity, const GridPath& x_path) {
    if (intensity.lambda_min <= 0.0)
        throw std::invalid_argument("thin_by_intensity: lambda_min must be positive");
    MarkedEventStream out = base;
    out.intensity = intensity;
    for (auto& e : out.events) {
        std::size_t i = x_path.grid().index_at(e.time);
        // left limit: the event time is in (t_{i-1}, t_i] or interior to a cell
        Vec xleft = x_path.grid().contains(e.time) ? x_path.left_limit(i) : x_path.value(i);
        double lam = intensity.lambda(e.time, xleft, e.mark);
        if (lam > intensity.lambda_max * (1.0 + 1e-12))
            throw std::runtime_error("thin_by_intensity: intensity exceeds declared bound");
        e.kept = e.kept && (stream.uniform() <= lam / intensity.lambda_max);
    }
    return out;
}

GridPath compensated_integral(const MarkedEventStream& events,
                              const std::function<Vec(double, const Vec&, const Vec&)>& g,
                              const GridPath& state_path, const TimeGrid& grid, int out_dim) {
    const std::size_t n = grid.size();
    std::vector<Vec> vals(n, Vec::Zero(out_dim));
    auto lambda = [&](double t, const Vec& x, const Vec& u) {
        return events.intensity ? events.intensity->lambda(t, x, u) : 1.0;
    };
    std::size_t e = 0;
    const auto& evts = events.events;
    Vec acc = Vec::Zero(out_dim);
    for (std::size_t k = 1; k < n; ++k) {
        const double t0 = grid[k - 1], t1 = grid[k];
        const Vec& xl = state_path.value(state_path.grid().index_at(t0));
        // compensator over (t_{k-1}, t_k], left-point quadrature over time
        Vec comp = Vec::Zero(out_dim);
        for (const auto& atom : events.nu.atoms)
            comp += g(t0, xl, atom.first) * (lambda(t0, xl, atom.first) * atom.second);
        acc -= comp * (t1 - t0);
        // events in (t_{k-1}, t_k]
        while (e < evts.size() && evts[e].time <= t1 + 1e-12) {
            if (evts[e].time > t0 + 1e-12 && evts[e].kept) {
                std::size_t li = state_path.grid().index_at(evts[e].time);
                Vec xleft = state_path.grid().contains(evts[e].time) ? state_path.left_limit(li)
                                                                     : state_path.value(li);
                acc += g(evts[e].time, xleft, evts[e].mark);
            }
            ++e;
        }
        vals[k] = acc;
    }
    return GridPath(grid, std::move(vals));
}

} // namespace rpf
