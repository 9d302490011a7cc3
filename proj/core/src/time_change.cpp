#include "rpf/time_change.hpp"

#include <cmath>

namespace rpf {

TimeChange::TimeChange(double T, std::vector<std::pair<double, double>> knots) : T_(T) {
    knots_.emplace_back(0.0, 0.0);
    std::sort(knots.begin(), knots.end());
    for (const auto& k : knots) {
        if (k.first <= 0.0 || k.first >= T_ || k.second <= 0.0 || k.second >= T_)
            throw std::invalid_argument("TimeChange: interior knots must lie in (0,T)x(0,T)");
        knots_.push_back(k);
    }
    knots_.emplace_back(T_, T_);
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].first > knots_[i - 1].first) || !(knots_[i].second > knots_[i - 1].second))
            throw std::invalid_argument("TimeChange: knots must be strictly increasing");
}

static double piecewise_eval(const std::vector<std::pair<double, double>>& knots, double t,
                             bool invert) {
    auto x = [&](const std::pair<double, double>& k) { return invert ? k.second : k.first; };
    auto y = [&](const std::pair<double, double>& k) { return invert ? k.first : k.second; };
    if (t <= x(knots.front())) return y(knots.front());
    if (t >= x(knots.back())) return y(knots.back());
    std::size_t i = 1;
    while (x(knots[i]) < t) ++i;
    const auto &a = knots[i - 1], &b = knots[i];
    if (t == x(b)) return y(b);
    double w = (t - x(a)) / (x(b) - x(a));
    return y(a) + w * (y(b) - y(a));
}

double TimeChange::operator()(double t) const { return piecewise_eval(knots_, t, false); }
double TimeChange::inverse(double s) const { return piecewise_eval(knots_, s, true); }

double TimeChange::sup_deviation() const {
    double m = 0.0;
    for (const auto& k : knots_) m = std::max(m, std::abs(k.second - k.first));
    return m;
}

RoughPath apply_time_change(const RoughPath& rp, const TimeChange& lambda) {
    std::vector<double> ts(rp.size());
    for (std::size_t i = 0; i < rp.size(); ++i) ts[i] = lambda.inverse(rp.grid()[i]);
    ts.front() = 0.0;
    ts.back() = rp.grid().horizon();
    return RoughPath(GridPath(TimeGrid(std::move(ts)), rp.path().values()), rp.level2());
}

static double candidate_score(const RoughPath& a, const RoughPath& b, double p,
                              const TimeChange& lambda) {
    RoughPath al = apply_time_change(a, lambda);
    TimeGrid common = al.grid().merged_with(b.grid());
    RoughPath ae = insert_times(al, common);
    RoughPath be = insert_times(b, common);
    return std::max(lambda.sup_deviation(), rough_distance(ae, be, p));
}

SkorokhodResult skorokhod_distance_upper(const RoughPath& a, const RoughPath& b, double p,
                                         const SkorokhodSearch& search) {
    const double T = a.grid().horizon();
    if (std::abs(T - b.grid().horizon()) > 1e-12)
        throw std::invalid_argument("skorokhod_distance_upper: horizons differ");
    SkorokhodResult res{0.0, 0.0, 0, "identity", TimeChange::identity(T)};
    res.identity_value = candidate_score(a, b, p, res.best);
    res.value = res.identity_value;
    res.candidates = 1;

    auto jump_times = [](const RoughPath& rp) {
        std::vector<double> ts;
        for (const auto& j : jump_profile(rp))
            if (j.time > 0.0 && j.time < rp.grid().horizon()) ts.push_back(j.time);
        return ts;
    };
    std::vector<double> ja = jump_times(a), jb = jump_times(b);

    auto try_candidate = [&](std::vector<std::pair<double, double>> knots, const char* fam) {
        TimeChange lam(T, std::move(knots));
        double s = candidate_score(a, b, p, lam);
        ++res.candidates;
        if (s < res.value) {
            res.value = s;
            res.best = lam;
            res.family = fam;
        }
    };

    if (search.full_matching && !ja.empty() && ja.size() == jb.size()) {
        // knots lambda(b_j) = a_j so that a o lambda jumps where b does
        std::vector<std::pair<double, double>> knots;
        bool ok = true;
        for (std::size_t j = 0; j < ja.size(); ++j) {
            if (std::abs(ja[j] - jb[j]) > search.max_shift) ok = false;
            if (std::abs(ja[j] - jb[j]) > 0.0) knots.emplace_back(jb[j], ja[j]);
        }
        if (ok) {
            try {
                try_candidate(std::move(knots), "full-matching");
            } catch (const std::invalid_argument&) {
            }
        }
    }
    if (search.pairwise_matching) {
        for (double ta : ja)
            for (double tb : jb) {
                if (ta == tb || std::abs(ta - tb) > search.max_shift) continue;
                try {
                    try_candidate({{tb, ta}}, "pair-matching");
                } catch (const std::invalid_argument&) {
                }
            }
    }
    return res;
}

} // namespace rpf
