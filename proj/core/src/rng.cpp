#include "rpf/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace rpf {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL; // FNV-1a
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

} // namespace

RngStream::RngStream(std::uint64_t seed) : key_(mix64(seed + kGamma)) {}
RngStream::RngStream(std::uint64_t key, int) : key_(key) {}

RngStream RngStream::child(std::string_view label) const {
    return RngStream(mix64(key_ ^ hash_label(label)), 0);
}

RngStream RngStream::child(std::uint64_t index) const {
    return RngStream(mix64(key_ ^ (mix64(index + kGamma) | 1ULL)), 0);
}

std::uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
}

double RngStream::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

double RngStream::exponential() { return -std::log(uniform()); }

std::uint64_t RngStream::poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0) return 0;
    if (mean < 64.0) {
        // inversion by summing exponential gaps
        double acc = exponential();
        std::uint64_t k = 0;
        while (acc < mean) {
            ++k;
            acc += exponential();
        }
        return k;
    }
    // normal approximation with continuity correction (only used for large means)
    double x = mean + std::sqrt(mean) * normal() + 0.5;
    return x < 0.0 ? 0ULL : static_cast<std::uint64_t>(x);
}

std::size_t RngStream::categorical(const double* weights, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += weights[i];
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += weights[i];
        if (u <= acc) return i;
    }
    return n - 1;
}

} // namespace rpf
