#ifndef RPF_RNG_HPP
#define RPF_RNG_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace rpf {

// Counter-based stream: the key is derived by hashing (root seed, label path),
// draws are a mix function of key + counter. Same (seed, labels) gives the same
// draws under any thread schedule; distinct label paths give distinct streams.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    RngStream child(std::string_view label) const;
    RngStream child(std::uint64_t index) const;

    std::uint64_t next_u64();
    double uniform();       // in (0, 1)
    double normal();        // standard Gaussian (Box-Muller, cached pair)
    double exponential();   // rate 1
    std::uint64_t poisson(double mean);
    // index into cumulative weights (unnormalized), size n
    std::size_t categorical(const double* weights, std::size_t n);

    std::uint64_t key() const { return key_; }

private:
    RngStream(std::uint64_t key, int); // from derived key
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

} // namespace rpf

#endif
