#ifndef UDN_RNG_HPP
#define UDN_RNG_HPP

// Counter-based random streams for the simulator. Each Monte Carlo trial owns
// an independent stream derived from (seed, trial_index), so estimates do not
// depend on how trials are scheduled across workers.

#include <cstdint>
#include <cmath>
#include <limits>

namespace udn {

// splitmix64 finalizer; full-period, passes BigCrush as a mixing function.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Stream {
  public:
    using result_type = std::uint64_t;

    Stream(std::uint64_t seed, std::uint64_t stream_index)
        : state_(mix64(seed ^ mix64(stream_index * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform on (0, 1]; never returns 0 so -log(u) is always finite
    double uniform() { return (double((*this)() >> 11) + 1.0) * 0x1.0p-53; }

    // uniform on [0, 1)
    double uniform_co() { return double((*this)() >> 11) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform()); }

    // standard normal, Box-Muller; consumes two uniforms per pair
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform_co();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace udn

#endif // UDN_RNG_HPP
