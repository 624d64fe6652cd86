#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Counter-keyed RNG with per-sample substreams. Each (seed, stream) pair
// yields an independent deterministic sequence, so Monte Carlo loops can hand
// stream = sample index to each work item and stay reproducible under any
// thread count.
namespace erlmix {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class StreamRng {
  public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t s = seed;
        std::uint64_t a = detail::splitmix64(s);
        s = stream ^ 0x6a09e667f3bcc909ULL;
        std::uint64_t b = detail::splitmix64(s);
        state_ = a ^ (b + 0x9e3779b97f4a7c15ULL);
        // burn-in decorrelates nearby (seed, stream) keys
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Poisson via inversion by CDF recursion; large means are split so the
    // pmf recursion never underflows.
    std::int64_t poisson(double lambda) {
        if (lambda < 0.0) throw std::invalid_argument("poisson: lambda < 0");
        if (lambda == 0.0) return 0;
        if (lambda > 30.0) {
            const double half = std::floor(lambda / 2.0);
            return poisson(half) + poisson(lambda - half);
        }
        const double u = uniform();
        double p = std::exp(-lambda);
        double cdf = p;
        std::int64_t k = 0;
        while (u >= cdf && k < 10000) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cdf += p;
        }
        return k;
    }

  private:
    std::uint64_t state_;
};

}  // namespace erlmix
