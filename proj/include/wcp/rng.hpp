#pragma once

#include <cstdint>
#include <random>

#include "wcp/special.hpp"

namespace wcp {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded generator with inverse-transform variates. All mapping from raw
// bits to doubles is done here so that streams are reproducible across
// platforms and standard-library versions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() { return normal_quantile(uniform()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Substream for replicate `index` of a study with master seed `master`.
    // Derivation: splitmix64(master ^ golden-ratio stride of the index),
    // so replicates are independent and order-free.
    static Rng substream(std::uint64_t master, std::uint64_t index) {
        return Rng(splitmix64(master ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace wcp
