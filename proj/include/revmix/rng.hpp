#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace revmix {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Documented seed-split rule: the stream for sub-index `index` of `master`
// is splitmix64(master XOR splitmix64(index+1)).  Deterministic per
// (master, index); streams for distinct indices are uncorrelated.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1)
    double uniform_pos() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return eng_(); }

    // Geometric on {1, 2, ...} with success probability p: P(G=g) = (1-p)^(g-1) p.
    // Returned as double so that runs far beyond 2^53 remain usable; such runs
    // are exact only to double resolution, which is immaterial for window
    // truncation at the scales involved.
    double geometric(double p) {
        if (p >= 1.0) return 1.0;
        double u = uniform_pos();
        double g = std::ceil(std::log(u) / std::log1p(-p));
        return g < 1.0 ? 1.0 : g;
    }

    // standard Laplace via inverse CDF
    double laplace() {
        double u = uniform_pos();
        return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    }

    // Poisson with mean 1 via inversion by sequential search
    int poisson1() {
        double u = uniform();
        double p = std::exp(-1.0);
        double cum = p;
        int k = 0;
        while (u > cum && k < 64) {
            ++k;
            p /= static_cast<double>(k);
            cum += p;
        }
        return k;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace revmix
