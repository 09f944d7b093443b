#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace harvest {

// Seeded stream with distribution transforms written out explicitly so that
// identical seeds give identical draws on every standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent substream; mixing keeps nearby (seed, stream) pairs uncorrelated.
    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return Rng(x);
    }

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian(double sigma) {
        if (sigma == 0.0) {
            return 0.0;
        }
        if (have_spare_) {
            have_spare_ = false;
            return sigma * spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return sigma * r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace harvest
