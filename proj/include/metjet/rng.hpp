#pragma once

#include <cmath>
#include <cstdint>

#include "metjet/vec.hpp"

namespace metjet {

// splitmix64 generator. std::mt19937 would do, but the distributions on top
// of it (normal_distribution in particular) are implementation-defined;
// identical seeds must give byte-identical reports across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1]
    double u01_pos() { return 1.0 - u01(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Box-Muller; one value per call keeps the stream position predictable.
    double gaussian() {
        double u = u01_pos();
        double v = u01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586477 * v);
    }

    // uniform direction on the euclidean unit sphere
    Vec unit_dir(int dim) {
        Vec d(static_cast<std::size_t>(dim));
        for (;;) {
            for (auto& x : d) x = gaussian();
            double n = norm2(d);
            if (n > 1e-12) return scale(1.0 / n, d);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace metjet
