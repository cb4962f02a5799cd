#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "metjet/rng.hpp"
#include "metjet/vec.hpp"

namespace metjet {

// Knobs shared by every estimator. All estimators are pure functions of
// (inputs, seed); identical configs give identical results.
struct SamplingConfig {
    std::vector<double> radii;        // strictly decreasing shell radii
    int samples_per_shell = 256;      // seeded samples per shell
    int direction_count = 64;         // seeded directions (axes are always added)
    double tol_zero = 1e-6;           // "is zero" threshold
    double tol_rel = 1e-3;            // relative stabilisation tolerance
    std::uint64_t seed = 0x5eedULL;
    double divergence_bound = 1e9;

    // limit-extrapolation knobs
    int schedule_depth = 40;          // scalar net length; r^n underflow guard
    double seed_ratio = 0.5;          // geometric net ratio for real monoids
    int refine_steps = 64;            // local hill-climb budget on sup estimates
    double inner_span = 1e-3;         // magnitude span of one shell (3 decades)
    double lipschitz_guard = 1e6;     // contact slope beyond this refutes lipschitz

    SamplingConfig() {
        radii.reserve(10);
        for (int k = 1; k <= 10; ++k) radii.push_back(std::pow(10.0, -k));
    }

    void validate() const {
        if (radii.size() < 2) throw std::invalid_argument("cfg: need at least 2 radii");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (!(radii[i] > 0)) throw std::invalid_argument("cfg: radii must be positive");
            if (i > 0 && !(radii[i] < radii[i - 1]))
                throw std::invalid_argument("cfg: radii must be strictly decreasing");
        }
    }
};

// Direction set used by contact estimators and sphere scans: every +-axis
// direction first (in dim 1 exactly {+1,-1}), then seeded unit vectors.
inline std::vector<Vec> probe_directions(int dim, const SamplingConfig& cfg) {
    std::vector<Vec> dirs;
    for (int i = 0; i < dim; ++i) {
        dirs.push_back(axis_dir(dim, i, +1.0));
        dirs.push_back(axis_dir(dim, i, -1.0));
    }
    if (dim > 1) {
        Rng rng(cfg.seed ^ 0xd1ec7104a1ULL);
        for (int k = 0; k < cfg.direction_count; ++k) dirs.push_back(rng.unit_dir(dim));
    }
    return dirs;
}

// Great-circle grids in every coordinate plane; the sphere minimum in the
// extremum test is driven by these in low dimension.
inline std::vector<Vec> grid_directions(int dim, int per_pair) {
    std::vector<Vec> dirs;
    if (dim < 2) return dirs;
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            for (int k = 0; k < per_pair; ++k) {
                double th = 6.283185307179586477 * k / per_pair;
                Vec d(static_cast<std::size_t>(dim), 0.0);
                d[static_cast<std::size_t>(i)] = std::cos(th);
                d[static_cast<std::size_t>(j)] = std::sin(th);
                dirs.push_back(d);
            }
    return dirs;
}

}  // namespace metjet
