#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "metjet/contact.hpp"
#include "metjet/handle.hpp"
#include "metjet/sampling.hpp"
#include "metjet/spaces.hpp"
#include "metjet/vec.hpp"

namespace metjet {

enum class ExtremumStatus { StrictLocalMin, NotLocalMin, Inconclusive };

inline const char* to_string(ExtremumStatus s) {
    switch (s) {
        case ExtremumStatus::StrictLocalMin: return "strict-local-min";
        case ExtremumStatus::NotLocalMin: return "not-local-min";
        case ExtremumStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct ExtremumVerdict {
    ExtremumStatus status = ExtremumStatus::Inconclusive;
    double sphere_min = std::numeric_limits<double>::quiet_NaN();
    Vec witness;
    double pos_margin = 0.0;
    int unconverged_directions = 0;
};

namespace extrema_detail {

inline std::vector<Vec> sphere_scan(int dim, const SamplingConfig& cfg) {
    auto dirs = probe_directions(dim, cfg);
    if (dim >= 2 && dim <= 3)
        for (auto& d : grid_directions(dim, 256)) dirs.push_back(std::move(d));
    return dirs;
}

}  // namespace extrema_detail

// First-order test: a strictly positive first-order model over the sphere
// certifies a strict local minimum (sound in finite dimension, where the
// sphere is compact); a converged negative direction refutes a local
// minimum outright.
inline ExtremumVerdict first_order_min_test(const FunctionHandle& f, const Vec& a,
                                            const ValuedMonoid& m, const SamplingConfig& cfg) {
    if (f.dim_out != 1) throw std::invalid_argument("first_order_min_test: codomain must be R");
    if (!f.contains(a)) throw std::domain_error("first_order_min_test: point not interior");
    ExtremumVerdict v;
    auto dirs = extrema_detail::sphere_scan(f.dim_in, cfg);
    std::vector<double> values;
    values.reserve(dirs.size());
    double min_val = std::numeric_limits<double>::infinity();
    Vec min_dir;
    for (const auto& d : dirs) {
        auto tr = directional_quotient(f, a, d, m, cfg);
        if (tr.analysis.status != TraceStatus::Converged) {
            ++v.unconverged_directions;
            continue;
        }
        double val = tr.analysis.limit[0];
        values.push_back(std::abs(val));
        if (val < min_val) {
            min_val = val;
            min_dir = d;
        }
    }
    if (values.empty()) return v;
    std::nth_element(values.begin(), values.begin() + values.size() / 2, values.end());
    double median = values[values.size() / 2];
    v.pos_margin = 10.0 * cfg.tol_rel * (1.0 + median);
    v.sphere_min = min_val;
    v.witness = min_dir;
    if (min_val < -v.pos_margin)
        v.status = ExtremumStatus::NotLocalMin;
    else if (v.unconverged_directions > 0)
        v.status = ExtremumStatus::Inconclusive;
    else if (min_val > v.pos_margin)
        v.status = ExtremumStatus::StrictLocalMin;
    return v;
}

inline ExtremumVerdict first_order_min_test(const FunctionHandle& f, const Vec& a,
                                            const SamplingConfig& cfg) {
    return first_order_min_test(f, a, ValuedMonoid::rplus(), cfg);
}

// Necessary condition at a minimiser: the first-order model itself never
// dips below zero (on the sphere, hence anywhere by homogeneity).
inline bool contact_global_min_check(const FunctionHandle& h, const SamplingConfig& cfg) {
    if (h.dim_out != 1)
        throw std::invalid_argument("contact_global_min_check: codomain must be R");
    Vec zero(static_cast<std::size_t>(h.dim_in), 0.0);
    if (std::abs(h(zero)[0]) > cfg.tol_zero)
        throw std::invalid_argument("contact_global_min_check: h must fix the origin");
    double min_val = 0.0;
    for (const auto& d : extrema_detail::sphere_scan(h.dim_in, cfg)) {
        if (!h.contains(d)) continue;
        min_val = std::min(min_val, h(d)[0]);
    }
    return min_val >= -cfg.tol_zero;
}

}  // namespace metjet
