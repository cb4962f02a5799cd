#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "metjet/vec.hpp"

namespace metjet {

enum class TraceStatus { Converged, Oscillating, Diverged, Inconclusive };

inline const char* to_string(TraceStatus s) {
    switch (s) {
        case TraceStatus::Converged: return "converged";
        case TraceStatus::Oscillating: return "oscillating";
        case TraceStatus::Diverged: return "diverged";
        case TraceStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct TraceAnalysis {
    TraceStatus status = TraceStatus::Inconclusive;
    Vec limit;                  // meaningful when Converged
    int window_index = -1;      // centre of the accepted stabilisation window
    double window_spread = std::numeric_limits<double>::infinity();
    double tail_range = 0.0;    // max pairwise distance over the last 5 entries
};

namespace detail {

// Rounding allowance for the k-th difference quotient. Entries are of the
// form (f(a + s x) - f(a))/s, so cancellation noise grows like
// eps * (|a| + |f(a)|) / s as s shrinks; noise_scale carries |a| + |f(a)|.
inline double quotient_noise_allowance(double noise_scale, double scale) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    return 64.0 * eps * noise_scale / std::max(scale, 1e-300);
}

}  // namespace detail

// Classify a difference-quotient trace q_0..q_N taken along decreasing
// scales s_0 > s_1 > ... . A trace converges when some 3-entry window is
// pairwise tight (relative tol) and every later entry stays inside the
// window value's band, up to the depth-dependent rounding allowance. The
// reported limit is the window entry; scanning all windows instead of only
// the tail keeps deep, cancellation-dominated entries from spoiling the
// verdict while never trusting them for the value itself.
inline TraceAnalysis analyze_trace(const std::vector<Vec>& entries,
                                   const std::vector<double>& scales, double tol_rel,
                                   double divergence_bound, double noise_scale) {
    TraceAnalysis out;
    const std::size_t n = entries.size();
    if (n < 5) return out;  // too short to certify anything

    std::vector<double> mag(n), allow(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = norm2(entries[i]);
        allow[i] = detail::quotient_noise_allowance(noise_scale, scales[i]);
        if (!std::isfinite(mag[i]) || mag[i] > divergence_bound) {
            out.status = TraceStatus::Diverged;
            return out;
        }
    }

    // monotone blow-up below the hard bound is still divergence
    if (n >= 6) {
        bool growing = mag[n - 1] > 1e3 * (1.0 + mag[0]);
        for (std::size_t i = n - 5; i < n && growing; ++i)
            growing = mag[i] > 1.05 * mag[i - 1];
        if (growing) {
            out.status = TraceStatus::Diverged;
            return out;
        }
    }

    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        double spread = std::max({dist2(entries[k - 1], entries[k]),
                                  dist2(entries[k], entries[k + 1]),
                                  dist2(entries[k - 1], entries[k + 1])});
        double band = tol_rel * (1.0 + mag[k]);
        if (spread > band + allow[k - 1] + allow[k + 1]) continue;
        bool tail_ok = true;
        for (std::size_t m = k + 2; m < n; ++m) {
            if (dist2(entries[m], entries[k]) > band + allow[m] + allow[k]) {
                tail_ok = false;
                break;
            }
        }
        if (!tail_ok) continue;
        double score = spread + allow[k];
        if (score < best_score) {
            best_score = score;
            out.window_index = static_cast<int>(k);
            out.window_spread = spread;
        }
    }
    if (out.window_index >= 0) {
        out.status = TraceStatus::Converged;
        out.limit = entries[static_cast<std::size_t>(out.window_index)];
        return out;
    }

    // refutation evidence: a bounded tail that keeps moving
    double range = 0.0, mean = 0.0, max_allow = 0.0;
    for (std::size_t i = n - 5; i < n; ++i) {
        mean += mag[i] / 5.0;
        max_allow = std::max(max_allow, allow[i]);
        for (std::size_t j = i + 1; j < n; ++j)
            range = std::max(range, dist2(entries[i], entries[j]));
    }
    out.tail_range = range;
    if (range > 3.0 * tol_rel * (1.0 + mean) + 4.0 * max_allow)
        out.status = TraceStatus::Oscillating;
    return out;
}

inline TraceAnalysis analyze_scalar_trace(const std::vector<double>& entries,
                                          const std::vector<double>& scales, double tol_rel,
                                          double divergence_bound, double noise_scale) {
    std::vector<Vec> wrapped;
    wrapped.reserve(entries.size());
    for (double q : entries) wrapped.push_back(vec1(q));
    return analyze_trace(wrapped, scales, tol_rel, divergence_bound, noise_scale);
}

}  // namespace metjet
