#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metjet/handle.hpp"
#include "metjet/rng.hpp"
#include "metjet/sampling.hpp"
#include "metjet/spaces.hpp"
#include "metjet/trace.hpp"
#include "metjet/vec.hpp"

namespace metjet {

// tangency comparisons require equal values at the base point
struct NotComparableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-radius record of the estimated sup of the tangency quotient
// C(x) = d(f(x), g(x)) / d(x, a) over the closed ball of that radius.
struct QuotientTrace {
    std::vector<double> radii;
    std::vector<double> sup_quotients;  // ball sups: nonincreasing as radius shrinks
    std::vector<Vec> argmax_points;
    std::vector<double> shell_sups;     // raw per-shell values, before ball nesting
};

enum class TangencyStatus { Tangent, NotTangent, Inconclusive };

inline const char* to_string(TangencyStatus s) {
    switch (s) {
        case TangencyStatus::Tangent: return "tangent";
        case TangencyStatus::NotTangent: return "not-tangent";
        case TangencyStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct TangencyVerdict {
    TangencyStatus status = TangencyStatus::Inconclusive;
    double limit_estimate = 0.0;
    QuotientTrace trace;
};

namespace detail {

struct ShellSup {
    double value = 0.0;
    Vec argmax;
    int evaluated = 0;
};

// Sup of `score` over the closed ball around `a` of radius r: exact +-axis
// points on the boundary, seeded directions with log-uniform magnitudes
// spanning cfg.inner_span, then a local hill-climb from the incumbent.
// Points where `admit` fails are redrawn (up to 10x oversampling).
template <typename Score, typename Admit>
ShellSup ball_sup(const Vec& a, double r, const SamplingConfig& cfg, std::uint64_t salt,
                  Score&& score, Admit&& admit) {
    const int dim = static_cast<int>(a.size());
    Rng rng(cfg.seed ^ salt);
    ShellSup best;
    auto consider = [&](const Vec& p) {
        if (!admit(p)) return false;
        double c = score(p);
        ++best.evaluated;
        if (std::isfinite(c) && c > best.value) {
            best.value = c;
            best.argmax = p;
        }
        return true;
    };
    for (int i = 0; i < dim; ++i) {
        consider(axpy(a, r, axis_dir(dim, i, +1.0)));
        consider(axpy(a, r, axis_dir(dim, i, -1.0)));
    }
    const double log_span = -std::log(cfg.inner_span);
    int accepted = 0, attempts = 0;
    const int budget = cfg.samples_per_shell * 10;
    while (accepted < cfg.samples_per_shell && attempts < budget) {
        ++attempts;
        Vec u = dim == 1 ? Vec{rng.u01() < 0.5 ? 1.0 : -1.0} : rng.unit_dir(dim);
        double mag = r * std::exp(-log_span * rng.u01());
        if (consider(axpy(a, mag, u))) ++accepted;
    }
    if (best.argmax.empty()) return best;
    double step = 0.5;
    for (int it = 0; it < cfg.refine_steps; ++it) {
        Vec probe = best.argmax;
        for (auto& c : probe) c += step * r * rng.gaussian();
        Vec d = sub(probe, a);
        double n = norm2(d);
        if (n > r) probe = axpy(a, r / n, d);  // clamp back into the ball
        consider(probe);
        step *= 0.88;
    }
    return best;
}

inline void require_in_domain(const FunctionHandle& f, const Vec& a, const char* who) {
    if (!f.contains(a)) throw std::domain_error(std::string(who) + ": base point outside domain");
}

inline void require_comparable(const FunctionHandle& f, const FunctionHandle& g, const Vec& a,
                               const SamplingConfig& cfg) {
    if (f.dim_in != g.dim_in || f.dim_out != g.dim_out)
        throw NotComparableError("tangency: dimension mismatch");
    require_in_domain(f, a, "tangency");
    require_in_domain(g, a, "tangency");
    Vec fa = f(a), ga = g(a);
    if (dist2(fa, ga) > cfg.tol_zero * (1.0 + norm2(fa)))
        throw NotComparableError("tangency requires f(a) = g(a)");
}

}  // namespace detail

// Estimated sup of C(x) = d(f(x), g(x)) / d(x, a) over the closed ball of
// radius r. A sampling lower bound of the exact sup; deterministic in
// (inputs, cfg.seed).
inline double quotient_sup(const FunctionHandle& f, const FunctionHandle& g, const Vec& a,
                           double r, const SamplingConfig& cfg) {
    detail::require_comparable(f, g, a, cfg);
    auto admit = [&](const Vec& p) { return f.contains(p) && g.contains(p); };
    auto score = [&](const Vec& p) {
        double den = dist2(p, a);
        if (den == 0.0) return 0.0;
        return dist2(f(p), g(p)) / den;
    };
    return detail::ball_sup(a, r, cfg, 0x9c0f1e5u, score, admit).value;
}

// The full radius trace; ball nesting (a deeper shell's samples lie in
// every enclosing ball) makes sup_quotients monotone by construction.
inline QuotientTrace quotient_trace(const FunctionHandle& f, const FunctionHandle& g, const Vec& a,
                                    const SamplingConfig& cfg) {
    detail::require_comparable(f, g, a, cfg);
    cfg.validate();
    auto admit = [&](const Vec& p) { return f.contains(p) && g.contains(p); };
    auto score = [&](const Vec& p) {
        double den = dist2(p, a);
        if (den == 0.0) return 0.0;
        return dist2(f(p), g(p)) / den;
    };
    QuotientTrace t;
    std::vector<detail::ShellSup> shells;
    for (std::size_t k = 0; k < cfg.radii.size(); ++k) {
        auto s = detail::ball_sup(a, cfg.radii[k], cfg, 0xa11ce000u + k, score, admit);
        if (s.evaluated == 0) break;  // domain exhausted below this radius
        shells.push_back(std::move(s));
        t.radii.push_back(cfg.radii[k]);
    }
    t.sup_quotients.resize(shells.size());
    t.argmax_points.resize(shells.size());
    t.shell_sups.resize(shells.size());
    double running = 0.0;
    Vec running_arg;
    for (std::size_t k = shells.size(); k-- > 0;) {
        t.shell_sups[k] = shells[k].value;
        if (shells[k].value >= running || running_arg.empty()) {
            running = shells[k].value;
            running_arg = shells[k].argmax;
        }
        t.sup_quotients[k] = running;
        t.argmax_points[k] = running_arg;
    }
    return t;
}

inline TangencyVerdict tangency_test(const FunctionHandle& f, const FunctionHandle& g, const Vec& a,
                                     const SamplingConfig& cfg) {
    TangencyVerdict v;
    v.trace = quotient_trace(f, g, a, cfg);
    const auto& sup = v.trace.sup_quotients;
    if (sup.size() < 3) return v;
    double tail = sup.back();
    v.limit_estimate = tail;
    if (tail <= cfg.tol_zero) {
        v.status = TangencyStatus::Tangent;
    } else {
        double spread = sup[sup.size() - 3] - tail;  // trace is nonincreasing
        if (spread <= cfg.tol_rel * (1.0 + tail)) v.status = TangencyStatus::NotTangent;
    }
    return v;
}

// d(f, g) at a: the r -> 0 limit of the ball sups. Returns +inf when the
// trace blows past cfg.divergence_bound (the maps are not comparable
// through locally lipschitzian representatives).
inline double jet_distance(const FunctionHandle& f, const FunctionHandle& g, const Vec& a,
                           const SamplingConfig& cfg) {
    QuotientTrace t = quotient_trace(f, g, a, cfg);
    if (t.sup_quotients.empty()) return std::numeric_limits<double>::quiet_NaN();
    for (double q : t.sup_quotients)
        if (!(q <= cfg.divergence_bound)) return std::numeric_limits<double>::infinity();
    return t.sup_quotients.back();
}

struct LipschitzEstimate {
    bool holds = false;
    double k_estimate = 0.0;
    std::vector<double> radii;
    std::vector<double> shell_k;  // per-shell constants, no nesting applied
};

namespace detail {

// growth across shrinking shells witnesses an unbounded local constant
inline bool shell_trace_bounded(const std::vector<double>& shell_k) {
    if (shell_k.size() < 5) return true;
    std::size_t n = shell_k.size();
    bool growing = shell_k[n - 1] > 1.5 * shell_k[0] + 1e-12;
    for (std::size_t i = n - 4; i < n && growing; ++i)
        growing = shell_k[i] > 1.02 * shell_k[i - 1];
    return !growing;
}

}  // namespace detail

// sup of d(f(x), f(a)) / d(x, a) over shrinking balls (the semi-lipschitzian
// constant against the base point)
inline LipschitzEstimate lsl_test(const FunctionHandle& f, const Vec& a,
                                  const SamplingConfig& cfg) {
    detail::require_in_domain(f, a, "lsl_test");
    cfg.validate();
    Vec fa = f(a);
    auto admit = [&](const Vec& p) { return f.contains(p); };
    auto score = [&](const Vec& p) {
        double den = dist2(p, a);
        if (den == 0.0) return 0.0;
        return dist2(f(p), fa) / den;
    };
    LipschitzEstimate e;
    for (std::size_t k = 0; k < cfg.radii.size(); ++k) {
        auto s = detail::ball_sup(a, cfg.radii[k], cfg, 0x15f10000u + k, score, admit);
        if (s.evaluated == 0) break;
        e.radii.push_back(cfg.radii[k]);
        e.shell_k.push_back(s.value);
    }
    if (e.shell_k.empty()) return e;
    bool bounded = detail::shell_trace_bounded(e.shell_k);
    double tail_max = 0.0;
    for (std::size_t i = e.shell_k.size() >= 3 ? e.shell_k.size() - 3 : 0; i < e.shell_k.size();
         ++i)
        tail_max = std::max(tail_max, e.shell_k[i]);
    e.k_estimate = tail_max;
    e.holds = bounded && tail_max <= cfg.divergence_bound;
    if (!e.holds) e.k_estimate = *std::max_element(e.shell_k.begin(), e.shell_k.end());
    return e;
}

// sup of pairwise quotients d(f(x), f(y)) / d(x, y) over pairs inside
// shrinking balls around a (the local lipschitzian constant)
inline LipschitzEstimate ll_test(const FunctionHandle& f, const Vec& a,
                                 const SamplingConfig& cfg) {
    detail::require_in_domain(f, a, "ll_test");
    cfg.validate();
    const int dim = f.dim_in;
    LipschitzEstimate e;
    for (std::size_t k = 0; k < cfg.radii.size(); ++k) {
        double r = cfg.radii[k];
        Rng rng(cfg.seed ^ (0x11AA0000u + k));
        std::vector<Vec> pts;
        for (int i = 0; i < dim; ++i) {
            pts.push_back(axpy(a, r, axis_dir(dim, i, +1.0)));
            pts.push_back(axpy(a, r, axis_dir(dim, i, -1.0)));
        }
        const double log_span = -std::log(cfg.inner_span);
        int want = std::min(cfg.samples_per_shell, 96), attempts = 0;
        while (static_cast<int>(pts.size()) < want && attempts < want * 10) {
            ++attempts;
            Vec u = dim == 1 ? Vec{rng.u01() < 0.5 ? 1.0 : -1.0} : rng.unit_dir(dim);
            Vec p = axpy(a, r * std::exp(-log_span * rng.u01()), u);
            if (f.contains(p)) pts.push_back(p);
        }
        std::erase_if(pts, [&](const Vec& p) { return !f.contains(p); });
        if (pts.size() < 2) break;
        std::vector<Vec> vals;
        vals.reserve(pts.size());
        for (const auto& p : pts) vals.push_back(f(p));
        double sup = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                double den = dist2(pts[i], pts[j]);
                if (den < 1e-300) continue;
                sup = std::max(sup, dist2(vals[i], vals[j]) / den);
            }
        // close pairs catch steep local slopes the coarse pairs miss
        for (const auto& p : pts) {
            double h = dist2(p, a);
            if (h == 0.0) continue;
            for (double delta : {1e-2, 1e-4}) {
                Vec u = dim == 1 ? Vec{p[0] > a[0] ? 1.0 : -1.0} : rng.unit_dir(dim);
                Vec q = axpy(p, delta * h, u);
                if (dist2(q, a) > r || !f.contains(q)) continue;
                double den = dist2(p, q);
                if (den < 1e-300) continue;
                sup = std::max(sup, dist2(f(p), f(q)) / den);
            }
        }
        e.radii.push_back(r);
        e.shell_k.push_back(sup);
    }
    if (e.shell_k.empty()) return e;
    bool bounded = detail::shell_trace_bounded(e.shell_k);
    double tail_max = 0.0;
    for (std::size_t i = e.shell_k.size() >= 3 ? e.shell_k.size() - 3 : 0; i < e.shell_k.size();
         ++i)
        tail_max = std::max(tail_max, e.shell_k[i]);
    e.k_estimate = tail_max;
    e.holds = bounded && tail_max <= cfg.divergence_bound;
    if (!e.holds) e.k_estimate = *std::max_element(e.shell_k.begin(), e.shell_k.end());
    return e;
}

// ---------------------------------------------------------------------------
// norms and lipschitzian ratios of homogeneous maps

enum class HomogClass { General, RplusHomog, rFractal };

namespace detail {

struct Region {
    double lo = 0.0;       // magnitudes strictly above lo ...
    double hi = 1.0;       // ... and at most hi
    bool full_ball = false;  // include interior down to cfg.inner_span
};

inline Region homog_region(HomogClass cls, const ContractingSpace& s, double eps_annulus) {
    switch (cls) {
        case HomogClass::General: {
            Region r;
            r.full_ball = true;
            return r;
        }
        case HomogClass::RplusHomog: {
            Region r;
            r.lo = 1.0 - eps_annulus;
            r.hi = 1.0 + eps_annulus;
            return r;
        }
        case HomogClass::rFractal: {
            if (s.monoid.kind != MonoidKind::NrMonoid)
                throw std::invalid_argument("rFractal class requires an NrMonoid space");
            Region r;
            r.lo = s.monoid.r;
            r.hi = 1.0 + eps_annulus;
            return r;
        }
    }
    throw std::logic_error("homog_region");
}

// log-spaced magnitudes in (lo, hi]
inline std::vector<double> region_magnitudes(const Region& reg, int count, double inner_span) {
    std::vector<double> mags;
    double lo = reg.full_ball ? inner_span : std::max(reg.lo, 1e-12);
    double hi = reg.hi;
    double llo = std::log(lo), lhi = std::log(hi);
    for (int j = 0; j < count; ++j) {
        double u = (j + 1.0) / count;  // excludes lo, includes hi
        mags.push_back(std::exp(llo + u * (lhi - llo)));
    }
    return mags;
}

inline std::vector<Vec> region_points(const ContractingSpace& s, const Region& reg,
                                      const SamplingConfig& cfg, std::uint64_t salt) {
    const int dim = s.dim;
    int mag_count = dim == 1 ? cfg.samples_per_shell : std::max(cfg.samples_per_shell / 8, 24);
    auto mags = region_magnitudes(reg, mag_count, cfg.inner_span);
    std::vector<Vec> dirs;
    for (int i = 0; i < dim; ++i) {
        dirs.push_back(axis_dir(dim, i, +1.0));
        dirs.push_back(axis_dir(dim, i, -1.0));
    }
    if (dim > 1) {
        Rng rng(cfg.seed ^ salt);
        for (int j = 0; j < cfg.direction_count; ++j) dirs.push_back(rng.unit_dir(dim));
        for (auto& d : grid_directions(dim, 16)) dirs.push_back(std::move(d));
    }
    std::vector<Vec> pts;
    pts.reserve(mags.size() * dirs.size());
    for (double m : mags)
        for (const auto& d : dirs) {
            // magnitudes are measured in the space's own norm
            pts.push_back(axpy(s.base, m / norm_p(d, s.norm_p), d));
        }
    return pts;
}

}  // namespace detail

// ||h|| = sup d(h(x), h(w)) / d(x, w) over the class region: unit sphere for
// R+-homogeneous maps, the (r, 1] annulus for r-fractal maps, the closed
// unit ball otherwise.
inline double norm_homog(const FunctionHandle& h, const ContractingSpace& s, HomogClass cls,
                         const SamplingConfig& cfg) {
    if (h.dim_in != s.dim) throw std::invalid_argument("norm_homog: dimension mismatch");
    detail::Region reg = detail::homog_region(cls, s, 0.0);
    if (cls == HomogClass::RplusHomog) reg.lo = reg.hi = 1.0;
    Vec h_base = h(s.base);
    auto pts = detail::region_points(s, reg, cfg, 0x40124e3ULL);
    double sup = 0.0;
    Vec best;
    for (const auto& p : pts) {
        if (!h.contains(p)) continue;
        double den = dist_p(p, s.base, s.norm_p);
        if (den == 0.0) continue;
        double c = dist_p(h(p), h_base, s.norm_p) / den;
        if (std::isfinite(c) && c > sup) {
            sup = c;
            best = p;
        }
    }
    if (best.empty()) return sup;
    Rng rng(cfg.seed ^ 0x5e71e0ULL);
    double step = 0.3;
    for (int it = 0; it < cfg.refine_steps; ++it) {
        Vec probe = best;
        for (auto& c : probe) c += step * rng.gaussian();
        double m = dist_p(probe, s.base, s.norm_p);
        if (m <= reg.lo || m > reg.hi || m == 0.0) {
            double target = std::clamp(m, std::nextafter(reg.lo, 2.0), reg.hi);
            probe = axpy(s.base, target / m, sub(probe, s.base));
        }
        if (!h.contains(probe)) continue;
        double den = dist_p(probe, s.base, s.norm_p);
        if (den == 0.0) continue;
        double c = dist_p(h(probe), h_base, s.norm_p) / den;
        if (std::isfinite(c) && c > sup) {
            sup = c;
            best = probe;
        }
        step *= 0.9;
    }
    return sup;
}

// lipschitzian ratio: pairwise sup of d(h(x), h(y)) / d(x, y) over the
// class-appropriate region (ball / sphere annulus / fractal annulus)
inline double lipschitz_ratio_homog(const FunctionHandle& h, const ContractingSpace& s,
                                    HomogClass cls, double eps_annulus,
                                    const SamplingConfig& cfg) {
    if (h.dim_in != s.dim) throw std::invalid_argument("lipschitz_ratio_homog: dim mismatch");
    if (!(eps_annulus > 0.0)) throw std::invalid_argument("lipschitz_ratio_homog: eps <= 0");
    detail::Region reg = detail::homog_region(cls, s, eps_annulus);
    auto pts = detail::region_points(s, reg, cfg, 0x9a1f5ULL);
    std::erase_if(pts, [&](const Vec& p) { return !h.contains(p); });
    // cap the all-pairs stage; close pairs below carry the sharp local slopes
    const std::size_t cap = 384;
    if (pts.size() > cap) {
        std::vector<Vec> kept;
        kept.reserve(cap);
        double stride = static_cast<double>(pts.size()) / cap;
        for (std::size_t i = 0; i < cap; ++i)
            kept.push_back(pts[static_cast<std::size_t>(i * stride)]);
        pts.swap(kept);
    }
    std::vector<Vec> vals;
    vals.reserve(pts.size());
    for (const auto& p : pts) vals.push_back(h(p));
    double sup = 0.0;
    Vec best_x, best_y;
    auto consider_pair = [&](const Vec& x, const Vec& hx, const Vec& y, const Vec& hy) {
        double den = dist_p(x, y, s.norm_p);
        if (den < 1e-300) return;
        double c = dist_p(hx, hy, s.norm_p) / den;
        if (std::isfinite(c) && c > sup) {
            sup = c;
            best_x = x;
            best_y = y;
        }
    };
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            consider_pair(pts[i], vals[i], pts[j], vals[j]);
    // close pairs approximate directional derivatives inside the region
    Rng rng(cfg.seed ^ 0xc105e1ULL);
    const int dim = s.dim;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (double delta : {1e-2, 1e-4, 1e-6}) {
            for (int rep = 0; rep < (dim == 1 ? 1 : 3); ++rep) {
                Vec u = dim == 1 ? Vec{1.0} : rng.unit_dir(dim);
                Vec q = axpy(pts[i], delta, u);
                double m = dist_p(q, s.base, s.norm_p);
                if (m <= reg.lo || m > reg.hi) continue;
                if (!h.contains(q)) continue;
                consider_pair(pts[i], vals[i], q, h(q));
            }
        }
    }
    // local refinement of the incumbent pair
    if (!best_x.empty()) {
        double step = 0.05;
        for (int it = 0; it < cfg.refine_steps; ++it) {
            Vec x = best_x, y = best_y;
            double scale = step * std::max(dist_p(best_x, best_y, s.norm_p), 1e-9);
            for (auto& c : x) c += scale * rng.gaussian();
            for (auto& c : y) c += scale * rng.gaussian();
            auto inside = [&](const Vec& p) {
                double m = dist_p(p, s.base, s.norm_p);
                return m > reg.lo && m <= reg.hi && h.contains(p);
            };
            if (inside(x) && inside(y)) consider_pair(x, h(x), y, h(y));
            step *= 0.92;
        }
    }
    return sup;
}

}  // namespace metjet
