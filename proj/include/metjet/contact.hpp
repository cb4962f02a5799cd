#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "metjet/handle.hpp"
#include "metjet/sampling.hpp"
#include "metjet/spaces.hpp"
#include "metjet/tangency.hpp"
#include "metjet/trace.hpp"
#include "metjet/vec.hpp"

namespace metjet {

// One direction's difference-quotient trace
// q_k = (f(a + v(t_k) x) - f(a)) / v(t_k) along the scalar net of the monoid.
struct DirectionalTrace {
    Vec direction;
    std::vector<double> scales;
    std::vector<Vec> values;
    bool domain_exit = false;
    TraceAnalysis analysis;
};

inline DirectionalTrace directional_quotient(const FunctionHandle& f, const Vec& a, const Vec& x,
                                             const ValuedMonoid& m, const SamplingConfig& cfg) {
    if (static_cast<int>(a.size()) != f.dim_in || a.size() != x.size())
        throw std::invalid_argument("directional_quotient: dimension mismatch");
    if (!f.contains(a)) throw std::domain_error("directional_quotient: base point not interior");
    DirectionalTrace tr;
    tr.direction = x;
    Vec fa = f(a);
    auto schedule = scalar_schedule(m, cfg.schedule_depth + 1, cfg.seed_ratio);
    for (const auto& t : schedule) {
        double v = valuation(m, t);
        if (v <= 0.0) continue;
        Vec p = axpy(a, v, x);
        if (!f.contains(p)) {
            if (tr.values.empty()) continue;  // net not yet inside the domain
            tr.domain_exit = true;
            break;
        }
        tr.scales.push_back(v);
        tr.values.push_back(scale(1.0 / v, sub(f(p), fa)));
    }
    double noise_scale = norm2(a) + norm2(fa);
    tr.analysis =
        analyze_trace(tr.values, tr.scales, cfg.tol_rel, cfg.divergence_bound, noise_scale);
    if (tr.domain_exit && tr.analysis.status != TraceStatus::Converged)
        tr.analysis.status = TraceStatus::Inconclusive;
    return tr;
}

enum class ContactStatus { Contactable, NotContactable, Inconclusive };

inline const char* to_string(ContactStatus s) {
    switch (s) {
        case ContactStatus::Contactable: return "contactable";
        case ContactStatus::NotContactable: return "not-contactable";
        case ContactStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct OscillationWitness {
    Vec direction;
    double tail_range = 0.0;
    std::string reason;  // "oscillation", "divergence" or "lipschitz"
};

struct ContactVerdict {
    ContactStatus status = ContactStatus::Inconclusive;
    ValuedMonoid monoid;
    Vec base;
    // replays the directional limit on demand; NaNs when a requested
    // direction fails to converge
    std::function<Vec(const Vec&)> contact_eval;
    std::vector<DirectionalTrace> traces;
    std::optional<OscillationWitness> oscillation_witness;
};

namespace detail {

// Sampled refutation of the lipschitz half of contactability: converged
// directional limits assemble into a map that must carry bounded slopes;
// blowing slopes between nearby sphere directions disprove them. Only
// meaningful in dimension >= 2 (on the line the two one-sided limits always
// assemble into a lipschitzian cone).
inline std::optional<OscillationWitness> lipschitz_refutation(const FunctionHandle& f, const Vec& a,
                                                              const ValuedMonoid& m,
                                                              const SamplingConfig& cfg) {
    const int dim = f.dim_in;
    if (dim < 2) return std::nullopt;
    Vec fa = f(a);
    const double eps_scale =
        std::numeric_limits<double>::epsilon() * (1.0 + norm2(a) + norm2(fa));
    for (int i = 0; i < dim; ++i) {
        for (double si : {+1.0, -1.0}) {
            Vec u = axis_dir(dim, i, si);
            for (int j = 0; j < dim; ++j) {
                if (j == i) continue;
                for (int k = 1; k <= 8; ++k) {
                    double off = std::pow(10.0, -k);
                    Vec w = normalized(axpy(u, off, axis_dir(dim, j, +1.0)));
                    Vec w2 = normalized(axpy(u, off * (1.0 + 1e-6), axis_dir(dim, j, +1.0)));
                    double sep = dist2(w, w2);
                    if (sep < 1e-14) continue;
                    auto t1 = directional_quotient(f, a, w, m, cfg);
                    auto t2 = directional_quotient(f, a, w2, m, cfg);
                    if (t1.analysis.status != TraceStatus::Converged ||
                        t2.analysis.status != TraceStatus::Converged)
                        continue;
                    double gap = dist2(t1.analysis.limit, t2.analysis.limit);
                    double noise = t1.analysis.window_spread + t2.analysis.window_spread +
                                   eps_scale;
                    if (gap > cfg.lipschitz_guard * sep && gap > 100.0 * noise) {
                        OscillationWitness ow;
                        ow.direction = w;
                        ow.tail_range = gap / sep;
                        ow.reason = "lipschitz";
                        return ow;
                    }
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Estimate the generalized first-order model of f at a for the monoid m by
// running the directional limit over a probe direction set. Contactable
// needs every probed trace to converge and the assembled limits to look
// lipschitzian; a persistently oscillating or diverging trace refutes.
inline ContactVerdict estimate_contact(const FunctionHandle& f, const Vec& a,
                                       const ValuedMonoid& m, const SamplingConfig& cfg) {
    if (!f.contains(a)) throw std::domain_error("estimate_contact: base point not interior");
    ContactVerdict v;
    v.monoid = m;
    v.base = a;
    auto dirs = probe_directions(f.dim_in, cfg);
    bool any_inconclusive = false;
    for (const auto& d : dirs) {
        auto tr = directional_quotient(f, a, d, m, cfg);
        switch (tr.analysis.status) {
            case TraceStatus::Converged: break;
            case TraceStatus::Oscillating:
                if (!v.oscillation_witness)
                    v.oscillation_witness =
                        OscillationWitness{d, tr.analysis.tail_range, "oscillation"};
                break;
            case TraceStatus::Diverged:
                if (!v.oscillation_witness || v.oscillation_witness->reason == "oscillation")
                    v.oscillation_witness = OscillationWitness{d, tr.analysis.tail_range,
                                                               "divergence"};
                break;
            case TraceStatus::Inconclusive: any_inconclusive = true; break;
        }
        v.traces.push_back(std::move(tr));
    }
    if (v.oscillation_witness) {
        v.status = ContactStatus::NotContactable;
    } else if (any_inconclusive) {
        v.status = ContactStatus::Inconclusive;
    } else {
        if (auto ow = detail::lipschitz_refutation(f, a, m, cfg)) {
            v.status = ContactStatus::NotContactable;
            v.oscillation_witness = ow;
        } else {
            v.status = ContactStatus::Contactable;
        }
    }
    if (v.status == ContactStatus::Contactable) {
        int dim_out = f.dim_out;
        v.contact_eval = [f, a, m, cfg, dim_out](const Vec& x) -> Vec {
            if (norm2(x) == 0.0) return Vec(static_cast<std::size_t>(dim_out), 0.0);
            auto tr = directional_quotient(f, a, x, m, cfg);
            if (tr.analysis.status == TraceStatus::Converged) return tr.analysis.limit;
            return Vec(static_cast<std::size_t>(dim_out),
                       std::numeric_limits<double>::quiet_NaN());
        };
    }
    return v;
}

// left/right derivative pair of a scalar function; assembles into the
// two-ray cone that is the R+ contact in dimension one
struct GDiff1D {
    double left = 0.0;
    double right = 0.0;

    FunctionHandle assemble() const {
        double l = left, r = right;
        return make_scalar_handle([l, r](double t) { return t >= 0.0 ? t * r : t * l; },
                                  "cone");
    }
};

inline std::optional<GDiff1D> gdiff_1d(const FunctionHandle& f, double a,
                                       const SamplingConfig& cfg) {
    if (f.dim_in != 1 || f.dim_out != 1)
        throw std::invalid_argument("gdiff_1d: expects a scalar function of one variable");
    auto m = ValuedMonoid::rplus();
    auto plus = directional_quotient(f, vec1(a), vec1(+1.0), m, cfg);
    auto minus = directional_quotient(f, vec1(a), vec1(-1.0), m, cfg);
    if (plus.analysis.status != TraceStatus::Converged ||
        minus.analysis.status != TraceStatus::Converged)
        return std::nullopt;
    GDiff1D g;
    g.right = plus.analysis.limit[0];
    g.left = -minus.analysis.limit[0];
    return g;
}

struct HomogeneityResult {
    bool holds = false;
    double max_defect = 0.0;  // max of d(h(t*x), t*h(x)) / (1 + d(x, base))
    Scalar witness_scalar;
    Vec witness_point;
};

// h(t * x) = t * h(x) over sampled scalars x points
inline HomogeneityResult homogeneity_check(const FunctionHandle& h, const ValuedMonoid& m,
                                           const ContractingSpace& s_dom,
                                           const ContractingSpace& s_cod,
                                           const SamplingConfig& cfg) {
    if (h.dim_in != s_dom.dim || h.dim_out != s_cod.dim)
        throw std::invalid_argument("homogeneity_check: dimension mismatch");
    if (s_dom.monoid.kind != m.kind || s_cod.monoid.kind != m.kind)
        throw std::invalid_argument("homogeneity_check: monoid/space kind mismatch");

    std::vector<Scalar> scalars = scalar_schedule(m, 10, cfg.seed_ratio);
    scalars.push_back(Scalar::zero(m.kind));
    if (m.kind == MonoidKind::Reals && s_dom.variant == SpaceVariant::StandardReal) {
        auto positives = scalars;
        for (const auto& t : positives)
            if (!t.infinite) scalars.push_back(Scalar::real(m.kind, -t.t));
    }

    std::vector<Vec> pts;
    for (int i = 0; i < s_dom.dim; ++i) {
        pts.push_back(axpy(s_dom.base, 1.0, axis_dir(s_dom.dim, i, +1.0)));
        pts.push_back(axpy(s_dom.base, 1.0, axis_dir(s_dom.dim, i, -1.0)));
    }
    Rng rng(cfg.seed ^ 0x404e9ULL);
    for (int k = 0; k < 32; ++k) {
        Vec u = s_dom.dim == 1 ? Vec{rng.u01() < 0.5 ? 1.0 : -1.0} : rng.unit_dir(s_dom.dim);
        pts.push_back(axpy(s_dom.base, rng.uniform(0.05, 2.0), u));
    }

    HomogeneityResult res;
    res.holds = true;
    res.witness_scalar = Scalar::one(m.kind);
    for (const auto& t : scalars) {
        for (const auto& x : pts) {
            if (!h.contains(x)) continue;
            Vec tx = star(s_dom, t, x);
            if (!h.contains(tx)) continue;
            double defect =
                s_cod.dist(h(tx), star(s_cod, t, h(x))) / (1.0 + s_dom.dist(x, s_dom.base));
            if (defect > res.max_defect) {
                res.max_defect = defect;
                res.witness_scalar = t;
                res.witness_point = x;
            }
        }
    }
    res.holds = res.max_defect <= cfg.tol_zero;
    return res;
}

// x |-> f(a) + h(x - a) tangent to f at a certifies h as the contact
inline bool verify_contact(const FunctionHandle& f, const Vec& a, const FunctionHandle& h,
                           const SamplingConfig& cfg) {
    Vec h0 = h(Vec(static_cast<std::size_t>(h.dim_in), 0.0));
    if (norm2(h0) > cfg.tol_zero)
        throw std::invalid_argument("verify_contact: candidate must fix the origin");
    FunctionHandle tr = translate_map(h, a, f(a));
    return tangency_test(f, tr, a, cfg).status == TangencyStatus::Tangent;
}

}  // namespace metjet
