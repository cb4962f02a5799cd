#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "metjet/vec.hpp"

namespace metjet {

// Scalar monoids acting on pointed spaces. The real kinds carry a real
// number with |.| as valuation; NrMonoid is N ∪ {inf} with valuation r^n.
enum class MonoidKind { Reals, NonnegReals, UnitInterval, NrMonoid };

inline const char* to_string(MonoidKind k) {
    switch (k) {
        case MonoidKind::Reals: return "reals";
        case MonoidKind::NonnegReals: return "rplus";
        case MonoidKind::UnitInterval: return "unit";
        case MonoidKind::NrMonoid: return "nr";
    }
    return "?";
}

struct ValuedMonoid {
    MonoidKind kind = MonoidKind::NonnegReals;
    double r = 0.5;  // ratio for NrMonoid only, in (0,1)

    static ValuedMonoid reals() { return {MonoidKind::Reals, 0.0}; }
    static ValuedMonoid rplus() { return {MonoidKind::NonnegReals, 0.0}; }
    static ValuedMonoid unit_interval() { return {MonoidKind::UnitInterval, 0.0}; }
    static ValuedMonoid nr(double ratio) {
        if (!(ratio > 0.0 && ratio < 1.0))
            throw std::invalid_argument("NrMonoid ratio must lie in (0,1)");
        return {MonoidKind::NrMonoid, ratio};
    }
};

// A monoid element. Real kinds store `t`; NrMonoid stores the exponent n,
// with the absorbing element kept as a distinguished infinity token.
struct Scalar {
    MonoidKind kind = MonoidKind::NonnegReals;
    double t = 0.0;       // real kinds
    long n = 0;           // NrMonoid exponent
    bool infinite = false;  // NrMonoid absorbing element

    static Scalar real(MonoidKind k, double value) {
        if (k == MonoidKind::NrMonoid) throw std::invalid_argument("real scalar in NrMonoid");
        if (k == MonoidKind::UnitInterval && (value < 0.0 || value > 1.0))
            throw std::invalid_argument("UnitInterval scalar outside [0,1]");
        if (k == MonoidKind::NonnegReals && value < 0.0)
            throw std::invalid_argument("NonnegReals scalar below 0");
        Scalar s;
        s.kind = k;
        s.t = value;
        return s;
    }
    static Scalar nat(long exponent) {
        if (exponent < 0) throw std::invalid_argument("NrMonoid exponent must be >= 0");
        Scalar s;
        s.kind = MonoidKind::NrMonoid;
        s.n = exponent;
        return s;
    }
    static Scalar nr_infinity() {
        Scalar s;
        s.kind = MonoidKind::NrMonoid;
        s.infinite = true;
        return s;
    }
    static Scalar one(MonoidKind k) { return k == MonoidKind::NrMonoid ? nat(0) : real(k, 1.0); }
    static Scalar zero(MonoidKind k) {
        return k == MonoidKind::NrMonoid ? nr_infinity() : real(k, 0.0);
    }
};

inline void require_same_kind(const ValuedMonoid& m, const Scalar& t) {
    if (m.kind != t.kind) throw std::invalid_argument("scalar/monoid kind mismatch");
}

inline double valuation(const ValuedMonoid& m, const Scalar& t) {
    require_same_kind(m, t);
    if (m.kind == MonoidKind::NrMonoid)
        return t.infinite ? 0.0 : std::pow(m.r, static_cast<double>(t.n));
    return std::abs(t.t);
}

// the monoid law; both operands must belong to m
inline Scalar compose(const ValuedMonoid& m, const Scalar& a, const Scalar& b) {
    require_same_kind(m, a);
    require_same_kind(m, b);
    if (m.kind == MonoidKind::NrMonoid) {
        if (a.infinite || b.infinite) return Scalar::nr_infinity();
        return Scalar::nat(a.n + b.n);
    }
    return Scalar::real(m.kind, a.t * b.t);
}

// Nonzero scalars t_0, t_1, ... with v(t_k) strictly decreasing to 0
// geometrically. For NrMonoid the net is exactly n = 0, 1, 2, ...; for the
// real kinds t_k = seed_ratio^k.
inline std::vector<Scalar> scalar_schedule(const ValuedMonoid& m, int count,
                                           double seed_ratio = 0.5) {
    if (count < 2) throw std::invalid_argument("scalar_schedule: count must be >= 2");
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(count));
    if (m.kind == MonoidKind::NrMonoid) {
        for (int k = 0; k < count; ++k) out.push_back(Scalar::nat(k));
        return out;
    }
    if (!(seed_ratio > 0.0 && seed_ratio < 1.0))
        throw std::invalid_argument("scalar_schedule: seed_ratio must lie in (0,1)");
    double t = 1.0;
    for (int k = 0; k < count; ++k) {
        out.push_back(Scalar::real(m.kind, t));
        t *= seed_ratio;
    }
    return out;
}

enum class SpaceVariant { Canonical, StandardReal };

// A pointed coordinate space with an external scalar action. Canonical:
// t*x = a + v(t)(x-a); standard (real monoids only): t*x = a + t(x-a).
struct ContractingSpace {
    int dim = 1;
    Vec base;
    int norm_p = 2;  // 1, 2 or 0 (0 encodes the max norm)
    SpaceVariant variant = SpaceVariant::Canonical;
    ValuedMonoid monoid = ValuedMonoid::rplus();

    ContractingSpace() : base(1, 0.0) {}
    ContractingSpace(int dimension, Vec base_point, int p, SpaceVariant var, ValuedMonoid m)
        : dim(dimension), base(std::move(base_point)), norm_p(p), variant(var), monoid(m) {
        if (dim <= 0) throw std::invalid_argument("ContractingSpace: dim must be positive");
        if (base.size() != static_cast<std::size_t>(dim))
            throw std::invalid_argument("ContractingSpace: base/dim mismatch");
        if (variant == SpaceVariant::StandardReal && monoid.kind == MonoidKind::NrMonoid)
            throw std::invalid_argument("standard variant requires a real scalar monoid");
    }

    static ContractingSpace canonical(int dim, Vec base, ValuedMonoid m, int p = 2) {
        return ContractingSpace(dim, std::move(base), p, SpaceVariant::Canonical, m);
    }
    static ContractingSpace standard_real(int dim, Vec base, ValuedMonoid m, int p = 2) {
        return ContractingSpace(dim, std::move(base), p, SpaceVariant::StandardReal, m);
    }

    double dist(const Vec& x, const Vec& y) const { return dist_p(x, y, norm_p); }
};

inline Vec star(const ContractingSpace& s, const Scalar& t, const Vec& x) {
    if (x.size() != static_cast<std::size_t>(s.dim))
        throw std::invalid_argument("star: dimension mismatch");
    require_same_kind(s.monoid, t);
    double c = (s.variant == SpaceVariant::StandardReal) ? t.t : valuation(s.monoid, t);
    return axpy(s.base, c, sub(x, s.base));
}

inline Vec star_inv(const ContractingSpace& s, const Scalar& t, const Vec& y) {
    if (y.size() != static_cast<std::size_t>(s.dim))
        throw std::invalid_argument("star_inv: dimension mismatch");
    require_same_kind(s.monoid, t);
    double c = (s.variant == SpaceVariant::StandardReal) ? t.t : valuation(s.monoid, t);
    if (c == 0.0) throw std::domain_error("star_inv: absorbing scalar");
    return axpy(s.base, 1.0 / c, sub(y, s.base));
}

}  // namespace metjet
