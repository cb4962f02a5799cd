#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace metjet {

using Vec = std::vector<double>;

inline Vec vec1(double x) { return Vec{x}; }

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec scale(double c, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

// a + c*b
inline Vec axpy(const Vec& a, double c, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + c * b[i];
    return r;
}

inline double norm_p(const Vec& a, int p) {
    switch (p) {
        case 1: {
            double s = 0;
            for (double x : a) s += std::abs(x);
            return s;
        }
        case 2: {
            double s = 0;
            for (double x : a) s += x * x;
            return std::sqrt(s);
        }
        default: {  // p = inf, encoded as any value other than 1 and 2
            double m = 0;
            for (double x : a) m = std::max(m, std::abs(x));
            return m;
        }
    }
}

inline double norm2(const Vec& a) { return norm_p(a, 2); }

inline double dist_p(const Vec& a, const Vec& b, int p) {
    if (a.size() != b.size()) throw std::invalid_argument("dist: dimension mismatch");
    return norm_p(sub(a, b), p);
}

inline double dist2(const Vec& a, const Vec& b) { return dist_p(a, b, 2); }

inline bool finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

inline Vec axis_dir(int dim, int axis, double sign) {
    Vec e(static_cast<std::size_t>(dim), 0.0);
    e[static_cast<std::size_t>(axis)] = sign;
    return e;
}

inline Vec normalized(const Vec& a, int p = 2) {
    double n = norm_p(a, p);
    if (n == 0) throw std::invalid_argument("normalized: zero vector");
    return scale(1.0 / n, a);
}

}  // namespace metjet
