#pragma once

#include <climits>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace metjet {

// Distance machinery for K_inf = union of 3^n K (K the triadic Cantor set).
// Everything rests on base-3 digit codes: writing x = sum s_n 3^n, let k be
// the highest position carrying digit 1 and `below` the value of the digits
// under k. The nearest K_inf neighbours of x are then the truncation x-below
// (completed downward by twos) and x-below+3^k (completed by zeros), so
//   d(x, K_inf) = min(below, 3^k - below),
// and a code without any digit 1 means x is in K_inf itself.

namespace cantor_detail {

using u128 = unsigned __int128;

inline double pow3d(int n) { return std::pow(3.0, n); }

struct DigitScan {
    int first_one = INT_MIN;     // position of the highest digit 1
    double below = 0.0;          // value of the expansion strictly below it
    bool member = false;         // no digit 1 found in the resolved window
    bool terminated = false;     // expansion is exactly zero below the window
    std::vector<std::pair<int, int>> nonzero;  // (position, digit), descending
};

// exact scan of a positive double: x = m / 2^s with digits resolved down to
// `depth` fractional positions
inline DigitScan scan_double(double x, int depth) {
    DigitScan out;
    int e = 0;
    double mant = std::frexp(x, &e);
    auto m = static_cast<u128>(std::ldexp(mant, 53));
    int s = 53 - e;
    u128 num, den;
    if (s <= 0) {
        num = m << static_cast<unsigned>(-s);
        den = 1;
    } else {
        num = m;
        den = static_cast<u128>(1) << static_cast<unsigned>(s);
    }
    u128 ip = num / den;
    u128 fr = num % den;

    std::vector<int> idig;  // integer digits, position 0 first
    while (ip > 0) {
        idig.push_back(static_cast<int>(ip % 3));
        ip /= 3;
    }
    for (int n = static_cast<int>(idig.size()) - 1; n >= 0; --n) {
        int d = idig[static_cast<std::size_t>(n)];
        if (d != 0) out.nonzero.emplace_back(n, d);
        if (d == 1 && out.first_one == INT_MIN) {
            out.first_one = n;
            // digits of x below position n: low integer digits plus the tail
            u128 low = 0, p3 = 1;
            for (int j = 0; j < n; ++j) {
                low += p3 * static_cast<u128>(idig[static_cast<std::size_t>(j)]);
                p3 *= 3;
            }
            out.below = static_cast<double>(low) + static_cast<double>(fr) / static_cast<double>(den);
            return out;
        }
    }
    for (int j = 1; j <= depth; ++j) {
        if (fr == 0) {
            out.terminated = true;
            break;
        }
        fr *= 3;
        int d = static_cast<int>(fr / den);
        fr %= den;
        if (d != 0) out.nonzero.emplace_back(-j, d);
        if (d == 1) {
            out.first_one = -j;
            out.below = (static_cast<double>(fr) / static_cast<double>(den)) * pow3d(-j);
            return out;
        }
    }
    out.member = true;
    return out;
}

}  // namespace cantor_detail

// Finite window of a triadic code: the nonzero digits of x resolved down to
// `depth` fractional places, plus the derived index of the highest digit 1.
struct TriadicCode {
    std::vector<std::pair<int, int>> digits;  // (position, digit), descending positions
    int k_index = INT_MIN;                    // highest position with digit 1
    bool terminated = false;                  // exactly zero below the window

    bool in_ktilde() const { return k_index == INT_MIN; }
};

inline TriadicCode triadic_code(double x, int depth = 60) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("triadic_code: needs a finite x >= 0");
    TriadicCode c;
    if (x == 0.0) {
        c.terminated = true;
        return c;
    }
    auto scan = cantor_detail::scan_double(x, depth);
    c.digits = std::move(scan.nonzero);
    c.k_index = scan.first_one;
    c.terminated = scan.terminated;
    return c;
}

// d(x, K_inf); total on the reals (negative x sees the half line gap)
inline double cantor_distance(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("cantor_distance: non-finite input");
    if (x <= 0.0) return -x;
    // keep the binary denominator of tiny inputs within the exact window
    if (x < 6.8e-21) {
        double y = x, unscale = 1.0;
        while (y < 6.8e-21) {
            y *= 27.0;
            unscale /= 27.0;
        }
        return cantor_distance(y) * unscale;
    }
    auto scan = cantor_detail::scan_double(x, 60);
    if (scan.first_one == INT_MIN) return 0.0;  // in K_inf at working resolution
    double span = cantor_detail::pow3d(scan.first_one);
    return std::min(scan.below, span - scan.below);
}

struct CantorLocation {
    bool in_kinf = false;
    bool in_kplus = false;   // gap on the left: ]x - eps, x[ misses K_inf
    bool in_kminus = false;  // gap on the right
    std::optional<double> gap_lo, gap_hi;  // bracketing K_inf points when in a gap
};

// Membership and gap placement from the digit code. Doubles carry binary
// rationals, so inputs within rounding distance of a K_inf point are
// snapped onto it before classifying.
inline CantorLocation cantor_locate(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("cantor_locate: non-finite input");
    CantorLocation loc;
    if (x < 0.0) {
        loc.gap_hi = 0.0;
        return loc;
    }
    if (x == 0.0) {
        loc.in_kinf = true;
        loc.in_kplus = true;
        return loc;
    }
    auto scan = cantor_detail::scan_double(x, 60);
    if (scan.first_one == INT_MIN) {
        loc.in_kinf = true;
        // terminating {0,2} codes sit at left-gap points; an unresolved or
        // periodic tail is a two-sided accumulation point
        loc.in_kplus = scan.terminated;
        return loc;
    }
    double span = cantor_detail::pow3d(scan.first_one);
    double below = scan.below;
    double g = std::min(below, span - below);
    double snap = 1e-13 * (std::abs(x) + span);
    if (g <= snap) {
        loc.in_kinf = true;
        if (below <= span - below)
            loc.in_kminus = true;  // trailing-one code rewrites to a tail of twos
        else
            loc.in_kplus = true;  // one step below the upper bracket endpoint
        return loc;
    }
    loc.gap_lo = x - below;
    loc.gap_hi = (x - below) + span;
    return loc;
}

// ---------------------------------------------------------------------------
// exact rational path (small denominators); value = num / (den * 3^pow3)

struct ExactCantor {
    long long num = 0;
    long long den = 1;
    int pow3 = 0;

    void canonicalize() {
        if (den < 0) {
            den = -den;
            num = -num;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        while (den % 3 == 0) {
            den /= 3;
            ++pow3;
        }
        while (pow3 > 0 && num != 0 && num % 3 == 0) {
            num /= 3;
            --pow3;
        }
        if (num == 0) {
            den = 1;
            pow3 = 0;
        }
    }

    bool operator==(const ExactCantor& o) const {
        return num == o.num && den == o.den && pow3 == o.pow3;
    }

    ExactCantor div3() const {
        ExactCantor r{num, den, pow3 + 1};
        r.canonicalize();
        return r;
    }

    double to_double() const {
        return (static_cast<double>(num) / static_cast<double>(den)) *
               cantor_detail::pow3d(-pow3);
    }
};

// exact d(p/q, K_inf); digit codes of rationals are eventually periodic so
// the scan is complete after one cycle of remainders
inline ExactCantor cantor_distance_exact(long long p, long long q) {
    if (q <= 0) throw std::invalid_argument("cantor_distance_exact: q must be positive");
    if (q > 5'000'000) throw std::invalid_argument("cantor_distance_exact: denominator too large");
    ExactCantor r;
    if (p <= 0) {
        r.num = -p;
        r.den = q;
        r.canonicalize();
        return r;
    }
    long long ip = p / q;
    long long fr = p % q;

    std::vector<int> idig;
    for (long long v = ip; v > 0; v /= 3) idig.push_back(static_cast<int>(v % 3));
    for (int n = static_cast<int>(idig.size()) - 1; n >= 0; --n) {
        if (idig[static_cast<std::size_t>(n)] != 1) continue;
        long long p3 = 1;
        for (int j = 0; j < n; ++j) p3 *= 3;
        long long low = ip % p3;
        // below = low + fr/q, span = 3^n; all fits: values bounded by p/q
        __int128 below_num = static_cast<__int128>(low) * q + fr;
        __int128 span_num = static_cast<__int128>(p3) * q;
        __int128 other = span_num - below_num;
        __int128 m = below_num < other ? below_num : other;
        r.num = static_cast<long long>(m);
        r.den = q;
        r.canonicalize();
        return r;
    }

    std::vector<int> seen(static_cast<std::size_t>(q), 0);
    long long rem = fr;
    for (int j = 1; rem != 0; ++j) {
        if (seen[static_cast<std::size_t>(rem)]) break;  // cycle with no digit 1
        seen[static_cast<std::size_t>(rem)] = 1;
        rem *= 3;
        int d = static_cast<int>(rem / q);
        rem %= q;
        if (d == 1) {
            r.num = std::min(rem, q - rem);
            r.den = q;
            r.pow3 = j;
            r.canonicalize();
            return r;
        }
    }
    return ExactCantor{};  // member of K_inf
}

}  // namespace metjet
