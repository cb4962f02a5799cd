#include "catch_amalgamated.hpp"

#include <cmath>

#include "metjet/trace.hpp"

using namespace metjet;

namespace {

std::vector<double> geometric_scales(int n, double ratio = 0.5) {
    std::vector<double> s;
    double v = 1.0;
    for (int i = 0; i < n; ++i) {
        s.push_back(v);
        v *= ratio;
    }
    return s;
}

}  // namespace

TEST_CASE("exactly constant traces converge to the constant") {
    auto scales = geometric_scales(41);
    std::vector<double> q(41, 3.25);
    auto an = analyze_scalar_trace(q, scales, 1e-3, 1e9, 0.0);
    REQUIRE(an.status == TraceStatus::Converged);
    CHECK(an.limit[0] == 3.25);
}

TEST_CASE("first-order decaying traces converge to the right limit") {
    auto scales = geometric_scales(41);
    std::vector<double> q;
    for (double s : scales) q.push_back(2.0 + 0.7 * s);
    auto an = analyze_scalar_trace(q, scales, 1e-3, 1e9, 0.0);
    REQUIRE(an.status == TraceStatus::Converged);
    CHECK(std::abs(an.limit[0] - 2.0) < 1e-3);
}

TEST_CASE("deep cancellation noise does not spoil convergence") {
    // model of (f(a+s x) - f(a))/s for smooth f at |a|+|f(a)| = 2: truncation
    // c*s plus rounding eps*2/s
    auto scales = geometric_scales(41);
    std::vector<double> q;
    std::uint64_t h = 88172645463325252ULL;
    for (double s : scales) {
        h ^= h << 13;
        h ^= h >> 7;
        h ^= h << 17;
        double jitter = (static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5);
        q.push_back(1.5 + 0.8 * s + jitter * 4.4e-16 * 2.0 / s);
    }
    auto an = analyze_scalar_trace(q, scales, 1e-7, 1e9, 2.0);
    REQUIRE(an.status == TraceStatus::Converged);
    CHECK(std::abs(an.limit[0] - 1.5) < 1e-6);
}

TEST_CASE("bounded oscillation is refuted, not converged") {
    auto scales = geometric_scales(41);
    std::vector<double> q;
    int k = 0;
    for (double s : scales) {
        (void)s;
        q.push_back(std::sin(std::pow(2.0, k)));  // erratic bounded tail
        ++k;
    }
    auto an = analyze_scalar_trace(q, scales, 1e-3, 1e9, 0.0);
    CHECK(an.status == TraceStatus::Oscillating);
    CHECK(an.tail_range > 0.0);
}

TEST_CASE("slow drift without stabilisation is not accepted") {
    // sin(log(c k)) style drift: consecutive entries get closer but the tail
    // keeps moving; must not be certified as converged
    auto scales = geometric_scales(41);
    std::vector<double> q;
    for (int k = 0; k < 41; ++k) q.push_back(std::sin(std::log(0.6931 * (k + 1))));
    auto an = analyze_scalar_trace(q, scales, 1e-3, 1e9, 0.0);
    CHECK(an.status != TraceStatus::Converged);
}

TEST_CASE("hard divergence and monotone blow-up") {
    auto scales = geometric_scales(41);
    std::vector<double> q;
    for (double s : scales) q.push_back(1.0 / s);  // blows past any bound
    auto an = analyze_scalar_trace(q, scales, 1e9, 1e9, 0.0);
    CHECK(an.status == TraceStatus::Diverged);

    // stays below the hard bound but grows monotonically: still divergence
    std::vector<double> slow;
    for (double s : scales) slow.push_back(std::pow(s, -2.0 / 3.0));
    auto an2 = analyze_scalar_trace(slow, scales, 1e-3, 1e9, 0.0);
    CHECK(an2.status == TraceStatus::Diverged);
}

TEST_CASE("short traces stay inconclusive") {
    auto scales = geometric_scales(4);
    std::vector<double> q{1, 1, 1, 1};
    auto an = analyze_scalar_trace(q, scales, 1e-3, 1e9, 0.0);
    CHECK(an.status == TraceStatus::Inconclusive);
}
