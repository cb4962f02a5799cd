#include "catch_amalgamated.hpp"

#include "metjet/catalog.hpp"
#include "metjet/extrema.hpp"

using namespace metjet;

namespace {
const SamplingConfig kCfg{};
}

TEST_CASE("first-order minimum test on the reference points") {
    auto theta = entry("theta");
    auto v = first_order_min_test(theta.handle, vec1(0.0), kCfg);
    CHECK(v.status == ExtremumStatus::StrictLocalMin);
    CHECK(v.sphere_min > 0.9);

    auto id = entry("identity");
    auto v2 = first_order_min_test(id.handle, vec1(0.0), kCfg);
    CHECK(v2.status == ExtremumStatus::NotLocalMin);
    CHECK(v2.sphere_min < -0.9);
    REQUIRE_FALSE(v2.witness.empty());
    CHECK(v2.witness[0] < 0.0);

    auto sq = entry("x2");
    auto v3 = first_order_min_test(sq.handle, vec1(0.0), kCfg);
    CHECK(v3.status == ExtremumStatus::Inconclusive);

    auto mx = entry("max", 2);
    auto v4 = first_order_min_test(mx.handle, {0.0, 0.0}, kCfg);
    CHECK(v4.status == ExtremumStatus::NotLocalMin);

    for (const char* name : {"n1", "n2", "ninf"}) {
        auto e = entry(name, 2);
        auto ve = first_order_min_test(e.handle, {0.0, 0.0}, kCfg);
        INFO(name);
        CHECK(ve.status == ExtremumStatus::StrictLocalMin);
    }
}

TEST_CASE("verdicts are invariant under positive rescaling") {
    for (double c : {1e-3, 1.0, 1e3}) {
        auto theta = entry("theta").handle;
        auto scaled = make_scalar_handle([c](double x) { return c * std::abs(x); }, "c*theta");
        CHECK(first_order_min_test(scaled, vec1(0.0), kCfg).status ==
              ExtremumStatus::StrictLocalMin);
        auto lin = make_scalar_handle([c](double x) { return c * x; }, "c*x");
        CHECK(first_order_min_test(lin, vec1(0.0), kCfg).status == ExtremumStatus::NotLocalMin);
        auto sq = make_scalar_handle([c](double x) { return c * x * x; }, "c*x^2");
        CHECK(first_order_min_test(sq, vec1(0.0), kCfg).status == ExtremumStatus::Inconclusive);
    }
}

TEST_CASE("non-scalar codomain is rejected") {
    auto f = fp_map(2, 2);
    CHECK_THROWS_AS(first_order_min_test(f, {0.0, 0.0}, kCfg), std::invalid_argument);
}

TEST_CASE("global minimum check on first-order models") {
    auto ninf = entry("ninf", 2);
    CHECK(contact_global_min_check(ninf.handle, kCfg));

    auto mx = entry("max", 2);
    CHECK_FALSE(contact_global_min_check(mx.handle, kCfg));

    // the model of the 1-norm at (0, 2): |x_1| + x_2, negative at (0, -1)
    auto h = contact_closed_form("n1", {0.0, 2.0});
    CHECK_FALSE(contact_global_min_check(h, kCfg));

    // necessary condition at genuine minimisers
    for (const char* name : {"theta", "n1", "n2", "ninf"}) {
        int dim = std::string(name) == "theta" ? 1 : 2;
        Vec zero(static_cast<std::size_t>(dim), 0.0);
        auto e = entry(name, dim);
        auto k0 = contact_closed_form(name, zero);
        INFO(name);
        CHECK(contact_global_min_check(k0, kCfg));
    }
}
