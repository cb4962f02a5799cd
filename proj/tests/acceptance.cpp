// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code, next to each check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "metjet/metjet.hpp"

using namespace metjet;

namespace {

int g_failures = 0;

void line(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << idx << ": " << name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- helpers

// interval-recursion oracle (independent of the digit algorithm)
double oracle_dist_unit(double x, double lo, double hi, int depth) {
    if (x <= lo) return lo - x;
    if (x >= hi) return x - hi;
    if (depth == 0) return 0.0;
    double third = (hi - lo) / 3.0;
    return std::min(oracle_dist_unit(x, lo, lo + third, depth - 1),
                    oracle_dist_unit(x, hi - third, hi, depth - 1));
}

double oracle_dist(double x, int depth = 20) {
    if (x < 0.0) return -x;
    double best = x, s = 1.0;
    for (int n = 0; n <= 4; ++n) {
        best = std::min(best, s * oracle_dist_unit(x / s, 0.0, 1.0, depth + n));
        s *= 3.0;
    }
    return best;
}

// operator norm oracle: power iteration on A^T A (dims <= 3)
double operator_norm(const std::vector<Vec>& rows) {
    std::size_t n = rows[0].size();
    Vec v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double sigma = 0.0;
    for (int it = 0; it < 2000; ++it) {
        Vec av(rows.size(), 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) av[i] += rows[i][j] * v[j];
        Vec atav(n, 0.0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) atav[j] += rows[i][j] * av[i];
        double nn = norm2(atav);
        if (nn == 0.0) return 0.0;
        v = scale(1.0 / nn, atav);
        sigma = std::sqrt(nn);
    }
    return sigma;
}

// smallest singular value of a square matrix via cyclic Jacobi on M^T M
double smallest_singular_value(const std::vector<Vec>& m) {
    std::size_t n = m.size();
    std::vector<Vec> a(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) a[i][j] += m[k][i] * m[k][j];
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    double lam = a[0][0];
    for (std::size_t i = 1; i < n; ++i) lam = std::min(lam, a[i][i]);
    return std::sqrt(std::max(lam, 0.0));
}

// ---------------------------------------------------------------- criteria

void criterion_1() {
    SamplingConfig cfg;
    auto f = entry("x_sin_log").handle;
    auto space = ContractingSpace::canonical(1, {0.0}, ValuedMonoid::nr(kExpMinusTwoPi));
    double rho = lipschitz_ratio_homog(f, space, HomogClass::rFractal, 0.5, cfg);
    double nrm = norm_homog(f, space, HomogClass::rFractal, cfg);
    bool pass = std::abs(rho - std::sqrt(2.0)) <= 1e-3 && std::abs(nrm - 1.0) <= 1e-3 &&
                nrm < rho;
    line(1, "ratio sqrt(2) and norm 1 for x sin(log|x|), norm < ratio", pass,
         "rho=" + fmt(rho) + " norm=" + fmt(nrm));
}

void criterion_2() {
    SamplingConfig cfg;
    auto g = entry("giseh").handle;
    auto space = ContractingSpace::canonical(1, {0.0}, ValuedMonoid::nr(1.0 / 3.0));
    double rho = lipschitz_ratio_homog(g, space, HomogClass::rFractal, 0.5, cfg);
    double nrm = norm_homog(g, space, HomogClass::rFractal, cfg);
    bool pass = std::abs(rho - 1.0) <= 1e-3 && std::abs(nrm - 1.0) <= 1e-3;
    std::string detail = "rho=" + fmt(rho) + " norm=" + fmt(nrm);

    Rng rng(0xca7);
    int exact_fail = 0;
    for (int i = 0; i < 1000; ++i) {
        long long q = 1 + static_cast<long long>(rng.uniform(1, 2000));
        long long p = static_cast<long long>(rng.uniform(-q, 10 * q));
        if (!(cantor_distance_exact(p, 3 * q) == cantor_distance_exact(p, q).div3()))
            ++exact_fail;
    }
    pass = pass && exact_fail == 0;

    const double tol = std::pow(3.0, -20);
    int oracle_fail = 0;
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        double x = rng.uniform(-1.0, 10.0);
        double gap = std::abs(cantor_distance(x) - oracle_dist(x));
        worst = std::max(worst, gap);
        if (gap > tol) ++oracle_fail;
    }
    pass = pass && oracle_fail == 0;
    detail += " self-similar-fails=" + std::to_string(exact_fail) +
              " oracle-worst=" + fmt(worst);
    line(2, "distance-to-cantor-set map: norm, ratio, exactness, oracle", pass, detail);
}

void criterion_3() {
    SamplingConfig cfg;
    cfg.tol_rel = 1e-7;
    auto rp = ValuedMonoid::rplus();
    Rng rng(0xf0ca1);
    const char* names[] = {"max", "min", "n1", "n2", "ninf"};
    int checked = 0, failures = 0;
    double worst = 0.0;
    for (int dim : {2, 3}) {
        for (const char* name : names) {
            auto e = entry(name, dim);
            for (int pt = 0; pt < 100; ++pt) {
                Vec a(static_cast<std::size_t>(dim));
                // quantized coordinates: accidental near-ties are either
                // exact ties or separated by at least the grid step
                for (auto& c : a) c = std::round(rng.uniform(-2.0, 2.0) * 1e3) / 1e3;
                if (pt % 4 == 1 && dim >= 2) a[1] = a[0];                  // forced tie
                if (pt % 4 == 2) a[0] = 0.0;                               // zero coordinate
                if (pt % 4 == 3) std::fill(a.begin(), a.end(), a[0]);      // full tie
                auto closed = contact_closed_form(name, a, rp, dim);
                auto cv = estimate_contact(e.handle, a, rp, cfg);
                if (cv.status != ContactStatus::Contactable) {
                    ++failures;
                    continue;
                }
                for (int k = 0; k < 16; ++k) {
                    Vec u = rng.unit_dir(dim);
                    Vec est = cv.contact_eval(u);
                    double gap = finite(est) ? norm2(sub(est, closed(u))) : 1.0;
                    worst = std::max(worst, gap);
                    if (gap > 1e-6) ++failures;
                }
                ++checked;
            }
        }
    }
    line(3, "limit contacts match the closed forms (1000 points, 16 dirs)",
         failures == 0, "points=" + std::to_string(checked) + " worst-gap=" + fmt(worst));
}

void criterion_4() {
    SamplingConfig cfg;
    Rng rng(0x11ea);
    int failures = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        int dim = 1 + rep % 3;
        std::vector<Vec> rows(static_cast<std::size_t>(dim), Vec(static_cast<std::size_t>(dim)));
        for (auto& row : rows)
            for (auto& c : row) c = rng.uniform(-1.0, 1.0);
        double want = operator_norm(rows);
        auto l = linear_map(rows);
        Vec zero(static_cast<std::size_t>(dim), 0.0);
        double jd = jet_distance(l, zero_map(dim, dim), zero, cfg);
        auto space = ContractingSpace::canonical(dim, zero, ValuedMonoid::rplus());
        double rho = lipschitz_ratio_homog(l, space, HomogClass::RplusHomog, 0.5, cfg);
        double gap = std::max(std::abs(jd - want), std::abs(rho - want));
        worst = std::max(worst, gap / (1.0 + want));
        if (gap > 1e-3 * (1.0 + want)) ++failures;
    }
    line(4, "jet distance and ratio of linear maps equal the operator norm",
         failures == 0, "worst-rel-gap=" + fmt(worst));
}

void criterion_5() {
    SamplingConfig cfg;
    auto res = counterexample_suite(cfg);
    std::string detail;
    for (const auto& row : res.rows)
        if (!row.pass) detail += row.entry_name + " ";
    line(5, "counter-example table matches ground truth with a clean ladder",
         res.all_pass(), detail.empty() ? std::to_string(res.rows.size()) + " rows" : detail);
}

void criterion_6() {
    SamplingConfig cfg;
    auto theta = entry("theta").handle;
    auto g = gdiff_1d(theta, 0.0, cfg);
    bool pass = g && std::abs(g->left + 1.0) <= 1e-9 && std::abs(g->right - 1.0) <= 1e-9;
    if (pass) pass = verify_contact(theta, {0.0}, g->assemble(), cfg);
    auto cb = entry("cbrt").handle;
    pass = pass && !gdiff_1d(cb, 0.0, cfg);
    line(6, "one-sided derivatives of |x| assemble into its model; cbrt has none", pass,
         g ? "left=" + fmt(g->left) + " right=" + fmt(g->right) : "no gdiff");
}

void criterion_7() {
    SamplingConfig cfg;
    bool pass = true;
    std::string detail;
    auto expect = [&](const char* name, int dim, ExtremumStatus want) {
        auto e = entry(name, dim);
        Vec zero(static_cast<std::size_t>(e.handle.dim_in), 0.0);
        auto v = first_order_min_test(e.handle, zero, cfg);
        if (v.status != want) {
            pass = false;
            detail += std::string(name) + "->" + to_string(v.status) + " ";
        }
    };
    expect("theta", 1, ExtremumStatus::StrictLocalMin);
    expect("n1", 2, ExtremumStatus::StrictLocalMin);
    expect("n2", 2, ExtremumStatus::StrictLocalMin);
    expect("ninf", 2, ExtremumStatus::StrictLocalMin);
    expect("identity", 1, ExtremumStatus::NotLocalMin);
    expect("max", 2, ExtremumStatus::NotLocalMin);
    expect("x2", 1, ExtremumStatus::Inconclusive);
    line(7, "first-order extremum verdicts", pass, detail.empty() ? "7 points" : detail);
}

void criterion_8() {
    SamplingConfig cfg;
    const double tol = 5e-3;
    Rng rng(0x1e8a);
    int failures = 0;
    std::string first_fail;

    // pools of homogeneous catalog maps
    auto theta = entry("theta").handle;
    auto giseh = entry("giseh").handle;
    auto xsl = entry("x_sin_log").handle;
    std::vector<FunctionHandle> scalar_homog = {theta, giseh, xsl,
                                                entry("identity").handle};
    std::vector<FunctionHandle> field_homog = {entry("n1", 2).handle, entry("n2", 2).handle,
                                               entry("ninf", 2).handle, entry("max", 2).handle,
                                               entry("min", 2).handle};

    auto ratio_ball = [&](const FunctionHandle& h) {
        auto sp = ContractingSpace::canonical(
            h.dim_in, Vec(static_cast<std::size_t>(h.dim_in), 0.0), ValuedMonoid::rplus());
        return lipschitz_ratio_homog(h, sp, HomogClass::General, 0.5, cfg);
    };
    auto norm_ball = [&](const FunctionHandle& h) {
        auto sp = ContractingSpace::canonical(
            h.dim_in, Vec(static_cast<std::size_t>(h.dim_in), 0.0), ValuedMonoid::rplus());
        return norm_homog(h, sp, HomogClass::General, cfg);
    };
    auto jd0 = [&](const FunctionHandle& f, const FunctionHandle& g) {
        Vec zero(static_cast<std::size_t>(f.dim_in), 0.0);
        return jet_distance(f, g, zero, cfg);
    };
    auto check = [&](bool ok, const char* what, double lhs, double rhs) {
        if (!ok) {
            ++failures;
            if (first_fail.empty())
                first_fail = std::string(what) + " lhs=" + fmt(lhs) + " rhs=" + fmt(rhs);
        }
    };

    for (int it = 0; it < 50; ++it) {
        double c = rng.uniform(0.25, 2.0);
        auto scaled = make_scalar_handle([c](double x) { return c * x; }, "cx");
        const auto& h0 = field_homog[static_cast<std::size_t>(it) % field_homog.size()];
        const auto& h1raw = scalar_homog[static_cast<std::size_t>(it) % scalar_homog.size()];
        const auto& h1 = (it % 7 == 3) ? scaled : h1raw;
        auto comp = compose(h1, h0);

        // ratio of a composite vs product of ratios
        double r_comp = ratio_ball(comp), r0 = ratio_ball(h0), r1 = ratio_ball(h1);
        check(r_comp <= r1 * r0 + tol * (1.0 + r1 * r0), "composition-ratio", r_comp, r1 * r0);

        // norm below ratio, with equality for linear maps
        double n0 = norm_ball(h0);
        check(n0 <= r0 + tol * (1.0 + r0), "norm<=ratio", n0, r0);
        double nl = norm_ball(scaled), rl = ratio_ball(scaled);
        check(std::abs(nl - c) <= tol * (1.0 + c) && std::abs(rl - c) <= tol * (1.0 + c),
              "linear-identity", nl, rl);

        // zero-composite bound
        double d_comp = jd0(comp, zero_map(comp.dim_in, 1));
        double d1 = jd0(h1, zero_map(1, 1)), d0 = jd0(h0, zero_map(2, 1));
        check(d_comp <= d1 * d0 + tol * (1.0 + d1 * d0), "zero-composite", d_comp, d1 * d0);

        // two-level composition bound: psi_i vs phi_i legs
        const auto& g0 = field_homog[static_cast<std::size_t>(it + 1) % field_homog.size()];
        const auto& g1 = scalar_homog[static_cast<std::size_t>(it + 2) % scalar_homog.size()];
        double lhs = jd0(compose(g1, g0), compose(h1, h0));
        double dg0 = jd0(g0, zero_map(2, 1));
        double rhs = jd0(g1, h1) * dg0 + r1 * jd0(g0, h0);
        check(lhs <= rhs + tol * (1.0 + rhs), "composition-distance", lhs, rhs);

        // |h(x)| <= |h| |x| at sampled points
        Vec x = rng.unit_dir(2);
        x = scale(rng.uniform(0.1, 2.0), x);
        double hx = std::abs(h0(x)[0]);
        check(hx <= (n0 + tol) * norm2(x) * (1.0 + tol), "pointwise-norm", hx, n0 * norm2(x));

        // norm of a composite vs product of norms
        double n_comp = norm_ball(comp), n1v = norm_ball(h1);
        check(n_comp <= n1v * n0 + tol * (1.0 + n1v * n0), "composite-norm", n_comp, n1v * n0);

        // mean value bound on a random interval from pointwise estimates
        const auto& f1d = scalar_homog[static_cast<std::size_t>(it) % scalar_homog.size()];
        double a = rng.uniform(-1.5, 0.5), b = a + rng.uniform(0.1, 1.0);
        double k = 0.0;
        for (int i = 1; i <= 24; ++i)
            k = std::max(k, lsl_test(f1d, vec1(a + (b - a) * i / 25.0), cfg).k_estimate);
        double gap = std::abs(f1d(vec1(b))[0] - f1d(vec1(a))[0]);
        check(gap <= k * (b - a) * (1.0 + cfg.tol_rel) + tol, "mean-value", gap, k * (b - a));
    }
    line(8, "inequality property suite over 50 randomized compositions", failures == 0,
         failures == 0 ? "350 checks" : first_fail);
}

void criterion_9() {
    SamplingConfig cfg;
    auto m = ValuedMonoid::nr(kExpMinusTwoPi);
    auto dom = ContractingSpace::canonical(1, {0.0}, m);
    bool pass = true;
    std::string detail;
    std::vector<FunctionHandle> fractals;
    for (int n = 1; n <= 8; ++n) {
        auto gen = make_scalar_handle([n](double x) { return std::sin(n * x); },
                                      "sin" + std::to_string(n));
        auto phi = fractal_from_periodic(gen, kTwoPi);
        auto res = homogeneity_check(phi, m, dom, dom, cfg);
        if (!res.holds || res.max_defect > 1e-12) {
            pass = false;
            detail += "defect(" + std::to_string(n) + ")=" + fmt(res.max_defect) + " ";
        }
        fractals.push_back(std::move(phi));
    }
    std::vector<Vec> gram(8, Vec(8, 0.0));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                i == j ? 0.0
                       : jet_distance(fractals[static_cast<std::size_t>(i)],
                                      fractals[static_cast<std::size_t>(j)], {0.0}, cfg);
    double sigma = smallest_singular_value(gram);
    pass = pass && sigma > 1e-6;
    line(9, "eight independent self-similar germs from the periodic constructor", pass,
         detail + "sigma_min=" + fmt(sigma));
}

void criterion_10() {
    SamplingConfig cfg;
    cfg.tol_rel = 1e-7;
    auto rp = ValuedMonoid::rplus();
    struct Pt {
        const char* name;
        Vec at;
    };
    const std::vector<Pt> corpus = {
        {"theta", vec1(0.0)},     {"theta", vec1(0.7)},    {"x2", vec1(1.0)},
        {"x2_sin_inv_x", vec1(0.0)}, {"max", {1.0, 1.0}},  {"max", {1.0, 0.0}},
        {"n1", {0.0, 2.0}},       {"n2", {1.0, 1.0}},      {"n2", {0.0, 0.0}},
        {"ninf", {-2.0, 1.0}},    {"xy2_over_x2y2", {0.0, 0.0}}, {"giseh", vec1(0.5)},
        {"giseh", vec1(-1.0)},
    };
    int failures = 0;
    double worst = 0.0;
    Rng rng(0xabcdef);
    for (const auto& pt : corpus) {
        auto e = entry(pt.name, static_cast<int>(pt.at.size()));
        auto base = estimate_contact(e.handle, pt.at, rp, cfg);
        if (base.status != ContactStatus::Contactable) {
            ++failures;
            continue;
        }
        for (double r : {0.5, 1.0 / 3.0, kExpMinusTwoPi}) {
            auto cv = estimate_contact(e.handle, pt.at, ValuedMonoid::nr(r), cfg);
            if (cv.status != ContactStatus::Contactable) {
                ++failures;
                continue;
            }
            for (const auto& tr : base.traces) {
                Vec want = tr.analysis.limit;
                Vec got = cv.contact_eval(tr.direction);
                double gap = finite(got) ? norm2(sub(got, want)) : 1.0;
                worst = std::max(worst, gap);
                if (gap > 1e-6) ++failures;
            }
        }
    }
    line(10, "contraction-monoid contacts agree with the one-sided contact", failures == 0,
         "corpus=" + std::to_string(corpus.size()) + " worst-gap=" + fmt(worst));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
