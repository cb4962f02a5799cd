#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metjet/cantor.hpp"
#include "metjet/contact.hpp"
#include "metjet/handle.hpp"
#include "metjet/spaces.hpp"
#include "metjet/vec.hpp"

namespace metjet {

enum class Flag { Yes, No, Unknown };

inline const char* to_string(Flag f) {
    switch (f) {
        case Flag::Yes: return "yes";
        case Flag::No: return "no";
        case Flag::Unknown: return "unknown";
    }
    return "?";
}

using FlagMap = std::map<std::string, Flag>;

inline constexpr double kTwoPi = 6.283185307179586477;
inline const double kExpMinusTwoPi = std::exp(-kTwoPi);

// the three contraction ratios exercised throughout the test corpus
inline std::vector<double> default_probe_ratios() {
    return {0.5, 1.0 / 3.0, kExpMinusTwoPi};
}

inline std::string neofr_label(double r) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "NeoFr(%.9g)", r);
    return buf;
}

struct NoClosedFormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CatalogEntry {
    std::string name;
    std::string formula;  // short display form for listings
    FunctionHandle handle;
    // known per-point flags; empty map when the point family is uncharted
    std::function<FlagMap(const Vec&)> ground_truth;
    // exact first-order model at a for the given monoid, when a formula exists
    std::function<std::optional<FunctionHandle>(const Vec&, const ValuedMonoid&)> closed_contact;
};

namespace catalog_detail {

constexpr double kTieTol = 1e-12;

inline double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

inline std::vector<int> argmax_set(const Vec& a) {
    double m = a[0];
    for (double v : a) m = std::max(m, v);
    std::vector<int> idx;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] >= m - kTieTol * (1.0 + std::abs(m))) idx.push_back(static_cast<int>(i));
    return idx;
}

inline std::vector<int> argmin_set(const Vec& a) {
    double m = a[0];
    for (double v : a) m = std::min(m, v);
    std::vector<int> idx;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] <= m + kTieTol * (1.0 + std::abs(m))) idx.push_back(static_cast<int>(i));
    return idx;
}

inline FlagMap all_smooth() {
    FlagMap m{{"C0", Flag::Yes},   {"LSL", Flag::Yes}, {"LL", Flag::Yes},
              {"Tang", Flag::Yes}, {"Gdiff", Flag::Yes}, {"Diff", Flag::Yes},
              {"StdR", Flag::Yes}};
    for (double r : default_probe_ratios()) m[neofr_label(r)] = Flag::Yes;
    return m;
}

// G-differentiable with a cone contact: everything upstream holds, nothing
// linear does
inline FlagMap cone_point() {
    FlagMap m = all_smooth();
    m["Diff"] = Flag::No;
    m["StdR"] = Flag::No;
    return m;
}

inline void set_neofr(FlagMap& m, Flag f) {
    for (double r : default_probe_ratios()) m[neofr_label(r)] = f;
}

}  // namespace catalog_detail

// dense matrix as a handle; rows[i] is the i-th output's coefficient row
inline FunctionHandle linear_map(const std::vector<Vec>& rows, std::string label = "linear") {
    if (rows.empty() || rows[0].empty()) throw std::invalid_argument("linear_map: empty matrix");
    int dim_out = static_cast<int>(rows.size());
    int dim_in = static_cast<int>(rows[0].size());
    return make_handle(
        dim_in, dim_out,
        [rows, dim_out](const Vec& x) {
            Vec y(static_cast<std::size_t>(dim_out), 0.0);
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < x.size(); ++j) y[i] += rows[i][j] * x[j];
            return y;
        },
        std::move(label));
}

// x |-> sin(log ||x||_p) x, the canonical e^{-2pi}-self-similar map
inline FunctionHandle fp_map(int p, int n) {
    if (n <= 0) throw std::invalid_argument("fp_map: dimension must be positive");
    return make_handle(
        n, n,
        [p, n](const Vec& x) {
            double m = norm_p(x, p);
            if (m == 0.0) return Vec(static_cast<std::size_t>(n), 0.0);
            return scale(std::sin(std::log(m)), x);
        },
        "fp" + std::to_string(p) + "_d" + std::to_string(n));
}

// phi(x) = x f(log|x|), phi(0) = 0: an e^{-T}-self-similar lipschitzian map
// built from a T-periodic lipschitzian f. Periodicity is spot-checked.
inline FunctionHandle fractal_from_periodic(const FunctionHandle& fp, double T) {
    if (fp.dim_in != 1 || fp.dim_out != 1)
        throw std::invalid_argument("fractal_from_periodic: generator must map R to R");
    if (!(T > 0)) throw std::invalid_argument("fractal_from_periodic: period must be positive");
    for (int i = 0; i < 16; ++i) {
        double y = -3.0 * T + (6.0 * T) * i / 15.0;
        double v0 = fp(vec1(y))[0], v1 = fp(vec1(y + T))[0];
        if (std::abs(v0 - v1) > 1e-9 * (1.0 + std::abs(v0)))
            throw std::invalid_argument("fractal_from_periodic: generator is not T-periodic");
    }
    return make_scalar_handle(
        [fp](double x) {
            if (x == 0.0) return 0.0;
            return x * fp(vec1(std::log(std::abs(x))))[0];
        },
        "fractalized(" + fp.label + ")");
}

namespace catalog_detail {

inline CatalogEntry make_theta() {
    CatalogEntry e;
    e.name = "theta";
    e.formula = "|x|";
    e.handle = make_scalar_handle([](double x) { return std::abs(x); }, "theta");
    e.ground_truth = [](const Vec& a) {
        return a[0] == 0.0 ? cone_point() : all_smooth();
    };
    e.closed_contact = [](const Vec& a, const ValuedMonoid&) -> std::optional<FunctionHandle> {
        if (a[0] == 0.0)
            return make_scalar_handle([](double x) { return std::abs(x); }, "theta");
        double s = sign(a[0]);
        return make_scalar_handle([s](double x) { return s * x; }, "sign*id");
    };
    return e;
}

inline CatalogEntry make_norm_entry(const std::string& name, int p, int dim) {
    CatalogEntry e;
    e.name = name;
    e.formula = p == 1 ? "sum_i |x_i|" : (p == 2 ? "euclidean norm" : "max_i |x_i|");
    e.handle = make_field_handle(dim, [p](const Vec& x) { return norm_p(x, p); }, name);
    e.ground_truth = [p](const Vec& a) {
        FlagMap m = cone_point();
        bool diff = false;
        if (p == 2) {
            diff = norm2(a) > 0;
        } else if (p == 1) {
            diff = true;
            for (double c : a) diff = diff && c != 0.0;
        } else {
            Vec absa(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) absa[i] = std::abs(a[i]);
            diff = argmax_set(absa).size() == 1 && norm_p(a, 0) > 0;
        }
        if (diff) return all_smooth();
        return m;
    };
    e.closed_contact = [p, dim](const Vec& a,
                                const ValuedMonoid&) -> std::optional<FunctionHandle> {
        if (p == 2) {
            if (norm2(a) == 0.0)
                return make_field_handle(dim, [](const Vec& x) { return norm2(x); }, "n2");
            Vec g = scale(1.0 / norm2(a), a);
            return make_field_handle(
                dim,
                [g](const Vec& x) {
                    double s = 0;
                    for (std::size_t i = 0; i < x.size(); ++i) s += g[i] * x[i];
                    return s;
                },
                "grad_n2");
        }
        if (p == 1) {
            Vec sig(a.size());
            std::vector<int> zero_set;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (std::abs(a[i]) <= kTieTol)
                    zero_set.push_back(static_cast<int>(i));
                else
                    sig[i] = sign(a[i]);
            }
            return make_field_handle(
                dim,
                [sig, zero_set](const Vec& x) {
                    double s = 0;
                    for (int i : zero_set) s += std::abs(x[static_cast<std::size_t>(i)]);
                    for (std::size_t i = 0; i < x.size(); ++i) s += sig[i] * x[i];
                    return s;
                },
                "k_n1");
        }
        // p = inf
        if (norm_p(a, 0) == 0.0)
            return make_field_handle(dim, [](const Vec& x) { return norm_p(x, 0); }, "ninf");
        Vec absa(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) absa[i] = std::abs(a[i]);
        auto ties = argmax_set(absa);
        Vec sig(a.size(), 0.0);
        for (int i : ties) sig[static_cast<std::size_t>(i)] = sign(a[static_cast<std::size_t>(i)]);
        return make_field_handle(
            dim,
            [ties, sig](const Vec& x) {
                double m = -1e308;
                for (int i : ties)
                    m = std::max(m, sig[static_cast<std::size_t>(i)] *
                                        x[static_cast<std::size_t>(i)]);
                return m;
            },
            "k_ninf");
    };
    return e;
}

inline CatalogEntry make_max_entry(const std::string& name, bool is_max, int dim) {
    CatalogEntry e;
    e.name = name;
    e.formula = is_max ? "max_i x_i" : "min_i x_i";
    e.handle = make_field_handle(
        dim,
        [is_max](const Vec& x) {
            double m = x[0];
            for (double v : x) m = is_max ? std::max(m, v) : std::min(m, v);
            return m;
        },
        name);
    e.ground_truth = [is_max](const Vec& a) {
        auto ties = is_max ? argmax_set(a) : argmin_set(a);
        return ties.size() == 1 ? all_smooth() : cone_point();
    };
    e.closed_contact = [is_max, dim](const Vec& a,
                                     const ValuedMonoid&) -> std::optional<FunctionHandle> {
        auto ties = is_max ? argmax_set(a) : argmin_set(a);
        return make_field_handle(
            dim,
            [ties, is_max](const Vec& x) {
                double m = is_max ? -1e308 : 1e308;
                for (int i : ties) {
                    double v = x[static_cast<std::size_t>(i)];
                    m = is_max ? std::max(m, v) : std::min(m, v);
                }
                return m;
            },
            is_max ? "max_ties" : "min_ties");
    };
    return e;
}

inline CatalogEntry make_giseh() {
    CatalogEntry e;
    e.name = "giseh";
    e.formula = "d(x, K_inf)";
    e.handle = make_scalar_handle([](double x) { return cantor_distance(x); }, "giseh");
    e.ground_truth = [](const Vec& a) {
        auto loc = cantor_locate(a[0]);
        if (loc.in_kinf) {
            if (!loc.in_kplus && !loc.in_kminus) return FlagMap{};  // two-sided limit: uncharted
            FlagMap m = cone_point();
            m["Gdiff"] = Flag::No;
            set_neofr(m, Flag::No);
            m[neofr_label(1.0 / 3.0)] = Flag::Yes;
            return m;
        }
        // off K_inf the map is locally affine, except at gap midpoints
        if (loc.gap_lo && loc.gap_hi) {
            double mid = 0.5 * (*loc.gap_lo + *loc.gap_hi);
            if (std::abs(a[0] - mid) <= 1e-12 * (1.0 + std::abs(mid))) return cone_point();
        }
        return all_smooth();
    };
    e.closed_contact = [](const Vec& a,
                          const ValuedMonoid& m) -> std::optional<FunctionHandle> {
        double x0 = a[0];
        if (x0 < 0.0) return make_scalar_handle([](double x) { return -x; }, "slope-");
        auto loc = cantor_locate(x0);
        if (!loc.in_kinf) {
            if (!loc.gap_lo || !loc.gap_hi) return std::nullopt;
            double mid = 0.5 * (*loc.gap_lo + *loc.gap_hi);
            double band = 1e-12 * (1.0 + std::abs(mid));
            if (x0 < mid - band) return make_scalar_handle([](double x) { return x; }, "slope+");
            if (x0 > mid + band) return make_scalar_handle([](double x) { return -x; }, "slope-");
            return make_scalar_handle([](double x) { return -std::abs(x); }, "-theta");
        }
        // on K_inf the model only exists for the 1/3 contraction monoid
        if (m.kind == MonoidKind::NrMonoid && std::abs(m.r - 1.0 / 3.0) < 1e-9) {
            if (loc.in_kplus)
                return make_scalar_handle([](double x) { return cantor_distance(x); }, "giseh");
            if (loc.in_kminus)
                return make_scalar_handle([](double x) { return cantor_distance(-x); },
                                          "giseh_mirror");
        }
        return std::nullopt;
    };
    return e;
}

}  // namespace catalog_detail

// the registered gallery; dim picks the ambient dimension for the
// dimension-generic families (default 2; scalar entries ignore it)
inline CatalogEntry entry(const std::string& name, int dim = 2) {
    using namespace catalog_detail;
    if (dim < 1) throw std::invalid_argument("entry: dim must be positive");
    if (name == "theta") return make_theta();
    if (name == "n1") return make_norm_entry(name, 1, dim);
    if (name == "n2") return make_norm_entry(name, 2, dim);
    if (name == "ninf") return make_norm_entry(name, 0, dim);
    if (name == "max") return make_max_entry(name, true, dim);
    if (name == "min") return make_max_entry(name, false, dim);
    if (name == "giseh") return make_giseh();

    CatalogEntry e;
    e.name = name;
    if (name == "identity") {
        e.formula = "x";
        e.handle = make_scalar_handle([](double x) { return x; }, name);
        e.ground_truth = [](const Vec&) { return all_smooth(); };
        e.closed_contact = [](const Vec&, const ValuedMonoid&) -> std::optional<FunctionHandle> {
            return make_scalar_handle([](double x) { return x; }, "identity");
        };
        return e;
    }
    if (name == "x2") {
        e.formula = "x^2";
        e.handle = make_scalar_handle([](double x) { return x * x; }, name);
        e.ground_truth = [](const Vec&) { return all_smooth(); };
        e.closed_contact = [](const Vec& a, const ValuedMonoid&) -> std::optional<FunctionHandle> {
            double c = 2.0 * a[0];
            return make_scalar_handle([c](double x) { return c * x; }, "deriv");
        };
        return e;
    }
    if (name == "x2_sin_inv_x") {
        e.formula = "x^2 sin(1/x)";
        e.handle = make_scalar_handle(
            [](double x) { return x == 0.0 ? 0.0 : x * x * std::sin(1.0 / x); }, name);
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return all_smooth();
            FlagMap m = all_smooth();
            m["C1"] = Flag::No;
            return m;
        };
        e.closed_contact = [](const Vec& a, const ValuedMonoid&) -> std::optional<FunctionHandle> {
            if (a[0] != 0.0) return std::nullopt;
            return make_scalar_handle([](double) { return 0.0; }, "zero");
        };
        return e;
    }
    if (name == "x2_sin_inv_x2") {
        e.formula = "x^2 sin(1/x^2)";
        e.handle = make_scalar_handle(
            [](double x) { return x == 0.0 ? 0.0 : x * x * std::sin(1.0 / (x * x)); }, name);
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return all_smooth();
            FlagMap m = all_smooth();
            m["LL"] = Flag::No;
            return m;
        };
        e.closed_contact = [](const Vec& a, const ValuedMonoid&) -> std::optional<FunctionHandle> {
            if (a[0] != 0.0) return std::nullopt;
            return make_scalar_handle([](double) { return 0.0; }, "zero");
        };
        return e;
    }
    if (name == "x_sin_inv_x") {
        e.formula = "x sin(1/x)";
        e.handle = make_scalar_handle(
            [](double x) { return x == 0.0 ? 0.0 : x * std::sin(1.0 / x); }, name);
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return all_smooth();
            FlagMap m{{"C0", Flag::Yes}, {"LSL", Flag::Yes}, {"LL", Flag::No},
                      {"Tang", Flag::No}, {"Gdiff", Flag::No}, {"Diff", Flag::No},
                      {"StdR", Flag::No}};
            set_neofr(m, Flag::No);
            return m;
        };
        return e;
    }
    if (name == "cbrt") {
        e.formula = "x^(1/3)";
        e.handle = make_scalar_handle([](double x) { return std::cbrt(x); }, name);
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return all_smooth();
            FlagMap m{{"C0", Flag::Yes}, {"LSL", Flag::No}, {"LL", Flag::No},
                      {"Tang", Flag::No}, {"Gdiff", Flag::No}, {"Diff", Flag::No},
                      {"StdR", Flag::No}};
            set_neofr(m, Flag::No);
            return m;
        };
        return e;
    }
    if (name == "x_sin_log") {
        e.formula = "x sin(log|x|)";
        e.handle = make_scalar_handle(
            [](double x) { return x == 0.0 ? 0.0 : x * std::sin(std::log(std::abs(x))); }, name);
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return all_smooth();
            FlagMap m{{"C0", Flag::Yes}, {"LSL", Flag::Yes}, {"LL", Flag::Yes},
                      {"Tang", Flag::Yes}, {"Gdiff", Flag::No}, {"Diff", Flag::No},
                      {"StdR", Flag::No}};
            set_neofr(m, Flag::No);
            m[neofr_label(kExpMinusTwoPi)] = Flag::Yes;
            return m;
        };
        e.closed_contact = [](const Vec& a,
                              const ValuedMonoid& m) -> std::optional<FunctionHandle> {
            if (a[0] != 0.0) {
                double la = std::log(std::abs(a[0]));
                double c = std::sin(la) + std::cos(la);
                return make_scalar_handle([c](double x) { return c * x; }, "deriv");
            }
            if (m.kind == MonoidKind::NrMonoid && std::abs(m.r - kExpMinusTwoPi) < 1e-9)
                return make_scalar_handle(
                    [](double x) {
                        return x == 0.0 ? 0.0 : x * std::sin(std::log(std::abs(x)));
                    },
                    "x_sin_log");
            return std::nullopt;
        };
        return e;
    }
    if (name == "x_sin_log_log") {
        e.formula = "x sin(log|log|x||)";
        e.handle = make_scalar_handle(
            [](double x) {
                if (x == 0.0) return 0.0;
                double l = std::log(std::abs(x));
                if (l == 0.0) return 0.0;
                return x * std::sin(std::log(std::abs(l)));
            },
            name,
            // the |x| = 1 shell is singular for the inner logarithm
            [](double x) { return x == 0.0 || std::abs(std::abs(x) - 1.0) > 1e-9; });
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return FlagMap{};
            FlagMap m{{"C0", Flag::Yes},      {"LSL", Flag::Yes},  {"LL", Flag::Unknown},
                      {"Tang", Flag::Unknown}, {"Gdiff", Flag::No}, {"Diff", Flag::No},
                      {"StdR", Flag::No}};
            set_neofr(m, Flag::No);
            return m;
        };
        return e;
    }
    if (name == "xy2_over_x2y2") {
        e.formula = "x y^2 / (x^2 + y^2)";
        e.handle = make_field_handle(
            2,
            [](const Vec& v) {
                double x = v[0], y = v[1];
                double d = x * x + y * y;
                return d == 0.0 ? 0.0 : x * y * y / d;
            },
            name);
        e.ground_truth = [](const Vec& a) {
            if (norm2(a) != 0.0) return all_smooth();
            FlagMap m = all_smooth();
            m["Diff"] = Flag::No;  // its own first-order model, and it is not linear
            return m;
        };
        e.closed_contact = [](const Vec& a, const ValuedMonoid&) -> std::optional<FunctionHandle> {
            if (norm2(a) != 0.0) return std::nullopt;
            return make_field_handle(
                2,
                [](const Vec& v) {
                    double x = v[0], y = v[1];
                    double d = x * x + y * y;
                    return d == 0.0 ? 0.0 : x * y * y / d;
                },
                "xy2_over_x2y2");
        };
        return e;
    }
    if (name == "x_sin_y_over_x") {
        e.formula = "x sin(y/x)";
        e.handle = make_field_handle(
            2,
            [](const Vec& v) {
                double x = v[0], y = v[1];
                return x == 0.0 ? 0.0 : x * std::sin(y / x);
            },
            name);
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return all_smooth();
            if (norm2(a) != 0.0) return FlagMap{};
            FlagMap m{{"C0", Flag::Yes}, {"LSL", Flag::Yes}, {"LL", Flag::No},
                      {"Tang", Flag::No}, {"Gdiff", Flag::No}, {"Diff", Flag::No},
                      {"StdR", Flag::No}};
            set_neofr(m, Flag::No);
            return m;
        };
        return e;
    }
    if (name == "step") {
        e.formula = "x < 0 ? 0 : 1";
        e.handle = make_scalar_handle([](double x) { return x < 0.0 ? 0.0 : 1.0; }, name);
        e.ground_truth = [](const Vec& a) {
            if (a[0] != 0.0) return all_smooth();
            FlagMap m{{"C0", Flag::No}, {"LSL", Flag::No}, {"LL", Flag::No},
                      {"Tang", Flag::No}, {"Gdiff", Flag::No}, {"Diff", Flag::No},
                      {"StdR", Flag::No}};
            set_neofr(m, Flag::No);
            return m;
        };
        return e;
    }
    throw std::out_of_range("catalog: unknown entry '" + name + "'");
}

inline std::vector<std::string> catalog_names() {
    return {"theta",         "n1",          "n2",
            "ninf",          "max",         "min",
            "identity",      "x2",          "x2_sin_inv_x",
            "x2_sin_inv_x2", "x_sin_inv_x", "cbrt",
            "x_sin_log",     "x_sin_log_log", "giseh",
            "xy2_over_x2y2", "x_sin_y_over_x", "step"};
}

inline FunctionHandle contact_closed_form(const std::string& name, const Vec& a,
                                          const ValuedMonoid& m = ValuedMonoid::rplus(),
                                          int dim = 2) {
    auto e = entry(name, a.empty() ? dim : static_cast<int>(a.size()));
    if (e.closed_contact) {
        if (auto h = e.closed_contact(a, m)) return *h;
    }
    throw NoClosedFormError("no closed-form contact for '" + name + "' at the requested point");
}

}  // namespace metjet
