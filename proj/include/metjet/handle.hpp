#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "metjet/vec.hpp"

namespace metjet {

// A black-box map between finite-dimensional coordinate spaces together
// with an open-domain membership predicate. Evaluators must be
// deterministic and are only called where in_domain holds.
struct FunctionHandle {
    int dim_in = 1;
    int dim_out = 1;
    std::function<Vec(const Vec&)> eval;
    std::function<bool(const Vec&)> in_domain;
    std::string label;

    Vec operator()(const Vec& x) const { return eval(x); }
    bool contains(const Vec& x) const { return !in_domain || in_domain(x); }
};

inline FunctionHandle make_handle(int dim_in, int dim_out, std::function<Vec(const Vec&)> f,
                                  std::string label = {},
                                  std::function<bool(const Vec&)> dom = {}) {
    FunctionHandle h;
    h.dim_in = dim_in;
    h.dim_out = dim_out;
    h.eval = std::move(f);
    h.in_domain = std::move(dom);
    h.label = std::move(label);
    return h;
}

// R -> R convenience wrapper
inline FunctionHandle make_scalar_handle(std::function<double(double)> f, std::string label = {},
                                         std::function<bool(double)> dom = {}) {
    FunctionHandle h;
    h.dim_in = 1;
    h.dim_out = 1;
    h.eval = [f = std::move(f)](const Vec& x) { return vec1(f(x[0])); };
    if (dom) h.in_domain = [dom = std::move(dom)](const Vec& x) { return dom(x[0]); };
    h.label = std::move(label);
    return h;
}

// R^n -> R convenience wrapper
inline FunctionHandle make_field_handle(int dim_in, std::function<double(const Vec&)> f,
                                        std::string label = {},
                                        std::function<bool(const Vec&)> dom = {}) {
    FunctionHandle h;
    h.dim_in = dim_in;
    h.dim_out = 1;
    h.eval = [f = std::move(f)](const Vec& x) { return vec1(f(x)); };
    h.in_domain = std::move(dom);
    h.label = std::move(label);
    return h;
}

inline FunctionHandle compose(const FunctionHandle& outer, const FunctionHandle& inner) {
    if (inner.dim_out != outer.dim_in)
        throw std::invalid_argument("compose: dimension mismatch");
    FunctionHandle h;
    h.dim_in = inner.dim_in;
    h.dim_out = outer.dim_out;
    h.eval = [outer, inner](const Vec& x) { return outer.eval(inner.eval(x)); };
    h.in_domain = [outer, inner](const Vec& x) {
        return inner.contains(x) && outer.contains(inner.eval(x));
    };
    h.label = outer.label + "." + inner.label;
    return h;
}

inline FunctionHandle zero_map(int dim_in, int dim_out) {
    return make_handle(dim_in, dim_out,
                       [dim_out](const Vec&) { return Vec(static_cast<std::size_t>(dim_out), 0.0); },
                       "0");
}

// x |-> f(a) + h(x - a), the translate of a centred map h to the point a
inline FunctionHandle translate_map(const FunctionHandle& h, const Vec& a, const Vec& fa) {
    FunctionHandle t;
    t.dim_in = h.dim_in;
    t.dim_out = h.dim_out;
    t.eval = [h, a, fa](const Vec& x) { return add(fa, h.eval(sub(x, a))); };
    t.in_domain = [h, a](const Vec& x) { return h.contains(sub(x, a)); };
    t.label = h.label + "@" + std::to_string(a.empty() ? 0.0 : a[0]);
    return t;
}

}  // namespace metjet
