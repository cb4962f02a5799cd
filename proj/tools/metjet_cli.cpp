// Command-line front end: every estimator of the library over catalog
// functions or expression strings, with machine-readable JSON reports and
// CSV trace dumps.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "metjet/metjet.hpp"
#include "metjet/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace metjet;

namespace {

struct CommonOpts {
    std::string fn;
    std::string second_fn;  // jetdist comparand
    std::string at = "0";
    std::string monoid = "rplus";
    double r = -1.0;
    std::string r_exp;
    std::string variant = "canonical";
    std::string cls = "general";
    double eps = 0.5;
    int norm_p = 2;
    int dim = 0;
    bool has_value_at_0 = false;
    double value_at_0 = 0.0;
    std::string json_path;
    std::string csv_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double tol_rel = -1.0;
    double tol_zero = -1.0;
    int radii_count = 0;
    int dirs = 0;
    bool reproducible = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_fn = true) {
    if (with_fn)
        cmd->add_option("--fn", o.fn, "catalog:<name> or an expression in x1..xn")->required();
    cmd->add_option("--at", o.at, "evaluation point, comma separated");
    cmd->add_option("--json", o.json_path, "write the JSON report here");
    cmd->add_option("--csv-traces", o.csv_dir, "dump numeric traces as CSV into this directory");
    cmd->add_option("--seed", o.seed, "sampling seed")->each([&o](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--tol", o.tol_rel, "relative stabilisation tolerance");
    cmd->add_option("--tol-zero", o.tol_zero, "zero threshold");
    cmd->add_option("--radii", o.radii_count, "number of decade radii (default 10)");
    cmd->add_option("--dirs", o.dirs, "seeded probe directions (default 64)");
    cmd->add_option("--dim", o.dim, "ambient dimension for dimension-generic functions");
    cmd->add_flag("--reproducible", o.reproducible, "suppress the timestamp field");
    cmd->add_option("--value-at-0", o.value_at_0, "expression value override at the origin")
        ->each([&o](const std::string&) { o.has_value_at_0 = true; });
}

void add_monoid(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--monoid", o.monoid, "reals | rplus | unit | nr");
    cmd->add_option("--r", o.r, "contraction ratio for the nr monoid");
    cmd->add_option("--r-exp", o.r_exp, "named ratio: 2pi means e^(-2pi)");
    cmd->add_option("--variant", o.variant, "standard | canonical scalar action");
}

Vec parse_point(const std::string& s) {
    Vec v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        v.push_back(std::stod(tok));
    }
    if (v.empty()) throw CLI::ValidationError("--at", "empty point");
    return v;
}

double resolve_ratio(const CommonOpts& o) {
    if (!o.r_exp.empty()) {
        if (o.r_exp == "2pi") return kExpMinusTwoPi;
        throw CLI::ValidationError("--r-exp", "unknown named ratio '" + o.r_exp + "'");
    }
    if (o.r > 0.0 && o.r < 1.0) return o.r;
    throw CLI::ValidationError("--r", "nr monoid needs --r in (0,1) or --r-exp 2pi");
}

ValuedMonoid resolve_monoid(const CommonOpts& o) {
    if (o.monoid == "reals") return ValuedMonoid::reals();
    if (o.monoid == "rplus") return ValuedMonoid::rplus();
    if (o.monoid == "unit") return ValuedMonoid::unit_interval();
    if (o.monoid == "nr") return ValuedMonoid::nr(resolve_ratio(o));
    throw CLI::ValidationError("--monoid", "unknown monoid '" + o.monoid + "'");
}

SamplingConfig make_cfg(const CommonOpts& o) {
    SamplingConfig cfg;
    if (o.seed_set) {
        cfg.seed = o.seed;
    } else if (const char* env = std::getenv("METRIC_JET_SEED")) {
        cfg.seed = std::strtoull(env, nullptr, 10);
    }
    if (o.tol_rel > 0) cfg.tol_rel = o.tol_rel;
    if (o.tol_zero > 0) cfg.tol_zero = o.tol_zero;
    if (o.radii_count >= 2) {
        cfg.radii.clear();
        for (int k = 1; k <= o.radii_count; ++k) cfg.radii.push_back(std::pow(10.0, -k));
    }
    if (o.dirs > 0) cfg.direction_count = o.dirs;
    return cfg;
}

FunctionHandle resolve_fn(const std::string& spec, const CommonOpts& o, int dim_hint) {
    if (spec.rfind("catalog:", 0) == 0) {
        std::string name = spec.substr(8);
        return entry(name, dim_hint > 0 ? dim_hint : 2).handle;
    }
    if (spec == "zero") return zero_map(std::max(dim_hint, 1), 1);
    auto ef = ExprFunction::parse(spec, dim_hint);
    if (o.has_value_at_0)
        ef.add_override(Vec(static_cast<std::size_t>(ef.dim()), 0.0), o.value_at_0);
    return ef.to_handle();
}

json monoid_json(const CommonOpts& o) {
    json j;
    j["kind"] = o.monoid;
    if (o.monoid == "nr") j["r"] = resolve_ratio(o);
    j["variant"] = o.variant;
    return j;
}

int emit(Report& rep, const CommonOpts& o, const std::string& text_summary) {
    if (!o.reproducible) rep.stamp_now();
    std::cout << text_summary;
    if (!o.json_path.empty()) {
        std::ofstream f(o.json_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot open " << o.json_path << " for writing\n";
            return 1;
        }
        f << rep.dump();
    }
    return 0;
}

void dump_directional_csv(const CommonOpts& o, const std::vector<DirectionalTrace>& traces) {
    if (o.csv_dir.empty()) return;
    fs::create_directories(o.csv_dir);
    for (std::size_t i = 0; i < traces.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "dir_%03zu.csv", i);
        std::ofstream f(fs::path(o.csv_dir) / name, std::ios::binary);
        write_directional_trace_csv(f, traces[i]);
    }
}

json flagmap_json(const FlagMap& flags) {
    json j = json::object();
    for (const auto& [k, v] : flags) j[k] = to_string(v);
    return j;
}

// ---------------------------------------------------------------- commands

int cmd_contact(CommonOpts& o) {
    auto cfg = make_cfg(o);
    Vec a = parse_point(o.at);
    auto f = resolve_fn(o.fn, o, static_cast<int>(a.size()));
    auto m = resolve_monoid(o);
    bool standard_reals = o.monoid == "reals" && o.variant == "standard";
    // the standard signed action: a one-sided model that is additionally odd
    auto cv = estimate_contact(f, a, standard_reals ? ValuedMonoid::rplus() : m, cfg);

    Report rep;
    rep.command = "contact";
    rep.seed = cfg.seed;
    rep.inputs = {{"fn", o.fn}, {"at", vec_json(a)}, {"monoid", monoid_json(o)}};

    json dirs = json::array();
    for (const auto& tr : cv.traces) {
        json d;
        d["direction"] = vec_json(tr.direction);
        d["status"] = to_string(tr.analysis.status);
        if (tr.analysis.status == TraceStatus::Converged)
            d["limit"] = vec_json(tr.analysis.limit);
        dirs.push_back(d);
    }
    bool odd_ok = true;
    if (standard_reals && cv.status == ContactStatus::Contactable) {
        for (int i = 0; i < f.dim_in && odd_ok; ++i) {
            Vec u = axis_dir(f.dim_in, i, +1.0);
            Vec hu = cv.contact_eval(u), hmu = cv.contact_eval(scale(-1.0, u));
            odd_ok = finite(hu) && finite(hmu) &&
                     norm2(add(hu, hmu)) <= 1e-4 * (1.0 + norm2(hu));
        }
        rep.results["odd"] = odd_ok;
    }
    bool contactable = cv.status == ContactStatus::Contactable && (!standard_reals || odd_ok);
    rep.results["status"] =
        standard_reals && !contactable && cv.status == ContactStatus::Contactable
            ? "not-contactable"
            : to_string(cv.status);
    rep.results["directions"] = dirs;
    if (cv.oscillation_witness) {
        rep.results["witness"] = {{"direction", vec_json(cv.oscillation_witness->direction)},
                                  {"tail_range", cv.oscillation_witness->tail_range},
                                  {"reason", cv.oscillation_witness->reason}};
    }
    // closed-form comparison for catalog functions
    if (o.fn.rfind("catalog:", 0) == 0 && contactable) {
        try {
            auto h = contact_closed_form(o.fn.substr(8), a, m,
                                         static_cast<int>(a.size()));
            double worst = 0.0;
            Rng rng(cfg.seed ^ 0xc10f0ULL);
            for (int k = 0; k < 16; ++k) {
                Vec u = f.dim_in == 1 ? Vec{rng.uniform(-1.5, 1.5)} : rng.unit_dir(f.dim_in);
                Vec est = cv.contact_eval(u);
                if (!finite(est)) continue;
                worst = std::max(worst, norm2(sub(est, h(u))));
            }
            rep.results["closed_form_max_gap"] = worst;
        } catch (const NoClosedFormError&) {
        }
    }
    rep.traces = json::array();
    for (const auto& tr : cv.traces) {
        json t;
        t["scales"] = vec_json(tr.scales);
        json vals = json::array();
        for (const auto& v : tr.values) vals.push_back(vec_json(v));
        t["values"] = vals;
        rep.traces.push_back(t);
    }
    dump_directional_csv(o, cv.traces);

    std::ostringstream os;
    os << "contact: " << rep.results["status"].get<std::string>() << "\n";
    for (const auto& tr : cv.traces)
        if (tr.analysis.status == TraceStatus::Converged && tr.direction.size() == 1)
            os << "  dir " << tr.direction[0] << " -> " << tr.analysis.limit[0] << "\n";
    return emit(rep, o, os.str());
}

int cmd_classify(CommonOpts& o) {
    auto cfg = make_cfg(o);
    Vec a = parse_point(o.at);
    auto f = resolve_fn(o.fn, o, static_cast<int>(a.size()));
    auto rep0 = classify_point(f, a, default_probe_ratios(), cfg);
    auto violations = check_ladder(rep0);

    Report rep;
    rep.command = "classify";
    rep.seed = cfg.seed;
    rep.inputs = {{"fn", o.fn}, {"at", vec_json(a)}};
    rep.results["flags"] = flagmap_json(rep0.flags);
    rep.results["evidence"] = rep0.evidence;
    rep.results["ladder_violations"] = violations;

    std::ostringstream os;
    os << "classification at " << o.at << ":\n";
    for (const auto& [k, v] : rep0.flags) os << "  " << k << ": " << to_string(v) << "\n";
    if (!violations.empty()) os << "  !! ladder violations: " << violations.size() << "\n";
    return emit(rep, o, os.str());
}

int cmd_jetdist(CommonOpts& o) {
    auto cfg = make_cfg(o);
    Vec a = parse_point(o.at);
    auto f = resolve_fn(o.fn, o, static_cast<int>(a.size()));
    auto g = resolve_fn(o.second_fn.empty() ? "zero" : o.second_fn, o,
                        static_cast<int>(a.size()));
    if (g.dim_out != f.dim_out && o.second_fn.empty()) g = zero_map(f.dim_in, f.dim_out);
    double d = jet_distance(f, g, a, cfg);
    auto trace = quotient_trace(f, g, a, cfg);

    Report rep;
    rep.command = "jetdist";
    rep.seed = cfg.seed;
    rep.inputs = {{"fn", o.fn}, {"g", o.second_fn.empty() ? "zero" : o.second_fn},
                  {"at", vec_json(a)}};
    rep.results["distance"] = d;
    rep.traces = {{"radii", vec_json(trace.radii)},
                  {"sup_quotients", vec_json(trace.sup_quotients)}};
    if (!o.csv_dir.empty()) {
        fs::create_directories(o.csv_dir);
        std::ofstream csv(fs::path(o.csv_dir) / "quotient_trace.csv", std::ios::binary);
        write_quotient_trace_csv(csv, trace);
    }
    std::ostringstream os;
    os << "jet distance: " << d << "\n";
    return emit(rep, o, os.str());
}

int cmd_rho(CommonOpts& o) {
    auto cfg = make_cfg(o);
    auto f = resolve_fn(o.fn, o, o.dim);
    HomogClass cls = HomogClass::General;
    ValuedMonoid m = ValuedMonoid::rplus();
    if (o.cls == "rplus") {
        cls = HomogClass::RplusHomog;
    } else if (o.cls == "fractal") {
        cls = HomogClass::rFractal;
        m = ValuedMonoid::nr(resolve_ratio(o));
    } else if (o.cls != "general") {
        throw CLI::ValidationError("--class", "expected general | rplus | fractal");
    }
    auto space = ContractingSpace::canonical(
        f.dim_in, Vec(static_cast<std::size_t>(f.dim_in), 0.0), m, o.norm_p);
    double rho = lipschitz_ratio_homog(f, space, cls, o.eps, cfg);
    double nrm = norm_homog(f, space, cls, cfg);

    Report rep;
    rep.command = "rho";
    rep.seed = cfg.seed;
    rep.inputs = {{"fn", o.fn}, {"class", o.cls}, {"eps", o.eps}, {"norm_p", o.norm_p}};
    if (cls == HomogClass::rFractal) rep.inputs["r"] = m.r;
    rep.results["rho"] = rho;
    rep.results["norm"] = nrm;

    std::ostringstream os;
    os << "rho: " << rho << "\nnorm: " << nrm << "\n";
    return emit(rep, o, os.str());
}

int cmd_extremum(CommonOpts& o) {
    auto cfg = make_cfg(o);
    Vec a = parse_point(o.at);
    auto f = resolve_fn(o.fn, o, static_cast<int>(a.size()));
    auto m = o.monoid == "nr" ? ValuedMonoid::nr(resolve_ratio(o)) : ValuedMonoid::rplus();
    auto v = first_order_min_test(f, a, m, cfg);

    Report rep;
    rep.command = "extremum";
    rep.seed = cfg.seed;
    rep.inputs = {{"fn", o.fn}, {"at", vec_json(a)}};
    rep.results["status"] = to_string(v.status);
    rep.results["sphere_min"] = v.sphere_min;
    rep.results["pos_margin"] = v.pos_margin;
    if (!v.witness.empty()) rep.results["witness"] = vec_json(v.witness);

    std::ostringstream os;
    os << "extremum: " << to_string(v.status) << " (sphere min " << v.sphere_min << ")\n";
    return emit(rep, o, os.str());
}

int cmd_cantor(CommonOpts& o) {
    Vec a = parse_point(o.at);
    double x = a[0];
    double d = cantor_distance(x);
    auto loc = cantor_locate(x);

    Report rep;
    rep.command = "cantor";
    rep.inputs = {{"at", x}};
    rep.results["distance"] = d;
    rep.results["in_kinf"] = loc.in_kinf;
    rep.results["in_kplus"] = loc.in_kplus;
    rep.results["in_kminus"] = loc.in_kminus;
    if (loc.gap_lo) rep.results["bracket_lo"] = *loc.gap_lo;
    if (loc.gap_hi) rep.results["bracket_hi"] = *loc.gap_hi;

    std::ostringstream os;
    os << "distance: " << d << "\n";
    if (loc.gap_lo && loc.gap_hi)
        os << "bracket: (" << *loc.gap_lo << ", " << *loc.gap_hi << ")\n";
    return emit(rep, o, os.str());
}

int cmd_fractalize(CommonOpts& o, const std::string& fp_expr, double period, int samples) {
    auto cfg = make_cfg(o);
    auto gen = ExprFunction::parse(fp_expr, 1).to_handle();
    auto phi = fractal_from_periodic(gen, period);
    double r = std::exp(-period);
    auto m = ValuedMonoid::nr(r);
    auto dom = ContractingSpace::canonical(1, {0.0}, m);
    auto res = homogeneity_check(phi, m, dom, dom, cfg);

    Report rep;
    rep.command = "fractalize";
    rep.seed = cfg.seed;
    rep.inputs = {{"fp", fp_expr}, {"period", period}};
    rep.results["ratio"] = r;
    rep.results["self_similar"] = res.holds;
    rep.results["max_defect"] = res.max_defect;
    if (!o.csv_dir.empty()) {
        fs::create_directories(o.csv_dir);
        std::ofstream csv(fs::path(o.csv_dir) / "fractal_samples.csv", std::ios::binary);
        csv << "index,x,phi\n";
        for (int i = 0; i < samples; ++i) {
            double x = -2.0 + 4.0 * i / (samples - 1);
            csv << i << "," << num17(x) << "," << num17(phi(vec1(x))[0]) << "\n";
        }
    }
    std::ostringstream os;
    os << "ratio: " << r << " self-similar: " << (res.holds ? "yes" : "no")
       << " max defect: " << res.max_defect << "\n";
    return emit(rep, o, os.str());
}

int cmd_catalog(CommonOpts& o) {
    Report rep;
    rep.command = "catalog";
    json list = json::array();
    std::ostringstream os;
    for (const auto& name : catalog_names()) {
        auto e = entry(name, 2);
        json row;
        row["name"] = name;
        row["dim_in"] = e.handle.dim_in;
        row["dim_out"] = e.handle.dim_out;
        row["formula"] = e.formula;
        Vec zero(static_cast<std::size_t>(e.handle.dim_in), 0.0);
        auto gt = e.ground_truth(zero);
        std::string summary;
        for (const auto& [k, v] : gt)
            if (v != Flag::Unknown) summary += k + "=" + (v == Flag::Yes ? "y" : "n") + " ";
        row["ground_truth_at_0"] = summary;
        list.push_back(row);
        os << name << "  (R^" << e.handle.dim_in << " -> R^" << e.handle.dim_out << ")  "
           << e.formula << "\n    " << (summary.empty() ? "-" : summary) << "\n";
    }
    rep.results["entries"] = list;
    return emit(rep, o, os.str());
}

int cmd_suite(CommonOpts& o) {
    auto cfg = make_cfg(o);
    auto res = counterexample_suite(cfg);

    Report rep;
    rep.command = "suite";
    rep.seed = cfg.seed;
    json rows = json::array();
    std::ostringstream os;
    os << "counter-example suite:\n";
    for (const auto& row : res.rows) {
        json r;
        r["entry"] = row.entry_name;
        r["point"] = vec_json(row.point);
        r["expected"] = flagmap_json(row.expected);
        r["computed"] = flagmap_json(row.computed);
        r["mismatches"] = row.mismatches;
        r["ladder_violations"] = row.ladder_violations;
        r["extra_checks"] = row.extra_checks;
        r["pass"] = row.pass;
        rows.push_back(r);
        os << "  " << (row.pass ? "PASS" : "FAIL") << "  " << row.entry_name << "\n";
        for (const auto& mm : row.mismatches) os << "        " << mm << "\n";
    }
    rep.results["rows"] = rows;
    rep.results["all_pass"] = res.all_pass();
    os << (res.all_pass() ? "all rows pass\n" : "FAILURES present\n");
    int rc = emit(rep, o, os.str());
    return rc != 0 ? rc : (res.all_pass() ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical first-order calculus for nonsmooth and fractal functions"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string fp_expr = "sin(x1)";
    double period = kTwoPi;
    int samples = 257;

    auto* c_contact = app.add_subcommand("contact", "estimate the generalized differential");
    add_common(c_contact, o);
    add_monoid(c_contact, o);

    auto* c_classify = app.add_subcommand("classify", "per-point regularity ladder");
    add_common(c_classify, o);

    auto* c_jetdist = app.add_subcommand("jetdist", "distance between first-order germs");
    add_common(c_jetdist, o);
    c_jetdist->add_option("--g", o.second_fn, "comparison function (default: zero map)");

    auto* c_rho = app.add_subcommand("rho", "lipschitzian ratio and norm of a homogeneous map");
    add_common(c_rho, o);
    add_monoid(c_rho, o);
    c_rho->add_option("--class", o.cls, "general | rplus | fractal");
    c_rho->add_option("--eps", o.eps, "annulus half-width (default 0.5)");
    c_rho->add_option("--norm-p", o.norm_p, "ambient norm: 1, 2 or 0 for max");

    auto* c_ext = app.add_subcommand("extremum", "first-order strict minimum test");
    add_common(c_ext, o);
    add_monoid(c_ext, o);

    auto* c_cantor = app.add_subcommand("cantor", "distance and location in the scaled Cantor set");
    add_common(c_cantor, o, false);

    auto* c_frac = app.add_subcommand("fractalize", "build a self-similar map from a periodic one");
    add_common(c_frac, o, false);
    c_frac->add_option("--fp", fp_expr, "periodic generator expression in x1");
    c_frac->add_option("--period", period, "generator period T; ratio becomes e^-T");
    c_frac->add_option("--samples", samples, "plot samples for --csv-traces");

    auto* c_cat = app.add_subcommand("catalog", "list the registered function gallery");
    add_common(c_cat, o, false);

    auto* c_suite = app.add_subcommand("suite", "run the counter-example table");
    add_common(c_suite, o, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_contact->parsed()) return cmd_contact(o);
        if (c_classify->parsed()) return cmd_classify(o);
        if (c_jetdist->parsed()) return cmd_jetdist(o);
        if (c_rho->parsed()) return cmd_rho(o);
        if (c_ext->parsed()) return cmd_extremum(o);
        if (c_cantor->parsed()) return cmd_cantor(o);
        if (c_frac->parsed()) return cmd_fractalize(o, fp_expr, period, samples);
        if (c_cat->parsed()) return cmd_catalog(o);
        if (c_suite->parsed()) return cmd_suite(o);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ExprError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
