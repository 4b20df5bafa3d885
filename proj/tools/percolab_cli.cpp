#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "percolab/diagrams.hpp"
#include "percolab/expansion.hpp"
#include "percolab/graph.hpp"
#include "percolab/invomega.hpp"
#include "percolab/mc.hpp"
#include "percolab/oracle.hpp"
#include "percolab/polynomial.hpp"
#include "percolab/rational.hpp"

namespace {

using json = nlohmann::ordered_json;
using percolab::Rat;
using percolab::RatPoly;
namespace graphs = percolab::graphs;

constexpr const char* kVersion = "percolab 1.0.0";

using Config = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.12g", v);
    return b;
}

std::string fmt10(double v) {
    char b[64];
    std::snprintf(b, sizeof b, "%.10g", v);
    return b;
}

std::string kind_name(graphs::GraphKind k) {
    return k == graphs::GraphKind::hypercube ? "hypercube" : "torus";
}

graphs::GraphKind parse_kind(const std::string& s) {
    if (s == "hypercube") return graphs::GraphKind::hypercube;
    if (s == "torus") return graphs::GraphKind::torus;
    throw std::invalid_argument("unknown graph kind: " + s);
}

// Exact rational from "num/den", an integer, or a decimal literal.
Rat parse_rat(const std::string& s) {
    if (s.find('/') != std::string::npos) return percolab::rat_from_string(s);
    bool neg = false;
    std::size_t pos = 0;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        pos = 1;
    }
    std::string digits;
    long frac_len = 0;
    bool seen_dot = false, seen_digit = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("not a rational: " + s);
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            seen_digit = true;
            if (seen_dot) ++frac_len;
        } else {
            throw std::invalid_argument("not a rational: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("not a rational: " + s);
    percolab::Int num(digits, 10);
    percolab::Int den(1);
    for (long i = 0; i < frac_len; ++i) den *= 10;
    Rat r = Rat(num) / Rat(den);
    if (neg) r = -r;
    return r;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty entry in list: " + s);
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("not a number: " + item);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::vector<std::uint32_t> parse_uint_list(const std::string& s) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long v = std::stoul(item, &used);
        if (used != item.size()) throw std::invalid_argument("not an integer: " + item);
        out.push_back(static_cast<std::uint32_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

int env_workers() {
    const char* w = std::getenv("PERCOLAB_WORKERS");
    if (!w || !*w) return 1;
    char* end = nullptr;
    long v = std::strtol(w, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024)
        throw std::invalid_argument("PERCOLAB_WORKERS must be a positive integer");
    return static_cast<int>(v);
}

int resolve_workers(int flag_value) { return flag_value > 0 ? flag_value : env_workers(); }

std::string resolve_output_path(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    const char* outdir = std::getenv("PERCOLAB_OUTDIR");
    if (outdir && *outdir) return std::string(outdir) + "/" + path;
    return path;
}

std::ostream& open_sink(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    std::string resolved = resolve_output_path(path);
    file.open(resolved);
    if (!file) throw std::invalid_argument("output path is not writable: " + resolved);
    return file;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

struct TableOut {
    std::string schema;
    Config cfg;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> text_lines;
    Config result_meta;  // trailing facts (solver convergence etc.)
};

void write_header(std::ostream& os, const std::string& schema, const Config& cfg) {
    os << "# " << kVersion << "\n";
    os << "# schema=" << schema << "\n";
    for (const auto& [k, v] : cfg) os << "# " << k << "=" << v << "\n";
}

void emit_table(const TableOut& t, const std::string& format, const std::string& output) {
    std::ofstream file;
    std::ostream& os = open_sink(output, file);
    if (format == "text") {
        for (const auto& l : t.text_lines) os << l << "\n";
        return;
    }
    if (format == "csv") {
        write_header(os, t.schema, t.cfg);
        os << join(t.columns, ",") << "\n";
        for (const auto& r : t.rows) os << join(r, ",") << "\n";
        for (const auto& [k, v] : t.result_meta) os << "# " << k << "=" << v << "\n";
        return;
    }
    json out;
    out["tool"] = kVersion;
    out["schema"] = t.schema;
    json c = json::object();
    for (const auto& [k, v] : t.cfg) c[k] = v;
    out["config"] = c;
    json rows = json::array();
    for (const auto& r : t.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = r[i];
        rows.push_back(obj);
    }
    out["rows"] = rows;
    if (!t.result_meta.empty()) {
        json meta = json::object();
        for (const auto& [k, v] : t.result_meta) meta[k] = v;
        out["result"] = meta;
    }
    os << out.dump(2) << "\n";
}

void emit_poly(const RatPoly& poly, const std::string& schema, const Config& cfg,
               const std::string& format, const std::string& output) {
    std::ofstream file;
    std::ostream& os = open_sink(output, file);
    if (format == "text") {
        os << poly.pretty() << "\n";
        return;
    }
    auto cs = poly.coeff_strings();
    if (format == "csv") {
        write_header(os, schema, cfg);
        os << "degree,coefficient\n";
        for (std::size_t k = 0; k < cs.size(); ++k) os << k << "," << cs[k] << "\n";
        return;
    }
    json out;
    out["tool"] = kVersion;
    out["schema"] = schema;
    json c = json::object();
    for (const auto& [k, v] : cfg) c[k] = v;
    out["config"] = c;
    out["coefficients"] = cs;
    os << out.dump(2) << "\n";
}

std::vector<std::string> series_strings(const percolab::series::InvOmegaSeries& s) {
    std::vector<std::string> out;
    for (const Rat& c : s.coeffs()) out.push_back(percolab::rat_to_string(c));
    return out;
}

std::vector<std::string> series_plain(const percolab::series::InvOmegaSeries& s) {
    std::vector<std::string> out;
    for (const Rat& c : s.coeffs()) out.push_back(c.get_str());
    return out;
}

void add_format_output(CLI::App* cmd, std::string& format, std::string& output) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    cmd->add_option("--output", output,
                    "write to this file instead of stdout (PERCOLAB_OUTDIR prefixes "
                    "relative paths)");
}

struct PredictArgs {
    std::uint64_t omega = 0;
    int order = 3;
    std::string kind = "hypercube";
    std::string format = "text";
    std::string output;
};

void run_predict(const PredictArgs& a) {
    if (a.order > percolab::expansion::kRigorousOrder)
        std::cerr << "note: coefficients beyond order 3 are reference values without "
                     "error control\n";
    double pc = percolab::expansion::predict_pc(static_cast<std::uint32_t>(a.omega),
                                                parse_kind(a.kind), a.order);
    Rat exact = percolab::expansion::predict_pc_exact(static_cast<std::uint32_t>(a.omega),
                                                      a.order);
    TableOut t;
    t.schema = "predict.v1";
    t.cfg = {{"subcommand", "predict"},
             {"omega", std::to_string(a.omega)},
             {"order", std::to_string(a.order)},
             {"graph_kind", a.kind}};
    t.columns = {"omega", "order", "pc", "pc_exact"};
    t.rows = {{std::to_string(a.omega), std::to_string(a.order), fmt(pc),
               percolab::rat_to_string(exact)}};
    t.text_lines = {fmt10(pc)};
    emit_table(t, a.format, a.output);
}

struct ChiArgs {
    std::string graph;
    double p = 0;
    std::uint64_t samples = std::uint64_t{1} << 16;
    std::uint64_t seed = 1;
    int workers = 0;
    std::uint64_t cluster_cap = 10'000'000;
    std::string format = "csv";
    std::string output;
};

Config mc_config(const char* sub, const graphs::GraphModel& g, const ChiArgs& a, int workers) {
    return {{"subcommand", sub},
            {"graph", g.name()},
            {"samples", std::to_string(a.samples)},
            {"seed", std::to_string(a.seed)},
            {"workers", std::to_string(workers)},
            {"cluster_cap", std::to_string(a.cluster_cap)}};
}

void run_chi(const ChiArgs& a) {
    graphs::GraphModel g = graphs::build_graph_named(a.graph);
    int workers = resolve_workers(a.workers);
    percolab::mc::McOptions opt{a.samples, a.seed, workers, a.cluster_cap};
    percolab::mc::Estimate est = percolab::mc::chi_estimate(g, a.p, opt);
    if (est.truncated_samples > 0)
        std::cerr << "note: " << est.truncated_samples << " samples hit the cluster cap\n";
    TableOut t;
    t.schema = "chi.v1";
    t.cfg = mc_config("chi", g, a, workers);
    t.cfg.emplace_back("p", fmt(a.p));
    t.columns = {"graph_kind", "n", "m", "p", "samples", "chi_mean", "chi_stderr", "seed"};
    t.rows = {{kind_name(g.kind), std::to_string(g.n), std::to_string(g.m), fmt(a.p),
               std::to_string(est.samples), fmt(est.mean()), fmt(est.stderr_of_mean()),
               std::to_string(a.seed)}};
    t.text_lines = {"chi = " + fmt(est.mean()) + " +/- " + fmt(est.stderr_of_mean()),
                    "samples = " + std::to_string(est.samples),
                    "truncated_samples = " + std::to_string(est.truncated_samples)};
    emit_table(t, a.format, a.output);
}

struct SweepArgs {
    ChiArgs base;
    std::string p_grid;
    double p_min = 0, p_max = 0;
    int p_steps = 0;
    bool have_grid = false, have_min = false, have_max = false, have_steps = false;
};

void run_sweep(const SweepArgs& a) {
    std::vector<double> grid;
    if (a.have_grid) {
        if (a.have_min || a.have_max || a.have_steps)
            throw std::invalid_argument("--p-grid excludes --p-min/--p-max/--p-steps");
        grid = parse_double_list(a.p_grid);
    } else {
        if (!(a.have_min && a.have_max && a.have_steps))
            throw std::invalid_argument("sweep needs --p-grid or all of --p-min, --p-max, "
                                        "--p-steps");
        if (a.p_steps < 1) throw std::invalid_argument("--p-steps must be >= 1");
        if (a.p_steps == 1) {
            grid.push_back(a.p_min);
        } else {
            for (int i = 0; i < a.p_steps; ++i)
                grid.push_back(a.p_min + (a.p_max - a.p_min) * i / (a.p_steps - 1));
        }
    }
    for (double p : grid)
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("grid p must lie in [0, 1]");
    graphs::GraphModel g = graphs::build_graph_named(a.base.graph);
    int workers = resolve_workers(a.base.workers);
    percolab::mc::McOptions opt{a.base.samples, a.base.seed, workers, a.base.cluster_cap};
    std::vector<percolab::mc::Estimate> ests = percolab::mc::sweep_chi(g, grid, opt);
    TableOut t;
    t.schema = "chi.v1";
    t.cfg = mc_config("sweep", g, a.base, workers);
    t.cfg.emplace_back("p_grid", [&] {
        std::vector<std::string> ps;
        for (double p : grid) ps.push_back(fmt(p));
        return join(ps, ",");
    }());
    t.columns = {"graph_kind", "n", "m", "p", "samples", "chi_mean", "chi_stderr", "seed"};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        t.rows.push_back({kind_name(g.kind), std::to_string(g.n), std::to_string(g.m),
                          fmt(grid[i]), std::to_string(ests[i].samples), fmt(ests[i].mean()),
                          fmt(ests[i].stderr_of_mean()), std::to_string(a.base.seed)});
        t.text_lines.push_back("chi(" + fmt(grid[i]) + ") = " + fmt(ests[i].mean()) +
                               " +/- " + fmt(ests[i].stderr_of_mean()));
    }
    emit_table(t, a.base.format, a.base.output);
}

struct SolveArgs {
    std::string graph;
    double target = 0;
    double tol = 0.05;
    std::uint64_t initial_samples = std::uint64_t{1} << 14;
    std::uint64_t min_final_samples = std::uint64_t{1} << 20;
    std::uint64_t max_samples = std::uint64_t{1} << 24;
    int max_steps = 64;
    std::uint64_t seed = 1;
    int workers = 0;
    std::uint64_t cluster_cap = 10'000'000;
    std::string format = "csv";
    std::string output;
};

void run_solve(const SolveArgs& a) {
    graphs::GraphModel g = graphs::build_graph_named(a.graph);
    int workers = resolve_workers(a.workers);
    percolab::mc::SolveOptions opt;
    opt.tol = a.tol;
    opt.initial_samples = a.initial_samples;
    opt.min_final_samples = a.min_final_samples;
    opt.max_samples_per_estimate = a.max_samples;
    opt.max_steps = a.max_steps;
    opt.seed = a.seed;
    opt.workers = workers;
    opt.cluster_cap = a.cluster_cap;
    percolab::mc::PseudoCriticalResult r = percolab::mc::solve_chi_target(g, a.target, opt);
    TableOut t;
    t.schema = "solve-pc.v1";
    t.cfg = {{"subcommand", "solve-pc"},
             {"graph", g.name()},
             {"target", fmt(a.target)},
             {"tol", fmt(a.tol)},
             {"initial_samples", std::to_string(a.initial_samples)},
             {"min_final_samples", std::to_string(a.min_final_samples)},
             {"max_samples", std::to_string(a.max_samples)},
             {"max_steps", std::to_string(a.max_steps)},
             {"seed", std::to_string(a.seed)},
             {"workers", std::to_string(workers)},
             {"cluster_cap", std::to_string(a.cluster_cap)}};
    t.columns = {"n",     "omega",          "target",          "p_hat",
                 "omega_p_hat", "corrected_omega_p", "predicted_3term", "abs_deviation"};
    t.rows = {{std::to_string(g.n), std::to_string(g.omega), fmt(a.target), fmt(r.p_hat),
               fmt(r.omega_p_hat), fmt(r.corrected_omega_p), fmt(r.predicted_3term),
               fmt(r.abs_deviation)}};
    t.result_meta = {{"converged", r.converged ? "true" : "false"},
                     {"bisection_steps", std::to_string(r.bisection_steps)},
                     {"final_samples", std::to_string(r.final_estimate.samples)},
                     {"message", r.message}};
    t.text_lines = {"p_hat = " + fmt(r.p_hat),
                    "omega_p_hat = " + fmt(r.omega_p_hat),
                    "corrected_omega_p = " + fmt(r.corrected_omega_p),
                    "predicted_3term = " + fmt(r.predicted_3term),
                    "abs_deviation = " + fmt(r.abs_deviation),
                    "converged = " + std::string(r.converged ? "true" : "false"),
                    "message = " + r.message};
    emit_table(t, a.format, a.output);
}

struct PiArgs {
    std::string graph;
    int levels = 0;
    int max_order = 0;
    std::string format = "text";
    std::string output;
};

void run_pi_exact(const PiArgs& a) {
    graphs::GraphModel g = graphs::build_graph_named(a.graph);
    RatPoly poly = percolab::oracle::pi_n_exact(g, a.levels);
    emit_poly(poly, "pi-exact.v1",
              {{"subcommand", "pi-exact"},
               {"graph", g.name()},
               {"levels", std::to_string(a.levels)}},
              a.format, a.output);
}

void run_pi_series(const PiArgs& a) {
    graphs::GraphModel g = graphs::build_graph_named(a.graph);
    RatPoly poly = percolab::oracle::pi_n_series(g, a.levels, a.max_order);
    emit_poly(poly, "pi-series.v1",
              {{"subcommand", "pi-series"},
               {"graph", g.name()},
               {"levels", std::to_string(a.levels)},
               {"max_order", std::to_string(a.max_order)}},
              a.format, a.output);
}

struct PiMcArgs {
    std::string graph;
    int levels = 0;
    double p = 0;
    std::uint64_t samples = std::uint64_t{1} << 16;
    std::uint64_t seed = 1;
    int workers = 0;
    std::uint64_t cluster_cap = 10'000'000;
    std::string format = "csv";
    std::string output;
};

void run_pi_mc(const PiMcArgs& a) {
    graphs::GraphModel g = graphs::build_graph_named(a.graph);
    int workers = resolve_workers(a.workers);
    percolab::mc::McOptions opt{a.samples, a.seed, workers, a.cluster_cap};
    percolab::mc::Estimate est = percolab::mc::pi_n_mc(g, a.levels, a.p, opt);
    TableOut t;
    t.schema = "pi-mc.v1";
    t.cfg = {{"subcommand", "pi-mc"},
             {"graph", g.name()},
             {"levels", std::to_string(a.levels)},
             {"p", fmt(a.p)},
             {"samples", std::to_string(a.samples)},
             {"seed", std::to_string(a.seed)},
             {"workers", std::to_string(workers)}};
    t.columns = {"graph_kind", "n", "m", "levels", "p", "samples", "mean", "stderr", "seed"};
    t.rows = {{kind_name(g.kind), std::to_string(g.n), std::to_string(g.m),
               std::to_string(a.levels), fmt(a.p), std::to_string(est.samples),
               fmt(est.mean()), fmt(est.stderr_of_mean()), std::to_string(a.seed)}};
    t.text_lines = {"mean = " + fmt(est.mean()), "stderr = " + fmt(est.stderr_of_mean())};
    emit_table(t, a.format, a.output);
}

struct IdentityArgs {
    std::string graph;
    int max_order = 0;
    int n_max = 0;
    std::string format = "text";
    std::string output;
};

void run_identity(const IdentityArgs& a) {
    graphs::GraphModel g = graphs::build_graph_named(a.graph);
    percolab::oracle::IdentityCheck ic =
        percolab::oracle::identity_residual_series(g, a.max_order, a.n_max);
    std::ofstream file;
    std::ostream& os = open_sink(a.output, file);
    Config cfg = {{"subcommand", "identity-check"},
                  {"graph", g.name()},
                  {"max_order", std::to_string(a.max_order)},
                  {"n_max", std::to_string(a.n_max)}};
    if (a.format == "text") {
        os << "residual = " << ic.residual.pretty() << "\n";
        os << "pi = " << ic.pi_series.pretty() << "\n";
        os << "guard = " << (ic.guard_ok ? "ok" : "failed") << " (" << ic.guard_report
           << ")\n";
        return;
    }
    if (a.format == "csv") {
        write_header(os, "identity-check.v1", cfg);
        os << "degree,residual,pi\n";
        for (int k = 0; k <= a.max_order; ++k)
            os << k << "," << percolab::rat_to_string(ic.residual.coeff(k)) << ","
               << percolab::rat_to_string(ic.pi_series.coeff(k)) << "\n";
        os << "# guard_ok=" << (ic.guard_ok ? "true" : "false") << "\n";
        os << "# guard_report=" << ic.guard_report << "\n";
        return;
    }
    json out;
    out["tool"] = kVersion;
    out["schema"] = "identity-check.v1";
    json c = json::object();
    for (const auto& [k, v] : cfg) c[k] = v;
    out["config"] = c;
    out["residual"] = ic.residual.coeff_strings();
    out["pi"] = ic.pi_series.coeff_strings();
    out["guard_ok"] = ic.guard_ok;
    out["guard_report"] = ic.guard_report;
    os << out.dump(2) << "\n";
}

struct DiagramsArgs {
    std::string op;
    std::string graph;
    int n = 0;
    int i = 0, j = 0;
    int steps = 0;
    std::string p;
    double eps = 0;
    double jt = 0;
    std::optional<double> chi;
    double c = 2.0;
    std::string k;
    std::string format = "csv";
    std::string output;
    bool have_graph = false, have_n = false, have_i = false, have_j = false;
    bool have_steps = false, have_p = false, have_eps = false, have_jt = false;
    bool have_k = false;
};

void run_diagrams(const DiagramsArgs& a) {
    namespace dg = percolab::diagrams;
    TableOut t;
    t.schema = "diagrams.v1";
    t.cfg = {{"subcommand", "diagrams"}, {"op", a.op}};
    t.columns = {"n", "omega", "i", "j", "p", "method", "value", "scaled_value"};
    auto require = [&](bool have, const char* flag) {
        if (!have)
            throw std::invalid_argument(std::string("op ") + a.op + " needs " + flag);
    };
    auto graph_of = [&] {
        require(a.have_graph, "--graph");
        graphs::GraphModel g = graphs::build_graph_named(a.graph);
        t.cfg.emplace_back("graph", g.name());
        return g;
    };
    std::string sn, so, si, sj, sp, method, value, scaled;
    if (a.op == "return-probability") {
        graphs::GraphModel g = graph_of();
        require(a.have_steps, "--steps");
        Rat v = dg::return_probability_exact(g, a.steps);
        sn = std::to_string(g.n);
        so = std::to_string(g.omega);
        si = std::to_string(a.steps);
        method = g.kind == graphs::GraphKind::hypercube ? "exact-mode-sum"
                                                        : "exact-walk-count";
        value = percolab::rat_to_string(v);
        t.cfg.emplace_back("steps", std::to_string(a.steps));
    } else if (a.op == "return-bound") {
        graphs::GraphModel g = graph_of();
        require(a.have_i, "--i");
        dg::ReturnBound rb = dg::return_bound_check(g, a.i);
        sn = std::to_string(g.n);
        so = std::to_string(g.omega);
        si = std::to_string(a.i);
        method = rb.holds ? "walk-bound-holds" : "walk-bound-violated";
        value = percolab::rat_to_string(rb.value);
        scaled = fmt(rb.bound);
        t.cfg.emplace_back("i", std::to_string(a.i));
    } else if (a.op == "inverse-gap-sum") {
        require(a.have_n, "--n");
        require(a.have_jt, "--jt");
        double v = dg::inverse_gap_sum(static_cast<std::uint32_t>(a.n), a.jt);
        sn = std::to_string(a.n);
        so = std::to_string(a.n);
        sj = fmt(a.jt);
        method = "mode-gap-sum";
        value = fmt(v);
        t.cfg.emplace_back("n", std::to_string(a.n));
        t.cfg.emplace_back("jt", fmt(a.jt));
    } else if (a.op == "binomial-tail") {
        require(a.have_n, "--n");
        require(a.have_eps, "--eps");
        double v = dg::binomial_tail(static_cast<std::uint32_t>(a.n), a.eps);
        sn = std::to_string(a.n);
        so = std::to_string(a.n);
        sp = fmt(a.eps);
        method = "binomial-tail";
        value = fmt(v);
        t.cfg.emplace_back("n", std::to_string(a.n));
        t.cfg.emplace_back("eps", fmt(a.eps));
    } else if (a.op == "tpij-proxy") {
        require(a.have_n, "--n");
        require(a.have_i, "--i");
        require(a.have_j, "--j");
        dg::ProxyResult pr =
            dg::tpij_proxy(static_cast<std::uint32_t>(a.n), a.i, a.j, a.chi, a.c);
        sn = std::to_string(a.n);
        so = std::to_string(a.n);
        si = std::to_string(a.i);
        sj = std::to_string(a.j);
        method = "infrared-proxy";
        value = fmt(pr.value);
        scaled = fmt(pr.scaled_value);
        t.cfg.emplace_back("n", std::to_string(a.n));
        t.cfg.emplace_back("i", std::to_string(a.i));
        t.cfg.emplace_back("j", std::to_string(a.j));
        t.cfg.emplace_back("c", fmt(a.c));
        if (a.chi) t.cfg.emplace_back("chi", fmt(*a.chi));
    } else if (a.op == "tp-exact") {
        graphs::GraphModel g = graph_of();
        require(a.have_p, "--p");
        Rat p = parse_rat(a.p);
        Rat v = dg::tp_from_exact_tau(g, p);
        sn = std::to_string(g.n);
        so = std::to_string(g.omega);
        sp = percolab::rat_to_string(p);
        method = "exact-tau";
        value = percolab::rat_to_string(v);
        t.cfg.emplace_back("p", percolab::rat_to_string(p));
    } else if (a.op == "convolution-gap") {
        graphs::GraphModel g = graph_of();
        require(a.have_p, "--p");
        Rat p = parse_rat(a.p);
        Rat v = dg::convolution_gap(g, p);
        sn = std::to_string(g.n);
        so = std::to_string(g.omega);
        sp = percolab::rat_to_string(p);
        method = "convolution-gap";
        value = percolab::rat_to_string(v);
        t.cfg.emplace_back("p", percolab::rat_to_string(p));
    } else if (a.op == "tau-hat-min") {
        graphs::GraphModel g = graph_of();
        require(a.have_p, "--p");
        Rat p = parse_rat(a.p);
        std::vector<Rat> th = percolab::diagrams::tau_hat_exact(g, p);
        Rat mn = th.at(0);
        for (const Rat& v : th)
            if (v < mn) mn = v;
        sn = std::to_string(g.n);
        so = std::to_string(g.omega);
        sp = percolab::rat_to_string(p);
        method = "tau-hat-min";
        value = percolab::rat_to_string(mn);
        t.cfg.emplace_back("p", percolab::rat_to_string(p));
    } else if (a.op == "hat-d") {
        graphs::GraphModel g = graph_of();
        require(a.have_k, "--k");
        std::vector<std::uint32_t> k = parse_uint_list(a.k);
        double v = dg::hat_D(g, k);
        sn = std::to_string(g.n);
        so = std::to_string(g.omega);
        method = "hat-d";
        value = fmt(v);
        t.cfg.emplace_back("k", a.k);
    } else {
        throw std::invalid_argument("unknown diagrams op: " + a.op);
    }
    t.rows = {{sn, so, si, sj, sp, method, value, scaled}};
    t.text_lines = {"method = " + method, "value = " + value};
    if (!scaled.empty()) t.text_lines.push_back("scaled_value = " + scaled);
    emit_table(t, a.format, a.output);
}

struct DeriveArgs {
    int order = 2;
    std::string kind = "hypercube";
    std::string format = "text";
    std::string output;
};

void run_derive(const DeriveArgs& a) {
    percolab::expansion::DerivedSeries ds =
        percolab::expansion::derive_pc_series(parse_kind(a.kind), a.order);
    std::ofstream file;
    std::ostream& os = open_sink(a.output, file);
    Config cfg = {{"subcommand", "derive-series"},
                  {"order", std::to_string(a.order)},
                  {"graph_kind", a.kind}};
    if (a.format == "text") {
        os << "omega_pc = " << join(series_plain(ds.omega_pc), ", ") << "\n";
        os << "pi = " << join(series_plain(ds.pi_series), ", ") << "\n";
        os << "passes = " << ds.passes << "\n";
        return;
    }
    if (a.format == "csv") {
        write_header(os, "derive-series.v1", cfg);
        os << "order,omega_pc,pi\n";
        auto oc = series_strings(ds.omega_pc);
        auto pc = series_strings(ds.pi_series);
        for (std::size_t k = 0; k < oc.size(); ++k)
            os << k << "," << oc[k] << "," << (k < pc.size() ? pc[k] : "0/1") << "\n";
        os << "# passes=" << ds.passes << "\n";
        return;
    }
    json out;
    out["tool"] = kVersion;
    out["schema"] = "derive-series.v1";
    json c = json::object();
    for (const auto& [k, v] : cfg) c[k] = v;
    out["config"] = c;
    out["omega_pc"] = series_strings(ds.omega_pc);
    out["pi"] = series_strings(ds.pi_series);
    out["passes"] = ds.passes;
    os << out.dump(2) << "\n";
}

struct FitArgs {
    std::string input;
    std::string format = "csv";
    std::string output;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

void run_fit(const FitArgs& a) {
    std::ifstream in(a.input);
    if (!in) throw std::invalid_argument("cannot read input file: " + a.input);
    std::vector<std::string> header;
    std::vector<percolab::expansion::FitPoint> points;
    long omega_col = -1, est_col = -1, err_col = -1;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (header.empty()) {
            header = fields;
            for (std::size_t i = 0; i < header.size(); ++i) {
                if (header[i] == "omega") omega_col = static_cast<long>(i);
                if (header[i] == "estimate" || header[i] == "corrected_omega_p")
                    est_col = static_cast<long>(i);
                if (header[i] == "stderr") err_col = static_cast<long>(i);
            }
            if (omega_col < 0 || est_col < 0)
                throw std::invalid_argument(
                    "input needs an omega column and an estimate or corrected_omega_p "
                    "column");
            continue;
        }
        if (fields.size() != header.size())
            throw std::invalid_argument("malformed row: " + line);
        percolab::expansion::FitPoint pt;
        pt.omega = std::stod(fields[static_cast<std::size_t>(omega_col)]);
        pt.estimate = std::stod(fields[static_cast<std::size_t>(est_col)]);
        pt.stderr_ = err_col >= 0 ? std::stod(fields[static_cast<std::size_t>(err_col)]) : 0.0;
        points.push_back(pt);
    }
    std::vector<double> omegas;
    for (const auto& pt : points)
        if (std::find(omegas.begin(), omegas.end(), pt.omega) == omegas.end())
            omegas.push_back(pt.omega);
    if (omegas.size() < 4)
        throw std::invalid_argument("fit needs at least 4 distinct omega values");
    percolab::expansion::FitResult fr = percolab::expansion::fit_inverse_poly(points);
    double max_resid = 0;
    for (double r : fr.residuals) max_resid = std::max(max_resid, std::abs(r));
    TableOut t;
    t.schema = "fit.v1";
    t.cfg = {{"subcommand", "fit"},
             {"input", a.input},
             {"points", std::to_string(points.size())}};
    t.columns = {"term", "value"};
    const char* names[4] = {"1", "omega^-1", "omega^-2", "omega^-3"};
    for (int k = 0; k < 4; ++k) {
        t.rows.push_back({names[k], fmt(fr.coefficients[static_cast<std::size_t>(k)])});
        t.text_lines.push_back(std::string(names[k]) + " = " +
                               fmt(fr.coefficients[static_cast<std::size_t>(k)]));
    }
    for (std::size_t i = 0; i < points.size(); ++i)
        t.rows.push_back({"residual@omega=" + fmt(points[i].omega), fmt(fr.residuals[i])});
    t.result_meta = {{"max_abs_residual", fmt(max_resid)}};
    t.text_lines.push_back("max_abs_residual = " + fmt(max_resid));
    emit_table(t, a.format, a.output);
}

void add_mc_flags(CLI::App* cmd, ChiArgs& a) {
    cmd->add_option("--graph", a.graph, "graph name, e.g. q3 or torus:2,6")->required();
    cmd->add_option("--samples", a.samples, "sample count");
    cmd->add_option("--seed", a.seed, "RNG seed");
    cmd->add_option("--workers", a.workers, "worker threads (default PERCOLAB_WORKERS or 1)");
    cmd->add_option("--cluster-cap", a.cluster_cap, "abort cluster growth at this size");
    add_format_output(cmd, a.format, a.output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-graph percolation laboratory"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    PredictArgs predict_args;
    {
        CLI::App* c = app.add_subcommand(
            "predict", "evaluate the degree expansion of the critical density");
        c->add_option("--omega", predict_args.omega, "graph degree")
            ->required()
            ->check(CLI::PositiveNumber);
        c->add_option("--order", predict_args.order, "number of expansion terms")
            ->check(CLI::Range(1, 5));
        c->add_option("--graph-kind", predict_args.kind, "hypercube or torus")
            ->check(CLI::IsMember({"hypercube", "torus"}));
        add_format_output(c, predict_args.format, predict_args.output);
        c->callback([&] { run_predict(predict_args); });
    }

    ChiArgs chi_args;
    {
        CLI::App* c = app.add_subcommand("chi", "estimate the mean origin-cluster size");
        add_mc_flags(c, chi_args);
        c->add_option("--p", chi_args.p, "bond density")
            ->required()
            ->check(CLI::Range(0.0, 1.0));
        c->callback([&] { run_chi(chi_args); });
    }

    SweepArgs sweep_args;
    {
        CLI::App* c = app.add_subcommand("sweep", "chi estimates over a grid of densities");
        add_mc_flags(c, sweep_args.base);
        CLI::Option* og = c->add_option("--p-grid", sweep_args.p_grid,
                                        "comma-separated densities");
        CLI::Option* omin = c->add_option("--p-min", sweep_args.p_min, "grid start");
        CLI::Option* omax = c->add_option("--p-max", sweep_args.p_max, "grid end");
        CLI::Option* ostep = c->add_option("--p-steps", sweep_args.p_steps, "grid points");
        c->callback([&, og, omin, omax, ostep] {
            sweep_args.have_grid = og->count() > 0;
            sweep_args.have_min = omin->count() > 0;
            sweep_args.have_max = omax->count() > 0;
            sweep_args.have_steps = ostep->count() > 0;
            run_sweep(sweep_args);
        });
    }

    SolveArgs solve_args;
    {
        CLI::App* c = app.add_subcommand(
            "solve-pc", "bisection for the density where chi reaches a target");
        c->add_option("--graph", solve_args.graph, "graph name")->required();
        c->add_option("--target", solve_args.target, "chi target")->required();
        c->add_option("--tol", solve_args.tol, "relative tolerance band");
        c->add_option("--initial-samples", solve_args.initial_samples,
                      "samples per estimate at the first step");
        c->add_option("--min-final-samples", solve_args.min_final_samples,
                      "samples required before accepting");
        c->add_option("--max-samples", solve_args.max_samples, "per-estimate sample cap");
        c->add_option("--max-steps", solve_args.max_steps, "bisection step budget");
        c->add_option("--seed", solve_args.seed, "RNG seed");
        c->add_option("--workers", solve_args.workers,
                      "worker threads (default PERCOLAB_WORKERS or 1)");
        c->add_option("--cluster-cap", solve_args.cluster_cap,
                      "abort cluster growth at this size");
        add_format_output(c, solve_args.format, solve_args.output);
        c->callback([&] { run_solve(solve_args); });
    }

    PiArgs pi_exact_args;
    {
        CLI::App* c = app.add_subcommand(
            "pi-exact", "exact expansion-coefficient polynomial by full enumeration");
        c->add_option("--graph", pi_exact_args.graph, "graph name")->required();
        c->add_option("--levels", pi_exact_args.levels, "expansion level N")
            ->required()
            ->check(CLI::NonNegativeNumber);
        add_format_output(c, pi_exact_args.format, pi_exact_args.output);
        c->callback([&] { run_pi_exact(pi_exact_args); });
    }

    PiArgs pi_series_args;
    {
        CLI::App* c = app.add_subcommand(
            "pi-series", "expansion-coefficient polynomial exact through a given order");
        c->add_option("--graph", pi_series_args.graph, "graph name")->required();
        c->add_option("--levels", pi_series_args.levels, "expansion level N")
            ->required()
            ->check(CLI::NonNegativeNumber);
        c->add_option("--max-order", pi_series_args.max_order, "truncation order in p")
            ->required()
            ->check(CLI::NonNegativeNumber);
        add_format_output(c, pi_series_args.format, pi_series_args.output);
        c->callback([&] { run_pi_series(pi_series_args); });
    }

    PiMcArgs pi_mc_args;
    {
        CLI::App* c = app.add_subcommand(
            "pi-mc", "nested Monte Carlo estimate of an expansion coefficient");
        c->add_option("--graph", pi_mc_args.graph, "graph name")->required();
        c->add_option("--levels", pi_mc_args.levels, "expansion level N")
            ->required()
            ->check(CLI::Range(0, 2));
        c->add_option("--p", pi_mc_args.p, "bond density")
            ->required()
            ->check(CLI::Range(0.0, 1.0));
        c->add_option("--samples", pi_mc_args.samples, "sample count");
        c->add_option("--seed", pi_mc_args.seed, "RNG seed");
        c->add_option("--workers", pi_mc_args.workers,
                      "worker threads (default PERCOLAB_WORKERS or 1)");
        add_format_output(c, pi_mc_args.format, pi_mc_args.output);
        c->callback([&] { run_pi_mc(pi_mc_args); });
    }

    IdentityArgs identity_args;
    {
        CLI::App* c = app.add_subcommand(
            "identity-check",
            "verify the susceptibility identity order by order in the density");
        c->add_option("--graph", identity_args.graph, "graph name")->required();
        c->add_option("--max-order", identity_args.max_order, "truncation order in p")
            ->required()
            ->check(CLI::NonNegativeNumber);
        c->add_option("--n-max", identity_args.n_max, "highest expansion level")
            ->required()
            ->check(CLI::NonNegativeNumber);
        add_format_output(c, identity_args.format, identity_args.output);
        c->callback([&] { run_identity(identity_args); });
    }

    DiagramsArgs diagrams_args;
    {
        CLI::App* c = app.add_subcommand(
            "diagrams", "random-walk and two-point diagram quantities");
        c->add_option("--op", diagrams_args.op, "operation")
            ->required()
            ->check(CLI::IsMember({"return-probability", "return-bound", "inverse-gap-sum",
                                   "binomial-tail", "tpij-proxy", "tp-exact",
                                   "convolution-gap", "tau-hat-min", "hat-d"}));
        CLI::Option* og = c->add_option("--graph", diagrams_args.graph, "graph name");
        CLI::Option* on = c->add_option("--n", diagrams_args.n, "hypercube dimension");
        CLI::Option* oi = c->add_option("--i", diagrams_args.i, "first index");
        CLI::Option* oj = c->add_option("--j", diagrams_args.j, "second index");
        CLI::Option* os_ = c->add_option("--steps", diagrams_args.steps, "walk length");
        CLI::Option* op_ = c->add_option("--p", diagrams_args.p,
                                         "bond density (rational or decimal)");
        CLI::Option* oe = c->add_option("--eps", diagrams_args.eps, "tail threshold");
        CLI::Option* ot = c->add_option("--jt", diagrams_args.jt, "gap exponent");
        c->add_option("--chi", diagrams_args.chi, "susceptibility value for j > 0");
        c->add_option("--c", diagrams_args.c, "proxy constant");
        CLI::Option* ok = c->add_option("--k", diagrams_args.k, "mode vector, comma-separated");
        add_format_output(c, diagrams_args.format, diagrams_args.output);
        c->callback([&, og, on, oi, oj, os_, op_, oe, ot, ok] {
            diagrams_args.have_graph = og->count() > 0;
            diagrams_args.have_n = on->count() > 0;
            diagrams_args.have_i = oi->count() > 0;
            diagrams_args.have_j = oj->count() > 0;
            diagrams_args.have_steps = os_->count() > 0;
            diagrams_args.have_p = op_->count() > 0;
            diagrams_args.have_eps = oe->count() > 0;
            diagrams_args.have_jt = ot->count() > 0;
            diagrams_args.have_k = ok->count() > 0;
            run_diagrams(diagrams_args);
        });
    }

    DeriveArgs derive_args;
    {
        CLI::App* c = app.add_subcommand(
            "derive-series", "bootstrap the critical-density series from the level data");
        c->add_option("--order", derive_args.order, "series order");
        c->add_option("--graph-kind", derive_args.kind, "hypercube or torus")
            ->check(CLI::IsMember({"hypercube", "torus"}));
        add_format_output(c, derive_args.format, derive_args.output);
        c->callback([&] { run_derive(derive_args); });
    }

    FitArgs fit_args;
    {
        CLI::App* c = app.add_subcommand(
            "fit", "weighted least squares in the inverse-degree basis");
        c->add_option("--input", fit_args.input, "CSV file of omega/estimate rows")
            ->required();
        add_format_output(c, fit_args.format, fit_args.output);
        c->callback([&] { run_fit(fit_args); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const percolab::ResourceGuardError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
