#include "dtnmap/app.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "dtnmap/errors.hpp"

namespace dtn::app {

using nlohmann::json;

namespace {

constexpr cplx I(0.0, 1.0);

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw ConfigError(format_message("config: '%s' must be a number", key));
    return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) { return j.contains(key) ? number(j, key) : fallback; }

// A number or a [re, im] pair.
cplx complex_value(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ConfigError("config: complex values are numbers or [re, im] pairs");
}

cplx complex_or(const json& j, const char* key, cplx fallback) {
    return j.contains(key) ? complex_value(j[key]) : fallback;
}

std::vector<cplx> complex_list(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
        throw ConfigError(format_message("config: '%s' must be a non-empty array", key));
    std::vector<cplx> out;
    for (const auto& v : j[key]) out.push_back(complex_value(v));
    return out;
}

std::vector<double> real_list(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty())
        throw ConfigError(format_message("config: '%s' must be a non-empty array", key));
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw ConfigError(format_message("config: '%s' must hold numbers", key));
        out.push_back(v.get<double>());
    }
    return out;
}

cplx horner(const std::vector<cplx>& c, double x) {
    cplx v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

std::vector<cplx> differentiate(const std::vector<cplx>& c) {
    std::vector<cplx> d;
    for (std::size_t j = 1; j < c.size(); ++j) d.push_back(static_cast<double>(j) * c[j]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

// e^{-r x} sum |c_j| x^j and its tail integral over [M, inf)
DecayEnvelope exp_poly_envelope(const std::vector<cplx>& c, double r) {
    std::vector<double> a;
    for (cplx v : c) a.push_back(std::abs(v));
    auto pointwise = [a, r](double x) {
        double p = 0.0;
        for (auto it = a.rbegin(); it != a.rend(); ++it) p = p * x + *it;
        return std::exp(-r * x) * p;
    };
    auto tail = [a, r](double M) {
        M = std::max(M, 0.0);
        double total = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            // int_M^inf x^j e^{-r x} dx = e^{-r M} sum_i j!/i! M^i / r^{j-i+1}
            double term = 0.0, ratio = 1.0 / r;  // j!/i! / r^{j-i+1} for i = j
            for (std::size_t i = j + 1; i-- > 0;) {
                term += ratio * std::pow(M, static_cast<double>(i));
                ratio *= static_cast<double>(i) / r;
            }
            total += a[j] * term;
        }
        return std::exp(-r * M) * total;
    };
    return {pointwise, tail};
}

}  // namespace

DataFamily parse_family(const json& spec) {
    if (!spec.is_object() || !spec.contains("family") || !spec["family"].is_string())
        throw ConfigError("config: data entries need a 'family' name");
    const std::string name = spec["family"];
    DataFamily out;
    out.name = name;
    if (name == "polynomial" || name == "exp_poly") {
        const auto c = complex_list(spec, "coefficients");
        const auto d = differentiate(c);
        const double r = name == "exp_poly" ? number(spec, "rate") : 0.0;
        out.value = [c, r](double x) { return std::exp(-r * x) * horner(c, x); };
        out.derivative = [c, d, r](double x) { return std::exp(-r * x) * (horner(d, x) - r * horner(c, x)); };
        bool zero = true;
        for (cplx v : c) zero = zero && v == 0.0;
        if (zero) {
            DecayEnvelope none{[](double) { return 0.0; }, [](double) { return 0.0; }};
            out.value_envelope = none;
            out.derivative_envelope = none;
        } else if (r > 0.0) {
            // coefficients of p' - r p
            std::vector<cplx> dc(c.size());
            for (std::size_t j = 0; j < c.size(); ++j) dc[j] = (j < d.size() ? d[j] : 0.0) - r * c[j];
            out.value_envelope = exp_poly_envelope(c, r);
            out.derivative_envelope = exp_poly_envelope(dc, r);
        }
        return out;
    }
    if (name == "gaussian" || name == "boosted_gaussian") {
        const cplx A = complex_or(spec, "amplitude", 1.0);
        const double c = number_or(spec, "center", 0.0), w = number(spec, "width");
        const double v = name == "boosted_gaussian" ? number(spec, "boost") : 0.0;
        if (!(w > 0.0)) throw ConfigError("config: gaussian width must be positive");
        out.value = [=](double x) { return A * std::exp(cplx(-(x - c) * (x - c) / (w * w), v * x)); };
        out.derivative = [=](double x) {
            return (-2.0 * (x - c) / (w * w) + I * v) * A * std::exp(cplx(-(x - c) * (x - c) / (w * w), v * x));
        };
        const double a = std::abs(A), sp = std::sqrt(std::numbers::pi);
        auto bump = [=](double x) { return a * std::exp(-(x - c) * (x - c) / (w * w)); };
        auto bump_tail = [=](double M) { return a * w * sp / 2.0 * std::erfc((M - c) / w); };
        out.value_envelope = DecayEnvelope{bump, bump_tail};
        out.derivative_envelope = DecayEnvelope{
            [=](double x) { return (2.0 * std::abs(x - c) / (w * w) + std::abs(v)) * bump(x); },
            [=](double M) {
                const double g = std::exp(-(M - c) * (M - c) / (w * w));
                return a * (M >= c ? g : 2.0 - g) + std::abs(v) * bump_tail(M);
            }};
        return out;
    }
    throw ConfigError("config: unknown data family '" + name + "'");
}

TimeGrid RunConfig::grid() const { return TimeGrid::graded(final_time(), N, grading); }

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

BoundaryCurve parse_curve(const json& doc) {
    if (!doc.contains("curve") || !doc["curve"].is_object()) throw ConfigError("config: missing 'curve' object");
    const json& c = doc["curve"];
    const std::string kind = c.value("kind", "");
    if (kind == "polynomial") {
        const double T = number(doc, "final_time");
        if (!(T > 0.0)) throw ConfigError("config: final_time must be positive");
        return make_polynomial_curve(real_list(c, "coefficients"), T);
    }
    if (kind == "tabulated") {
        auto nodes = real_list(c, "nodes");
        if (doc.contains("final_time") && number(doc, "final_time") != nodes.back())
            throw ConfigError("config: final_time differs from the last tabulated node");
        return make_tabulated_curve(nodes, real_list(c, "values"));
    }
    throw ConfigError("config: curve kind must be 'polynomial' or 'tabulated'");
}

}  // namespace

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    BoundaryCurve curve = parse_curve(doc);

    const json grid = doc.value("grid", json::object());
    if (!grid.contains("N") || !grid["N"].is_number_integer()) throw ConfigError("config: grid.N must be an integer");
    const int N = grid["N"].get<int>();
    if (N < 16) throw ConfigError("config: grid.N must be at least 16");
    const double grading = number_or(grid, "grading", 1.0);
    if (!(grading >= 1.0)) throw ConfigError("config: grid.grading must be at least 1");

    DtnOptions options;
    const json tol = doc.value("tolerances", json::object());
    options.quad_tol = number_or(tol, "quadrature", options.quad_tol);
    options.tail_tol = number_or(tol, "tail", options.tail_tol);
    if (!(options.quad_tol > 0.0) || !(options.tail_tol > 0.0)) throw ConfigError("config: tolerances must be positive");
    const std::string constants = doc.value("constants", "derived");
    if (constants == "two_thirds")
        options.constants = VolterraConstants::two_thirds();
    else if (constants != "derived")
        throw ConfigError("config: constants must be 'derived' or 'two_thirds'");

    std::optional<ManufacturedSolution> manufactured;
    DirichletData dirichlet;
    HalfLineProfile initial;
    if (doc.contains("data")) {
        const json& d = doc["data"];
        if (d.value("family", "") != "manufactured") throw ConfigError("config: 'data' must be the manufactured family");
        ManufacturedSolution ms{number_or(d, "t0", 1.0), number_or(d, "shift", 0.0), number_or(d, "boost", 0.0),
                                number_or(d, "amplitude", 1.0)};
        if (!(ms.t0 > 0.0)) throw ConfigError("config: manufactured t0 must be positive");
        manufactured = ms;
        const DtnProblem p = ms.problem(curve);
        dirichlet = p.dirichlet;
        initial = p.initial;
    } else {
        if (!doc.contains("dirichlet") || !doc.contains("initial"))
            throw ConfigError("config: give 'data' or both 'dirichlet' and 'initial'");
        DataFamily f0 = parse_family(doc["dirichlet"]);
        DataFamily q0 = parse_family(doc["initial"]);
        if (!q0.value_envelope || !q0.derivative_envelope)
            throw ConfigError("config: initial data family '" + q0.name + "' does not decay on x >= 0");
        dirichlet = {f0.value, f0.derivative};
        initial = {q0.value, q0.derivative, *q0.value_envelope, *q0.derivative_envelope, curve.value(0.0)};
    }

    std::vector<cplx> ks{cplx(-1, 0), cplx(-3, -1), cplx(2, -2)};
    if (doc.contains("residual_k")) ks = complex_list(doc, "residual_k");
    for (cplx k : ks)
        if (k.imag() > 0.0) throw ConfigError("config: residual_k must lie in the closed lower half plane");

    RunConfig cfg{doc,
                  fnv1a_hex(doc.dump()),
                  curve,
                  N,
                  grading,
                  manufactured,
                  DtnProblem{curve, dirichlet, initial},
                  options,
                  ks,
                  doc.value("output_dir", ".")};
    cfg.problem.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(doc);
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_metadata(std::ostream& os, const RunConfig& cfg, const char* what) {
    os << "# dtnmap " << kVersion << '\n'
       << "# output " << what << '\n'
       << "# config_hash fnv1a64:" << cfg.hash << '\n'
       << "# curve " << cfg.curve.kind_name() << '\n'
       << "# initially_decreasing " << (cfg.curve.initially_decreasing() ? "true" : "false") << '\n'
       << "# N " << cfg.N << '\n'
       << "# grading " << fmt(cfg.grading) << '\n'
       << "# quadrature_tol " << fmt(cfg.options.quad_tol) << '\n'
       << "# tail_tol " << fmt(cfg.options.tail_tol) << '\n';
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name, std::string& path) {
    std::filesystem::create_directories(cfg.output_dir);
    path = (std::filesystem::path(cfg.output_dir) / name).string();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write '" + path + "'");
    return os;
}

const ManufacturedSolution& require_manufactured(const RunConfig& cfg, const char* mode) {
    if (!cfg.manufactured)
        throw ConfigError(format_message("%s needs the manufactured data family (exact final state)", mode));
    return *cfg.manufactured;
}

}  // namespace

std::string execute(Mode mode, const RunConfig& cfg) {
    const TimeGrid grid = cfg.grid();
    std::string path;
    if (mode == Mode::kernel_dump) {
        KernelContext ctx(cfg.curve, grid);
        const KernelMatrix K = assemble_kernel_matrix(grid, ctx);
        auto os = open_output(cfg, "kernel.csv", path);
        write_metadata(os, cfg, "regularised kernel sqrt(t - s) J(s, t), s <= t");
        os << "n,m,s,t,re,im\n";
        for (int n = 0; n < grid.size(); ++n)
            for (int m = 0; m <= n; ++m)
                os << n << ',' << m << ',' << fmt(grid[m]) << ',' << fmt(grid[n]) << ',' << fmt(K.jreg(n, m).real())
                   << ',' << fmt(K.jreg(n, m).imag()) << '\n';
        return path;
    }
    if (mode == Mode::solve) {
        const NeumannTrace tr = solve_dtn(cfg.problem, grid, cfg.options);
        auto os = open_output(cfg, "f1.csv", path);
        write_metadata(os, cfg, "Neumann trace f1(t) = q_x(l(t), t)");
        os << "# volterra_residual " << fmt(tr.residual_norm) << '\n';
        os << "t,re_f1,im_f1,abs_f1\n";
        for (int n = 0; n < grid.size(); ++n)
            os << fmt(grid[n]) << ',' << fmt(tr.f1[n].real()) << ',' << fmt(tr.f1[n].imag()) << ','
               << fmt(std::abs(tr.f1[n])) << '\n';
        return path;
    }
    if (mode == Mode::residual) {
        const auto& ms = require_manufactured(cfg, "residual");
        const NeumannTrace tr = solve_dtn(cfg.problem, grid, cfg.options);
        const HalfLineProfile qT = ms.profile(cfg.final_time(), cfg.curve.value(cfg.final_time()));
        auto os = open_output(cfg, "residuals.csv", path);
        write_metadata(os, cfg, "global relation residual of the solved trace");
        os << "re_k,im_k,re_residual,im_residual,abs_residual,scale,weight_sup\n";
        for (cplx k : cfg.residual_k) {
            const GlobalRelationTerms g = global_relation_residual(cfg.problem, tr, qT, k);
            os << fmt(k.real()) << ',' << fmt(k.imag()) << ',' << fmt(g.residual.real()) << ','
               << fmt(g.residual.imag()) << ',' << fmt(std::abs(g.residual)) << ',' << fmt(g.scale) << ','
               << fmt(g.weight_sup) << '\n';
        }
        return path;
    }

    // verify
    const auto& ms = require_manufactured(cfg, "verify");
    const NeumannTrace tr = solve_dtn(cfg.problem, grid, cfg.options);
    const ManufacturedTraces ex = manufactured_traces(ms, cfg.curve, grid);
    const double err = (tr.f1 - ex.f1).cwiseAbs().maxCoeff();
    const double rel = err / ex.f1.cwiseAbs().maxCoeff();
    json checks = json::array();
    bool pass = true;
    auto check = [&](const std::string& name, double measured, double tolerance) {
        const bool ok = measured <= tolerance;
        pass = pass && ok;
        checks.push_back({{"name", name}, {"measured", measured}, {"tolerance", tolerance}, {"pass", ok}});
    };
    check("neumann_trace_max_rel_error", rel, 1e-3);
    check("volterra_residual", tr.residual_norm, 1e-10 * (1.0 + tr.f1.cwiseAbs().maxCoeff()));
    for (cplx k : cfg.residual_k) {
        const GlobalRelationTerms g = global_relation_residual(cfg.problem, tr, ex.q_at_T, k);
        // the residual of the solved trace is bounded by the trace error times the weight
        const double bound = 10.0 * cfg.final_time() * g.weight_sup * err + 1e-12 * g.scale;
        check("global_relation k=" + fmt(k.real()) + (k.imag() < 0 ? "" : "+") + fmt(k.imag()) + "i",
              std::abs(g.residual), bound);
    }
    json report = {{"version", kVersion},
                   {"config_hash", "fnv1a64:" + cfg.hash},
                   {"curve", cfg.curve.kind_name()},
                   {"initially_decreasing", cfg.curve.initially_decreasing()},
                   {"N", cfg.N},
                   {"max_rel_error", rel},
                   {"volterra_residual", tr.residual_norm},
                   {"checks", checks},
                   {"pass", pass}};
    auto os = open_output(cfg, "report.json", path);
    os << report.dump(2) << '\n';
    if (!pass) throw NoConvergence("verify: at least one check failed, see " + path);
    return path;
}

namespace {

void error_json(std::ostream& err, const std::string& kind, const std::string& message, int code) {
    err << json{{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}}.dump() << '\n';
}

int exit_code(const Error& e) {
    const std::string k = e.kind();
    if (k == "NoConvergence" || k == "SingularStep" || k == "DegenerateScale") return 2;
    return 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App cli{"Dirichlet-to-Neumann map for i q_t + q_xx = 0 on x > l(t)", "dtnmap"};
    cli.require_subcommand(1);
    std::string config_path, output_dir;
    const std::pair<const char*, Mode> modes[] = {{"solve", Mode::solve},
                                                  {"verify", Mode::verify},
                                                  {"kernel-dump", Mode::kernel_dump},
                                                  {"residual", Mode::residual}};
    const char* help[] = {"solve for f1 and write f1.csv", "check a manufactured case and write report.json",
                          "write the regularised kernel to kernel.csv",
                          "write global relation residuals to residuals.csv"};
    std::vector<CLI::App*> subs;
    for (int i = 0; i < 4; ++i) {
        CLI::App* sub = cli.add_subcommand(modes[i].first, help[i]);
        sub->add_option("config", config_path, "JSON configuration file")->required();
        sub->add_option("--output-dir", output_dir, "directory for output files (overrides the config)");
        subs.push_back(sub);
    }
    try {
        cli.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return cli.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        error_json(err, "UsageError", e.what(), 1);
        return 1;
    }
    try {
        Mode mode = Mode::solve;
        for (int i = 0; i < 4; ++i)
            if (subs[i]->parsed()) mode = modes[i].second;
        RunConfig cfg = load_config(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        out << execute(mode, cfg) << '\n';
        return 0;
    } catch (const Error& e) {
        const int code = exit_code(e);
        error_json(err, e.kind(), e.what(), code);
        return code;
    } catch (const std::exception& e) {
        error_json(err, "InternalError", e.what(), 2);
        return 2;
    }
}

}  // namespace dtn::app
