// specgrad command-line front end: apply, kernel, verify.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "specgrad/error.hpp"
#include "specgrad/field_io.hpp"
#include "specgrad/operator.hpp"
#include "specgrad/oracle.hpp"
#include "specgrad/sample.hpp"
#include "specgrad/symbol.hpp"

using nlohmann::json;
using namespace specgrad;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

const std::set<std::string> kBuiltinOps{"shift",       "inverse-derivative", "sgn-kernel",    "shifted-derivative",
                                        "fresnel-quadrature", "heat-realspace", "kernel-convolve"};

// Raw flag values; empty means "not given".
struct Flags {
    std::string config;
    std::string symbol;
    std::vector<std::string> beta;
    std::vector<std::size_t> grid_n;
    std::vector<std::string> grid_spacing;
    std::vector<std::string> grid_origin;
    std::string kind;
    std::string field;
    std::string field_file;
    std::string out;
    std::string diagnostics;
    std::string op;
    std::string alpha;
    int oversample = 0;
    std::vector<std::string> cases;
    std::string report;
    int trials = -1;
};

struct JobConfig {
    std::optional<std::vector<std::size_t>> grid_n;
    std::vector<double> grid_spacing;
    std::vector<double> grid_origin;
    std::string field_expr;
    std::string field_file;
    std::string symbol;
    OperatorKind kind = OperatorKind::DotGradient;
    std::vector<complex> beta;
    std::string op;
    double alpha = 0.0;
    int oversample = KernelOptions{}.oversample;
    std::string out;
    std::string diagnostics;
    std::string report;
    std::vector<std::string> cases;
    int trials = 20;
    std::map<std::string, double> tolerances;
};

std::string stage = "startup";

double real_value(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return eval_real_constant(j.get<std::string>());
    throw UsageError(what + ": expected a number or constant expression");
}

complex complex_value(const json& j, const std::string& what) {
    if (j.is_array()) {
        if (j.size() != 2) throw UsageError(what + ": complex values are [re, im] pairs");
        return {real_value(j[0], what), real_value(j[1], what)};
    }
    return {real_value(j, what), 0.0};
}

// "re" or "re,im"; each part may be a constant expression.
complex parse_complex_flag(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {eval_real_constant(text), 0.0};
    return {eval_real_constant(text.substr(0, comma)), eval_real_constant(text.substr(comma + 1))};
}

std::vector<double> real_list(const json& j, const std::string& what) {
    std::vector<double> out;
    if (j.is_array()) {
        for (const auto& v : j) out.push_back(real_value(v, what));
    } else {
        out.push_back(real_value(j, what));
    }
    return out;
}

JobConfig load_config(const std::string& path) {
    JobConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config must be a JSON object");

    try {
        if (doc.contains("grid")) {
            const auto& g = doc["grid"];
            if (g.contains("n")) {
                std::vector<std::size_t> n;
                if (g["n"].is_array()) {
                    for (const auto& v : g["n"]) n.push_back(v.get<std::size_t>());
                } else {
                    n.push_back(g["n"].get<std::size_t>());
                }
                cfg.grid_n = n;
            }
            if (g.contains("spacing")) cfg.grid_spacing = real_list(g["spacing"], "grid.spacing");
            if (g.contains("origin")) cfg.grid_origin = real_list(g["origin"], "grid.origin");
        }
        if (doc.contains("field")) {
            const auto& f = doc["field"];
            if (f.is_string()) {
                cfg.field_expr = f.get<std::string>();
            } else {
                if (f.contains("expr")) cfg.field_expr = f["expr"].get<std::string>();
                if (f.contains("file")) cfg.field_file = f["file"].get<std::string>();
            }
        }
        if (doc.contains("operator")) {
            const auto& o = doc["operator"];
            if (o.contains("symbol")) cfg.symbol = o["symbol"].get<std::string>();
            if (o.contains("kind")) cfg.kind = operator_kind_from_string(o["kind"].get<std::string>());
            if (o.contains("op")) cfg.op = o["op"].get<std::string>();
            if (o.contains("alpha")) cfg.alpha = real_value(o["alpha"], "operator.alpha");
            if (o.contains("oversample")) cfg.oversample = o["oversample"].get<int>();
            if (o.contains("beta")) {
                const auto& b = o["beta"];
                if (b.is_array()) {
                    for (const auto& v : b) cfg.beta.push_back(complex_value(v, "operator.beta"));
                } else {
                    cfg.beta.push_back(complex_value(b, "operator.beta"));
                }
            }
        }
        if (doc.contains("output")) {
            const auto& o = doc["output"];
            if (o.contains("field")) cfg.out = o["field"].get<std::string>();
            if (o.contains("kernel")) cfg.out = o["kernel"].get<std::string>();
            if (o.contains("diagnostics")) cfg.diagnostics = o["diagnostics"].get<std::string>();
            if (o.contains("report")) cfg.report = o["report"].get<std::string>();
        }
        if (doc.contains("verify")) {
            const auto& v = doc["verify"];
            if (v.contains("cases")) cfg.cases = v["cases"].get<std::vector<std::string>>();
            if (v.contains("trials")) cfg.trials = v["trials"].get<int>();
            if (v.contains("tolerances")) cfg.tolerances = v["tolerances"].get<std::map<std::string, double>>();
        }
    } catch (const json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
    return cfg;
}

JobConfig resolve(const Flags& f) {
    stage = "config";
    JobConfig cfg = load_config(f.config);
    if (!f.grid_n.empty()) cfg.grid_n = f.grid_n;
    if (!f.grid_spacing.empty()) {
        cfg.grid_spacing.clear();
        for (const auto& s : f.grid_spacing) cfg.grid_spacing.push_back(eval_real_constant(s));
    }
    if (!f.grid_origin.empty()) {
        cfg.grid_origin.clear();
        for (const auto& s : f.grid_origin) cfg.grid_origin.push_back(eval_real_constant(s));
    }
    if (!f.field.empty() || !f.field_file.empty()) {
        cfg.field_expr = f.field;
        cfg.field_file = f.field_file;
    }
    if (!f.symbol.empty()) cfg.symbol = f.symbol;
    if (!f.kind.empty()) cfg.kind = operator_kind_from_string(f.kind);
    if (!f.beta.empty()) {
        cfg.beta.clear();
        for (const auto& b : f.beta) cfg.beta.push_back(parse_complex_flag(b));
    }
    if (!f.op.empty()) cfg.op = f.op;
    if (!f.alpha.empty()) cfg.alpha = eval_real_constant(f.alpha);
    if (f.oversample > 0) cfg.oversample = f.oversample;
    if (!f.out.empty()) cfg.out = f.out;
    if (!f.diagnostics.empty()) cfg.diagnostics = f.diagnostics;
    if (!f.report.empty()) cfg.report = f.report;
    if (!f.cases.empty()) cfg.cases = f.cases;
    if (f.trials >= 0) cfg.trials = f.trials;
    return cfg;
}

// Grid from explicit settings; missing spacing defaults to a 2 pi period, origin to 0.
std::optional<Grid> explicit_grid(const JobConfig& cfg) {
    if (!cfg.grid_n) {
        if (!cfg.grid_spacing.empty() || !cfg.grid_origin.empty()) {
            throw UsageError("grid spacing/origin given without grid n");
        }
        return std::nullopt;
    }
    const auto& n = *cfg.grid_n;
    const std::size_t dims = n.size();
    std::vector<double> spacing = cfg.grid_spacing, origin = cfg.grid_origin;
    if (spacing.empty()) {
        for (auto nd : n) spacing.push_back(2.0 * kPi / static_cast<double>(nd));
    }
    if (origin.empty()) origin.assign(dims, 0.0);
    if (spacing.size() == 1 && dims > 1) spacing.assign(dims, spacing[0]);
    if (origin.size() == 1 && dims > 1) origin.assign(dims, origin[0]);
    return make_grid(static_cast<int>(dims), n, spacing, origin);
}

Field input_field(const JobConfig& cfg) {
    stage = "input field";
    const bool has_expr = !cfg.field_expr.empty(), has_file = !cfg.field_file.empty();
    if (has_expr == has_file) throw UsageError("give exactly one of --field (expression) or --field-file");
    const auto grid = explicit_grid(cfg);
    if (has_file) {
        Field f = load_field(cfg.field_file);
        if (grid && !(*grid == f.grid())) throw UsageError("--field-file grid differs from the configured grid");
        return f;
    }
    if (!grid) throw UsageError("an expression field needs --grid-n (and optionally --grid-spacing, --grid-origin)");
    return sample_field(cfg.field_expr, *grid);
}

complex scalar_beta(const JobConfig& cfg) {
    if (cfg.beta.size() != 1) throw UsageError("--op " + cfg.op + " takes a single --beta value");
    return cfg.beta[0];
}

json stability_json(const StabilityReport& r) {
    json j{{"max_magnitude", nullptr}, {"argmax_k", r.argmax_k}, {"flagged", r.flagged}};
    if (std::isfinite(r.max_magnitude)) j["max_magnitude"] = r.max_magnitude;
    return j;
}

std::string stability_line(const StabilityReport& r) {
    std::ostringstream out;
    out << "stability: max |m(k)| = " << r.max_magnitude << " at k=[";
    for (std::size_t d = 0; d < r.argmax_k.size(); ++d) out << (d ? ", " : "") << r.argmax_k[d];
    out << "]" << (r.flagged ? " (exceeds 1e12)" : "");
    return out.str();
}

// Rejects symbols that cannot be evaluated at z = 0 with advice on the zero-mode routines.
void check_zero_mode(const SymbolExpr& symbol, const std::string& text) {
    try {
        (void)eval(symbol, "z", complex{});
    } catch (const DomainError& e) {
        throw DomainError("symbol '" + text + "' has a pole at k=0 (" + e.what() +
                          "); the zero mode needs a policy. Use `specgrad apply --op inverse-derivative` "
                          "(spectral, mean-zero) or `--op sgn-kernel` (real-space quadrature)");
    }
}

// Multiplier equivalent of a built-in, for the stability report.
std::optional<OperatorSpec> equivalent_spec(const JobConfig& cfg, int dims) {
    const auto beta_vec = [&] { return std::vector<complex>(cfg.beta.begin(), cfg.beta.end()); };
    if (cfg.op.empty()) return make_operator(cfg.symbol, beta_vec(), cfg.kind);
    if (cfg.op == "shift") return make_operator("exp(z)", beta_vec());
    if (cfg.op == "shifted-derivative") return make_operator("exp(z)*z", beta_vec());
    if (cfg.op == "fresnel-quadrature") return make_operator("cos(z^2)", beta_vec());
    if (cfg.op == "kernel-convolve") return make_operator(cfg.symbol, beta_vec());
    if (cfg.op == "heat-realspace") {
        return make_operator("exp(" + format_double(cfg.alpha) + "*z)", {}, OperatorKind::Laplacian);
    }
    (void)dims;
    return std::nullopt;
}

void write_output(const std::string& path, const Field& field) {
    stage = "output";
    if (path.empty() || path == "-") {
        write_field_csv(std::cout, field);
    } else {
        save_field(path, field);
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw UsageError("failed writing '" + path + "'");
}

int cmd_apply(const JobConfig& cfg) {
    const Field input = input_field(cfg);
    std::ostream& log = cfg.out.empty() || cfg.out == "-" ? std::cerr : std::cout;

    stage = "operator";
    if (!cfg.op.empty() && !kBuiltinOps.count(cfg.op)) {
        throw UsageError("unknown --op '" + cfg.op + "'");
    }
    if (cfg.op.empty() || cfg.op == "kernel-convolve") {
        if (cfg.symbol.empty()) throw UsageError("--symbol is required");
        check_zero_mode(parse(cfg.symbol, symbol_vars()), cfg.symbol);
    }
    if (cfg.op.empty() && cfg.kind == OperatorKind::DotGradient && cfg.beta.empty()) {
        throw UsageError("--beta is required for dot-gradient operators");
    }

    json diag = json::object();
    if (const auto spec = equivalent_spec(cfg, input.grid().dims())) {
        const auto report = stability_report(*spec, input.grid());
        log << stability_line(report) << '\n';
        diag = stability_json(report);
    }
    if (!cfg.diagnostics.empty()) {
        // Written before applying so a guard failure still leaves the report.
        stage = "diagnostics";
        write_json(cfg.diagnostics, diag);
    }

    stage = "apply";
    Diagnostics notes;
    Field out = [&]() -> Field {
        if (cfg.op.empty()) return apply_operator(make_operator(cfg.symbol, cfg.beta, cfg.kind), input);
        if (cfg.op == "shift") return shift_field(input, cfg.beta);
        if (cfg.op == "inverse-derivative") return inverse_derivative(input, scalar_beta(cfg));
        if (cfg.op == "sgn-kernel") return sgn_kernel_apply(input, scalar_beta(cfg), &notes);
        if (cfg.op == "shifted-derivative") return shifted_derivative_apply(input, scalar_beta(cfg).real());
        if (cfg.op == "fresnel-quadrature") return fresnel_cos_apply(input, scalar_beta(cfg).real(), &notes);
        if (cfg.op == "heat-realspace") return heat_smooth_realspace(input, cfg.alpha, &notes);
        KernelOptions opts;
        opts.oversample = cfg.oversample;
        const auto kernel = extract_kernel_1d(parse(cfg.symbol, symbol_vars()), scalar_beta(cfg), input.grid(), opts);
        return convolve_kernel(kernel, input);
    }();
    for (const auto& w : notes.warnings) std::cerr << "warning: " << w << '\n';
    if (!cfg.diagnostics.empty() && !notes.warnings.empty()) {
        diag["warnings"] = notes.warnings;
        write_json(cfg.diagnostics, diag);
    }
    write_output(cfg.out, out);
    return kExitOk;
}

// Known closed-form kernels, recognized numerically so equivalent spellings match.
struct ClosedForm {
    std::string name;
    std::function<complex(double)> kernel;
};

bool symbol_matches(const SymbolExpr& s, const std::function<complex(complex)>& f) {
    for (complex z : {complex{0.0, 0.3}, complex{0.0, 1.7}, complex{0.4, -0.2}, complex{-1.1, 0.6}}) {
        try {
            const complex a = eval(s, "z", z), b = f(z);
            if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(b))) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

std::optional<ClosedForm> closed_form_kernel(const SymbolExpr& s, complex beta) {
    if (beta.imag() != 0.0 || beta.real() == 0.0) return std::nullopt;
    const double b = std::abs(beta.real());
    if (symbol_matches(s, [](complex z) { return std::cos(z * z); })) {
        return ClosedForm{"fresnel-cosine", [b](double rho) {
                              return complex{std::cos(rho * rho / (4 * b * b) - kPi / 4) / (std::sqrt(4 * kPi) * b),
                                             0.0};
                          }};
    }
    // exp(c z^2) with c > 0 is a Gaussian in k.
    double c = 0.0;
    try {
        c = eval(s, "z", complex{1.0, 0.0}).real();
        c = c > 0 ? std::log(c) : 0.0;
    } catch (const Error&) {
        c = 0.0;
    }
    if (c > 0 && symbol_matches(s, [c](complex z) { return std::exp(c * z * z); })) {
        return ClosedForm{"gaussian", [b, c](double rho) {
                              return complex{std::exp(-rho * rho / (4 * c * b * b)) / (std::sqrt(4 * kPi * c) * b), 0.0};
                          }};
    }
    return std::nullopt;
}

int cmd_kernel(const JobConfig& cfg) {
    stage = "grid";
    const auto grid = explicit_grid(cfg);
    if (!grid) throw UsageError("kernel needs --grid-n");
    if (grid->dims() != 1) throw UsageError("kernel extraction is 1D-only; got a " + std::to_string(grid->dims()) + "D grid");

    stage = "operator";
    if (cfg.symbol.empty()) throw UsageError("--symbol is required");
    if (cfg.beta.size() != 1) throw UsageError("kernel takes a single --beta value");
    const auto symbol = parse(cfg.symbol, symbol_vars());
    check_zero_mode(symbol, cfg.symbol);

    stage = "kernel";
    KernelOptions opts;
    opts.oversample = cfg.oversample;
    const Kernel1D kernel = extract_kernel_1d(symbol, cfg.beta[0], *grid, opts);
    const auto closed = closed_form_kernel(symbol, cfg.beta[0]);

    stage = "output";
    std::ofstream file;
    const bool to_stdout = cfg.out.empty() || cfg.out == "-";
    if (!to_stdout) {
        file.open(cfg.out);
        if (!file) throw UsageError("cannot open '" + cfg.out + "' for writing");
    }
    std::ostream& out = to_stdout ? std::cout : file;
    std::ostream& log = to_stdout ? std::cerr : std::cout;
    out << "rho,re,im" << (closed ? ",closed_re,closed_im" : "") << '\n';
    const double half = 0.5 * grid->period(0);
    double deviation = 0.0;
    for (std::size_t j = 0; j < kernel.values.size(); ++j) {
        const double rho = kernel.offsets[j];
        out << format_double(rho) << ',' << format_double(kernel.values[j].real()) << ','
            << format_double(kernel.values[j].imag());
        if (closed) {
            const complex k = closed->kernel(rho);
            out << ',' << format_double(k.real()) << ',' << format_double(k.imag());
            if (std::abs(rho) <= 0.8 * half) deviation = std::max(deviation, std::abs(kernel.values[j] - k));
        }
        out << '\n';
    }
    if (!out) throw UsageError("failed writing kernel table");
    log << "kernel: " << kernel.values.size() << " offsets, spacing " << kernel.spacing << ", oversample "
        << opts.oversample << '\n';
    if (closed) {
        log << "closed form (" << closed->name << "): max deviation " << deviation
            << " over the central 80% of offsets\n";
    }
    return kExitOk;
}

unsigned seed_from_env() {
    const char* s = std::getenv("SPECGRAD_SEED");
    if (!s || !*s) return 42u;
    char* end = nullptr;
    const unsigned long v = std::strtoul(s, &end, 10);
    if (*end != '\0') throw UsageError(std::string("SPECGRAD_SEED must be an unsigned integer, got '") + s + "'");
    return static_cast<unsigned>(v);
}

int cmd_verify(const JobConfig& cfg) {
    stage = "verify";
    const unsigned seed = seed_from_env();
    auto cases = closed_form_catalog();
    if (cfg.trials < 0) throw UsageError("--trials must be non-negative");
    for (auto& c : brute_force_cases(seed, cfg.trials)) cases.push_back(std::move(c));

    for (const auto& [name, tol] : cfg.tolerances) {
        bool found = false;
        for (auto& c : cases) {
            if (c.name == name) {
                c.tolerance = tol;
                found = true;
            }
        }
        if (!found) throw UsageError("tolerance override for unknown case '" + name + "'");
    }
    if (!cfg.cases.empty()) {
        std::vector<OracleCase> selected;
        for (const auto& name : cfg.cases) {
            auto it = std::find_if(cases.begin(), cases.end(), [&](const OracleCase& c) { return c.name == name; });
            if (it == cases.end()) throw UsageError("unknown case '" + name + "'");
            selected.push_back(*it);
        }
        cases = std::move(selected);
    }

    const auto report = run_oracles(cases, default_implementations());
    std::cout << report_table(report);
    const std::string path = cfg.report.empty() ? "verify_report.json" : cfg.report;
    json doc{{"seed", seed}, {"passed", report.all_passed()}, {"cases", report_to_json(report)}};
    write_json(path, doc);
    std::cout << (report.all_passed() ? "all cases passed" : "verification FAILED") << "; report written to " << path
              << '\n';
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

void add_job_options(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON job file; flags override its fields");
    cmd->add_option("--symbol", f.symbol, "operator symbol in z, e.g. \"cos(z^2)\"");
    cmd->add_option("--beta", f.beta, "coefficient per axis: \"re\" or \"re,im\" (repeat per axis)");
    cmd->add_option("--kind", f.kind, "dot-gradient or laplacian");
    cmd->add_option("--grid-n", f.grid_n, "samples per axis");
    cmd->add_option("--grid-spacing", f.grid_spacing, "spacing per axis (default 2*pi/n)");
    cmd->add_option("--grid-origin", f.grid_origin, "origin per axis (default 0)");
    cmd->add_option("--oversample", f.oversample, "kernel k-space oversampling factor");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functions of constant-coefficient differential operators on periodic grids"};
    app.require_subcommand(1);
    Flags flags;

    auto* apply = app.add_subcommand("apply", "apply an operator to a field");
    add_job_options(apply, flags);
    apply->add_option("--field", flags.field, "field expression in x, y, z");
    apply->add_option("--field-file", flags.field_file, "field CSV or JSON file");
    apply->add_option("--op", flags.op,
                      "built-in: shift, inverse-derivative, sgn-kernel, shifted-derivative, fresnel-quadrature, "
                      "heat-realspace, kernel-convolve");
    apply->add_option("--alpha", flags.alpha, "heat-realspace diffusion time");
    apply->add_option("--out", flags.out, "output field (.json or CSV; default stdout)");
    apply->add_option("--diagnostics", flags.diagnostics, "stability report JSON");

    auto* kernel = app.add_subcommand("kernel", "tabulate the real-space kernel of a 1D symbol");
    add_job_options(kernel, flags);
    kernel->add_option("--out", flags.out, "kernel CSV (default stdout)");

    auto* verify = app.add_subcommand("verify", "run the oracle catalog and brute-force comparisons");
    verify->add_option("--config", flags.config, "JSON job file");
    verify->add_option("--case", flags.cases, "run only the named case (repeatable)");
    verify->add_option("--trials", flags.trials, "randomized brute-force trials (default 20)");
    verify->add_option("--report", flags.report, "JSON report path (default verify_report.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const JobConfig cfg = resolve(flags);
        if (apply->parsed()) return cmd_apply(cfg);
        if (kernel->parsed()) return cmd_kernel(cfg);
        return cmd_verify(cfg);
    } catch (const UsageError& e) {
        std::cerr << "specgrad: " << stage << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "specgrad: " << stage << ": " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "specgrad: " << stage << ": " << e.what() << '\n';
        return kExitDomain;
    }
}
