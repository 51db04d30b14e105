#include "specgrad/oracle.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "specgrad/error.hpp"
#include "specgrad/sample.hpp"

namespace specgrad {

namespace {

constexpr double kPi = std::numbers::pi;

Grid line_grid(std::size_t n, double lo, double hi) {
    return Grid({n}, {(hi - lo) / static_cast<double>(n)}, {lo});
}

complex mean_of(const Field& f) {
    complex s{};
    for (const auto& v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

OracleOperation apply_op(std::string symbol, complex beta, OperatorKind kind = OperatorKind::DotGradient) {
    return {"apply", std::move(symbol), {beta}, kind, 0.0};
}

OracleOperation named_op(std::string name, std::string symbol, complex beta, double alpha = 0.0) {
    return {std::move(name), std::move(symbol), {beta}, OperatorKind::DotGradient, alpha};
}

// cos(beta^2 d^2/dx^2) exp(-x^2) in closed form: the multiplier cos(b k^2), b = beta^2, splits the
// Gaussian spectrum into two Gaussians of complex width a = 1/4 -/+ i b.
constexpr const char* kFresnelGaussianHalf =
    "0.5*(exp(-x^2/(1-i))/sqrt(1-i) + exp(-x^2/(1+i))/sqrt(1+i))";

Field half_sqrt_pi_erf(const Field& input) {
    const auto x = coordinates(input.grid(), 0);
    std::vector<complex> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = 0.5 * std::sqrt(kPi) * std::erf(x[j]);
    return {input.grid(), std::move(out)};
}

// Antiderivative of exp(-x^2) - mean: the zero-mode policy removes the mean before integrating.
Field mean_removed_gaussian_integral(const Field& input) {
    const auto x = coordinates(input.grid(), 0);
    const double mean = mean_of(input).real();
    std::vector<complex> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = 0.5 * std::sqrt(kPi) * std::erf(x[j]) - mean * x[j];
    return {input.grid(), std::move(out)};
}

}  // namespace

Field brute_force_apply(const SymbolExpr& symbol, complex beta, const Field& field) {
    const Grid& grid = field.grid();
    if (grid.dims() != 1) throw UsageError("brute_force_apply requires a 1D field");
    const std::size_t n = grid.n(0);
    if (n > kBruteForceLimit) {
        throw UsageError("brute_force_apply: n=" + std::to_string(n) + " exceeds the limit " +
                         std::to_string(kBruteForceLimit));
    }
    const double period = static_cast<double>(n) * grid.spacing(0);
    const complex unit{0.0, 1.0};

    // Symbol at each discrete wavenumber, m in [-(n-1)/2, n/2].
    std::vector<complex> symbol_at(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        const long long m = idx <= n / 2 ? static_cast<long long>(idx) : static_cast<long long>(idx) - static_cast<long long>(n);
        const double k = 2.0 * kPi * static_cast<double>(m) / period;
        if (n % 2 == 0 && idx == n / 2) {
            symbol_at[idx] = 0.5 * (eval(symbol, "z", unit * k * beta) + eval(symbol, "z", -unit * k * beta));
        } else {
            symbol_at[idx] = eval(symbol, "z", unit * k * beta);
        }
    }

    // Inner sum over k for every index difference d = j - j' (mod n); phase from exact integers.
    std::vector<complex> inner(n);
    for (std::size_t d = 0; d < n; ++d) {
        complex acc{};
        for (std::size_t idx = 0; idx < n; ++idx) {
            const std::size_t phase = (idx * d) % n;
            const double angle = 2.0 * kPi * static_cast<double>(phase) / static_cast<double>(n);
            acc += std::polar(1.0, angle) * symbol_at[idx];
        }
        inner[d] = acc / static_cast<double>(n);
    }

    const auto c = field.values();
    std::vector<complex> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        complex acc{};
        for (std::size_t jp = 0; jp < n; ++jp) acc += inner[(j + n - jp) % n] * c[jp];
        out[j] = acc;
    }
    return {grid, std::move(out)};
}

ImplementationTable default_implementations() {
    ImplementationTable table;
    table["apply"] = [](const OracleOperation& op, const Field& f) {
        return apply_operator(make_operator(op.symbol, op.beta, op.kind), f);
    };
    table["kernel-convolve"] = [](const OracleOperation& op, const Field& f) {
        const auto kernel = extract_kernel_1d(parse(op.symbol, symbol_vars()), op.beta.at(0), f.grid());
        return convolve_kernel(kernel, f);
    };
    table["heat-realspace"] = [](const OracleOperation& op, const Field& f) {
        return heat_smooth_realspace(f, op.alpha);
    };
    table["shift"] = [](const OracleOperation& op, const Field& f) { return shift_field(f, op.beta); };
    table["inverse-derivative"] = [](const OracleOperation& op, const Field& f) {
        return inverse_derivative(f, op.beta.at(0));
    };
    table["sgn-kernel"] = [](const OracleOperation& op, const Field& f) {
        return sgn_kernel_apply(f, op.beta.at(0));
    };
    table["shifted-derivative"] = [](const OracleOperation& op, const Field& f) {
        return shifted_derivative_apply(f, op.beta.at(0).real());
    };
    table["fresnel-quadrature"] = [](const OracleOperation& op, const Field& f) {
        return fresnel_cos_apply(f, op.beta.at(0).real());
    };
    table["brute-force"] = [](const OracleOperation& op, const Field& f) {
        return brute_force_apply(parse(op.symbol, symbol_vars()), op.beta.at(0), f);
    };
    return table;
}

std::vector<OracleCase> closed_form_catalog() {
    const Grid periodic = line_grid(64, 0.0, 2.0 * kPi);
    const Grid wide = line_grid(512, -16.0, 16.0);
    std::vector<OracleCase> cases;

    auto add = [&](std::string name, const Grid& grid, std::string field, OracleOperation op, std::string expected,
                   double tol, std::string derivation) {
        OracleCase c{std::move(name), grid, std::move(field), {}, std::move(op), std::move(expected), {}, tol,
                     std::move(derivation), false};
        cases.push_back(std::move(c));
    };

    add("shift-sine", periodic, "sin(x)", apply_op("exp(z)", kPi / 2), "cos(x)", 1e-10,
        "exp(beta d/dx) translates: sin(x + pi/2) = cos(x)");
    add("shift-builtin-sine", periodic, "sin(x)", named_op("shift", "", kPi / 2), "cos(x)", 1e-10,
        "band-limited shift of a single mode");
    add("derivative-sine", periodic, "sin(x)", apply_op("z", 1.0), "cos(x)", 1e-10, "d/dx sin = cos");
    add("plane-wave-exp-times-z", periodic, "exp(i*x)", apply_op("exp(z)*z", 1.0), "i*exp(i)*exp(i*x)", 1e-10,
        "plane-wave eigenrelation, f(i) = i exp(i)");
    add("fresnel-spectral-sine", periodic, "sin(x)", apply_op("cos(z^2)", 0.5), "cos(0.25)*sin(x)", 1e-10,
        "multiplier cos(beta^2 k^2) at k = 1");
    add("heat-spectral-gaussian", wide, "exp(-x^2/2)", apply_op("exp(0.5*z)", 0.0, OperatorKind::Laplacian),
        "exp(-x^2/4)/sqrt(2)", 1e-6, "Gaussian convolution: variance 1 -> 1 + 2 alpha");
    add("heat-realspace-gaussian", wide, "exp(-x^2/2)", named_op("heat-realspace", "", 0.0, 0.5),
        "exp(-x^2/4)/sqrt(2)", 1e-6, "Gaussian convolution: variance 1 -> 1 + 2 alpha");
    add("heat-realspace-plane-wave", periodic, "exp(i*x)", named_op("heat-realspace", "", 0.0, 0.5),
        "exp(-0.5)*exp(i*x)", 1e-6, "heat multiplier exp(-alpha k^2) at k = 1");
    add("inverse-derivative-cosine", periodic, "cos(x)", named_op("inverse-derivative", "", 2.0), "sin(x)/2", 1e-10,
        "mean-zero antiderivative divided by beta");
    add("shifted-derivative-gaussian", wide, "exp(-x^2)", named_op("shifted-derivative", "", 0.5),
        "-(x+0.5)*exp(-(x+0.5)^2)", 1e-8, "derivative then shift by beta");
    add("shifted-derivative-symbol-gaussian", wide, "exp(-x^2)", apply_op("exp(z)*z", 0.5),
        "-(x+0.5)*exp(-(x+0.5)^2)", 1e-8, "symbol exp(z) z equals derivative then shift");
    add("fresnel-spectral-gaussian", wide, "exp(-x^2)", apply_op("cos(z^2)", 0.5), kFresnelGaussianHalf, 1e-10,
        "complex-width Gaussian pair");
    add("fresnel-quadrature-gaussian", wide, "exp(-x^2)", named_op("fresnel-quadrature", "", 0.5),
        kFresnelGaussianHalf, 1e-4, "Fresnel-cosine kernel quadrature vs complex-width Gaussian pair");
    add("kernel-convolve-fresnel-gaussian", wide, "exp(-x^2)", named_op("kernel-convolve", "cos(z^2)", 0.5),
        kFresnelGaussianHalf, 1e-3, "tabulated kernel convolution vs complex-width Gaussian pair");
    cases.back().interior = 0.8;
    add("kernel-convolve-delta", wide, "exp(-x^2)", named_op("kernel-convolve", "1", 1.0), "exp(-x^2)", 1e-12,
        "symbol 1 gives a discrete delta");

    OracleCase sgn{"sgn-kernel-gaussian", wide, "exp(-x^2)", {}, named_op("sgn-kernel", "", 1.0), "",
                   half_sqrt_pi_erf, 1e-8, "integral of exp(-t^2) gives sqrt(pi) erf(x)", false};
    cases.push_back(std::move(sgn));

    OracleCase inv{"inverse-derivative-gaussian", wide, "exp(-x^2)", {}, named_op("inverse-derivative", "", 1.0), "",
                   mean_removed_gaussian_integral, 1e-6,
                   "(sqrt(pi)/2) erf(x) minus the ramp from the removed zero mode, mean aligned", true};
    cases.push_back(std::move(inv));
    return cases;
}

std::vector<OracleCase> brute_force_cases(unsigned seed, int trials) {
    static const char* symbols[] = {"z", "z^2", "exp(z)", "cos(z^2)", "1+z/2"};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> beta_dist(0.1, 2.0);
    std::vector<OracleCase> cases;
    for (int t = 0; t < trials; ++t) {
        const std::size_t n = t % 2 == 0 ? 16 : 64;
        const std::string symbol = symbols[t % 5];
        const double beta = beta_dist(rng);
        const std::uint64_t field_seed = rng();
        const Grid grid = line_grid(n, 0.0, 2.0 * kPi);
        OracleCase c{"brute-force-" + std::to_string(t) + "-" + symbol,
                     grid,
                     "",
                     [field_seed](const Grid& g) {
                         std::mt19937_64 local(field_seed);
                         std::uniform_real_distribution<double> u(-1.0, 1.0);
                         std::vector<complex> v(g.size());
                         for (auto& x : v) {
                             const double re = u(local);
                             x = {re, u(local)};
                         }
                         return Field(g, std::move(v));
                     },
                     apply_op(symbol, beta),
                     "",
                     {},
                     1e-10,
                     "O(N^2) double sum vs FFT multiplier path",
                     false};
        c.reference = [symbol, beta](const Field& input) {
            return brute_force_apply(parse(symbol, symbol_vars()), beta, input);
        };
        cases.push_back(std::move(c));
    }
    return cases;
}

bool OracleReport::all_passed() const {
    for (const auto& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

double max_abs_difference(const Field& a, const Field& b, bool align_mean, double interior) {
    require_same_grid(a.grid(), b.grid(), "max_abs_difference");
    if (!(interior > 0.0 && interior <= 1.0)) throw UsageError("interior fraction must be in (0, 1]");
    const Grid& grid = a.grid();
    std::vector<std::size_t> skip;
    for (int d = 0; d < grid.dims(); ++d) {
        skip.push_back(static_cast<std::size_t>(std::floor(0.5 * (1.0 - interior) * static_cast<double>(grid.n(d)))));
    }
    const complex ma = align_mean ? mean_of(a) : complex{};
    const complex mb = align_mean ? mean_of(b) : complex{};
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (interior < 1.0) {
            const auto idx = grid.unflatten(i);
            bool inside = true;
            for (std::size_t d = 0; d < idx.size(); ++d) {
                inside = inside && idx[d] >= skip[d] && idx[d] < grid.n(static_cast<int>(d)) - skip[d];
            }
            if (!inside) continue;
        }
        worst = std::max(worst, std::abs((a[i] - ma) - (b[i] - mb)));
    }
    return worst;
}

OracleReport run_oracles(const std::vector<OracleCase>& cases, const ImplementationTable& implementations) {
    OracleReport report;
    for (const auto& c : cases) {
        OracleResult result{c.name, false, 0.0, 0.0, {}};
        const auto start = std::chrono::steady_clock::now();
        try {
            const auto it = implementations.find(c.operation.name);
            if (it == implementations.end()) throw UsageError("no implementation for '" + c.operation.name + "'");
            const Field input = c.field_source ? c.field_source(c.grid) : sample_field(c.field_expr, c.grid);
            const Field expected = c.reference ? c.reference(input) : sample_field(c.expected_expr, c.grid);
            const Field actual = it->second(c.operation, input);
            result.max_error = max_abs_difference(actual, expected, c.align_mean, c.interior);
            result.pass = result.max_error <= c.tolerance;
        } catch (const std::exception& e) {
            result.message = e.what();
            result.max_error = std::numeric_limits<double>::infinity();
        }
        result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.results.push_back(std::move(result));
    }
    return report;
}

nlohmann::json report_to_json(const OracleReport& report) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : report.results) {
        nlohmann::json entry{{"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}};
        if (std::isfinite(r.max_error)) {
            entry["max_error"] = r.max_error;
        } else {
            entry["max_error"] = nullptr;
        }
        if (!r.message.empty()) entry["error"] = r.message;
        out.push_back(std::move(entry));
    }
    return out;
}

std::string report_table(const OracleReport& report) {
    std::ostringstream out;
    std::size_t width = 4;
    for (const auto& r : report.results) width = std::max(width, r.name.size());
    out << std::left << std::setw(static_cast<int>(width)) << "case" << "  result  max_error     seconds\n";
    for (const auto& r : report.results) {
        out << std::left << std::setw(static_cast<int>(width)) << r.name << "  " << (r.pass ? "PASS  " : "FAIL  ")
            << "  " << std::scientific << std::setprecision(3) << std::setw(12) << r.max_error << "  " << std::fixed
            << std::setprecision(4) << r.seconds;
        if (!r.message.empty()) out << "  " << r.message;
        out << '\n';
    }
    return out.str();
}

}  // namespace specgrad
