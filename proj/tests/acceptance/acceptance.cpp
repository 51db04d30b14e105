// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "specgrad/error.hpp"
#include "specgrad/operator.hpp"
#include "specgrad/oracle.hpp"
#include "specgrad/sample.hpp"
#include "specgrad/symbol.hpp"

using namespace specgrad;

namespace {

constexpr double kPi = std::numbers::pi;

Grid periodic(std::size_t n) { return Grid({n}, {2 * kPi / static_cast<double>(n)}, {0.0}); }
Grid wide512() { return Grid({512}, {32.0 / 512}, {-16.0}); }
SymbolExpr sym(std::string_view t) { return parse(t, symbol_vars()); }

unsigned seed_from_env() {
    const char* s = std::getenv("SPECGRAD_SEED");
    return s ? static_cast<unsigned>(std::strtoul(s, nullptr, 10)) : 42u;
}

Field random_field(const Grid& g, std::mt19937_64& rng, bool real = false) {
    std::normal_distribution<double> d;
    std::vector<complex> v(g.size());
    for (auto& x : v) x = {d(rng), real ? 0.0 : d(rng)};
    return Field(g, std::move(v));
}

Field combine(const Field& a, complex ca, const Field& b, complex cb) {
    std::vector<complex> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = ca * a[i] + cb * b[i];
    return Field(a.grid(), std::move(v));
}

// Zeroes the top third of the spectrum on every axis.
Field band_limit(const Field& f) {
    const Grid& g = f.grid();
    const SpectralField spec = dft_forward(f);
    std::vector<complex> coeffs(spec.coeffs().begin(), spec.coeffs().end());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto idx = g.unflatten(i);
        for (int d = 0; d < g.dims(); ++d) {
            const auto n = static_cast<long long>(g.n(d));
            auto m = static_cast<long long>(idx[static_cast<std::size_t>(d)]);
            if (m > n / 2) m -= n;
            if (3 * std::llabs(m) > n) coeffs[i] = {};
        }
    }
    return dft_inverse(SpectralField(g, std::move(coeffs)));
}

// Tracks the worst ratio error/tolerance across the sub-checks of one criterion.
struct Check {
    double worst_ratio = 0.0;
    std::string detail;
    bool failed = false;

    void le(const std::string& what, double error, double tol) {
        const double ratio = error / tol;
        if (!(error <= tol)) failed = true;
        if (!(ratio <= worst_ratio)) {
            worst_ratio = ratio;
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s: %.3g (tol %.0e)", what.c_str(), error, tol);
            detail = buf;
        }
    }
    void require(const std::string& what, bool ok) {
        if (!ok) {
            failed = true;
            detail = what;
            worst_ratio = std::numeric_limits<double>::infinity();
        }
    }
};

void criterion1(Check& c) {
    const Grid g = periodic(64);
    const Field out = apply_operator(make_operator("exp(z)", {kPi / 2}), sample_field("sin(x)", g));
    c.le("exp(z) at pi/2 on sin(x) vs cos(x)", max_abs_difference(out, sample_field("cos(x)", g)), 1e-10);
}

void criterion2(Check& c) {
    const Grid g = periodic(64);
    std::mt19937_64 rng(seed_from_env());
    std::uniform_real_distribution<double> beta_dist(0.1, 2.0);
    for (const char* s : {"z", "exp(z)", "cos(z^2)"}) {
        for (int k : {1, 2, 5}) {
            const double beta = beta_dist(rng);
            const Field wave = sample_field("exp(i*" + std::to_string(k) + "*x)", g);
            const complex factor = eval(sym(s), "z", complex(0.0, k * beta));
            std::vector<complex> expected(wave.size());
            for (std::size_t j = 0; j < expected.size(); ++j) expected[j] = factor * wave[j];
            const Field out = apply_operator(make_operator(s, {beta}), wave);
            c.le(std::string(s) + " k=" + std::to_string(k), max_abs_difference(out, Field(g, expected)), 1e-10);
        }
    }
}

void criterion3(Check& c) {
    const Grid g = wide512();
    const Field in = sample_field("exp(-x^2/2)", g);
    const Field spectral = apply_operator(make_operator("exp(0.5*z)", {}, OperatorKind::Laplacian), in);
    const Field realspace = heat_smooth_realspace(in, 0.5);
    const Field closed = sample_field("exp(-x^2/4)/sqrt(2)", g);
    c.le("spectral vs real-space", max_abs_difference(spectral, realspace), 1e-6);
    c.le("spectral vs closed form", max_abs_difference(spectral, closed), 1e-6);
    c.le("real-space vs closed form", max_abs_difference(realspace, closed), 1e-6);
}

void criterion4(Check& c) {
    const Grid g = wide512();
    const Field in = sample_field("exp(-x^2)", g);
    const auto x = coordinates(g, 0);
    std::vector<complex> erf_ref(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) erf_ref[j] = 0.5 * std::sqrt(kPi) * std::erf(x[j]);
    c.le("sgn quadrature vs erf", max_abs_difference(sgn_kernel_apply(in, 1.0), Field(g, erf_ref)), 1e-8);

    // The zero mode removes mean(c); its antiderivative is the ramp mean(c) * x.
    complex mean{};
    for (const auto& v : in.values()) mean += v;
    mean /= static_cast<double>(in.size());
    std::vector<complex> ramp_ref(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) ramp_ref[j] = erf_ref[j] - mean * x[j];
    const Field inv = inverse_derivative(in, 1.0);
    c.le("spectral inverse vs erf (mean aligned)", max_abs_difference(inv, Field(g, ramp_ref), true), 1e-6);

    const Field back = apply_operator(make_operator("z", {1.0}), inv);
    const Field centered = combine(in, 1.0, Field(g, std::vector<complex>(g.size(), mean)), -1.0);
    c.le("beta d/dx recovers c - mean", max_abs_difference(back, centered), 1e-8);
}

void criterion5(Check& c) {
    const Grid g = wide512();
    const Field in = sample_field("exp(-x^2)", g);
    // beta * c'(x + beta) with c' = -2x exp(-x^2), beta = 0.5.
    const Field expected = sample_field("0.5*(-2*(x+0.5)*exp(-(x+0.5)^2))", g);
    c.le("exp(z)*z symbol", max_abs_difference(apply_operator(make_operator("exp(z)*z", {0.5}), in), expected), 1e-8);
    c.le("derivative then shift", max_abs_difference(shifted_derivative_apply(in, 0.5), expected), 1e-8);
}

void criterion6(Check& c) {
    const Grid g = wide512();
    const double beta = 0.5;
    const auto kernel = extract_kernel_1d(sym("cos(z^2)"), beta, g);
    const double norm = 1.0 / (std::sqrt(4 * kPi) * beta);
    const double half_width = 0.8 * 16.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < kernel.values.size(); ++j) {
        const double rho = kernel.offsets[j];
        if (std::abs(rho) > half_width) continue;
        const double expected = norm * std::cos(rho * rho / (4 * beta * beta) - kPi / 4);
        worst = std::max(worst, std::abs(kernel.values[j] - expected));
    }
    c.le("(a) kernel vs closed form, central 80%", worst, 1e-3);

    const Field in = sample_field("exp(-x^2)", g);
    c.le("(b) quadrature vs spectral on exp(-x^2)",
         max_abs_difference(fresnel_cos_apply(in, beta), apply_operator(make_operator("cos(z^2)", {beta}), in)), 1e-4);

    const Grid p = periodic(64);
    c.le("(c) sin(x) -> cos(0.25) sin(x)",
         max_abs_difference(apply_operator(make_operator("cos(z^2)", {beta}), sample_field("sin(x)", p)),
                            sample_field("cos(0.25)*sin(x)", p)),
         1e-10);
}

void criterion7(Check& c) {
    const auto cases = brute_force_cases(seed_from_env(), 20);
    const auto report = run_oracles(cases, default_implementations());
    c.require("20 trials generated", report.results.size() == 20);
    for (const auto& r : report.results) c.le(r.name, r.max_error, 1e-10);
}

void criterion8(Check& c) {
    std::mt19937_64 rng(seed_from_env() + 8);

    const Grid g3({6, 5, 4}, {0.3, 0.5, 0.7}, {-1, 0, 2});
    const Field a3 = random_field(g3, rng);
    c.le("DFT round trip", max_abs_difference(dft_inverse(dft_forward(a3)), a3), 1e-12);

    const Grid g2({16, 8}, {0.3, 0.7}, {0, 0});
    const Field a = random_field(g2, rng), b = random_field(g2, rng);
    const complex ca{1.5, -0.5}, cb{-0.25, 2.0};
    const auto op = make_operator("cos(z^2) + exp(z)", {0.4, -0.9});
    c.le("linearity",
         max_abs_difference(apply_operator(op, combine(a, ca, b, cb)),
                            combine(apply_operator(op, a), ca, apply_operator(op, b), cb)),
         1e-12);

    // Odd n: the Nyquist sign average does not commute with products.
    const Grid g1 = periodic(33);
    const Field c1 = random_field(g1, rng);
    const Field composed = apply_operator(make_operator("1 + z/2", {0.8}),
                                          apply_operator(make_operator("z^2 - 3*z", {0.8}), c1));
    const Field direct = apply_operator(make_operator("(1 + z/2)*(z^2 - 3*z)", {0.8}), c1);
    const double comp_scale = std::max(1.0, build_multiplier(make_operator("(1 + z/2)*(z^2 - 3*z)", {0.8}), g1).stability());
    c.le("polynomial composition (relative to max multiplier)", max_abs_difference(composed, direct) / comp_scale, 1e-10);

    for (const Grid& g : {periodic(16), Grid({8, 6}, {0.4, 0.5}, {0, 0}), Grid({4, 6, 8}, {1, 1, 1}, {0, 0, 0})}) {
        const Field real = random_field(g, rng, true);
        std::vector<complex> beta(static_cast<std::size_t>(g.dims()), complex{0.7, 0.0});
        const Field out = apply_operator(make_operator("cos(z^2) + exp(z) + z", beta), real);
        double max_out = 0.0, max_imag = 0.0;
        for (const auto& v : out.values()) {
            max_out = std::max(max_out, std::abs(v));
            max_imag = std::max(max_imag, std::abs(v.imag()));
        }
        c.le("real preservation " + std::to_string(g.dims()) + "D", max_imag / max_out, 1e-12);
    }

    const Grid gs({16, 12}, {0.5, 0.4}, {0, 0});
    const Field s = band_limit(random_field(gs, rng));
    const complex b1[] = {0.37, -0.21}, b2[] = {-0.9, 0.55}, b12[] = {0.37 - 0.9, -0.21 + 0.55};
    c.le("shift group law", max_abs_difference(shift_field(shift_field(s, b1), b2), shift_field(s, b12)), 1e-10);
}

void criterion9(Check& c) {
    const Grid g = periodic(64);
    const auto spec = make_operator("exp(-z^2)", {1.0});
    bool tripped = false;
    try {
        (void)build_multiplier(spec, g);
    } catch (const AmplificationError& e) {
        tripped = e.max_magnitude() > kAmplificationLimit;
    }
    c.require("exp(-z^2) raises AmplificationError", tripped);
    const auto report = stability_report(spec, g);
    c.require("stability report flagged", report.flagged);
    c.require("argmax at |k| = 32", report.argmax_k.size() == 1 && std::abs(report.argmax_k[0]) == 32.0);

    bool pole = false;
    try {
        (void)build_multiplier(make_operator("1/z", {1.0}), g);
    } catch (const AmplificationError&) {
    } catch (const DomainError& e) {
        pole = std::string(e.what()).find("k=[0]") != std::string::npos;
    }
    c.require("1/z reports the pole at k=0", pole);
}

void criterion10(Check& c) {
    const auto ev = [](const char* text, complex z) { return eval(sym(text), "z", z); };
    c.require("-z^2 = -(z^2)", ev("-z^2", 3.0) == complex(-9, 0));
    c.require("2+3*z", ev("2+3*z", 1.0) == complex(5, 0));
    c.require("z-1-1 left associative", ev("z-1-1", 0.0) == complex(-2, 0));
    c.require("8/2/2 left associative", ev("8/2/2", 0.0) == complex(2, 0));
    c.require("z^2^3 right associative", ev("z^2^3", {0.7, -0.3}) == ev("z^8", {0.7, -0.3}));
    c.require("2*-z", ev("2*-z", 1.0) == complex(-2, 0));

    for (const char* text : {"cos(z^2)", "1/z", "-z^2", "(-z)^2", "exp(z)*z", "1+z/2", "z^2^3", "sqrt(1-i)*e^pi",
                             "abs(log(z)) - tan(0.125*z) + sin(z)/3e-4", "z-(1-z)"}) {
        const auto e = sym(text);
        const auto once = unparse(e);
        c.require(std::string("round trip ") + text, sym(once) == e && unparse(sym(once)) == once);
    }
    const complex v = ev("cos(z^2)", {0.0, 1.0});
    c.le("cos(z^2) at z=i vs cos(1)", std::abs(v - std::cos(1.0)), 1e-12);
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
        {"shift identity", criterion1},
        {"plane-wave eigenrelation", criterion2},
        {"heat kernel dual path", criterion3},
        {"inverse derivative", criterion4},
        {"shifted derivative", criterion5},
        {"Fresnel cosine", criterion6},
        {"brute-force equivalence", criterion7},
        {"structural invariants", criterion8},
        {"amplification guard and pole report", criterion9},
        {"parser", criterion10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(check);
        } catch (const std::exception& e) {
            check.failed = true;
            check.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s  %2zu  %-38s %.2fs  %s\n", check.failed ? "FAIL" : "PASS", i + 1, criteria[i].first, secs,
                    check.detail.c_str());
        failures += check.failed ? 1 : 0;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
