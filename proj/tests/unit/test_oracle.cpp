#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "specgrad/error.hpp"
#include "specgrad/oracle.hpp"
#include "specgrad/sample.hpp"

using namespace specgrad;

namespace {

constexpr double kPi = std::numbers::pi;

Grid periodic(std::size_t n) { return Grid({n}, {2 * kPi / static_cast<double>(n)}, {0.0}); }
SymbolExpr sym(std::string_view t) { return parse(t, symbol_vars()); }

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<complex> v(g.size());
    for (auto& x : v) x = {d(rng), d(rng)};
    return Field(g, std::move(v));
}

}  // namespace

TEST(BruteForce, MatchesFftPath) {
    for (std::size_t n : {16u, 17u, 64u}) {
        const Grid g = periodic(n);
        const Field c = random_field(g, static_cast<unsigned>(n));
        for (const char* s : {"z", "z^2", "exp(z)", "cos(z^2)", "1 + z/2"}) {
            const Field a = brute_force_apply(sym(s), 0.7, c);
            const Field b = apply_operator(make_operator(s, {0.7}), c);
            EXPECT_LE(max_abs_difference(a, b), 1e-10) << s << " n=" << n;
        }
    }
}

TEST(BruteForce, IdentityAndDerivative) {
    const Grid g = periodic(32);
    const Field c = random_field(g, 3);
    EXPECT_LE(max_abs_difference(brute_force_apply(sym("1"), 1.0, c), c), 1e-12);
    const Field d = brute_force_apply(sym("z"), 1.0, sample_field("sin(x)", g));
    EXPECT_LE(max_abs_difference(d, sample_field("cos(x)", g)), 1e-12);
}

TEST(BruteForce, TranslationEquivariant) {
    const Grid g = periodic(32);
    const Field c = random_field(g, 11);
    std::vector<complex> rolled(32);
    for (std::size_t j = 0; j < 32; ++j) rolled[j] = c[(j + 5) % 32];
    const Field a = brute_force_apply(sym("cos(z^2)"), 0.4, Field(g, rolled));
    const Field b = brute_force_apply(sym("cos(z^2)"), 0.4, c);
    double worst = 0.0;
    for (std::size_t j = 0; j < 32; ++j) worst = std::max(worst, std::abs(a[j] - b[(j + 5) % 32]));
    EXPECT_LE(worst, 1e-12);
}

TEST(BruteForce, Guards) {
    EXPECT_THROW((void)brute_force_apply(sym("z"), 1.0, random_field(periodic(1024), 1)), UsageError);
    EXPECT_THROW((void)brute_force_apply(sym("z"), 1.0, random_field(Grid({4, 4}, {1, 1}, {0, 0}), 1)), UsageError);
}

TEST(Catalog, ShapeAndExpressions) {
    const auto cases = closed_form_catalog();
    EXPECT_GE(cases.size(), 8u);
    const auto has = [&](std::string_view name) {
        return std::any_of(cases.begin(), cases.end(), [&](const OracleCase& c) { return c.name == name; });
    };
    EXPECT_TRUE(has("shift-sine"));
    for (const auto& c : cases) {
        EXPECT_GT(c.tolerance, 0.0) << c.name;
        EXPECT_FALSE(c.derivation.empty()) << c.name;
        if (!c.expected_expr.empty()) EXPECT_NO_THROW((void)sample_field(c.expected_expr, c.grid)) << c.name;
        if (!c.field_source) EXPECT_NO_THROW((void)sample_field(c.field_expr, c.grid)) << c.name;
    }
}

TEST(Catalog, AllCasesPass) {
    const auto report = run_oracles(closed_form_catalog(), default_implementations());
    for (const auto& r : report.results) {
        EXPECT_TRUE(r.pass) << r.name << " error=" << r.max_error << " " << r.message;
    }
    EXPECT_TRUE(report.all_passed());
}

TEST(Catalog, BruteForceTrialsPass) {
    const auto cases = brute_force_cases(42, 10);
    EXPECT_EQ(cases.size(), 10u);
    EXPECT_TRUE(run_oracles(cases, default_implementations()).all_passed());
}

TEST(Runner, ZeroToleranceFailsAndEmptyPasses) {
    auto cases = closed_form_catalog();
    cases.erase(cases.begin() + 1, cases.end());
    cases[0].tolerance = 0.0;
    cases[0].operation.symbol = "exp(1.0001*z)";
    const auto report = run_oracles(cases, default_implementations());
    ASSERT_EQ(report.results.size(), 1u);
    EXPECT_FALSE(report.results[0].pass);
    EXPECT_FALSE(report.all_passed());
    EXPECT_TRUE(run_oracles({}, default_implementations()).all_passed());
}

TEST(Runner, ThrowingImplementationIsFailure) {
    auto cases = closed_form_catalog();
    cases.erase(cases.begin() + 1, cases.end());
    ImplementationTable table;
    table[cases[0].operation.name] = [](const OracleOperation&, const Field&) -> Field { throw DomainError("boom"); };
    const auto report = run_oracles(cases, table);
    EXPECT_FALSE(report.results[0].pass);
    EXPECT_NE(report.results[0].message.find("boom"), std::string::npos);
    const auto j = report_to_json(report);
    EXPECT_TRUE(j.is_object() || j.is_array());
    EXPECT_FALSE(report_table(report).empty());
}
