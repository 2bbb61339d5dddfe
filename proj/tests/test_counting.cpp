#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lambdagen/counting.hpp"
#include "lambdagen/errors.hpp"
#include "lambdagen/recursive.hpp"

#include "json.hpp"

#include <cstdlib>
#include <stdexcept>
#include <vector>

using namespace lambdagen;

namespace {
double dabs(const GfReal& v) { return std::fabs(static_cast<double>(v)); }
}  // namespace

TEST_CASE("closed and plain counts, natural model") {
    const CountTable t = build_count_table(SizeModel::natural(), 20, 14);
    // closed terms by size
    const std::vector<std::uint64_t> closed{0, 0, 1, 1, 3, 6, 17, 41, 116, 313, 895, 2550, 7450};
    for (std::size_t n = 0; n < closed.size(); ++n) CHECK(t.at(0, n) == closed[n]);
    CHECK(t.at(0, 13) == 21881);
    CHECK(t.at(0, 14) == 65168);

    // plain terms by size
    const std::vector<std::uint64_t> plain{0, 1, 2, 4, 9, 22, 57, 154, 429, 1223};
    for (std::size_t n = 0; n < plain.size(); ++n) CHECK(t.plain_at(n) == plain[n]);

    // 1-open: one free index allowed
    CHECK(t.at(1, 1) == 1);  // 0
    CHECK(t.at(1, 2) == 1);  // \ 0
    CHECK(t.at(1, 3) == 3);  // (0 0), \ 1, \ \ 0
}

TEST_CASE("table rows agree with brute-force enumeration at low levels") {
    const CountTable t = build_count_table(SizeModel::natural(), 20, 10);
    Enumerator en(SizeModel::natural());
    for (std::size_t m = 0; m <= 3; ++m)
        for (std::size_t n = 0; n <= 10; ++n)
            CHECK(t.at(m, n) == en.terms(m, n).size());
}

TEST_CASE("truncation level falls back to the plain class") {
    const CountTable t = build_count_table(SizeModel::natural(), 6, 12);
    for (std::size_t n = 0; n <= 12; ++n) CHECK(t.at(6, n) == t.plain_at(n));
    CHECK_THROWS_AS((void)t.at(7, 3), TruncationExceeded);
    CHECK_THROWS_AS((void)t.at(0, 13), std::out_of_range);
}

TEST_CASE("constant index mode clamps and has no plain row") {
    const SizeModel flat = SizeModel::constant();
    const CountTable t = build_count_table(flat, 8, 8);
    CHECK_THROWS_AS((void)t.plain_at(3), std::logic_error);
    // closed terms, flat model: every index costs 1
    Enumerator en(flat);
    for (std::size_t n = 1; n <= 8; ++n) CHECK(t.at(0, n) == en.terms(0, n).size());
    // rows below the clamp agree with a wider table as long as a term's
    // binder depth cannot reach the truncation: level m size n peaks at
    // m + n - 1
    const CountTable wide = build_count_table(flat, 16, 8);
    for (std::size_t m = 0; m <= 8; ++m)
        for (std::size_t n = 1; n + m <= 8; ++n) CHECK(t.at(m, n) == wide.at(m, n));
    // the clamped row itself undercounts once depth would pass the clamp
    CHECK(t.at(8, 2) < wide.at(8, 2));
}

TEST_CASE("count table JSON export") {
    const CountTable t = build_count_table(SizeModel::natural(), 3, 5);
    const auto j = nlohmann::json::parse(t.to_json());
    CHECK(j.at("model").is_object());
    CHECK(j.at("N").get<std::size_t>() == 3);
    CHECK(j.at("max_size").get<std::size_t>() == 5);
    CHECK(j.at("counts").size() == 4);
    CHECK(j.at("counts")[0][4].get<std::string>() == "3");
    CHECK(j.at("plain")[1].get<std::string>() == "1");
}

TEST_CASE("catalan numbers and the convolution cross-check") {
    const std::vector<std::uint64_t> cat{1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796};
    for (std::size_t n = 0; n < cat.size(); ++n) {
        CHECK(catalan(n) == cat[n]);
        CHECK(catalan_convolution(n) == cat[n]);
    }
    CHECK(catalan(30) == BigInt("3814986502092304"));

    std::size_t mults = 0;
    (void)catalan(100, &mults);
    CHECK(mults <= 300);  // linear in n
    std::size_t conv_mults = 0;
    (void)catalan_convolution(100, &conv_mults);
    CHECK(conv_mults > 2000);  // quadratic in n
}

TEST_CASE("pointing identity on the catalan series") {
    for (std::size_t n = 1; n <= 30; ++n) CHECK(pointing_check(n));
}

TEST_CASE("generating function evaluation") {
    const SizeModel nat = SizeModel::natural();
    // plain-level value at x=0.2 against the quadratic it satisfies:
    // x L^2 + (x - 1) L + x/(1-x) = 0
    const GfReal x("0.2");
    const auto v = gf_eval(nat, 4, x);
    const GfReal L = v.plain;
    const GfReal residual = x * L * L + (x - 1) * L + x / (1 - x);
    CHECK(dabs(residual) < 1e-40);

    // every level satisfies its own equation: L_m = x L_m^2 + x L_{m+1} + sum_{k<m} x^{k+1}
    for (std::size_t m = 0; m < 4; ++m) {
        GfReal idx = 0, pw = GfReal(1);
        for (std::size_t k = 0; k < m; ++k) {
            pw *= x;  // x^{k+1}, the weight of index k
            idx += pw;
        }
        const GfReal lm = v.levels[m];
        const GfReal lnext = v.levels[m + 1];
        const GfReal res = x * lm * lm + x * lnext + idx - lm;
        CHECK(dabs(res) < 1e-40);
    }

    CHECK_THROWS_AS(gf_eval(nat, 4, GfReal("0.4")), SingularityExceeded);
    CHECK_THROWS_AS(gf_eval(SizeModel::constant(), 4, GfReal("0.1")), std::invalid_argument);
}

TEST_CASE("dominant singularity of the truncated system") {
    // Independent root: for the natural model the plain discriminant zero
    // solves (1-x)^3 = 4x^2, i.e. x^3 + x^2 + 3x - 1 = 0.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = (lo + hi) / 2;
        const double f = mid * mid * mid + mid * mid + 3 * mid - 1;
        (f < 0 ? lo : hi) = mid;
    }
    const double root = (lo + hi) / 2;

    for (std::size_t N : {4, 12, 20}) {
        const GfReal rho = truncated_rho(SizeModel::natural(), N);
        CHECK(static_cast<double>(rho) == doctest::Approx(root).epsilon(1e-9));
    }
}

TEST_CASE("per-index weights shift the generating function") {
    const SizeModel nat = SizeModel::natural();
    const GfReal x("0.2");
    const auto base = gf_eval(nat, 6, x);
    const auto boosted = gf_eval(nat, 6, x, {GfReal(2)});
    CHECK(boosted.levels[1] > base.levels[1]);
    CHECK(boosted.levels[0] > base.levels[0]);
    CHECK_THROWS_AS(gf_eval(nat, 2, x, {GfReal(1), GfReal(1), GfReal(1)}), std::invalid_argument);
}
