#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lambdagen/errors.hpp"
#include "lambdagen/recursive.hpp"
#include "lambdagen/serialize.hpp"
#include "lambdagen/typing.hpp"

#include "type_oracle.hpp"

#include <optional>
#include <string>

using namespace lambdagen;

namespace {

std::optional<std::string> principal(const std::string& src) {
    const auto ty = infer(parse(src));
    if (!ty) return std::nullopt;
    return ty->render();
}

}  // namespace

TEST_CASE("principal types of the standard combinators") {
    CHECK(principal("\\ 0") == "a -> a");
    CHECK(principal("\\ \\ 1") == "a -> b -> a");                  // K
    CHECK(principal("\\ \\ 0") == "a -> b -> b");
    CHECK(principal("\\ \\ \\ ((2 0) (1 0))") ==
          "(a -> b -> c) -> (a -> b) -> a -> c");                  // S
    CHECK(principal("\\ \\ \\ (2 (1 0))") ==
          "(a -> b) -> (c -> a) -> c -> b");                       // composition
    CHECK(principal("\\ (\\ 1 \\ 1)") == "a -> a");                // K-like detour
    CHECK(principal("(\\ 0 \\ 0)") == "a -> a");                   // I I
}

TEST_CASE("untypeable terms come back empty") {
    CHECK(!principal("\\ (0 0)"));            // self-application
    CHECK(!principal("(\\ (0 0) \\ (0 0))")); // the classic diverger
    CHECK(!principal("\\ ((0 \\ 0) (0 \\ \\ 0))"));
}

TEST_CASE("open terms are rejected up front") {
    CHECK_THROWS_AS((void)infer(parse("0")), OpenTermRejected);
    CHECK_THROWS_AS((void)infer(parse("\\ 1")), OpenTermRejected);
    CHECK_THROWS_AS((void)type_check(parse("(0 1)"), SimpleType::variable(0)), OpenTermRejected);
}

TEST_CASE("renaming is canonical: first occurrence order, left to right") {
    const auto ty = infer(parse("\\ \\ 1"));
    REQUIRE(ty.has_value());
    const SimpleType expect =
        SimpleType::arrow(SimpleType::variable(0),
                          SimpleType::arrow(SimpleType::variable(1), SimpleType::variable(0)));
    CHECK(*ty == expect);
    CHECK(ty->render() == "a -> b -> a");
}

TEST_CASE("instance relation") {
    const SimpleType a = SimpleType::variable(0);
    const SimpleType b = SimpleType::variable(1);
    const SimpleType id_a = SimpleType::arrow(a, a);          // a -> a
    const SimpleType id_fn = SimpleType::arrow(id_a, id_a);   // (a -> a) -> a -> a
    const SimpleType a_to_b = SimpleType::arrow(a, b);

    CHECK(is_instance(a, id_a));          // var matches anything
    CHECK(is_instance(id_a, id_fn));      // substitute a := a -> a
    CHECK(is_instance(a_to_b, id_a));     // a := x, b := x
    CHECK(!is_instance(id_a, a_to_b));    // would need a = b
    CHECK(!is_instance(id_a, a));         // arrow can't match a bare var
    CHECK(is_instance(a, a));
}

TEST_CASE("type_check accepts instances of the principal type only") {
    const Term k = parse("\\ \\ 1");
    const SimpleType a = SimpleType::variable(0);
    const SimpleType b = SimpleType::variable(1);
    // a -> b -> a: principal, accepted
    CHECK(type_check(k, SimpleType::arrow(a, SimpleType::arrow(b, a))));
    // a -> a -> a: instance, accepted
    CHECK(type_check(k, SimpleType::arrow(a, SimpleType::arrow(a, a))));
    // a -> b -> b: not an instance
    CHECK(!type_check(k, SimpleType::arrow(a, SimpleType::arrow(b, b))));
    // untypeable term checks false against everything
    CHECK(!type_check(parse("\\ (0 0)"), a));
}

TEST_CASE("inference agrees with an independent checker on every small closed term") {
    Enumerator en(SizeModel::natural());
    std::size_t typeable = 0, total = 0;
    for (std::size_t n = 2; n <= 9; ++n) {
        for (const Term& t : en.terms(0, n)) {
            ++total;
            const auto mine = infer(t);
            const auto theirs = type_oracle::principal(t);
            REQUIRE(mine.has_value() == theirs.has_value());
            if (mine) {
                CHECK(mine->render() == *theirs);
                ++typeable;
            }
        }
    }
    CHECK(total == 498);  // closed terms of sizes 2..9
    CHECK(typeable > 0);
    CHECK(typeable < total);
}

TEST_CASE("typed sampling returns well-typed terms of the right size") {
    Rng rng(64);
    for (int i = 0; i < 10; ++i) {
        std::size_t attempts = 0;
        const auto [t, ty] = sample_typed(12, SizeModel::natural(), TypedMethod::Recursive, rng,
                                          100000, 0.1, &attempts);
        CHECK(term_size(t, SizeModel::natural()) == 12);
        CHECK(is_m_open(t, 0));
        const auto check = infer(t);
        REQUIRE(check.has_value());
        CHECK(*check == ty);
        CHECK(attempts >= 1);
    }
}

TEST_CASE("typed sampling by size window") {
    Rng rng(65);
    const auto [t, ty] = sample_typed(20, SizeModel::natural(), TypedMethod::Boltzmann, rng,
                                      2000000, 0.25);
    const auto sz = term_size(t, SizeModel::natural());
    CHECK(sz >= 15);
    CHECK(sz <= 25);
    const auto check = infer(t);
    REQUIRE(check.has_value());
    CHECK(*check == ty);
}

TEST_CASE("rendering puts parentheses only where needed") {
    const SimpleType a = SimpleType::variable(0);
    const SimpleType b = SimpleType::variable(1);
    const SimpleType aa = SimpleType::arrow(a, a);
    CHECK(SimpleType::arrow(a, SimpleType::arrow(b, a)).render() == "a -> b -> a");
    CHECK(SimpleType::arrow(aa, a).render() == "(a -> a) -> a");
    CHECK(SimpleType::arrow(aa, aa).render() == "(a -> a) -> a -> a");
    // past z the names gain a second letter
    SimpleType wide = SimpleType::variable(0);
    for (std::int32_t i = 1; i <= 27; ++i) wide = SimpleType::arrow(wide, SimpleType::variable(i));
    const std::string r = wide.render();
    CHECK(r.find("z") != std::string::npos);
    CHECK(r.find("ab") != std::string::npos);
}
