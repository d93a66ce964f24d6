#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dampwave/error.hpp"
#include "dampwave/friction.hpp"

using namespace dampwave;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("evaluate") {
    CHECK(evaluate(FrictionSpec::constant(2.0), 7.0) == 2.0);
    CHECK(evaluate(FrictionSpec::power(2.0, 0.5), 4.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(evaluate(FrictionSpec::power(3.0, 0.0), 123.0) == 3.0);

    // 64 = x^3 -> x = 4, b = 2 x = 8
    const auto kdv = FrictionSpec::kdv(2.0, 0.0, 0.0);
    CHECK(evaluate(kdv, 8.0) == doctest::Approx(8.0).epsilon(1e-14));
    const auto& k = std::get<KdvFriction>(kdv.kind());
    const double x = kdv_t_symbol(k, 8.0);
    CHECK(std::abs(x * x * x - 64.0) < 1e-12);

    const auto table = FrictionSpec::table({1.0, 2.0, 4.0}, {3.0, 1.0, 2.0});
    CHECK(evaluate(table, 1.0) == 3.0);
    CHECK(evaluate(table, 1.5) == doctest::Approx(2.0));
    CHECK(evaluate(table, 3.0) == doctest::Approx(1.5));
    CHECK(evaluate(table, 4.0) == 2.0);
    CHECK(code_of([&] { (void)evaluate(table, 0.5); }) == ErrorCode::OutOfTable);
    CHECK(code_of([&] { (void)evaluate(table, 4.5); }) == ErrorCode::OutOfTable);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(FrictionSpec::constant(0.0), Error);
    CHECK_THROWS_AS(FrictionSpec::power(1.0, 1.0), Error);
    CHECK_THROWS_AS(FrictionSpec::power(1.0, -0.1), Error);
    CHECK_THROWS_AS(FrictionSpec::kdv(1.0, -1.0, 0.0), Error);
    CHECK_THROWS_AS(FrictionSpec::table({1.0, 1.0}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(FrictionSpec::table({1.0, 2.0}, {1.0, 0.0}), Error);
}

TEST_CASE("kdv cubic inversion round trip") {
    for (auto [a0, a1] : {std::pair{0.0, 0.0}, {1.0, 1.0}, {3.0, 0.0}, {0.0, 5.0}, {0.5, 1e-3}}) {
        const KdvFriction k{2.0, a0, a1};
        for (int i = 0; i <= 200; ++i) {
            const double s = std::pow(10.0, -6.0 + 12.0 * i / 200.0);
            const double x = kdv_t_symbol(k, s);
            REQUIRE(x > 0.0);
            REQUIRE(std::abs(kdv_s_symbol(k, x) - s) <= 1e-10 * s);
        }
    }
}

TEST_CASE("find_crossover") {
    SUBCASE("constant") {
        const auto r = find_crossover(FrictionSpec::constant(3.0), 0.1, 10.0);
        CHECK(r.gamma == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(std::abs(r.residual) <= 1e-12);
        CHECK(r.unique_on_sampled_range);
        CHECK(r.lo < r.gamma);
        CHECK(r.gamma < r.hi);
    }
    SUBCASE("power: gamma = a^{1/(1-alpha)}") {
        const auto r = find_crossover(FrictionSpec::power(2.0, 0.5), 0.1, 100.0);
        CHECK(r.gamma == doctest::Approx(4.0).epsilon(1e-12));
        for (double a : {0.5, 1.0, 2.0, 10.0}) {
            for (double alpha : {0.0, 0.25, 0.5, 0.75}) {
                const double expected = std::pow(a, 1.0 / (1.0 - alpha));
                const auto res = find_crossover(FrictionSpec::power(a, alpha), expected / 50, expected * 50, 1e-8);
                CHECK(std::abs(res.gamma - expected) <= 1e-10 * expected);
                CHECK(std::abs(res.residual) <= 1e-8);
            }
        }
    }
    SUBCASE("kdv numeric b = s crossover at s = 8") {
        const auto kdv = FrictionSpec::kdv(2.0, 0.0, 0.0);
        const auto r = find_crossover(kdv, 1.0, 100.0, 1e-10);
        CHECK(r.gamma == doctest::Approx(8.0).epsilon(1e-10));
        // closed form quoted with the example, in the T-variable
        const auto printed = kdv_cubic_crossover(std::get<KdvFriction>(kdv.kind()));
        REQUIRE(printed.has_value());
        CHECK(*printed == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    }
    SUBCASE("errors") {
        CHECK(code_of([] { (void)find_crossover(FrictionSpec::constant(3.0), 4.0, 10.0); }) ==
              ErrorCode::NoSignChange);
        // a1 > 0 makes F - s change sign twice (x = 2 -/+ sqrt 3): same sign at both ends
        CHECK(code_of([] { (void)find_crossover(FrictionSpec::kdv(2.0, 0.0, 1.0), 1e-3, 1e3); }) ==
              ErrorCode::NoSignChange);
        // three crossings: 1.5, 2.5, 3.5
        const auto wiggly = FrictionSpec::table({1.0, 2.0, 3.0, 4.0}, {2.0, 1.0, 4.0, 3.0});
        CHECK(code_of([&] { (void)find_crossover(wiggly, 1.0, 4.0); }) == ErrorCode::MultipleCrossings);
        CHECK(code_of([] { (void)find_crossover(FrictionSpec::constant(3.0), 5.0, 1.0); }) ==
              ErrorCode::InvalidArgument);
    }
}

TEST_CASE("kdv unique-crossover condition") {
    CHECK(kdv_unique_crossover_condition({2.0, 1.0, 1.0}));   // 2 > 1.25
    CHECK_FALSE(kdv_unique_crossover_condition({1.0, 1.0, 1.0}));
    CHECK_FALSE(kdv_cubic_crossover({1.0, 0.0, 2.0}).has_value());
}

TEST_CASE("audit") {
    SUBCASE("telegraph passes") {
        const auto f = FrictionSpec::constant(1.0);
        const auto a = audit(f, 1e-4, 1e3, samples_per_decade(1e-4, 1e3), 0.5);
        CHECK(a.all_ok());
        REQUIRE(a.gamma.has_value());
        CHECK(a.gamma->gamma == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(a.violations.empty());
        CHECK(a.bounded_near_zero);
        REQUIRE(a.max_passing_delta.has_value());
        CHECK(*a.max_passing_delta == doctest::Approx(0.99).epsilon(1e-3));
    }
    SUBCASE("near-identity power fails the sublinear slack for large delta only") {
        const auto f = FrictionSpec::power(1.0, 0.99);
        const auto strict = audit(f, 1e-4, 1e3, 1000, 0.5);
        CHECK_FALSE(strict.liminf_ok);
        CHECK_FALSE(strict.violations.empty());
        const auto loose = audit(f, 1e-4, 1e3, 1000, 0.005);
        CHECK(loose.liminf_ok);
        CHECK(loose.below_ok);
        CHECK(loose.above_ok);
        // largest passing delta is 1 - x^{-0.01} at the bottom of the top decade
        REQUIRE(loose.max_passing_delta.has_value());
        CHECK(*loose.max_passing_delta == doctest::Approx(1.0 - std::pow(100.0, -0.01)).epsilon(1e-2));
    }
    SUBCASE("kdv with a1 > 0 violates below gamma at low s") {
        const auto f = FrictionSpec::kdv(2.0, 0.0, 1.0);
        const auto a = audit(f, 1e-4, 1e3, 2000, 0.1);
        CHECK_FALSE(a.below_ok);
        CHECK_FALSE(a.all_ok());
        CHECK(a.crossings.size() == 2);
        bool low_witness = false;
        for (const auto& v : a.violations) {
            if (v.condition == AuditCondition::AboveIdentityBelowGamma && v.x < 1e-3) {
                low_witness = true;
                CHECK(v.fx < v.x);
            }
        }
        CHECK(low_witness);
        // b(s)/s at s = 1e-3 is about a s / a1
        CHECK(evaluate(f, 1e-3) / 1e-3 == doctest::Approx(2e-3).epsilon(1e-3));
    }
    SUBCASE("growth near zero is flagged") {
        // F(s) = 1/s sampled through a table over the audited range
        std::vector<double> s, b;
        for (int i = 0; i <= 400; ++i) {
            const double x = std::pow(10.0, -3.0 + 5.0 * i / 400.0);
            s.push_back(x);
            b.push_back(1.0 / x);
        }
        const auto f = FrictionSpec::table(s, b);
        const auto a = audit(f, 1e-3, 1e2, 512, 0.1);
        CHECK_FALSE(a.bounded_near_zero);
        CHECK(a.near_zero_log_slope < -0.5);
    }
    SUBCASE("every witness reproduces") {
        for (const auto& f : {FrictionSpec::kdv(2.0, 0.0, 1.0), FrictionSpec::power(1.0, 0.99),
                              FrictionSpec::kdv(0.5, 3.0, 2.0), FrictionSpec::constant(0.3)}) {
            const auto a = audit(f, 1e-3, 1e3, 1024, 0.5);
            for (const auto& v : a.violations) CHECK(witness_reproduces(f, v));
        }
    }
    SUBCASE("argument checks") {
        CHECK_THROWS_AS((void)audit(FrictionSpec::constant(1.0), 1.0, 0.5, 100, 0.1), Error);
        CHECK_THROWS_AS((void)audit(FrictionSpec::constant(1.0), 0.1, 1.0, 8, 0.1), Error);
        CHECK_THROWS_AS((void)audit(FrictionSpec::constant(1.0), 0.1, 1.0, 100, 1.0), Error);
    }
}
