#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dampwave/error.hpp"
#include "dampwave/evolution.hpp"
#include "dampwave/oracle.hpp"

using namespace dampwave;

namespace {

SpectralGrid single_mode(double s, double b) {
    return SpectralGrid::create({{ModeSymbol::make(s, b), 1.0, s}});
}

SpectralGrid telegraph_grid(std::size_t n = 120) {
    return grid_from_friction(FrictionSpec::constant(1.0), 0.05, 3.0, n, Spacing::Linear);
}

}  // namespace

TEST_CASE("prepare_wave") {
    SUBCASE("zero data") {
        const auto g = telegraph_grid();
        const auto we = prepare_wave(g, StateVector(g), StateVector(g), 1.0);
        for (double t : {0.0, 0.5, 7.0}) CHECK(wave_state(we, t).is_zero());
    }
    SUBCASE("single telegraph mode") {
        const auto g = single_mode(0.6, 1.0);
        const auto we = prepare_wave(g, StateVector(g, {1.0}), StateVector(g), 1.0);
        CHECK(we.coefficients()[0].h_plus.real() == doctest::Approx(1.125).epsilon(1e-14));
        CHECK(we.coefficients()[0].h_minus.real() == doctest::Approx(-0.125).epsilon(1e-14));
        const auto r = characteristic_roots(g.mode(0));
        const auto c = dalembert_coefficients(g.mode(0), 1.0, 0.0);
        CHECK(wave_state(we, 1.0)[0] == mode_wave_value(r, c, 1.0));
    }
    SUBCASE("initial conditions are recovered") {
        const auto g = telegraph_grid();
        const auto f = make_data(g, RandomShape{1});
        const auto v = make_data(g, RandomShape{2});
        const auto we = prepare_wave(g, f, v, 1.0);
        CHECK(wave_state(we, 0.0).coefficients() == f.coefficients());
        const auto ud = wave_velocity(we, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double scale = std::abs(v[i]) + (g.b(i) + g.s(i)) * std::abs(f[i]);
            REQUIRE(std::abs(ud[i] - v[i]) <= 1e-10 * scale);
        }
    }
    SUBCASE("critical modes use the Jordan branch") {
        // constant friction 1 with a node exactly at s = 1
        const auto g = grid_from_friction(FrictionSpec::constant(1.0), 0.5, 1.5, 11, Spacing::Linear);
        const auto f = make_data(g, RandomShape{3});
        const auto v = make_data(g, RandomShape{4});
        const auto we = prepare_wave(g, f, v, 1.0);
        REQUIRE(we.critical_modes().size() == 1);
        const std::size_t k = we.critical_modes()[0];
        CHECK(g.s(k) == 1.0);
        const std::vector<double> times{2.0};
        const auto ref = oracle::integrate_mode(1.0, 1.0, f[k], v[k], times);
        CHECK(std::abs(wave_state(we, 2.0)[k] - ref[0].u) < 1e-8);
    }
    SUBCASE("near-critical modes get a conditioning diagnostic") {
        const auto g = SpectralGrid::create({{ModeSymbol::make(1.0 - 1e-14, 1.0), 1.0, 0.0},
                                             {ModeSymbol::make(1.0 + 1e-9, 1.0), 1.0, 1.0}});
        const auto we = prepare_wave(g, StateVector(g, {1.0, 1.0}), StateVector(g), 1.0);
        CHECK(we.critical_modes().size() == 1);
        REQUIRE(we.diagnostics().size() == 1);
        CHECK(we.diagnostics()[0].mode == 1);
        CHECK(we.diagnostics()[0].indicator > 1e3);
    }
}

TEST_CASE("closed form solves the mode ODE (second-order residual)") {
    const auto g = telegraph_grid(40);
    const auto f = make_data(g, RandomShape{8});
    const auto v = make_data(g, RandomShape{9});
    const auto we = prepare_wave(g, f, v, 1.0);
    auto residual = [&](double dt) {
        const double t = 1.3;
        const auto up = wave_state(we, t + dt), u0 = wave_state(we, t), um = wave_state(we, t - dt);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Complex r = (up[i] - 2.0 * u0[i] + um[i]) / (dt * dt) +
                              2.0 * g.b(i) * (up[i] - um[i]) / (2.0 * dt) + g.s(i) * g.s(i) * u0[i];
            worst = std::max(worst, std::abs(r));
        }
        return worst;
    };
    const double r1 = residual(1e-2);
    const double r2 = residual(5e-3);
    CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("energy is nonincreasing on the grid") {
    const auto g = telegraph_grid();
    const auto f = make_data(g, RandomShape{12});
    const auto v = make_data(g, RandomShape{13});
    const auto we = prepare_wave(g, f, v, 1.0);
    double prev = INFINITY;
    for (int k = 0; k <= 200; ++k) {
        const double t = 0.05 * k;
        const auto u = wave_state(we, t);
        const auto ud = wave_velocity(we, t);
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) e += g.weight(i) * mode_energy(g.mode(i), u[i], ud[i]);
        REQUIRE(e <= prev * (1.0 + 1e-12));
        prev = e;
    }
}

TEST_CASE("canonical_initial") {
    const auto g = single_mode(0.6, 1.0);
    const StateVector f(g, {1.0});
    const StateVector zero(g);
    CHECK(canonical_initial(g, f, zero, 1.0)[0].real() == doctest::Approx(1.125).epsilon(1e-14));
    CHECK(canonical_initial(g, f, zero, 1.0, HFormula::Literal)[0].real() == doctest::Approx(0.9).epsilon(1e-14));
    // mode above gamma
    CHECK(canonical_initial(g, f, zero, 0.5)[0] == Complex(0.0));

    // g = c_- f kills h_+
    const auto r = characteristic_roots(g.mode(0));
    const StateVector vel(g, {r.c_minus});
    const auto h = canonical_initial(g, f, vel, 1.0);
    CHECK(std::abs(h[0]) < 1e-15);
    try {
        (void)prepare_parabolic(g, StateVector(g), 1.0);
        FAIL("expected ZeroH");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroH);
    }

    // band projection on a real grid; critical modes zeroed
    const auto tg = grid_from_friction(FrictionSpec::constant(1.0), 0.5, 1.5, 11, Spacing::Linear);
    const auto hf = canonical_initial(tg, make_data(tg, RandomShape{5}), make_data(tg, RandomShape{6}), 1.0);
    for (std::size_t i = 0; i < tg.size(); ++i) {
        if (tg.s(i) >= 1.0) CHECK(hf[i] == Complex(0.0));
        else CHECK(hf[i] != Complex(0.0));
    }
}

TEST_CASE("parabolic evolution") {
    const auto g = telegraph_grid();
    const auto h = canonical_initial(g, make_data(g, RandomShape{14}), make_data(g, RandomShape{15}), 1.0);
    const auto pe = prepare_parabolic(g, h, 1.0);
    CHECK(parabolic_state(pe, 0.0).coefficients() == h.coefficients());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(pe.rates()[i] == doctest::Approx(-g.s(i) * g.s(i) / 2.0));
    const double t1 = 0.7, t2 = 2.9;
    const auto direct = parabolic_state(pe, t1 + t2);
    const auto v1 = parabolic_state(pe, t1);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Complex stepped = std::exp(pe.rates()[i] * t2) * v1[i];
        REQUIRE(std::abs(direct[i] - stepped) <= 1e-12 * std::abs(direct[i]) + 1e-300);
    }
    const std::vector<double> times{2.0};
    const auto ref = oracle::integrate_parabolic_mode(g.s(3), g.b(3), h[3], times);
    CHECK(std::abs(pe.value(3, 2.0) - ref[0]) < 1e-10 * std::abs(ref[0]));
}

TEST_CASE("decompose") {
    const auto g = grid_from_friction(FrictionSpec::constant(1.0), 0.05, 3.0, 100, Spacing::Linear);
    SUBCASE("pieces sum to the whole") {
        const auto we = prepare_wave(g, make_data(g, RandomShape{31}), make_data(g, RandomShape{32}), 1.0);
        for (double t : {0.0, 0.3, 4.0, 25.0}) {
            const auto d = decompose(we, t);
            const auto u = wave_state(we, t);
            for (std::size_t i = 0; i < g.size(); ++i) {
                REQUIRE(std::abs(d.u1[i] + d.u2[i] + d.u3[i] - u[i]) <= 1e-12 * (std::abs(u[i]) + 1.0));
            }
        }
    }
    SUBCASE("data above gamma has no u1") {
        const auto f = make_data(g, IndicatorShape{Band::make(1.2, INFINITY, true, false)});
        const auto we = prepare_wave(g, f, StateVector(g), 1.0);
        CHECK(decompose(we, 2.0).u1.is_zero());
    }
    SUBCASE("u3 is bounded by e^{-bt} |h_-|") {
        const auto we = prepare_wave(g, make_data(g, RandomShape{33}), make_data(g, RandomShape{34}), 1.0);
        const double t = 3.0;
        const auto d = decompose(we, t);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double bound = std::exp(-g.b(i) * t) * std::abs(we.coefficients()[i].h_minus);
            REQUIRE(std::abs(d.u3[i]) <= bound * (1.0 + 1e-14));
            if (g.s(i) > 1.0) REQUIRE(std::abs(d.u3[i]) == doctest::Approx(bound).epsilon(1e-13));
        }
    }
    SUBCASE("band data: lower bound on u1 and decay of the rest") {
        const auto bg = grid_from_friction(FrictionSpec::constant(1.0), 0.5, 0.9, 81, Spacing::Linear);
        const auto f = make_data(bg, IndicatorShape{Band::closed(0.5, 0.9)});
        const auto we = prepare_wave(bg, f, StateVector(bg), 1.0);
        const auto h = canonical_initial(bg, f, StateVector(bg), 1.0);
        const double eps = std::sqrt(1.0 - 0.81);
        const double h_norm = norm(bg, h);
        const auto d0 = decompose(we, 0.0);
        const double c0 = (norm(bg, d0.u2) + norm(bg, d0.u3)) / norm(bg, d0.u1);
        for (double t : {0.5, 2.0, 8.0, 20.0}) {
            const auto d = decompose(we, t);
            const double n1 = norm(bg, d.u1);
            CHECK(n1 >= std::exp(eps * t) * std::exp(-t * 1.0) * h_norm * (1.0 - 1e-12));
            const double rest = norm(bg, d.u2) + norm(bg, d.u3);
            CHECK(rest / n1 <= c0 * std::exp(-eps * t) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("grid mismatch") {
    const auto g1 = telegraph_grid(10);
    const auto g2 = telegraph_grid(11);
    CHECK_THROWS_AS((void)prepare_wave(g1, StateVector(g2), StateVector(g1), 1.0), Error);
}
