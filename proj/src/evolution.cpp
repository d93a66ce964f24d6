#include "dampwave/evolution.hpp"

#include <cmath>

#include "dampwave/error.hpp"

namespace dampwave {

WaveEvolution prepare_wave(const SpectralGrid& grid, const StateVector& f, const StateVector& g, double gamma) {
    f.require_grid(grid);
    g.require_grid(grid);
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    WaveEvolution we(grid, f, g, gamma);
    const std::size_t n = grid.size();
    we.roots_.reserve(n);
    we.coeffs_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = grid.mode(i);
        const ModeRoots r = characteristic_roots(m);
        we.roots_.push_back(r);
        if (r.regime == Regime::Critical) {
            we.critical_.push_back(i);
            we.coeffs_.push_back({0.0, 0.0});
            continue;
        }
        we.coeffs_.push_back(dalembert_coefficients(m, f[i], g[i]));
        const double scale = std::max(m.s(), m.b());
        if (r.q0 * r.q0 + r.q * r.q < kConditioningThreshold * scale * scale) {
            we.diagnostics_.push_back({i, condition_indicator(m, f[i], g[i])});
        }
    }
    return we;
}

Complex WaveEvolution::value(std::size_t i, double t) const noexcept {
    if (t == 0.0) return f_[i];
    if (is_critical(i)) return mode_wave_value_critical(grid_->mode(i), f_[i], g_[i], t);
    return mode_wave_value(roots_[i], coeffs_[i], t);
}

Complex WaveEvolution::velocity(std::size_t i, double t) const noexcept {
    if (is_critical(i)) return mode_wave_derivative_critical(grid_->mode(i), f_[i], g_[i], t);
    return mode_wave_derivative(roots_[i], coeffs_[i], t);
}

StateVector wave_state(const WaveEvolution& we, double t) {
    StateVector out(we.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = we.value(i, t);
    return out;
}

StateVector wave_velocity(const WaveEvolution& we, double t) {
    StateVector out(we.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = we.velocity(i, t);
    return out;
}

StateVector canonical_initial(const SpectralGrid& grid, const StateVector& f, const StateVector& g, double gamma,
                              HFormula formula) {
    f.require_grid(grid);
    g.require_grid(grid);
    StateVector h(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid.s(i) < gamma)) continue;
        const auto& m = grid.mode(i);
        const ModeRoots r = characteristic_roots(m);
        if (r.regime == Regime::Critical) continue;
        const Complex root_gap(r.q0, r.q);
        const Complex drive = m.b() * f[i] + g[i];
        h[i] = formula == HFormula::Derived ? 0.5 * (f[i] + drive / root_gap) : 0.5 * (f[i] + drive * root_gap);
    }
    return h;
}

ParabolicEvolution prepare_parabolic(const SpectralGrid& grid, const StateVector& h, double gamma) {
    h.require_grid(grid);
    if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
    StateVector supported = h;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid.s(i) < gamma) || is_critical(grid.mode(i))) supported[i] = 0.0;
    }
    if (supported.is_zero()) {
        throw Error(ErrorCode::ZeroH, "canonical datum h vanishes; the comparison needs h != 0");
    }
    ParabolicEvolution pe(grid, std::move(supported));
    pe.rates_.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) pe.rates_.push_back(mode_parabolic_rate(grid.mode(i)));
    return pe;
}

StateVector parabolic_state(const ParabolicEvolution& pe, double t) {
    StateVector out(pe.grid());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pe.value(i, t);
    return out;
}

Decomposition decompose(const WaveEvolution& we, double t) {
    const auto& grid = we.grid();
    Decomposition d{StateVector(grid), StateVector(grid), StateVector(grid)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (we.is_critical(i)) {
            d.u2[i] = we.value(i, t);
            continue;
        }
        const auto& r = we.roots()[i];
        const auto& c = we.coefficients()[i];
        const Complex plus = std::exp(t * r.c_plus) * c.h_plus;
        if (grid.s(i) < we.gamma()) {
            d.u1[i] = plus;
        } else {
            d.u2[i] = plus;
        }
        d.u3[i] = std::exp(t * r.c_minus) * c.h_minus;
    }
    return d;
}

}  // namespace dampwave
