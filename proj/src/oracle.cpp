#include "dampwave/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dampwave/error.hpp"

namespace dampwave::oracle {

namespace {

template <std::size_t N>
using State = std::array<Complex, N>;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, const State<N>& k) {
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
    return out;
}

template <std::size_t N, class Rhs>
State<N> rk4_step(const Rhs& rhs, const State<N>& y, double h) {
    const State<N> k1 = rhs(y);
    const State<N> k2 = rhs(axpy(y, 0.5 * h, k1));
    const State<N> k3 = rhs(axpy(y, 0.5 * h, k2));
    const State<N> k4 = rhs(axpy(y, h, k3));
    State<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

template <std::size_t N>
double state_norm(const State<N>& y) {
    double acc = 0.0;
    for (const auto& c : y) acc += std::norm(c);
    return std::sqrt(acc);
}

// Fixed step: whole steps of size <= h up to each target, the last one
// shortened so samples land exactly on the requested times.
template <std::size_t N, class Rhs>
State<N> advance_fixed(const Rhs& rhs, State<N> y, double t0, double t1, double h) {
    const double span = t1 - t0;
    if (span <= 0.0) return y;
    const auto steps = static_cast<std::size_t>(std::ceil(span / h));
    const double dt = span / static_cast<double>(steps);
    for (std::size_t k = 0; k < steps; ++k) y = rk4_step(rhs, y, dt);
    return y;
}

// Step doubling: compare one step of size h with two of size h/2 and accept
// when the difference is within tolerance relative to the state norm.
template <std::size_t N, class Rhs>
State<N> advance_adaptive(const Rhs& rhs, State<N> y, double t0, double t1, double& h, double tol) {
    double t = t0;
    while (t < t1) {
        const double dt = std::min(h, t1 - t);
        if (dt < 1e-14 * std::max(1.0, std::abs(t1))) {
            throw Error(ErrorCode::StepUnderflow, "adaptive step collapsed at t=" + std::to_string(t));
        }
        const State<N> big = rk4_step(rhs, y, dt);
        const State<N> half = rk4_step(rhs, rk4_step(rhs, y, 0.5 * dt), 0.5 * dt);
        State<N> diff;
        for (std::size_t i = 0; i < N; ++i) diff[i] = half[i] - big[i];
        const double err = state_norm(diff) / 15.0;
        const double scale = std::max(state_norm(half), 1e-300);
        if (err <= tol * scale || err == 0.0) {
            for (std::size_t i = 0; i < N; ++i) y[i] = half[i] + (half[i] - big[i]) / 15.0;
            t += dt;
            const double grow = err == 0.0 ? 2.0 : std::min(2.0, 0.9 * std::pow(tol * scale / err, 0.2));
            if (dt == h) h *= grow;
        } else {
            h = dt * std::max(0.1, 0.9 * std::pow(tol * scale / err, 0.2));
        }
    }
    return y;
}

void check_times(std::span<const double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "oracle times must be nonnegative and nondecreasing");
        }
    }
}

template <std::size_t N, class Rhs>
std::vector<State<N>> integrate(const Rhs& rhs, State<N> y, std::span<const double> times, const OracleConfig& cfg,
                                double h0) {
    validate(cfg);
    check_times(times);
    std::vector<State<N>> out;
    out.reserve(times.size());
    double t = 0.0;
    double h = h0;
    for (double target : times) {
        if (cfg.method == Method::Rk4Fixed) {
            y = advance_fixed(rhs, y, t, target, h0);
        } else {
            y = advance_adaptive(rhs, y, t, target, h, cfg.tolerance);
        }
        t = target;
        out.push_back(y);
    }
    return out;
}

}  // namespace

void validate(const OracleConfig& cfg) {
    if (cfg.method == Method::Rk4Fixed && !(cfg.step >= 0.0 && std::isfinite(cfg.step))) {
        throw Error(ErrorCode::InvalidArgument, "oracle step must be positive (or 0 for the default)");
    }
    if (cfg.method == Method::Rk4Adaptive && !(cfg.tolerance > 0.0 && cfg.tolerance <= 1e-3)) {
        throw Error(ErrorCode::InvalidArgument, "oracle tolerance must lie in (0, 1e-3]");
    }
}

double default_step(double s, double b) noexcept {
    const double scale = std::max(s, b);
    return scale > 0.0 ? std::min(1e-3, 0.05 / scale) : 1e-3;
}

std::vector<ModeSample> integrate_mode(double s, double b, Complex f, Complex g, std::span<const double> times,
                                       const OracleConfig& cfg) {
    const double s2 = s * s;
    auto rhs = [s2, b](const State<2>& y) { return State<2>{y[1], -s2 * y[0] - 2.0 * b * y[1]}; };
    const double h0 = cfg.step > 0.0 ? cfg.step : default_step(s, b);
    const auto states = integrate(rhs, State<2>{f, g}, times, cfg, h0);
    std::vector<ModeSample> out;
    out.reserve(states.size());
    for (const auto& y : states) out.push_back({y[0], y[1]});
    return out;
}

std::vector<Complex> integrate_parabolic_mode(double s, double b, Complex h, std::span<const double> times,
                                              const OracleConfig& cfg) {
    if (!(b > 0.0)) throw Error(ErrorCode::InvalidArgument, "parabolic mode needs b > 0");
    const double rate = s * s / (2.0 * b);
    auto rhs = [rate](const State<1>& y) { return State<1>{-rate * y[0]}; };
    const double h0 = cfg.step > 0.0 ? cfg.step : std::min(1e-3, 0.05 / std::max(rate, 1e-300));
    const auto states = integrate(rhs, State<1>{h}, times, cfg, h0);
    std::vector<Complex> out;
    out.reserve(states.size());
    for (const auto& y : states) out.push_back(y[0]);
    return out;
}

}  // namespace dampwave::oracle
