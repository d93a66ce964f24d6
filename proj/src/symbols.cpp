#include "dampwave/symbols.hpp"

#include <cmath>
#include <string>

#include "dampwave/error.hpp"

namespace dampwave {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ModeSymbol ModeSymbol::make(double s, double b) {
    if (!finite_positive(s) || !finite_positive(b)) {
        throw Error(ErrorCode::InvalidArgument,
                    "mode symbol needs finite s > 0 and b > 0, got s=" + std::to_string(s) +
                        " b=" + std::to_string(b));
    }
    return ModeSymbol(s, b);
}

ModeSymbol ModeSymbol::undamped(double s) {
    if (!finite_positive(s)) {
        throw Error(ErrorCode::InvalidArgument, "undamped mode needs finite s > 0");
    }
    return ModeSymbol(s, 0.0);
}

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::Overdamped: return "overdamped";
        case Regime::Critical: return "critical";
        case Regime::Underdamped: return "underdamped";
    }
    return "?";
}

bool is_critical(const ModeSymbol& m, double critical_tol) noexcept {
    return std::abs(m.b() - m.s()) <= critical_tol * std::max(m.b(), m.s());
}

ModeRoots characteristic_roots(const ModeSymbol& m, double critical_tol) noexcept {
    const double s = m.s();
    const double b = m.b();
    if (is_critical(m, critical_tol)) {
        return {Complex(-b, 0.0), Complex(-b, 0.0), Regime::Critical, 0.0, 0.0};
    }
    if (b > s) {
        const double q0 = std::sqrt((b - s) * (b + s));
        return {Complex(-(s * s) / (b + q0), 0.0), Complex(-(b + q0), 0.0), Regime::Overdamped, q0,
                0.0};
    }
    const double q = std::sqrt((s - b) * (s + b));
    return {Complex(-b, q), Complex(-b, -q), Regime::Underdamped, 0.0, q};
}

ModeCoefficients dalembert_coefficients(const ModeSymbol& m, Complex f, Complex g,
                                        double critical_tol) {
    const ModeRoots r = characteristic_roots(m, critical_tol);
    if (r.regime == Regime::Critical) {
        throw Error(ErrorCode::CriticalMode,
                    "b = s at s=" + std::to_string(m.s()) + "; use the Jordan evaluator");
    }
    const Complex root_gap(r.q0, r.q);
    const Complex z = (m.b() * f + g) / root_gap;
    return {0.5 * (f + z), 0.5 * (f - z)};
}

double condition_indicator(const ModeSymbol& m, Complex f, Complex g) noexcept {
    const double s = m.s();
    const double b = m.b();
    const double root_gap = std::sqrt(std::abs((b - s) * (b + s)));
    return std::abs(b * f + g) / root_gap;
}

Complex mode_wave_value(const ModeRoots& roots, const ModeCoefficients& coeffs, double t) noexcept {
    return std::exp(t * roots.c_plus) * coeffs.h_plus + std::exp(t * roots.c_minus) * coeffs.h_minus;
}

Complex mode_wave_derivative(const ModeRoots& roots, const ModeCoefficients& coeffs,
                             double t) noexcept {
    return roots.c_plus * std::exp(t * roots.c_plus) * coeffs.h_plus +
           roots.c_minus * std::exp(t * roots.c_minus) * coeffs.h_minus;
}

Complex mode_wave_value_critical(const ModeSymbol& m, Complex f, Complex g, double t) noexcept {
    const double b = m.b();
    return std::exp(-b * t) * (f + (g + b * f) * t);
}

Complex mode_wave_derivative_critical(const ModeSymbol& m, Complex f, Complex g,
                                      double t) noexcept {
    const double b = m.b();
    const Complex slope = g + b * f;
    return std::exp(-b * t) * (slope - b * (f + slope * t));
}

double mode_parabolic_rate(const ModeSymbol& m) noexcept {
    return -(m.s() * m.s()) / (2.0 * m.b());
}

double rate_gap(const ModeSymbol& m) {
    const double s = m.s();
    const double b = m.b();
    if (!(b > s)) {
        throw Error(ErrorCode::RequiresOverdamped,
                    "rate gap needs b > s, got s=" + std::to_string(s) + " b=" + std::to_string(b));
    }
    // b (g(w) - w/2) with g(w) = 1 - sqrt(1-w) simplifies to b w^2 / (2 (1+sigma)^2).
    const double w = (s / b) * (s / b);
    const double sigma = std::sqrt((1.0 - s / b) * (1.0 + s / b));
    const double denom = 1.0 + sigma;
    return b * w * w / (2.0 * denom * denom);
}

double taylor_remainder(double w) {
    if (!(w >= 0.0 && w < 1.0)) {
        throw Error(ErrorCode::OutOfDomain, "taylor remainder needs 0 <= w < 1, got " + std::to_string(w));
    }
    // Equals w^3 (3 + sigma) / (8 (1 + sigma)^3); nonnegative term by term.
    const double sigma = std::sqrt(1.0 - w);
    const double denom = 1.0 + sigma;
    return w * w * w * (3.0 + sigma) / (8.0 * denom * denom * denom);
}

double mode_energy(const ModeSymbol& m, Complex u, Complex u_dot) noexcept {
    const double s = m.s();
    return s * s * std::norm(u) + std::norm(u_dot);
}

}  // namespace dampwave
