#pragma once

// Scalar mathematics of one spectral mode of u'' + 2 b u' + s^2 u = 0.
//
// On the diagonal model every operator in the problem acts on a mode as
// multiplication by a number, so the whole closed-form solution reduces to
// the quadratic c^2 + 2 b c + s^2 = 0 and its two roots.

#include <complex>

namespace dampwave {

using Complex = std::complex<double>;

/// Relative tolerance below which |b - s| counts as the crossover b = s.
inline constexpr double kCriticalTolerance = 1e-12;

/// One spectral point: the S-symbol value s and the friction symbol b = F(s).
class ModeSymbol {
public:
    /// Throws InvalidArgument unless s and b are finite and positive.
    static ModeSymbol make(double s, double b);

    /// Frictionless mode (b = 0). Only meant for conservation checks; the
    /// damped equation itself always has b > 0.
    static ModeSymbol undamped(double s);

    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] double b() const noexcept { return b_; }

    bool operator==(const ModeSymbol&) const = default;

private:
    ModeSymbol(double s, double b) : s_(s), b_(b) {}
    double s_;
    double b_;
};

enum class Regime { Overdamped, Critical, Underdamped };

const char* to_string(Regime r) noexcept;

struct ModeRoots {
    Complex c_plus;
    Complex c_minus;
    Regime regime;
    double q0;  // sqrt(b^2 - s^2) when overdamped, else 0
    double q;   // sqrt(s^2 - b^2) when underdamped, else 0
};

struct ModeCoefficients {
    Complex h_plus;
    Complex h_minus;
};

[[nodiscard]] bool is_critical(const ModeSymbol& m, double critical_tol = kCriticalTolerance) noexcept;

/// Roots c_± = -b ± (q0 + i q) of c^2 + 2 b c + s^2 = 0, using nonnegative
/// square roots. The overdamped slow root is evaluated as -s^2 / (b + q0) to
/// avoid cancellation when s << b.
[[nodiscard]] ModeRoots characteristic_roots(const ModeSymbol& m,
                                             double critical_tol = kCriticalTolerance) noexcept;

/// h_± = (f ± (q0 + i q)^{-1} (b f + g)) / 2. Throws CriticalMode at b = s,
/// where the 2x2 system is singular.
[[nodiscard]] ModeCoefficients dalembert_coefficients(const ModeSymbol& m, Complex f, Complex g,
                                                      double critical_tol = kCriticalTolerance);

/// |b f + g| / |q0 + i q|: how strongly the coefficient solve amplifies data.
[[nodiscard]] double condition_indicator(const ModeSymbol& m, Complex f, Complex g) noexcept;

/// e^{t c_+} h_+ + e^{t c_-} h_-
[[nodiscard]] Complex mode_wave_value(const ModeRoots& roots, const ModeCoefficients& coeffs,
                                      double t) noexcept;

/// Time derivative of mode_wave_value.
[[nodiscard]] Complex mode_wave_derivative(const ModeRoots& roots, const ModeCoefficients& coeffs,
                                           double t) noexcept;

/// Jordan-form solution at b = s: e^{-b t} (f + (g + b f) t).
[[nodiscard]] Complex mode_wave_value_critical(const ModeSymbol& m, Complex f, Complex g,
                                               double t) noexcept;
[[nodiscard]] Complex mode_wave_derivative_critical(const ModeSymbol& m, Complex f, Complex g,
                                                    double t) noexcept;

/// Decay exponent -s^2 / (2 b) of the first-order equation 2 b v' + s^2 v = 0.
[[nodiscard]] double mode_parabolic_rate(const ModeSymbol& m) noexcept;

/// -Re(c_+) - s^2/(2b) for an overdamped mode, i.e. b (w^2/8 + r(w)) with
/// w = (s/b)^2. Throws RequiresOverdamped when b <= s.
[[nodiscard]] double rate_gap(const ModeSymbol& m);

/// r(w) = 1 - sqrt(1 - w) - w/2 - w^2/8 on [0, 1). Throws OutOfDomain
/// elsewhere.
[[nodiscard]] double taylor_remainder(double w);

/// s^2 |u|^2 + |u'|^2
[[nodiscard]] double mode_energy(const ModeSymbol& m, Complex u, Complex u_dot) noexcept;

}  // namespace dampwave
