#pragma once

// Brute-force time stepping of a single mode, used as an independent check
// on the closed forms. Works from (s, b) alone and never touches the root or
// coefficient machinery.

#include <complex>
#include <span>
#include <vector>

namespace dampwave::oracle {

using Complex = std::complex<double>;

enum class Method { Rk4Fixed, Rk4Adaptive };

struct OracleConfig {
    Method method = Method::Rk4Fixed;
    double step = 0.0;         // fixed step; 0 picks min(1e-3, 0.05 / max(s, b))
    double tolerance = 1e-10;  // adaptive: local error per unit state norm
};

/// Throws InvalidArgument for a negative step or a tolerance outside (0, 1e-3].
void validate(const OracleConfig& cfg);

struct ModeSample {
    Complex u;
    Complex u_dot;
};

[[nodiscard]] double default_step(double s, double b) noexcept;

/// Integrates [u, u']' = [[0, 1], [-s^2, -2b]] [u, u'] from (f, g) at t = 0
/// and samples it at the given nondecreasing nonnegative times. Throws
/// StepUnderflow if adaptive control stalls.
[[nodiscard]] std::vector<ModeSample> integrate_mode(double s, double b, Complex f, Complex g,
                                                     std::span<const double> times, const OracleConfig& cfg = {});

/// Integrates v' = -(s^2 / (2b)) v from v(0) = h.
[[nodiscard]] std::vector<Complex> integrate_parabolic_mode(double s, double b, Complex h,
                                                            std::span<const double> times,
                                                            const OracleConfig& cfg = {});

}  // namespace dampwave::oracle
