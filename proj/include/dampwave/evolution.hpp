#pragma once

// Full solutions on a grid: the exact damped-wave evolution u(t) through
// per-mode characteristic roots, the canonical datum h of the parabolic
// approximant, its evolution v(t), and the three-way split of u used to
// compare the two.

#include <vector>

#include "dampwave/spectral.hpp"
#include "dampwave/symbols.hpp"

namespace dampwave {

/// Which expression feeds h on (0, gamma): `Derived` solves the 2x2
/// coefficient system, h = (f + (b^2 - s^2)^{-1/2} (b f + g)) / 2.
/// `Literal` multiplies by the square root instead of dividing. It is kept
/// for side-by-side probing only.
enum class HFormula { Derived, Literal };

struct ConditionDiagnostic {
    std::size_t mode;
    double indicator;  // |b f + g| / |q0 + i q|
};

/// Modes whose q0^2 + q^2 = |b^2 - s^2| falls below this fraction of
/// max(s, b)^2 get a conditioning diagnostic.
inline constexpr double kConditioningThreshold = 1e-6;

class WaveEvolution {
public:
    [[nodiscard]] const SpectralGrid& grid() const noexcept { return *grid_; }
    [[nodiscard]] double gamma() const noexcept { return gamma_; }
    [[nodiscard]] const std::vector<ModeRoots>& roots() const noexcept { return roots_; }
    [[nodiscard]] const std::vector<ModeCoefficients>& coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] const std::vector<std::size_t>& critical_modes() const noexcept { return critical_; }
    [[nodiscard]] bool is_critical(std::size_t i) const noexcept { return roots_[i].regime == Regime::Critical; }
    [[nodiscard]] const std::vector<ConditionDiagnostic>& diagnostics() const noexcept { return diagnostics_; }
    [[nodiscard]] const StateVector& initial_position() const noexcept { return f_; }
    [[nodiscard]] const StateVector& initial_velocity() const noexcept { return g_; }

    /// Per-mode value and velocity at time t.
    [[nodiscard]] Complex value(std::size_t i, double t) const noexcept;
    [[nodiscard]] Complex velocity(std::size_t i, double t) const noexcept;

private:
    friend WaveEvolution prepare_wave(const SpectralGrid&, const StateVector&, const StateVector&, double);
    WaveEvolution(const SpectralGrid& grid, StateVector f, StateVector g, double gamma)
        : grid_(&grid), gamma_(gamma), f_(std::move(f)), g_(std::move(g)) {}

    const SpectralGrid* grid_;
    double gamma_;
    StateVector f_;
    StateVector g_;
    std::vector<ModeRoots> roots_;
    std::vector<ModeCoefficients> coeffs_;  // zero at critical modes
    std::vector<std::size_t> critical_;
    std::vector<ConditionDiagnostic> diagnostics_;
};

/// Precomputes roots and d'Alembert coefficients per mode. Critical modes use
/// the Jordan-form evaluator. The grid must outlive the evolution.
[[nodiscard]] WaveEvolution prepare_wave(const SpectralGrid& grid, const StateVector& f, const StateVector& g,
                                         double gamma);

/// u(t). At t = 0 this is f itself.
[[nodiscard]] StateVector wave_state(const WaveEvolution& we, double t);

/// u'(t) from the analytic derivative of the closed form.
[[nodiscard]] StateVector wave_velocity(const WaveEvolution& we, double t);

/// Canonical parabolic datum: h_+ restricted to s < gamma, zero on critical
/// modes.
[[nodiscard]] StateVector canonical_initial(const SpectralGrid& grid, const StateVector& f, const StateVector& g,
                                            double gamma, HFormula formula = HFormula::Derived);

class ParabolicEvolution {
public:
    [[nodiscard]] const SpectralGrid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const StateVector& h() const noexcept { return h_; }
    [[nodiscard]] const std::vector<double>& rates() const noexcept { return rates_; }
    [[nodiscard]] Complex value(std::size_t i, double t) const noexcept { return std::exp(rates_[i] * t) * h_[i]; }

private:
    friend ParabolicEvolution prepare_parabolic(const SpectralGrid&, const StateVector&, double);
    ParabolicEvolution(const SpectralGrid& grid, StateVector h) : grid_(&grid), h_(std::move(h)) {}

    const SpectralGrid* grid_;
    StateVector h_;
    std::vector<double> rates_;
};

/// v(t) = e^{-t s^2/(2b)} h per mode. h is projected onto s < gamma and
/// cleared at critical modes first; throws ZeroH when nothing survives.
[[nodiscard]] ParabolicEvolution prepare_parabolic(const SpectralGrid& grid, const StateVector& h, double gamma);

[[nodiscard]] StateVector parabolic_state(const ParabolicEvolution& pe, double t);

struct Decomposition {
    StateVector u1;  // e^{t c_+} h_+ on s < gamma
    StateVector u2;  // e^{t c_+} h_+ on s >= gamma, plus critical modes
    StateVector u3;  // e^{t c_-} h_-
};

/// Critical modes have no d'Alembert split; their whole Jordan-form value is
/// carried in u2, so u1 + u2 + u3 = u at every mode.
[[nodiscard]] Decomposition decompose(const WaveEvolution& we, double t);

}  // namespace dampwave
