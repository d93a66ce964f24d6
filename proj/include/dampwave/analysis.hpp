#pragma once

// Measurement side: decay traces of u, v, u - v and the ratio
// l(t) = |u - v| / |v|, log-space rate fits, per-band constants of the
// Taylor comparison, and the horizon past which the grid's lowest modes
// dominate what is measured.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dampwave/evolution.hpp"
#include "dampwave/spectral.hpp"

namespace dampwave {

/// Below this |v| the ratio is recorded as undefined.
inline constexpr double kRatioFloor = 1e-300;

struct DecayTrace {
    std::vector<double> times;
    std::vector<double> norm_u;
    std::vector<double> norm_v;
    std::vector<double> norm_diff;
    std::vector<std::optional<double>> ratio;
    std::vector<double> norm_u1;
    std::vector<double> norm_u2;
    std::vector<double> norm_u3;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

struct TraceOptions {
    unsigned workers = 1;
    HFormula h_formula = HFormula::Derived;
};

/// Evaluates every column at every time. Samples are independent, so the
/// result does not depend on the worker count. Throws ZeroH when the
/// canonical datum vanishes.
[[nodiscard]] DecayTrace run_trace(const SpectralGrid& grid, const StateVector& f, const StateVector& g,
                                   double gamma, std::span<const double> times, const TraceOptions& opts = {});

/// Header `t,norm_u,norm_v,norm_diff,ratio,norm_u1,norm_u2,norm_u3`; an
/// undefined ratio is an empty field.
void write_trace_csv(std::ostream& os, const DecayTrace& trace);

/// (|u2| + |u3|) / |u1| per sample; undefined where |u1| vanishes.
[[nodiscard]] std::vector<std::optional<double>> decomposition_ratio(const DecayTrace& trace);

enum class FitModel { Exponential, Power };

const char* to_string(FitModel m) noexcept;

/// Exponential: y = C e^{-rate t}. Power: y = C t^{-rate}.
struct RateFit {
    double t_lo;
    double t_hi;
    FitModel model;
    double prefactor;
    double rate;
    double residual_rms;  // in log space
    std::size_t samples;
};

/// Unweighted least squares of log y on t (exponential) or log t (power)
/// over samples with t in [t_lo, t_hi]. Throws InsufficientSamples below 8
/// samples in the window and NonpositiveRatio for an undefined or
/// nonpositive value inside it.
[[nodiscard]] RateFit fit_series(std::span<const double> times, std::span<const std::optional<double>> values,
                                 double t_lo, double t_hi, FitModel model);

/// fit_series on the trace's ratio column.
[[nodiscard]] RateFit fit_rate(const DecayTrace& trace, double t_lo, double t_hi, FitModel model);

struct BandConstants {
    Band band;
    double zeta1;  // min taylor_remainder(w) over the band's modes
    double zeta2;  // max taylor_remainder(w)
    double zeta3;  // min w, w = (s/b)^2
    double zeta4;  // max w
    double zeta5;  // zeta3 / 8 + zeta1
    double epsilon;  // min q0
    std::size_t modes;
};

/// Throws EmptyBand if no grid mode lies in the band, NotOverdamped if any
/// of them has b <= s.
[[nodiscard]] BandConstants band_constants(const SpectralGrid& grid, const Band& band);

/// Time beyond which the two lowest grid modes carry more than half of
/// |v(t)|^2, for the given parabolic datum. Returns 0 if that already holds
/// at t = 0 and +infinity when at most two modes lie below gamma.
[[nodiscard]] double validity_horizon(const SpectralGrid& grid, const StateVector& h, double gamma);

/// Same with the reference datum h = 1 on every mode below gamma.
[[nodiscard]] double validity_horizon(const SpectralGrid& grid, double gamma);

}  // namespace dampwave
