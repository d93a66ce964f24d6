#include "dampwave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "dampwave/error.hpp"
#include "dampwave/io.hpp"
#include "dampwave/parallel.hpp"
#include "dampwave/summation.hpp"

namespace dampwave {

DecayTrace run_trace(const SpectralGrid& grid, const StateVector& f, const StateVector& g, double gamma,
                     std::span<const double> times, const TraceOptions& opts) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "trace times must be nonnegative and increasing");
        }
    }
    const WaveEvolution we = prepare_wave(grid, f, g, gamma);
    const ParabolicEvolution pe = prepare_parabolic(grid, canonical_initial(grid, f, g, gamma, opts.h_formula), gamma);

    const std::size_t nt = times.size();
    DecayTrace tr;
    tr.times.assign(times.begin(), times.end());
    tr.norm_u.resize(nt);
    tr.norm_v.resize(nt);
    tr.norm_diff.resize(nt);
    tr.ratio.resize(nt);
    tr.norm_u1.resize(nt);
    tr.norm_u2.resize(nt);
    tr.norm_u3.resize(nt);

    parallel_for(nt, opts.workers, [&](std::size_t k) {
        const double t = times[k];
        CompensatedSum su, sv, sd, s1, s2, s3;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double w = grid.weight(i);
            const Complex u = we.value(i, t);
            const Complex v = pe.value(i, t);
            su.add(w * std::norm(u));
            sv.add(w * std::norm(v));
            sd.add(w * std::norm(u - v));
            if (we.is_critical(i)) {
                s2.add(w * std::norm(u));
                continue;
            }
            const auto& r = we.roots()[i];
            const auto& c = we.coefficients()[i];
            const double plus = w * std::norm(std::exp(t * r.c_plus) * c.h_plus);
            (grid.s(i) < gamma ? s1 : s2).add(plus);
            s3.add(w * std::norm(std::exp(t * r.c_minus) * c.h_minus));
        }
        tr.norm_u[k] = std::sqrt(su.value());
        tr.norm_v[k] = std::sqrt(sv.value());
        tr.norm_diff[k] = std::sqrt(sd.value());
        tr.norm_u1[k] = std::sqrt(s1.value());
        tr.norm_u2[k] = std::sqrt(s2.value());
        tr.norm_u3[k] = std::sqrt(s3.value());
        if (tr.norm_v[k] > kRatioFloor) tr.ratio[k] = tr.norm_diff[k] / tr.norm_v[k];
    });
    return tr;
}

void write_trace_csv(std::ostream& os, const DecayTrace& trace) {
    os << "t,norm_u,norm_v,norm_diff,ratio,norm_u1,norm_u2,norm_u3\n";
    for (std::size_t k = 0; k < trace.size(); ++k) {
        os << format_double(trace.times[k]) << ',' << format_double(trace.norm_u[k]) << ','
           << format_double(trace.norm_v[k]) << ',' << format_double(trace.norm_diff[k]) << ',';
        if (trace.ratio[k]) os << format_double(*trace.ratio[k]);
        os << ',' << format_double(trace.norm_u1[k]) << ',' << format_double(trace.norm_u2[k]) << ','
           << format_double(trace.norm_u3[k]) << '\n';
    }
}

std::vector<std::optional<double>> decomposition_ratio(const DecayTrace& trace) {
    std::vector<std::optional<double>> out(trace.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        if (trace.norm_u1[k] > kRatioFloor) out[k] = (trace.norm_u2[k] + trace.norm_u3[k]) / trace.norm_u1[k];
    }
    return out;
}

const char* to_string(FitModel m) noexcept { return m == FitModel::Exponential ? "exponential" : "power"; }

RateFit fit_series(std::span<const double> times, std::span<const std::optional<double>> values, double t_lo,
                   double t_hi, FitModel model) {
    if (times.size() != values.size()) throw Error(ErrorCode::InvalidArgument, "times and values differ in length");
    if (!(t_lo < t_hi)) throw Error(ErrorCode::InvalidArgument, "fit window needs t_lo < t_hi");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        if (t < t_lo || t > t_hi) continue;
        if (!values[k] || !(*values[k] > 0.0)) {
            throw Error(ErrorCode::NonpositiveRatio, "undefined or nonpositive value at t=" + format_double(t));
        }
        if (model == FitModel::Power && !(t > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "power-law fit window must exclude t = 0");
        }
        xs.push_back(model == FitModel::Exponential ? t : std::log(t));
        ys.push_back(std::log(*values[k]));
    }
    if (xs.size() < 8) {
        throw Error(ErrorCode::InsufficientSamples,
                    std::to_string(xs.size()) + " samples in fit window, need at least 8");
    }
    const double n = static_cast<double>(xs.size());
    const double mx = compensated_sum(xs) / n;
    const double my = compensated_sum(ys) / n;
    CompensatedSum sxx, sxy;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxx.add((xs[k] - mx) * (xs[k] - mx));
        sxy.add((xs[k] - mx) * (ys[k] - my));
    }
    const double slope = sxy.value() / sxx.value();
    const double intercept = my - slope * mx;
    CompensatedSum sr;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double r = ys[k] - (intercept + slope * xs[k]);
        sr.add(r * r);
    }
    return {t_lo, t_hi, model, std::exp(intercept), -slope, std::sqrt(sr.value() / n), xs.size()};
}

RateFit fit_rate(const DecayTrace& trace, double t_lo, double t_hi, FitModel model) {
    return fit_series(trace.times, trace.ratio, t_lo, t_hi, model);
}

BandConstants band_constants(const SpectralGrid& grid, const Band& band) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BandConstants bc{band, inf, -inf, inf, -inf, 0.0, inf, 0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.s(i);
        const double b = grid.b(i);
        if (!band.contains(s)) continue;
        if (!(b > s) || is_critical(grid.mode(i))) {
            throw Error(ErrorCode::NotOverdamped, "band contains a mode with b <= s at s=" + format_double(s));
        }
        const double w = (s / b) * (s / b);
        const double r = taylor_remainder(w);
        bc.zeta1 = std::min(bc.zeta1, r);
        bc.zeta2 = std::max(bc.zeta2, r);
        bc.zeta3 = std::min(bc.zeta3, w);
        bc.zeta4 = std::max(bc.zeta4, w);
        bc.epsilon = std::min(bc.epsilon, std::sqrt((b - s) * (b + s)));
        ++bc.modes;
    }
    if (bc.modes == 0) throw Error(ErrorCode::EmptyBand, "no grid mode lies in the band");
    bc.zeta5 = bc.zeta3 / 8.0 + bc.zeta1;
    return bc;
}

double validity_horizon(const SpectralGrid& grid, const StateVector& h, double gamma) {
    h.require_grid(grid);
    // log of each supported mode's |v|^2 mass at t = 0, and its decay exponent
    std::vector<double> log_mass;
    std::vector<double> exponent;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid.s(i) < gamma) || h[i] == Complex(0.0, 0.0)) continue;
        log_mass.push_back(std::log(grid.weight(i)) + std::log(std::norm(h[i])));
        exponent.push_back(2.0 * mode_parabolic_rate(grid.mode(i)));
    }
    if (log_mass.size() <= 2) return std::numeric_limits<double>::infinity();

    // Fraction of mass carried by the two lowest supported modes at time t.
    auto low_fraction = [&](double t) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < log_mass.size(); ++k) top = std::max(top, log_mass[k] + exponent[k] * t);
        CompensatedSum low, all;
        for (std::size_t k = 0; k < log_mass.size(); ++k) {
            const double m = std::exp(log_mass[k] + exponent[k] * t - top);
            all.add(m);
            if (k < 2) low.add(m);
        }
        return low.value() / all.value();
    };

    if (low_fraction(0.0) > 0.5) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (low_fraction(hi) <= 0.5) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi) || hi > 1e300) return std::numeric_limits<double>::infinity();
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (low_fraction(mid) > 0.5 ? hi : lo) = mid;
    }
    return hi;
}

double validity_horizon(const SpectralGrid& grid, double gamma) {
    StateVector h(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid.s(i) < gamma) h[i] = 1.0;
    }
    return validity_horizon(grid, h, gamma);
}

}  // namespace dampwave
