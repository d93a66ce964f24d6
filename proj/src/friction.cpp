#include "dampwave/friction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dampwave/error.hpp"

namespace dampwave {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

double excess(const FrictionSpec& f, double x) { return evaluate(f, x) - x; }

// Bisection of F(x) - x on [lo, hi] down to adjacent doubles. Assumes the
// endpoint excesses have opposite signs (or one of them vanishes).
double bisect_crossing(const FrictionSpec& f, double lo, double hi) {
    double d_lo = excess(f, lo);
    if (d_lo == 0.0) return lo;
    double d_hi = excess(f, hi);
    if (d_hi == 0.0) return hi;
    for (int iter = 0; iter < 4096; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double d_mid = excess(f, mid);
        if (d_mid == 0.0) return mid;
        if (sign_of(d_mid) == sign_of(d_lo)) {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
            d_hi = d_mid;
        }
    }
    return std::abs(d_lo) <= std::abs(d_hi) ? lo : hi;
}

// Sign changes of F(x) - x along xs, as (index before, index after) pairs of
// nonzero-excess samples. Exact zeros are skipped over.
std::vector<std::pair<std::size_t, std::size_t>> sign_changes(const std::vector<double>& d) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0) continue;
        if (last && sign_of(d[*last]) != sign_of(d[i])) out.emplace_back(*last, i);
        last = i;
    }
    return out;
}

constexpr std::size_t kMaxWitnessesPerCondition = 32;

}  // namespace

FrictionSpec FrictionSpec::constant(double a) {
    require(finite_positive(a), "constant friction needs a > 0");
    return FrictionSpec(ConstantFriction{a});
}

FrictionSpec FrictionSpec::power(double a, double alpha) {
    require(finite_positive(a), "power friction needs a > 0");
    require(std::isfinite(alpha) && alpha >= 0.0 && alpha < 1.0, "power friction needs 0 <= alpha < 1");
    return FrictionSpec(PowerFriction{a, alpha});
}

FrictionSpec FrictionSpec::kdv(double a, double a0, double a1) {
    require(finite_positive(a), "kdv friction needs a > 0");
    require(std::isfinite(a0) && a0 >= 0.0, "kdv friction needs a0 >= 0");
    require(std::isfinite(a1) && a1 >= 0.0, "kdv friction needs a1 >= 0");
    return FrictionSpec(KdvFriction{a, a0, a1});
}

FrictionSpec FrictionSpec::table(std::vector<double> s, std::vector<double> b) {
    require(s.size() == b.size() && s.size() >= 2, "friction table needs >= 2 (s, b) pairs");
    for (std::size_t i = 0; i < s.size(); ++i) {
        require(finite_positive(s[i]) && finite_positive(b[i]), "friction table entries must be positive");
        if (i > 0) require(s[i] > s[i - 1], "friction table s-samples must increase strictly");
    }
    return FrictionSpec(TableFriction{std::move(s), std::move(b)});
}

std::string FrictionSpec::name() const {
    std::ostringstream os;
    std::visit(Overloaded{
                   [&](const ConstantFriction& c) { os << "constant(a=" << c.a << ")"; },
                   [&](const PowerFriction& p) { os << "power(a=" << p.a << ",alpha=" << p.alpha << ")"; },
                   [&](const KdvFriction& k) {
                       os << "kdv(a=" << k.a << ",a0=" << k.a0 << ",a1=" << k.a1 << ")";
                   },
                   [&](const TableFriction& t) { os << "table(n=" << t.s.size() << ")"; },
               },
               kind_);
    return os.str();
}

double kdv_s_symbol(const KdvFriction& k, double x) noexcept {
    return std::sqrt(x * (x * x + k.a0 * x + k.a1));
}

double kdv_t_symbol(const KdvFriction& k, double s) {
    require(finite_positive(s), "kdv inversion needs s > 0");
    const double s2 = s * s;
    // Each bound makes one term alone reach s^2, so the cubic is >= 0 there.
    double x = std::cbrt(s2);
    if (k.a1 > 0.0) x = std::min(x, s2 / k.a1);
    if (k.a0 > 0.0) x = std::min(x, s / std::sqrt(k.a0));
    // Newton from the right on a convex increasing cubic decreases monotonically.
    for (int iter = 0; iter < 200; ++iter) {
        const double p = x * (x * (x + k.a0) + k.a1) - s2;
        const double dp = x * (3.0 * x + 2.0 * k.a0) + k.a1;
        if (p <= 0.0 || dp <= 0.0) break;
        const double next = x - p / dp;
        if (!(next < x) || next <= 0.0) break;
        x = next;
    }
    return x;
}

std::optional<double> kdv_cubic_crossover(const KdvFriction& k) noexcept {
    const double disc = k.a0 * k.a0 - 4.0 * (k.a1 - k.a);
    if (disc < 0.0) return std::nullopt;
    const double x = 0.5 * (-k.a0 + std::sqrt(disc));
    if (!(x > 0.0)) return std::nullopt;
    return x;
}

bool kdv_unique_crossover_condition(const KdvFriction& k) noexcept {
    return k.a > k.a1 + 0.25 * k.a0 * k.a0;
}

double evaluate(const FrictionSpec& f, double s) {
    return std::visit(
        Overloaded{
            [](const ConstantFriction& c) { return c.a; },
            [s](const PowerFriction& p) { return p.alpha == 0.0 ? p.a : p.a * std::pow(s, p.alpha); },
            [s](const KdvFriction& k) { return k.a * kdv_t_symbol(k, s); },
            [s](const TableFriction& t) {
                if (!(s >= t.s.front() && s <= t.s.back())) {
                    throw Error(ErrorCode::OutOfTable, "s=" + std::to_string(s) + " outside friction table");
                }
                auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
                if (it == t.s.end()) return t.b.back();
                const auto k = static_cast<std::size_t>(it - t.s.begin());
                const double lam = (s - t.s[k - 1]) / (t.s[k] - t.s[k - 1]);
                return t.b[k - 1] + lam * (t.b[k] - t.b[k - 1]);
            },
        },
        f.kind());
}

CrossoverResult find_crossover(const FrictionSpec& f, double lo, double hi, double tol) {
    require(finite_positive(lo) && std::isfinite(hi) && lo < hi, "crossover bracket needs 0 < lo < hi");
    require(tol >= 0.0, "crossover tolerance must be nonnegative");
    const double d_lo = excess(f, lo);
    const double d_hi = excess(f, hi);
    if (sign_of(d_lo) * sign_of(d_hi) > 0) {
        throw Error(ErrorCode::NoSignChange, "F(x) - x keeps its sign on [" + std::to_string(lo) + ", " +
                                                 std::to_string(hi) + "]");
    }
    const auto xs = log_grid(lo, hi, 512);
    std::vector<double> d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) d[i] = excess(f, xs[i]);
    const auto changes = sign_changes(d);
    if (changes.size() > 1) {
        throw Error(ErrorCode::MultipleCrossings,
                    std::to_string(changes.size()) + " sign changes of F(x) - x in the bracket");
    }
    const double gamma = bisect_crossing(f, lo, hi);
    const double residual = excess(f, gamma);
    if (std::abs(residual) > tol) {
        throw Error(ErrorCode::NoConvergence, "crossover residual " + std::to_string(residual) +
                                                  " exceeds tolerance at machine resolution");
    }
    return {gamma, lo, hi, residual, changes.size() <= 1};
}

const char* to_string(AuditCondition c) noexcept {
    switch (c) {
        case AuditCondition::AboveIdentityBelowGamma: return "above_identity_below_gamma";
        case AuditCondition::BelowIdentityAboveGamma: return "below_identity_above_gamma";
        case AuditCondition::BoundedNearZero: return "bounded_near_zero";
        case AuditCondition::EventuallySublinear: return "eventually_sublinear";
    }
    return "?";
}

std::size_t samples_per_decade(double s_min, double s_max, std::size_t per_decade) {
    const double decades = std::log10(s_max / s_min);
    return std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade))) + 1);
}

namespace {

double near_zero_slope(const FrictionSpec& f, double x, double x_ref) {
    return std::log(evaluate(f, x) / evaluate(f, x_ref)) / std::log(x / x_ref);
}

bool violates(const FrictionSpec& f, const AuditViolation& v, const AuditOptions& opts) {
    const double fx = evaluate(f, v.x);
    switch (v.condition) {
        case AuditCondition::AboveIdentityBelowGamma:
            return v.x < v.reference && fx < v.x * (1.0 - opts.tolerance);
        case AuditCondition::BelowIdentityAboveGamma:
            return v.x > v.reference && fx > v.x * (1.0 + opts.tolerance);
        case AuditCondition::BoundedNearZero: {
            if (!std::isfinite(fx)) return true;
            return near_zero_slope(f, v.x, v.reference) < opts.max_log_slope;
        }
        case AuditCondition::EventuallySublinear:
            return (1.0 - v.reference) * v.x - fx < -opts.tolerance * v.x;
    }
    return false;
}

}  // namespace

HypothesisAudit audit(const FrictionSpec& f, double s_min, double s_max, std::size_t n_samples,
                      double delta, const AuditOptions& opts) {
    require(finite_positive(s_min) && std::isfinite(s_max) && s_min < s_max, "audit needs 0 < s_min < s_max");
    require(n_samples >= 16, "audit needs at least 16 samples");
    require(delta > 0.0 && delta < 1.0, "audit needs 0 < delta < 1");

    HypothesisAudit out;
    out.s_min = s_min;
    out.s_max = s_max;
    out.n_samples = n_samples;
    out.delta = delta;

    const auto xs = log_grid(s_min, s_max, n_samples);
    std::vector<double> fx(xs.size());
    std::vector<double> d(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fx[i] = evaluate(f, xs[i]);
        d[i] = fx[i] - xs[i];
    }

    std::vector<std::size_t> counts(4, 0);
    auto record = [&](AuditViolation v) {
        auto& n = counts[static_cast<std::size_t>(v.condition)];
        if (n++ < kMaxWitnessesPerCondition) out.violations.push_back(v);
    };

    // Crossings; the largest one separates the high-frequency regime.
    const auto changes = sign_changes(d);
    for (const auto& [i, j] : changes) out.crossings.push_back(bisect_crossing(f, xs[i], xs[j]));
    if (!changes.empty()) {
        const auto [i, j] = changes.back();
        const double gamma = out.crossings.back();
        out.gamma = CrossoverResult{gamma, xs[i], xs[j], excess(f, gamma), changes.size() == 1};
    }

    if (out.gamma) {
        const double gamma = out.gamma->gamma;
        out.below_ok = true;
        out.above_ok = true;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            AuditViolation v{xs[i], fx[i], AuditCondition::AboveIdentityBelowGamma, gamma};
            if (xs[i] < gamma && violates(f, v, opts)) {
                out.below_ok = false;
                record(v);
            }
            v.condition = AuditCondition::BelowIdentityAboveGamma;
            if (xs[i] > gamma && violates(f, v, opts)) {
                out.above_ok = false;
                record(v);
            }
        }
    }

    // Growth of F over the lowest sampled decade.
    const double x_ref = std::min(10.0 * s_min, s_max);
    double sup = 0.0;
    for (std::size_t i = 0; i < xs.size() && xs[i] <= x_ref; ++i) sup = std::max(sup, fx[i]);
    out.sup_near_zero = sup;
    out.near_zero_log_slope = near_zero_slope(f, s_min, x_ref);
    {
        const AuditViolation v{s_min, fx.front(), AuditCondition::BoundedNearZero, x_ref};
        out.bounded_near_zero = std::isfinite(sup) && !violates(f, v, opts);
        if (!out.bounded_near_zero) record(v);
    }

    // Sublinear slack on the top sampled decade.
    const double top = std::max(s_max / 10.0, s_min);
    out.liminf_ok = true;
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < top) continue;
        slack = std::min(slack, 1.0 - fx[i] / xs[i]);
        const AuditViolation v{xs[i], fx[i], AuditCondition::EventuallySublinear, delta};
        if (violates(f, v, opts)) {
            out.liminf_ok = false;
            record(v);
        }
    }
    if (slack > 0.0) out.max_passing_delta = slack;
    return out;
}

bool witness_reproduces(const FrictionSpec& f, const AuditViolation& v, const AuditOptions& opts) {
    return violates(f, v, opts);
}

}  // namespace dampwave
