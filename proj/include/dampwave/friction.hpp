#pragma once

// Friction symbols b = F(s), crossover detection, and a sampling auditor for
// the structural hypotheses on F (F above the identity below a crossover
// gamma, below it above gamma, bounded near zero, and eventually at most
// (1 - delta) s).

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dampwave {

/// F(s) = a
struct ConstantFriction {
    double a;
};

/// F(s) = a s^alpha, 0 <= alpha < 1
struct PowerFriction {
    double a;
    double alpha;
};

/// Parametric family from the linearized KdV example: with x = T-symbol,
/// s^2 = x^3 + a0 x^2 + a1 x and b = a x.
struct KdvFriction {
    double a;
    double a0;
    double a1;
};

/// Piecewise-linear interpolation through (s_k, b_k).
struct TableFriction {
    std::vector<double> s;
    std::vector<double> b;
};

class FrictionSpec {
public:
    using Kind = std::variant<ConstantFriction, PowerFriction, KdvFriction, TableFriction>;

    /// Validates parameters; throws InvalidArgument.
    static FrictionSpec constant(double a);
    static FrictionSpec power(double a, double alpha);
    static FrictionSpec kdv(double a, double a0, double a1);
    static FrictionSpec table(std::vector<double> s, std::vector<double> b);

    [[nodiscard]] const Kind& kind() const noexcept { return kind_; }
    [[nodiscard]] std::string name() const;

private:
    explicit FrictionSpec(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

/// b = F(s). Throws OutOfTable for a table lookup outside its samples.
[[nodiscard]] double evaluate(const FrictionSpec& f, double s);

/// Unique positive x with x^3 + a0 x^2 + a1 x = s^2.
[[nodiscard]] double kdv_t_symbol(const KdvFriction& k, double s);

/// s as a function of the T-symbol x.
[[nodiscard]] double kdv_s_symbol(const KdvFriction& k, double x) noexcept;

/// Positive root of (x^3 + a0 x^2 + a1 x)/a = x in the T-variable, the
/// closed form quoted with the KdV example. It balances s^2 against b rather
/// than s against b, so it is reported next to the numeric b = s crossover,
/// never substituted for it.
[[nodiscard]] std::optional<double> kdv_cubic_crossover(const KdvFriction& k) noexcept;

/// a > a1 + a0^2/4
[[nodiscard]] bool kdv_unique_crossover_condition(const KdvFriction& k) noexcept;

struct CrossoverResult {
    double gamma;
    double lo;
    double hi;
    double residual;  // F(gamma) - gamma
    bool unique_on_sampled_range;
};

/// Bisection for F(x) = x inside (lo, hi), iterated until |F(x) - x| <= tol.
/// Throws NoSignChange if the bracket does not straddle a crossing,
/// MultipleCrossings if a 512-point log scan of the bracket sees more than
/// one sign change, NoConvergence if tol is below what double precision can
/// resolve.
[[nodiscard]] CrossoverResult find_crossover(const FrictionSpec& f, double lo, double hi,
                                             double tol = 1e-12);

enum class AuditCondition {
    AboveIdentityBelowGamma,  // F(x) > x on (0, gamma)
    BelowIdentityAboveGamma,  // F(x) < x on (gamma, inf)
    BoundedNearZero,          // limsup_{x->0+} F(x) < inf
    EventuallySublinear,      // liminf ((1 - delta) x - F(x)) >= 0
};

const char* to_string(AuditCondition c) noexcept;

struct AuditViolation {
    double x;
    double fx;
    AuditCondition condition;
    // Condition parameter needed to re-check the witness: gamma for the two
    // identity comparisons, delta for the sublinear check, the comparison
    // abscissa for the near-zero growth check.
    double reference;
};

struct AuditOptions {
    double tolerance = 1e-12;       // relative slack on identity comparisons
    double max_log_slope = -0.01;   // log-log slope of F below this near zero counts as growth
};

struct HypothesisAudit {
    double s_min = 0.0;
    double s_max = 0.0;
    std::size_t n_samples = 0;
    double delta = 0.0;

    std::optional<CrossoverResult> gamma;
    std::vector<double> crossings;  // every sampled sign change, refined

    bool below_ok = false;
    bool above_ok = false;
    bool bounded_near_zero = false;
    double sup_near_zero = 0.0;
    double near_zero_log_slope = 0.0;
    bool liminf_ok = false;
    std::optional<double> max_passing_delta;

    std::vector<AuditViolation> violations;

    [[nodiscard]] bool all_ok() const noexcept {
        return gamma.has_value() && crossings.size() == 1 && below_ok && above_ok &&
               bounded_near_zero && liminf_ok;
    }
};

/// Log-grid sample count giving `per_decade` points per decade of [s_min, s_max].
[[nodiscard]] std::size_t samples_per_decade(double s_min, double s_max, std::size_t per_decade = 512);

/// Samples F on a log grid of [s_min, s_max] and reports every hypothesis
/// violation with a witness. Never throws on violations.
[[nodiscard]] HypothesisAudit audit(const FrictionSpec& f, double s_min, double s_max,
                                    std::size_t n_samples, double delta,
                                    const AuditOptions& opts = {});

/// Re-evaluates F at the witness and reports whether the violation reproduces.
[[nodiscard]] bool witness_reproduces(const FrictionSpec& f, const AuditViolation& v,
                                      const AuditOptions& opts = {});

}  // namespace dampwave
