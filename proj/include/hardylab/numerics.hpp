#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hardylab {

using Fn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Result of an adaptive integration.
struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

/// Thrown when a numeric routine fails to converge; carries the best estimate.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, QuadResult best)
        : std::runtime_error(what), best_(best) {}
    const QuadResult& best() const { return best_; }

private:
    QuadResult best_;
};

enum class DecayHint { unknown, compact_support, power_decay, exponential_decay };

/// An integrand with hints for endpoint singularities and tail decay.
struct Integrand {
    Fn evaluator;
    bool singular_left = false;
    double singular_exponent = 0.0;  // f ~ (x-a)^{-alpha} as x->a+, alpha in (0,1)
    DecayHint decay = DecayHint::unknown;
    double decay_param = 0.0;  // support end, power exponent, or exponential rate
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    long max_evaluations = 1000000;
    std::vector<double> breakpoints;  // interior points to split at
    bool throw_on_failure = true;
};

/// Adaptive Gauss-Kronrod integration of f over (a, b); b may be +inf.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {});
QuadResult integrate(const Fn& f, double a, double b, const QuadOptions& opts = {});

/// Solves F(x) = y for strictly increasing F with F(lo) <= y <= F(hi).
/// Bisection with secant acceleration; |F(x)-y| <= tol*max(|y|,1).
double monotone_invert(const Fn& increasing, double y, double lo, double hi,
                       double tol = 1e-10);

/// Central difference with step h = scale*max(|x|,1)*1e-6, Richardson-extrapolated once.
double derivative(const Fn& f, double x, double scale = 1.0);

/// Integral of f over (0, support) with interior breakpoints. For infinite
/// support the tail beyond the breakpoints is integrated in log coordinates,
/// with the cutoff chosen from the measured decay rate of x*f(x); returns
/// +inf when that quantity does not decay. An integrable power blow-up at 0
/// may be declared through singular_exponent (f ~ x^{-alpha}, alpha in (0,1)).
double halfline_integral(const Fn& f, double support, std::vector<double> breakpoints,
                         double rel_tol = 1e-10, double singular_exponent = 0.0);

struct ScalarMin {
    double argmin = 0.0;
    double value = 0.0;
};

/// Coarse grid scan followed by golden-section refinement on the best bracket.
/// Deterministic; ties broken toward the leftmost grid minimizer.
ScalarMin minimize_scalar(const Fn& f, double lo, double hi, int grid = 64);

}  // namespace hardylab
