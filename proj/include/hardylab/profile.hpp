#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "hardylab/numerics.hpp"

namespace hardylab {

/// One strictly-monotone-or-constant stretch of a profile on the open
/// interval (lo, hi); hi may be +inf, v_lo may be +inf for profiles that
/// blow up at the pole. `inverse` (when present) maps a level strictly
/// between the endpoint values to the radius where the profile crosses it.
struct MonotonePiece {
    double lo = 0.0;
    double hi = 0.0;
    int dir = 0;  // +1 increasing, -1 decreasing, 0 constant
    double v_lo = 0.0;
    double v_hi = 0.0;
    Fn inverse;  // optional analytic inverse
};

/// Tail description beyond the last breakpoint: identically zero, or a pure
/// power c * r^{-e}.
struct TailForm {
    bool zero = true;
    double coeff = 0.0;
    double exponent = 0.0;
};

/// A nonnegative radial profile with finitely many monotone pieces.
/// Immutable; cheap to copy.
class RadialProfile {
public:
    RadialProfile();  // identically zero

    double operator()(double r) const;
    /// Radial derivative; analytic where the catalog provides it, otherwise a
    /// central-difference fallback.
    double slope(double r) const;
    bool has_analytic_slope() const;

    double support() const;  // +inf for non-compact profiles
    double sup_value() const;  // +inf for profiles unbounded at the pole
    bool nonincreasing() const;
    bool is_zero() const;
    const std::vector<double>& breakpoints() const;
    const std::vector<MonotonePiece>& pieces() const;
    const TailForm& tail() const;

    RadialProfile scaled(double c) const;  // c >= 0
    /// Pointwise power f^k, k > 0 (monotone structure is preserved).
    RadialProfile powered(double k) const;

    // --- catalog ---
    static RadialProfile zero();
    /// amplitude * exp(1 - 1/(1-(r/radius)^2)) on [0, radius); smooth bump.
    static RadialProfile bump(double amplitude, double radius);
    /// amplitude * 1_{r < radius}.
    static RadialProfile indicator(double amplitude, double radius);
    /// amplitude * (r-lo)_+^p * (hi-r)_+^q on [lo, hi]; p = 0 or q = 0 drop a factor.
    static RadialProfile power_bump(double amplitude, double lo, double hi, double p,
                                    double q);
    /// Nodes (r_i, v_i), r_i strictly increasing; constant v_0 before the first
    /// node, linear between nodes, zero after the last (v_last must be 0).
    static RadialProfile piecewise_linear(std::vector<double> r, std::vector<double> v);
    /// Monotone cubic through the nodes (custom_breakpoints catalog kind).
    static RadialProfile pchip(std::vector<std::pair<double, double>> samples);
    /// r^{(N-2)/2+eps} on [0,1], r^{(2-N)/2-eps} beyond.
    static RadialProfile phi_eps(int N, double eps);
    /// (r/scale)^{(N-2)/2+eps} on [0,scale], (r/scale)^{(2-N)/2-eps} beyond,
    /// smoothly cut to zero over the last decade before cutoff_hi.
    static RadialProfile phi_eps_windowed(int N, double eps, double scale,
                                          double cutoff_hi);
    /// a * r^{(2-N)/2} (the virtual extremal).
    static RadialProfile extremal(int N, double a);
    /// amplitude * r^exponent restricted to [window_lo, window_hi] with smooth
    /// one-decade cutoffs in log-radius at both ends.
    static RadialProfile truncated_power(double amplitude, double exponent,
                                         double window_lo, double window_hi);

    /// Pointwise sum of two profiles.
    static RadialProfile sum(const RadialProfile& f, const RadialProfile& g);
    /// |f(r) - a r^{-beta}|, beta > 0. Used for distances to the extremal family.
    static RadialProfile abs_difference_with_power(const RadialProfile& f, double a,
                                                   double beta);
    /// |f(r) - g(r)| for an arbitrary evaluator g vanishing beyond g_support.
    static RadialProfile abs_difference(const RadialProfile& f, const Fn& g,
                                        double g_support);
    /// A single nonincreasing piece given directly by evaluators (used for
    /// Schwarz rearrangements, whose level sets are balls).
    static RadialProfile from_monotone_decreasing(Fn value, Fn slope, double support,
                                                  std::vector<double> breakpoints,
                                                  double sup_value, Fn level_inverse);
    /// Profile g(x) = f(warp(x)) for a strictly increasing radius substitution
    /// warp with inverse unwarp; pieces and breakpoints map through unwarp.
    /// `slope` is the full derivative of g (analytic, supplied by the caller).
    static RadialProfile composed_with_radius_map(const RadialProfile& f, Fn warp,
                                                  Fn unwarp, Fn slope);

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit RadialProfile(std::shared_ptr<const Impl> impl);
};

/// Finds r in [piece.lo, piece.hi] where the profile crosses level t
/// (t strictly between the piece's endpoint values).
double invert_piece(const MonotonePiece& piece, const Fn& value, double t);

/// A nonincreasing right-continuous function of a measure-type variable
/// (ball volume s, or its Euclidean counterpart). Represents rearrangements
/// u*(s) and one-dimensional profiles phi(rho).
class DecreasingProfile {
public:
    DecreasingProfile();  // identically zero

    static DecreasingProfile from_functions(Fn eval, Fn slope, double support_bound,
                                            std::vector<double> breakpoints,
                                            double sup_value);
    static DecreasingProfile piecewise_linear(std::vector<double> s,
                                              std::vector<double> v);
    /// a * s^{-expo} restricted to [window_lo, window_hi] with smooth
    /// one-decade log-space cutoffs (truncated extremal in measure variable).
    static DecreasingProfile truncated_power(double a, double expo, double window_lo,
                                             double window_hi);

    double operator()(double s) const;
    double slope(double s) const;
    bool has_analytic_slope() const;
    double support_bound() const;  // +inf allowed
    double sup_value() const;      // +inf allowed
    const std::vector<double>& breakpoints() const;
    bool is_zero() const;

    DecreasingProfile scaled(double c) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    explicit DecreasingProfile(std::shared_ptr<const Impl> impl);
};

}  // namespace hardylab
