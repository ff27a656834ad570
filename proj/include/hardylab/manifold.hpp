#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hardylab/numerics.hpp"

namespace hardylab {

enum class WarpKind { euclidean, hyperbolic, scaled_sinh, tabulated };

const char* to_string(WarpKind k);

/// Warping function psi of a rotationally symmetric model manifold.
/// Analytic evaluators for the first three kinds; monotone cubic interpolation
/// with finite-difference second derivatives for tabulated data.
class WarpingSpec {
public:
    WarpingSpec() = default;  // euclidean

    static WarpingSpec euclidean();
    static WarpingSpec hyperbolic();
    static WarpingSpec scaled_sinh(double lambda);  // sinh(lambda r)/lambda
    /// Strictly increasing (r, psi(r)) samples starting at r = 0.
    static WarpingSpec tabulated(std::vector<std::pair<double, double>> samples);

    WarpKind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

    double psi(double r) const;
    double dpsi(double r) const;
    double ddpsi(double r) const;

private:
    WarpKind kind_ = WarpKind::euclidean;
    double lambda_ = 1.0;
    std::vector<std::pair<double, double>> samples_;
    std::vector<double> tangents_;  // monotone cubic slopes for tabulated kind
};

struct CheckEntry {
    std::string name;
    double violation = 0.0;
    bool pass = true;
};

struct ValidationReport {
    std::vector<CheckEntry> checks;
    bool pass = true;
    double tolerance = 0.0;
};

/// Grid checks of the warping axioms: psi(0)=0, psi'(0)=1, convexity,
/// psi >= r and psi'/psi >= 1/r. Tolerance 1e-8 (1e-5 for tabulated kind).
ValidationReport validate_warping(const WarpingSpec& spec, double r_max, int grid_points);

/// An N-dimensional Cartan-Hadamard model manifold. Immutable and cheap to
/// copy; internal volume anchors are built once at construction, so all
/// methods are safe to call concurrently.
class ModelManifold {
public:
    ModelManifold(int dim, WarpingSpec warping);

    int dim() const;
    double sphere_area() const;  // omega_N
    const WarpingSpec& warping() const;
    bool is_euclidean() const;

    double psi(double r) const;
    double dpsi(double r) const;
    double ddpsi(double r) const;

    /// V(r), the Riemannian volume of the geodesic ball of radius r.
    double volume(double r) const;
    /// V'(r) = omega_N psi(r)^{N-1}.
    double volume_derivative(double r) const;
    /// G(s) = V^{-1}(s), bracketed on [0, (N s / omega_N)^{1/N}] and Newton-refined.
    double inverse_volume(double s) const;

    /// Jacobian distortion J(t) = (psi(x)/x)^{N-1} with x = (N t/omega_N)^{1/N}.
    /// The argument t is a Euclidean ball volume.
    double jacobian(double t) const;
    double jacobian_derivative(double t) const;

    /// (K_rad, K_perp) = (-psi''/psi, -((psi')^2 - 1)/psi^2) at radius r > 0.
    std::pair<double, double> sectional_curvatures(double r) const;

    /// (r^3 psi^{N-1})^{(N-2)/(N+2)} / int_0^r psi(t)^{N-1} t^{-2} dt.
    double complete_lemma_ratio(double r) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace hardylab
