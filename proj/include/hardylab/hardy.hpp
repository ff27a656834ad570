#pragma once

#include <utility>

#include "hardylab/rearrange.hpp"

namespace hardylab::hardy {

/// Sharp constant (N-2)^2/4 of the Hardy inequality.
double hardy_constant(int N);

/// Gradient energy, Hardy term and their gap for a radial function.
struct DeficitBreakdown {
    double grad_energy = 0.0;  // int |du/dr|^2 dv_g
    double hardy_term = 0.0;   // int u^2/r^2 dv_g
    double deficit = 0.0;      // grad_energy - C_H * hardy_term
    double quad_error = 0.0;
};

DeficitBreakdown hardy_deficit(const SectorFunction& u);

/// grad_energy / hardy_term; +inf tags propagate.
double rayleigh_quotient(const SectorFunction& u);

/// The virtual extremal profile U_a(r) = a r^{(2-N)/2}.
RadialProfile extremal_profile(int N, double a);

/// phi(rho) := u*(s) under the volume matching G(s) = (N rho / omega_N)^{1/N};
/// rho is the Euclidean ball volume at the matched radius.
DecreasingProfile to_euclidean_profile(const ModelManifold& m,
                                       const DecreasingProfile& ustar);

/// lhs = (1/2*)^2 int phi^2 rho^{-2/N} J drho, rhs = int phi'^2 rho^{2/N'} J drho.
std::pair<double, double> weighted_1d_deficit(const ModelManifold& m,
                                              const DecreasingProfile& phi);

/// inf_{a>=0} sup_rho rho^{1/2*} |phi - a rho^{-1/2*}| / denom. The pointwise
/// supremum dominates the weak Lorentz norm, so this is an upper bound of the
/// Marcinkiewicz distance; the proved bound delta <= 2 D^{1/4} holds for it.
double marcinkiewicz_distance(const ModelManifold& m, const DecreasingProfile& phi,
                              double denom);

struct StabilityChecks {
    double boundary_left = 0.0;      // phi^2 rho^{1-2/N} J at the small-rho probe
    double boundary_right = 0.0;     // same at the large-rho probe
    double identity_residual = 0.0;  // integration-by-parts identity, relative
    double first_term = 0.0;         // 2* int (-phi') phi rho^{1-2/N} J, must be >= 1
    double tau_energy = 0.0;         // int rho tau'^2 J
    double tau_energy_bound = 0.0;   // D / (2*)^2
};

struct StabilityReport {
    double I = 0.0;      // normalized gradient-side integral
    double D = 0.0;      // (2*)^2 I - 1
    double delta = 0.0;  // distance to the 1D extremal family
    bool bound_ok = false;
    double nu = 0.0;        // filled by nu_distance when composed
    double d_M = 0.0;       // filled by stability_distance when composed
    double implied_C = 0.0; // filled by verify_stability_theorem when composed
    StabilityChecks checks;
};

/// Full stability chain for a nonincreasing, locally absolutely continuous
/// phi vanishing at infinity: normalizes phi, computes I, D, delta, and the
/// proved-identity checks, and evaluates delta <= 2 D^{1/4}.
StabilityReport stability_pipeline(const ModelManifold& m, const DecreasingProfile& phi);

/// inf_{a>=0} sup_s G(s)^{(N-2)/2} |u*(s) - a G(s)^{(2-N)/2}| over the
/// normalization (int u*^2 G^{-2} ds)^{1/2}.
double nu_distance(const ModelManifold& m, const DecreasingProfile& ustar);

/// Conversion factor between the two distance coordinates:
/// delta(phi) = (omega_N/N)^{1/2* + 1/N} nu(u*).
double nu_to_delta_factor(const ModelManifold& m);

/// d_M(u) = inf_a ||u - U_a||_{tilde 2*,inf} / ||u||_{D^{1,2}}, a scanned over
/// [-a_hi, a_hi].
double stability_distance(const SectorFunction& u);

/// deficit / (C_H * hardy_term * d_M^{4N/(N-2)}); +inf when d_M = 0.
double verify_stability_theorem(const SectorFunction& u);

/// Relative residual of the Hardy identity with the Bessel-pair remainder for
/// smooth radial u supported away from the pole.
double hardy_identity_residual(const SectorFunction& u);

/// (H(u#) - H(u)) * H(u#)^{(N+2)/(N-2)} / (int |u - u#|^{2*})^2 with
/// H(v) = int v^2/r^2 dv_g; +inf when u is already radial decreasing.
double hl_stability_residual(const SectorFunction& u);

/// The sharpness family: r^{(N-2)/2+eps} on [0,1], r^{(2-N)/2-eps} beyond.
RadialProfile sharpness_family(int N, double eps);

/// Rayleigh quotient of the pole-rescaled, outer-truncated sharpness family;
/// used on manifolds where the pure family has divergent integrals.
double sharpness_quotient(const ModelManifold& m, double eps, double scale,
                          double cutoff);

}  // namespace hardylab::hardy
