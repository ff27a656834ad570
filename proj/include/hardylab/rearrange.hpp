#pragma once

#include <vector>

#include "hardylab/manifold.hpp"
#include "hardylab/profile.hpp"

namespace hardylab {

/// One angular sector: a chunk of angular measure carrying a radial profile.
struct Sector {
    double weight = 0.0;  // angular measure; sector weights sum to omega_N
    RadialProfile profile;
};

/// Finitely many radial profiles attached to angular sectors of the unit
/// sphere. Radial functions are the single-sector special case.
class SectorFunction {
public:
    SectorFunction(ModelManifold m, std::vector<Sector> sectors);
    static SectorFunction radial(ModelManifold m, RadialProfile f);

    const ModelManifold& manifold() const { return m_; }
    const std::vector<Sector>& sectors() const { return sectors_; }
    bool radial() const { return sectors_.size() == 1; }
    bool radial_nonincreasing() const;
    bool is_zero() const;
    double sup_value() const;       // may be +inf
    double support_volume() const;  // measure of {u > 0}; may be +inf
    double support_radius() const;  // may be +inf
    const RadialProfile& profile() const;  // radial case only

    SectorFunction scaled(double c) const;

private:
    ModelManifold m_;
    std::vector<Sector> sectors_;
};

/// Distribution function mu(t) = |{ |u| > t }|, t > 0. Superlevel sets are
/// resolved exactly on each monotone piece of each sector profile.
double distribution(const SectorFunction& u, double t);

/// u*(s) = inf{ t > 0 : mu(t) <= s }.
DecreasingProfile decreasing_rearrangement(const SectorFunction& u);

/// The radial function r -> u*(V(r)), equimeasurable with u.
SectorFunction schwarz(const SectorFunction& u);

/// Classical Lorentz quasinorm; q may be kInf. Returns +inf when divergent.
double lorentz_norm(const SectorFunction& u, double p, double q);

/// Lorentz-type quasinorm with weight G(s)^{N/p} in place of s^{1/p}.
double lorentz_type_norm(const SectorFunction& u, double p, double q);

/// (int u*(s)^q dtheta(s))^{1/q} with theta(s) = (omega/2) G(s)^3 psi(G(s))^{N-1},
/// computed through the substitution s = V(r).
double lambda_theta_norm(const SectorFunction& u, double q);

/// Sector-wise radial Dirichlet energy int |du/dr|^2 dv_g. +inf when divergent.
double dirichlet_energy(const SectorFunction& u);

/// int u^2 / r^2 dv_g. +inf when divergent.
double hardy_term(const SectorFunction& u);

/// Pointwise sum; requires identical manifolds and conforming sector weights.
SectorFunction add(const SectorFunction& u, const SectorFunction& v);

/// |u - U_a| sector-wise, U_a(r) = a r^{(2-N)/2}.
SectorFunction subtract_extremal(const SectorFunction& u, double a);

}  // namespace hardylab
