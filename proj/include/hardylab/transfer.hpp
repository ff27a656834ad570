#pragma once

#include <utility>

#include "hardylab/rearrange.hpp"

namespace hardylab::transfer {

/// Volume-matching radial map onto flat space: rho(r) = (N V(r)/omega_N)^{1/N},
/// its inverse, and the contraction factor h(r) = rho(r)/psi(r) <= 1.
class TransportPair {
public:
    explicit TransportPair(ModelManifold m);
    const ModelManifold& manifold() const { return m_; }
    double r_to_rho(double r) const;
    double rho_to_r(double rho) const;
    double h(double r) const;

private:
    ModelManifold m_;
};

TransportPair transport_map(const ModelManifold& m);

/// S(f) = f o T^{-1}: each radial profile composed with rho_to_r; sector
/// weights preserved. The result lives on the Euclidean manifold of the same
/// dimension.
SectorFunction transport_function(const SectorFunction& f);

/// Sharp Sobolev-Lorentz constant S_{N,2*,2} = 2/(N-2) Gamma(1+N/2)^{1/N}/sqrt(pi).
double alvino_constant(int N);

struct EmbeddingReport {
    double ratio = 0.0;          // ||u||_{L^{2*,2}} / ||u||_{D^{1,2}}
    double sharp_constant = 0.0; // S_{N,2*,2}
    double gap = 0.0;            // sharp_constant - ratio
    bool divergent_norm = false;
};

EmbeddingReport embedding_ratio(const SectorFunction& u);

/// ||f_k||_{L^{2*,2}(M)} / ||f_k||_{D^{1,2}(M)} for f_k = S^{-1}(u(k .)),
/// u_flat a compactly supported radial profile on flat space.
double scaling_sequence_ratio(const ModelManifold& m, const RadialProfile& u_flat,
                              int k);

/// lhs = C_H int u^2 |x|^{-2} w dx, rhs = int |grad u|^2 w dx for a
/// nondecreasing radial weight w (flat space, radial reduction).
std::pair<double, double> weighted_euclidean_hardy_check(int N, const Fn& w,
                                                         const RadialProfile& u);

/// Manifold Hardy deficit of u versus the weighted flat deficit of the
/// transplanted profile F, weight (psi(|x|)/|x|)^{N-1}.
std::pair<double, double> manifold_to_euclid_deficit(const SectorFunction& u);

/// Flat Hardy deficit of u versus the weighted manifold deficit of the
/// transplanted profile, weight (r/psi(r))^{N-1}.
std::pair<double, double> euclid_to_manifold_deficit(const ModelManifold& m,
                                                     const SectorFunction& u_flat);

/// lhs = C_H int u^2 r^{-2} Psi^{N-1} dv, rhs = int |grad u|^2 Psi^{N-1} dv
/// with Psi(r) = r/psi(r), for a radial decreasing profile on m.
std::pair<double, double> weighted_manifold_hardy_check(const ModelManifold& m,
                                                        const RadialProfile& u);

}  // namespace hardylab::transfer
