#include "hardylab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardylab/hardy.hpp"

namespace hardylab::transfer {

TransportPair::TransportPair(ModelManifold m) : m_(std::move(m)) {}

TransportPair transport_map(const ModelManifold& m) { return TransportPair(m); }

double TransportPair::r_to_rho(double r) const {
    if (!(r >= 0.0)) throw std::invalid_argument("r_to_rho: r must be >= 0");
    if (r == 0.0) return 0.0;
    const int N = m_.dim();
    return std::pow(N * m_.volume(r) / m_.sphere_area(), 1.0 / N);
}

double TransportPair::rho_to_r(double rho) const {
    if (!(rho >= 0.0)) throw std::invalid_argument("rho_to_r: rho must be >= 0");
    if (rho == 0.0) return 0.0;
    const int N = m_.dim();
    return m_.inverse_volume(m_.sphere_area() * std::pow(rho, N) / N);
}

double TransportPair::h(double r) const {
    if (r <= 0.0) return 1.0;
    return r_to_rho(r) / m_.psi(r);
}

SectorFunction transport_function(const SectorFunction& f) {
    const ModelManifold& m = f.manifold();
    const int N = m.dim();
    ModelManifold flat(N, WarpingSpec::euclidean());
    if (m.is_euclidean()) return SectorFunction(flat, f.sectors());

    TransportPair T(m);
    std::vector<Sector> out;
    for (const auto& sec : f.sectors()) {
        if (sec.profile.is_zero()) {
            out.push_back({sec.weight, RadialProfile::zero()});
            continue;
        }
        const RadialProfile prof = sec.profile;
        const ModelManifold mm = m;
        Fn warp = [mm, N](double rho) {
            if (rho <= 0.0) return 0.0;
            return mm.inverse_volume(mm.sphere_area() * std::pow(rho, N) / N);
        };
        Fn unwarp = [mm, N](double r) {
            if (r <= 0.0) return 0.0;
            return std::pow(N * mm.volume(r) / mm.sphere_area(), 1.0 / N);
        };
        Fn slope;
        if (prof.has_analytic_slope())
            slope = [mm, prof, warp, N](double rho) {
                if (rho <= 0.0) return 0.0;
                const double r = warp(rho);
                // psi(r)^{N-1} dr = rho^{N-1} drho
                const double drdrho =
                    std::pow(rho / mm.psi(r), N - 1) * (r > 0.0 ? 1.0 : 1.0);
                return prof.slope(r) * drdrho;
            };
        out.push_back(
            {sec.weight, RadialProfile::composed_with_radius_map(prof, warp, unwarp, slope)});
    }
    return SectorFunction(flat, std::move(out));
}

double alvino_constant(int N) {
    if (N < 3) throw std::invalid_argument("alvino_constant: N must be >= 3");
    return 2.0 / (N - 2.0) * std::pow(std::tgamma(1.0 + 0.5 * N), 1.0 / N) /
           std::sqrt(std::numbers::pi);
}

EmbeddingReport embedding_ratio(const SectorFunction& u) {
    const int N = u.manifold().dim();
    const double p = 2.0 * N / (N - 2.0);
    const double en = dirichlet_energy(u);
    if (!(en > 0.0) || !std::isfinite(en))
        throw std::invalid_argument(
            "embedding_ratio: Dirichlet energy must be finite and positive");
    EmbeddingReport rep;
    rep.sharp_constant = alvino_constant(N);
    const double norm = lorentz_norm(u, p, 2.0);
    if (std::isinf(norm)) {
        rep.divergent_norm = true;
        rep.ratio = kInf;
        rep.gap = -kInf;
        return rep;
    }
    rep.ratio = norm / std::sqrt(en);
    rep.gap = rep.sharp_constant - rep.ratio;
    return rep;
}

double scaling_sequence_ratio(const ModelManifold& m, const RadialProfile& u_flat,
                              int k) {
    if (k < 1) throw std::invalid_argument("scaling_sequence_ratio: k must be >= 1");
    if (!std::isfinite(u_flat.support()) || u_flat.is_zero())
        throw std::invalid_argument(
            "scaling_sequence_ratio: profile must be compactly supported, nonzero");
    const int N = m.dim();
    const double p = 2.0 * N / (N - 2.0);
    const ModelManifold mm = m;
    const RadialProfile uf = u_flat;
    const double kk = k;
    // f_k(r) = u(k rho(r)); the substitution psi^{N-1} dr = rho^{N-1} drho
    // gives the slope factor
    Fn warp = [mm, N, kk](double r) {
        if (r <= 0.0) return 0.0;
        return kk * std::pow(N * mm.volume(r) / mm.sphere_area(), 1.0 / N);
    };
    Fn unwarp = [mm, N, kk](double x) {
        if (x <= 0.0) return 0.0;
        return mm.inverse_volume(mm.sphere_area() * std::pow(x / kk, N) / N);
    };
    Fn slope;
    if (u_flat.has_analytic_slope())
        slope = [mm, uf, warp, N, kk](double r) {
            if (r <= 0.0) return 0.0;
            const double x = warp(r);
            if (x <= 0.0) return 0.0;
            const double rho = x / kk;
            const double drho_dr = std::pow(mm.psi(r) / rho, N - 1);
            return uf.slope(x) * kk * drho_dr;
        };
    RadialProfile fk = RadialProfile::composed_with_radius_map(uf, warp, unwarp, slope);
    auto ufk = SectorFunction::radial(m, fk);
    const double num = lorentz_norm(ufk, p, 2.0);
    const double den = std::sqrt(dirichlet_energy(ufk));
    return num / den;
}

std::pair<double, double> weighted_euclidean_hardy_check(int N, const Fn& w,
                                                         const RadialProfile& u) {
    if (N < 3) throw std::invalid_argument("weighted_euclidean_hardy_check: N >= 3");
    if (u.is_zero()) return {0.0, 0.0};
    const double omega = 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
    const double ch = hardy::hardy_constant(N);
    const RadialProfile f = u;
    Fn lhs_f = [f, w, N](double r) {
        if (r <= 0.0) return 0.0;
        const double v = f(r);
        if (v == 0.0) return 0.0;
        return v * v * std::pow(r, N - 3.0) * w(r);
    };
    Fn rhs_f = [f, w, N](double r) {
        if (r <= 0.0) return 0.0;
        const double d = f.slope(r);
        if (d == 0.0) return 0.0;
        return d * d * std::pow(r, N - 1.0) * w(r);
    };
    const double lhs = ch * omega * halfline_integral(lhs_f, f.support(), f.breakpoints());
    const double rhs = omega * halfline_integral(rhs_f, f.support(), f.breakpoints());
    return {lhs, rhs};
}

std::pair<double, double> manifold_to_euclid_deficit(const SectorFunction& u) {
    const ModelManifold& m = u.manifold();
    const int N = m.dim();
    const double ch = hardy::hardy_constant(N);
    const double omega = m.sphere_area();
    const double manifold_deficit = dirichlet_energy(u) - ch * hardy_term(u);

    DecreasingProfile phi = hardy::to_euclidean_profile(m, decreasing_rearrangement(u));
    // F(x) = phi(omega |x|^N / N) on flat space, weight w = psi(|x|)/|x|
    const ModelManifold mm = m;
    const DecreasingProfile ph = phi;
    Fn value = [ph, omega, N](double x) { return ph(omega * std::pow(x, N) / N); };
    Fn slope = [ph, omega, N](double x) {
        if (x <= 0.0) return 0.0;
        return ph.slope(omega * std::pow(x, N) / N) * omega * std::pow(x, N - 1.0);
    };
    std::vector<double> breaks;
    for (double b : ph.breakpoints())
        if (b > 0.0 && std::isfinite(b)) breaks.push_back(std::pow(N * b / omega, 1.0 / N));
    const double sb = ph.support_bound();
    const double support = std::isfinite(sb) ? std::pow(N * sb / omega, 1.0 / N) : kInf;

    Fn grad_f = [mm, slope, N](double x) {
        if (x <= 0.0) return 0.0;
        const double d = slope(x);
        if (d == 0.0) return 0.0;
        const double w = mm.psi(x) / x;
        return d * d * std::pow(x, N - 1.0) * std::pow(w, N - 1.0);
    };
    Fn hard_f = [mm, value, N](double x) {
        if (x <= 0.0) return 0.0;
        const double v = value(x);
        if (v == 0.0) return 0.0;
        const double w = mm.psi(x) / x;
        return v * v * std::pow(x, N - 3.0) * std::pow(w, N - 1.0);
    };
    const double flat_grad = omega * halfline_integral(grad_f, support, breaks);
    const double flat_hard = omega * halfline_integral(hard_f, support, breaks);
    return {manifold_deficit, flat_grad - ch * flat_hard};
}

std::pair<double, double> euclid_to_manifold_deficit(const ModelManifold& m,
                                                     const SectorFunction& u_flat) {
    if (!u_flat.manifold().is_euclidean())
        throw std::invalid_argument("euclid_to_manifold_deficit: input must be flat");
    if (u_flat.manifold().dim() != m.dim())
        throw std::invalid_argument("euclid_to_manifold_deficit: dimension mismatch");
    const int N = m.dim();
    const double ch = hardy::hardy_constant(N);
    const double omega = m.sphere_area();
    const double flat_deficit = dirichlet_energy(u_flat) - ch * hardy_term(u_flat);

    // on flat space the rearrangement variable is already the Euclidean volume
    DecreasingProfile phi = decreasing_rearrangement(u_flat);
    const ModelManifold mm = m;
    const DecreasingProfile ph = phi;
    // F(r) = phi(omega r^N / N) on the manifold, weight Psi(r)^{N-1} = (r/psi)^{N-1}
    Fn value = [ph, omega, N](double r) { return ph(omega * std::pow(r, N) / N); };
    Fn slope = [ph, omega, N](double r) {
        if (r <= 0.0) return 0.0;
        return ph.slope(omega * std::pow(r, N) / N) * omega * std::pow(r, N - 1.0);
    };
    std::vector<double> breaks;
    for (double b : ph.breakpoints())
        if (b > 0.0 && std::isfinite(b)) breaks.push_back(std::pow(N * b / omega, 1.0 / N));
    const double sb = ph.support_bound();
    const double support = std::isfinite(sb) ? std::pow(N * sb / omega, 1.0 / N) : kInf;

    Fn grad_f = [mm, slope, N](double r) {
        if (r <= 0.0) return 0.0;
        const double d = slope(r);
        if (d == 0.0) return 0.0;
        const double ps = mm.psi(r);
        return d * d * std::pow(r / ps, N - 1.0) * std::pow(ps, N - 1.0);
    };
    Fn hard_f = [mm, value, N](double r) {
        if (r <= 0.0) return 0.0;
        const double v = value(r);
        if (v == 0.0) return 0.0;
        const double ps = mm.psi(r);
        return v * v / (r * r) * std::pow(r / ps, N - 1.0) * std::pow(ps, N - 1.0);
    };
    const double man_grad = omega * halfline_integral(grad_f, support, breaks);
    const double man_hard = omega * halfline_integral(hard_f, support, breaks);
    return {flat_deficit, man_grad - ch * man_hard};
}

std::pair<double, double> weighted_manifold_hardy_check(const ModelManifold& m,
                                                        const RadialProfile& u) {
    if (u.is_zero()) return {0.0, 0.0};
    const int N = m.dim();
    const double ch = hardy::hardy_constant(N);
    const double omega = m.sphere_area();
    const ModelManifold mm = m;
    const RadialProfile f = u;
    Fn lhs_f = [mm, f, N](double r) {
        if (r <= 0.0) return 0.0;
        const double v = f(r);
        if (v == 0.0) return 0.0;
        const double ps = mm.psi(r);
        return v * v / (r * r) * std::pow(r / ps, N - 1.0) * std::pow(ps, N - 1.0);
    };
    Fn rhs_f = [mm, f, N](double r) {
        if (r <= 0.0) return 0.0;
        const double d = f.slope(r);
        if (d == 0.0) return 0.0;
        const double ps = mm.psi(r);
        return d * d * std::pow(r / ps, N - 1.0) * std::pow(ps, N - 1.0);
    };
    const double lhs = ch * omega * halfline_integral(lhs_f, f.support(), f.breakpoints());
    const double rhs = omega * halfline_integral(rhs_f, f.support(), f.breakpoints());
    return {lhs, rhs};
}

}  // namespace hardylab::transfer
