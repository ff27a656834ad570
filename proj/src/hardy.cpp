#include "hardylab/hardy.hpp"

#include <algorithm>
#include <cmath>

namespace hardylab::hardy {
namespace {

double two_star(int N) { return 2.0 * N / (N - 2.0); }

// Value range of g over a log grid on [1e-8, min(support,1e8)] plus landmark
// nodes, with golden polish of the maximum. A zero is appended when g
// vanishes beyond a finite support.
struct ValueRange {
    double max = 0.0;
    double min = kInf;
    double argmax = 0.0;
};

ValueRange scan_range(const Fn& g, double support, const std::vector<double>& breaks) {
    ValueRange out;
    const double lo = 1e-8;
    const double hi = std::isfinite(support) ? std::min(support, 1e8) : 1e8;
    std::vector<double> xs;
    const int n = std::max(64, int(24 * std::log10(std::max(hi / lo, 10.0))));
    for (int i = 0; i <= n; ++i) xs.push_back(lo * std::pow(hi / lo, double(i) / n));
    for (double b : breaks)
        if (b > lo && b < hi) {
            xs.push_back(b * (1.0 - 1e-9));
            xs.push_back(b);
        }
    if (!std::isfinite(support))
        for (double x : {1e10, 1e12}) xs.push_back(x);
    for (double x : xs) {
        const double v = g(x);
        if (!std::isfinite(v)) continue;
        if (v > out.max) {
            out.max = v;
            out.argmax = x;
        }
        out.min = std::min(out.min, v);
    }
    if (std::isfinite(support)) out.min = 0.0;  // g vanishes beyond the support
    if (out.argmax == 0.0) return out;
    const double invphi = 0.6180339887498949;
    const double step = std::log(hi / lo) / n + 1e-3;
    double a = std::log(out.argmax) - step, b = std::log(out.argmax) + step;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = -g(std::exp(x1)), f2 = -g(std::exp(x2));
    for (int it = 0; it < 80; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = -g(std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = -g(std::exp(x2));
        }
    }
    out.max = std::max(out.max, std::max(-f1, -f2));
    return out;
}

// inf over a in [0, 2 max] of the sup of |g - a| over the scanned value set
double family_distance(const ValueRange& vr) {
    if (vr.max == 0.0) return 0.0;
    const double lo_val = std::min(vr.min, vr.max);
    Fn objective = [&vr, lo_val](double a) {
        return std::max(std::fabs(vr.max - a), std::fabs(a - lo_val));
    };
    return minimize_scalar(objective, 0.0, 2.0 * vr.max, 64).value;
}

}  // namespace

double hardy_constant(int N) {
    if (N < 3) throw std::invalid_argument("hardy_constant: N must be >= 3");
    return 0.25 * (N - 2.0) * (N - 2.0);
}

DeficitBreakdown hardy_deficit(const SectorFunction& u) {
    if (!u.radial())
        throw std::invalid_argument("hardy_deficit: requires a radial function");
    DeficitBreakdown out;
    out.grad_energy = dirichlet_energy(u);
    out.hardy_term = hardy_term(u);
    const double ch = hardy_constant(u.manifold().dim());
    out.deficit = out.grad_energy - ch * out.hardy_term;
    if (std::isfinite(out.grad_energy) && std::isfinite(out.hardy_term))
        out.quad_error = 1e-10 * (out.grad_energy + ch * out.hardy_term) + 1e-300;
    else
        out.quad_error = kInf;
    return out;
}

double rayleigh_quotient(const SectorFunction& u) {
    const double h = hardy_term(u);
    if (!(h > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero Hardy term");
    return dirichlet_energy(u) / h;
}

RadialProfile extremal_profile(int N, double a) { return RadialProfile::extremal(N, a); }

DecreasingProfile to_euclidean_profile(const ModelManifold& m,
                                       const DecreasingProfile& ustar) {
    if (ustar.is_zero()) return DecreasingProfile();
    const ModelManifold mm = m;
    const int N = m.dim();
    const double omega = m.sphere_area();
    const DecreasingProfile us = ustar;
    Fn eval = [mm, us, N, omega](double rho) {
        if (rho <= 0.0) return us(0.0);
        return us(mm.volume(std::pow(N * rho / omega, 1.0 / N)));
    };
    Fn slope;
    if (us.has_analytic_slope())
        slope = [mm, us, N, omega](double rho) {
            if (rho <= 0.0) return 0.0;
            const double s = mm.volume(std::pow(N * rho / omega, 1.0 / N));
            return us.slope(s) * mm.jacobian(rho);
        };
    auto to_rho = [&mm, N, omega](double s) {
        const double r = mm.inverse_volume(s);
        return omega * std::pow(r, N) / N;
    };
    std::vector<double> breaks;
    for (double b : us.breakpoints())
        if (b > 0.0 && std::isfinite(b)) breaks.push_back(to_rho(b));
    const double sb = us.support_bound();
    const double support = std::isfinite(sb) ? to_rho(sb) : kInf;
    return DecreasingProfile::from_functions(eval, slope, support, breaks,
                                             us.sup_value());
}

namespace {

// int phi^2 rho^{-2/N} J drho (the mass side of the 1D inequality)
double phi_mass(const ModelManifold& m, const DecreasingProfile& phi) {
    const double N = m.dim();
    const ModelManifold mm = m;
    const DecreasingProfile p = phi;
    Fn f = [mm, p, N](double rho) {
        if (rho <= 0.0) return 0.0;
        const double v = p(rho);
        if (v <= 0.0) return 0.0;
        return v * v * std::pow(rho, -2.0 / N) * mm.jacobian(rho);
    };
    return halfline_integral(f, phi.support_bound(), phi.breakpoints(), 1e-10, 2.0 / N);
}

// int phi'^2 rho^{2/N'} J drho (the gradient side)
double phi_grad(const ModelManifold& m, const DecreasingProfile& phi) {
    const double N = m.dim();
    const double e = 2.0 * (N - 1.0) / N;
    const ModelManifold mm = m;
    const DecreasingProfile p = phi;
    Fn f = [mm, p, e](double rho) {
        if (rho <= 0.0) return 0.0;
        const double d = p.slope(rho);
        if (d == 0.0) return 0.0;
        return d * d * std::pow(rho, e) * mm.jacobian(rho);
    };
    return halfline_integral(f, phi.support_bound(), phi.breakpoints(), 1e-10);
}

}  // namespace

std::pair<double, double> weighted_1d_deficit(const ModelManifold& m,
                                              const DecreasingProfile& phi) {
    if (phi.is_zero()) return {0.0, 0.0};
    const double inv2s = 1.0 / two_star(m.dim());
    return {inv2s * inv2s * phi_mass(m, phi), phi_grad(m, phi)};
}

double marcinkiewicz_distance(const ModelManifold& m, const DecreasingProfile& phi,
                              double denom) {
    if (!(denom > 0.0))
        throw std::invalid_argument("marcinkiewicz_distance: denom must be > 0");
    if (phi.is_zero()) return 0.0;
    const double inv2s = 1.0 / two_star(m.dim());
    const DecreasingProfile p = phi;
    Fn tau = [p, inv2s](double rho) { return std::pow(rho, inv2s) * p(rho); };
    ValueRange vr = scan_range(tau, phi.support_bound(), phi.breakpoints());
    return family_distance(vr) / denom;
}

StabilityReport stability_pipeline(const ModelManifold& m, const DecreasingProfile& phi) {
    if (phi.is_zero())
        throw std::invalid_argument("stability_pipeline: phi must be nonzero");
    const int N = m.dim();
    const double ts = two_star(N);
    const double A = phi_mass(m, phi);
    if (!(A > 0.0) || !std::isfinite(A))
        throw std::invalid_argument(
            "stability_pipeline: normalization integral must be finite and positive");
    const DecreasingProfile pn = phi.scaled(1.0 / std::sqrt(A));

    StabilityReport rep;
    rep.I = phi_grad(m, pn);
    rep.D = ts * ts * rep.I - 1.0;
    rep.delta = marcinkiewicz_distance(m, pn, 1.0);

    const ModelManifold mm = m;
    const double sb = pn.support_bound();

    // boundary decay of phi^2 rho^{1-2/N} J at both ends
    Fn bdry = [mm, pn, N](double rho) {
        const double v = pn(rho);
        return v * v * std::pow(rho, 1.0 - 2.0 / N) * mm.jacobian(rho);
    };
    rep.checks.boundary_left = bdry(1e-10);
    rep.checks.boundary_right = bdry(std::isfinite(sb) ? sb * (1.0 + 1e-12) : 1e10);

    // integration-by-parts identity:
    //   int phi^2 rho^{-2/N} J = 2* int (-phi') phi rho^{1-2/N} J
    //                            - N/(N-2) int phi^2 rho^{1-2/N} J'
    Fn cross = [mm, pn, N](double rho) {
        if (rho <= 0.0) return 0.0;
        const double v = pn(rho);
        const double d = pn.slope(rho);
        if (v <= 0.0 || d == 0.0) return 0.0;
        return -d * v * std::pow(rho, 1.0 - 2.0 / N) * mm.jacobian(rho);
    };
    const double first = ts * halfline_integral(cross, sb, pn.breakpoints(), 1e-10);
    double second = 0.0;
    if (!m.is_euclidean()) {
        Fn jp = [mm, pn, N](double rho) {
            if (rho <= 0.0) return 0.0;
            const double v = pn(rho);
            if (v <= 0.0) return 0.0;
            return v * v * std::pow(rho, 1.0 - 2.0 / N) * mm.jacobian_derivative(rho);
        };
        second = N / (N - 2.0) *
                 halfline_integral(jp, sb, pn.breakpoints(), 1e-10, 1.0 - 2.0 / N);
    }
    rep.checks.first_term = first;
    rep.checks.identity_residual = std::fabs(1.0 - (first - second));

    // tau(rho) = rho^{1/2*} phi(rho): int rho tau'^2 J <= D/(2*)^2
    const double inv2s = 1.0 / ts;
    Fn tau_en = [mm, pn, inv2s](double rho) {
        if (rho <= 0.0) return 0.0;
        const double v = pn(rho);
        const double d = pn.slope(rho);
        const double tp =
            inv2s * std::pow(rho, inv2s - 1.0) * v + std::pow(rho, inv2s) * d;
        return rho * tp * tp * mm.jacobian(rho);
    };
    rep.checks.tau_energy =
        halfline_integral(tau_en, sb, pn.breakpoints(), 1e-10, 1.0 - 2.0 * inv2s);
    rep.checks.tau_energy_bound = std::max(rep.D, 0.0) * inv2s * inv2s;

    rep.bound_ok = rep.delta <= 2.0 * std::pow(std::max(rep.D, 0.0), 0.25) + 1e-6;
    return rep;
}

double nu_distance(const ModelManifold& m, const DecreasingProfile& ustar) {
    if (ustar.is_zero()) throw std::invalid_argument("nu_distance: zero rearrangement");
    const int N = m.dim();
    const double gamma = 0.5 * (N - 2.0);
    const ModelManifold mm = m;
    const DecreasingProfile us = ustar;
    Fn den_f = [mm, us](double s) {
        if (s <= 0.0) return 0.0;
        const double v = us(s);
        if (v <= 0.0) return 0.0;
        const double G = mm.inverse_volume(s);
        return v * v / (G * G);
    };
    const double den2 = halfline_integral(den_f, ustar.support_bound(),
                                          ustar.breakpoints(), 1e-10, 2.0 / N);
    if (!(den2 > 0.0) || !std::isfinite(den2))
        throw std::invalid_argument("nu_distance: normalization must be finite, positive");
    Fn sigma = [mm, us, gamma](double s) {
        if (s <= 0.0) return 0.0;
        return std::pow(mm.inverse_volume(s), gamma) * us(s);
    };
    ValueRange vr = scan_range(sigma, ustar.support_bound(), ustar.breakpoints());
    return family_distance(vr) / std::sqrt(den2);
}

double nu_to_delta_factor(const ModelManifold& m) {
    const int N = m.dim();
    // (omega/N)^{1/2*} from the level-set substitution times (omega/N)^{1/N}
    // from the mass substitution
    const double expo = 1.0 / two_star(N) + 1.0 / N;
    return std::pow(m.sphere_area() / N, expo);
}

double stability_distance(const SectorFunction& u) {
    const int N = u.manifold().dim();
    const double p = two_star(N);
    const double den2 = dirichlet_energy(u);
    if (!(den2 > 0.0) || !std::isfinite(den2))
        throw std::invalid_argument(
            "stability_distance: Dirichlet norm must be finite and positive");
    const double a_hi = 2.0 * lorentz_type_norm(u, p, kInf);
    if (!(a_hi > 0.0) || !std::isfinite(a_hi))
        throw std::invalid_argument("stability_distance: degenerate weak norm");
    Fn objective = [&u, p](double a) {
        return lorentz_type_norm(subtract_extremal(u, a), p, kInf);
    };
    ScalarMin best = minimize_scalar(objective, -a_hi, a_hi, 64);
    return best.value / std::sqrt(den2);
}

double verify_stability_theorem(const SectorFunction& u) {
    const int N = u.manifold().dim();
    DeficitBreakdown d = hardy_deficit(u);
    if (!std::isfinite(d.deficit) || !std::isfinite(d.hardy_term) || !(d.hardy_term > 0.0))
        throw std::invalid_argument(
            "verify_stability_theorem: deficit and Hardy term must be finite");
    const double dm = stability_distance(u);
    if (dm == 0.0) return kInf;
    const double expo = 4.0 * N / (N - 2.0);
    return d.deficit / (hardy_constant(N) * d.hardy_term * std::pow(dm, expo));
}

double hardy_identity_residual(const SectorFunction& u) {
    if (!u.radial())
        throw std::invalid_argument("hardy_identity_residual: requires radial input");
    const ModelManifold& m = u.manifold();
    const RadialProfile& f = u.profile();
    if (f.is_zero()) return 0.0;
    if (!(f.pieces().front().lo > 0.0) || !std::isfinite(f.support()))
        throw std::invalid_argument(
            "hardy_identity_residual: support must avoid the pole and be compact");
    const int N = m.dim();
    const double omega = m.sphere_area();

    DeficitBreakdown d = hardy_deficit(u);
    double mid = 0.0;
    if (!m.is_euclidean()) {
        const ModelManifold mm = m;
        const RadialProfile ff = f;
        Fn middle = [mm, ff, N](double r) {
            const double v = ff(r);
            if (v <= 0.0 || r <= 0.0) return 0.0;
            const double ps = mm.psi(r);
            return (r * mm.dpsi(r) - ps) / ps * v * v * std::pow(ps, N - 1) / (r * r);
        };
        mid = omega * halfline_integral(middle, f.support(), f.breakpoints(), 1e-10);
    }
    const double lhs = d.deficit - 0.5 * (N - 1.0) * (N - 2.0) * mid;

    const double gamma = 0.5 * (N - 2.0);
    const ModelManifold mm = m;
    const RadialProfile ff = f;
    Fn rhs_f = [mm, ff, N, gamma](double r) {
        if (r <= 0.0) return 0.0;
        const double v = ff(r);
        const double dv = ff.slope(r);
        if (v == 0.0 && dv == 0.0) return 0.0;
        const double inner = gamma * std::pow(r, gamma - 1.0) * v + std::pow(r, gamma) * dv;
        return std::pow(r, 2.0 - N) * inner * inner * std::pow(mm.psi(r), N - 1);
    };
    const double rhs = omega * halfline_integral(rhs_f, f.support(), f.breakpoints(), 1e-10);
    return std::fabs(lhs - rhs) / std::max(rhs, 1.0);
}

double hl_stability_residual(const SectorFunction& u) {
    const ModelManifold& m = u.manifold();
    const int N = m.dim();
    if (u.radial_nonincreasing()) return kInf;  // u = u#, zero denominator

    const double hu = hardy_term(u);
    SectorFunction us = schwarz(u);
    const double hs = hardy_term(us);
    if (!std::isfinite(hs) || !(hs > 0.0))
        throw std::invalid_argument("hl_stability_residual: Hardy term must be finite");

    const RadialProfile sharp = us.profile();
    const double p = two_star(N);
    const ModelManifold mm = m;
    double T = 0.0;
    for (const auto& sec : u.sectors()) {
        RadialProfile diff = RadialProfile::abs_difference(
            sec.profile, [sharp](double r) { return sharp(r); }, sharp.support());
        const RadialProfile dd = diff;
        Fn f = [mm, dd, N, p](double r) {
            const double v = dd(r);
            if (v <= 0.0) return 0.0;
            return std::pow(v, p) * std::pow(mm.psi(r), N - 1);
        };
        T += sec.weight * halfline_integral(f, diff.support(), diff.breakpoints(), 1e-8);
    }
    if (T == 0.0) return kInf;
    const double gap = hs - hu;
    return gap * std::pow(hs, (N + 2.0) / (N - 2.0)) / (T * T);
}

RadialProfile sharpness_family(int N, double eps) { return RadialProfile::phi_eps(N, eps); }

double sharpness_quotient(const ModelManifold& m, double eps, double scale,
                          double cutoff) {
    if (m.is_euclidean())
        return rayleigh_quotient(
            SectorFunction::radial(m, RadialProfile::phi_eps(m.dim(), eps)));
    // the windowed family spans many decades; integrate in log radius
    const int N = m.dim();
    RadialProfile f = RadialProfile::phi_eps_windowed(N, eps, scale, cutoff);
    const ModelManifold mm = m;
    Fn grad_log = [mm, f, N](double y) {
        const double r = std::exp(y);
        const double d = f.slope(r);
        if (d == 0.0) return 0.0;
        const double t = d * std::pow(mm.psi(r), 0.5 * (N - 1));
        return t * t * r;
    };
    Fn hardy_log = [mm, f, N](double y) {
        const double r = std::exp(y);
        const double v = f(r);
        if (v <= 0.0) return 0.0;
        const double t = v * std::pow(mm.psi(r), 0.5 * (N - 1)) / r;
        return t * t * r;
    };
    const double y_lo = std::log(scale) - 60.0;
    const double y_hi = std::log(cutoff);
    QuadOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-280;
    opts.breakpoints = {std::log(scale), std::log(cutoff / 10.0)};
    const double grad = integrate(grad_log, y_lo, y_hi, opts).value;
    const double hardy = integrate(hardy_log, y_lo, y_hi, opts).value;
    return grad / hardy;
}

}  // namespace hardylab::hardy
