#include "hardylab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardylab {
namespace {

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool empty = true;
};

// {r in piece : value(r) > t} for t > 0; always an interval on a monotone piece.
Interval superlevel(const MonotonePiece& pc, const Fn& value, double t) {
    Interval out;
    if (pc.dir == 0) {
        if (pc.v_lo > t) out = {pc.lo, pc.hi, false};
        return out;
    }
    if (pc.dir < 0) {
        if (t >= pc.v_lo) return out;
        if (t < pc.v_hi) return Interval{pc.lo, pc.hi, false};
        const double x = invert_piece(pc, value, t);
        return Interval{pc.lo, x, false};
    }
    if (t >= pc.v_hi) return out;
    if (t < pc.v_lo) return Interval{pc.lo, pc.hi, false};
    const double x = invert_piece(pc, value, t);
    return Interval{x, pc.hi, false};
}

// Landmark levels where mu may kink or jump.
std::vector<double> level_landmarks(const SectorFunction& u) {
    std::vector<double> out;
    for (const auto& sec : u.sectors())
        for (const auto& pc : sec.profile.pieces()) {
            if (std::isfinite(pc.v_lo) && pc.v_lo > 0.0) out.push_back(pc.v_lo);
            if (std::isfinite(pc.v_hi) && pc.v_hi > 0.0) out.push_back(pc.v_hi);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct SupScan {
    double value = 0.0;
    double arg = 0.0;
    bool divergent = false;
};

// Supremum of obj over a log grid with golden refinement around each strong
// local maximum and decade extension at the edges. obj may return NaN where
// it is not computable and +inf where it genuinely diverges. Divergence is
// reported when the objective keeps climbing across the trailing decades of
// the admissible range.
SupScan log_sup_scan(const Fn& obj, double lo, double hi, const std::vector<double>& extra,
                     double lo_floor = 1e-30, double hi_ceil = 1e30) {
    SupScan out;
    std::vector<std::pair<double, double>> nodes;  // (t, value) on the base grids
    auto probe = [&](double x) {
        const double v = obj(x);
        if (std::isinf(v) && v > 0.0) out.divergent = true;
        if (std::isfinite(v) && v > out.value) {
            out.value = v;
            out.arg = x;
        }
        return v;
    };
    const int per_decade = 24;
    auto scan_range = [&](double a, double b) {
        const int n = std::max(2, int(per_decade * std::log10(b / a)));
        for (int i = 0; i <= n; ++i) {
            const double x = a * std::pow(b / a, double(i) / n);
            const double v = probe(x);
            if (std::isfinite(v)) nodes.push_back({x, v});
        }
    };
    scan_range(lo, hi);
    if (out.divergent) return out;
    for (double x : extra) {
        if (x <= 0.0 || !std::isfinite(x)) continue;
        probe(x * (1.0 - 1e-12));
        probe(x * (1.0 + 1e-12));
    }
    // extend while the max sits at an edge of the scanned range
    double cur_lo = lo, cur_hi = hi;
    for (int k = 0; k < 40 && !out.divergent; ++k) {
        if (out.arg <= cur_lo * 1.0001 && cur_lo > lo_floor) {
            const double nlo = std::max(lo_floor, cur_lo * 1e-2);
            scan_range(nlo, cur_lo);
            cur_lo = nlo;
        } else if (out.arg >= cur_hi * 0.9999 && cur_hi < hi_ceil) {
            const double nhi = std::min(hi_ceil, cur_hi * 1e2);
            scan_range(cur_hi, nhi);
            cur_hi = nhi;
        } else {
            break;
        }
    }
    if (out.divergent) return out;
    // strict growth across the trailing decades at a range boundary
    auto climbing = [&](double edge, double inward_factor) {
        double prev = obj(edge * inward_factor * inward_factor * inward_factor);
        int rising = 0;
        for (int k = 2; k >= 0; --k) {
            const double cur = obj(edge * std::pow(inward_factor, k));
            if (std::isfinite(cur) && std::isfinite(prev) && cur > prev * 1.001) ++rising;
            prev = cur;
        }
        return rising == 3;
    };
    if (out.arg <= cur_lo * 1.0001 && cur_lo <= lo_floor * 1.0001 && climbing(cur_lo, 10.0))
        out.divergent = true;
    if (out.arg >= cur_hi * 0.9999 && cur_hi >= hi_ceil * 0.9999 && climbing(cur_hi, 0.1))
        out.divergent = true;
    if (out.divergent) return out;

    auto polish = [&](double center) {
        const double invphi = 0.6180339887498949;
        double a = std::log(center) - std::log(10.0) / per_decade;
        double b = std::log(center) + std::log(10.0) / per_decade;
        auto safe = [&](double x) {
            const double v = obj(std::exp(x));
            return std::isfinite(v) ? v : -kInf;
        };
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        double f1 = -safe(x1), f2 = -safe(x2);
        for (int it = 0; it < 70; ++it) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = -safe(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = -safe(x2);
            }
        }
        probe(std::exp(0.5 * (a + b)));
        probe(std::exp(x1));
        probe(std::exp(x2));
    };
    // polish the strongest interior local maxima of the sampled grid
    std::sort(nodes.begin(), nodes.end());
    std::vector<std::pair<double, double>> peaks;  // (value, t)
    for (size_t i = 1; i + 1 < nodes.size(); ++i)
        if (nodes[i].second >= nodes[i - 1].second && nodes[i].second >= nodes[i + 1].second)
            peaks.push_back({nodes[i].second, nodes[i].first});
    std::sort(peaks.rbegin(), peaks.rend());
    if (peaks.size() > 6) peaks.resize(6);
    bool polished_best = false;
    for (const auto& [v, t] : peaks) {
        polish(t);
        if (t == out.arg) polished_best = true;
    }
    if (!polished_best && out.arg > 0.0) polish(out.arg);
    return out;
}

// Ceiling for the weak-norm level scan; anchored to the function's own value
// scale so the grid transforms covariantly under u -> c u.
double weak_scan_ceiling(const SectorFunction& u, double sup) {
    if (std::isfinite(sup)) return sup;
    double lm = 0.0;
    for (double t : level_landmarks(u)) lm = std::max(lm, t);
    return lm > 0.0 ? lm * 1e8 : 1e8;
}

// True when g(x) shows no decay along doubling samples toward +inf.
bool tail_divergent(const Fn& g, double from) {
    double x = std::max(from, 1e-6);
    double prev = std::fabs(g(x));
    int nondecay = 0;
    for (int k = 0; k < 24; ++k) {
        x *= 4.0;
        const double cur = std::fabs(g(x));
        if (!std::isfinite(cur)) return true;
        if (cur >= prev * 0.9) ++nondecay;
        prev = cur;
    }
    return nondecay >= 20;
}

bool pole_divergent(const Fn& g, double at) {
    // g is x * integrand(x); nonvanishing as x->0+ means a log (or worse) blow-up
    double x = std::min(at, 1e-2);
    double ref = std::fabs(g(x));
    if (!std::isfinite(ref)) return true;
    double floor_seen = ref;
    for (int k = 0; k < 30; ++k) {
        x *= 0.25;
        const double cur = std::fabs(g(x));
        if (!std::isfinite(cur)) return true;
        floor_seen = std::min(floor_seen, cur);
    }
    return floor_seen > 1e-10 * std::max(ref, 1e-300) && floor_seen > 1e-14;
}

}  // namespace

SectorFunction::SectorFunction(ModelManifold m, std::vector<Sector> sectors)
    : m_(std::move(m)), sectors_(std::move(sectors)) {
    if (sectors_.empty())
        throw std::invalid_argument("SectorFunction: at least one sector required");
    double total = 0.0;
    for (const auto& s : sectors_) {
        if (!(s.weight > 0.0))
            throw std::invalid_argument("SectorFunction: sector weights must be positive");
        total += s.weight;
    }
    if (std::fabs(total - m_.sphere_area()) > 1e-8 * m_.sphere_area())
        throw std::invalid_argument("SectorFunction: sector weights must sum to omega_N");
}

SectorFunction SectorFunction::radial(ModelManifold m, RadialProfile f) {
    const double w = m.sphere_area();
    return SectorFunction(std::move(m), {Sector{w, std::move(f)}});
}

bool SectorFunction::radial_nonincreasing() const {
    return sectors_.size() == 1 && sectors_[0].profile.nonincreasing();
}

bool SectorFunction::is_zero() const {
    for (const auto& s : sectors_)
        if (!s.profile.is_zero()) return false;
    return true;
}

double SectorFunction::sup_value() const {
    double v = 0.0;
    for (const auto& s : sectors_) v = std::max(v, s.profile.sup_value());
    return v;
}

double SectorFunction::support_volume() const {
    double total = 0.0;
    for (const auto& s : sectors_) {
        for (const auto& pc : s.profile.pieces()) {
            if (pc.v_lo <= 0.0 && pc.v_hi <= 0.0) continue;
            if (std::isinf(pc.hi)) return kInf;
            total += s.weight / m_.sphere_area() * (m_.volume(pc.hi) - m_.volume(pc.lo));
        }
    }
    return total;
}

double SectorFunction::support_radius() const {
    double r = 0.0;
    for (const auto& s : sectors_) r = std::max(r, s.profile.support());
    return r;
}

const RadialProfile& SectorFunction::profile() const {
    if (!radial())
        throw std::logic_error("SectorFunction::profile: function is not radial");
    return sectors_[0].profile;
}

SectorFunction SectorFunction::scaled(double c) const {
    std::vector<Sector> out;
    out.reserve(sectors_.size());
    for (const auto& s : sectors_) out.push_back({s.weight, s.profile.scaled(c)});
    return SectorFunction(m_, std::move(out));
}

double distribution(const SectorFunction& u, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("distribution: t must be > 0");
    const ModelManifold& m = u.manifold();
    double total = 0.0;
    for (const auto& sec : u.sectors()) {
        const RadialProfile& f = sec.profile;
        if (f.is_zero() || t >= f.sup_value()) continue;
        Fn value = [&f](double r) { return f(r); };
        double measure = 0.0;
        for (const auto& pc : f.pieces()) {
            Interval iv = superlevel(pc, value, t);
            if (iv.empty) continue;
            if (std::isinf(iv.hi)) return kInf;
            measure += m.volume(iv.hi) - m.volume(iv.lo);
        }
        total += sec.weight / m.sphere_area() * measure;
    }
    return total;
}

DecreasingProfile decreasing_rearrangement(const SectorFunction& u) {
    if (u.is_zero()) return DecreasingProfile();
    const ModelManifold m = u.manifold();
    const double supvol = u.support_volume();
    const double sup = u.sup_value();

    if (u.radial_nonincreasing()) {
        const RadialProfile f = u.profile();
        Fn eval = [m, f, supvol](double s) {
            if (s >= supvol) return 0.0;
            return f(m.inverse_volume(std::max(s, 0.0)));
        };
        Fn slope;
        if (f.has_analytic_slope())
            slope = [m, f, supvol](double s) {
                if (s >= supvol || s <= 0.0) return 0.0;
                const double r = m.inverse_volume(s);
                return f.slope(r) / m.volume_derivative(r);
            };
        std::vector<double> breaks;
        for (double b : f.breakpoints()) breaks.push_back(m.volume(b));
        return DecreasingProfile::from_functions(eval, slope, supvol, breaks, sup);
    }

    SectorFunction uu = u;
    // landmark brackets (t, mu(t)) computed once; mu is nonincreasing in t
    auto marks = std::make_shared<std::vector<std::pair<double, double>>>();
    for (double t : level_landmarks(u)) {
        const double mu = distribution(u, t);
        if (std::isfinite(mu)) marks->push_back({t, mu});
    }
    Fn eval = [uu, supvol, sup, marks](double s) {
        if (s >= supvol) return 0.0;
        double tlo = 0.0, thi = kInf;
        for (const auto& [t, mu] : *marks) {
            if (mu > s)
                tlo = t;
            else {
                thi = t;
                break;
            }
        }
        if (std::isinf(thi)) {
            thi = std::isfinite(sup) ? sup : std::max(tlo, 0.5) * 2.0;
            for (int k = 0; k < 2200 && distribution(uu, thi) > s; ++k) thi *= 2.0;
        }
        if (tlo == 0.0) {
            tlo = 0.5 * thi;
            int k = 0;
            while (distribution(uu, tlo) <= s) {
                tlo *= 0.5;
                if (++k > 2200) return 0.0;
            }
        }
        for (int it = 0; it < 90 && thi - tlo > 1e-14 * thi; ++it) {
            const double mid = std::sqrt(tlo * thi);
            if (distribution(uu, mid) <= s)
                thi = mid;
            else
                tlo = mid;
        }
        return thi;
    };
    // exact slope from the coarea formula: u*'(s) = 1/mu'(u*(s)) with
    // mu'(t) = -sum_i w_i/omega sum_pieces V'(x_t) / |f'(x_t)|
    Fn slope = [uu, supvol, eval](double s) {
        if (s <= 0.0 || s >= supvol) return 0.0;
        const double t = eval(s);
        if (t <= 0.0) return 0.0;
        const ModelManifold& m = uu.manifold();
        double dmu = 0.0;
        for (const auto& sec : uu.sectors()) {
            const RadialProfile& f = sec.profile;
            if (f.is_zero()) continue;
            Fn value = [&f](double r) { return f(r); };
            for (const auto& pc : f.pieces()) {
                if (pc.dir == 0) continue;
                const double vmin = std::min(pc.v_lo, pc.v_hi);
                const double vmax = std::max(pc.v_lo, pc.v_hi);
                if (!(t > vmin && t < vmax)) continue;
                const double x = invert_piece(pc, value, t);
                const double fs = f.slope(x);
                if (fs != 0.0 && std::isfinite(fs))
                    dmu += sec.weight / m.sphere_area() * m.volume_derivative(x) /
                           std::fabs(fs);
            }
        }
        if (dmu == 0.0) return 0.0;  // level sits in a plateau or jump
        return -1.0 / dmu;
    };
    std::vector<double> breaks;
    for (double t : level_landmarks(u)) {
        const double s = distribution(u, t);
        if (std::isfinite(s)) {
            breaks.push_back(s);
            breaks.push_back(distribution(u, t * (1.0 - 1e-9)));
        }
    }
    return DecreasingProfile::from_functions(eval, slope, supvol, breaks, sup);
}

SectorFunction schwarz(const SectorFunction& u) {
    const ModelManifold m = u.manifold();
    if (u.is_zero()) return SectorFunction::radial(m, RadialProfile::zero());
    if (u.radial_nonincreasing()) return SectorFunction::radial(m, u.profile());

    const DecreasingProfile ustar = decreasing_rearrangement(u);
    const double supvol = u.support_volume();
    const double Rsup = std::isfinite(supvol) ? m.inverse_volume(supvol) : kInf;
    Fn value = [m, ustar](double r) { return ustar(m.volume(r)); };
    Fn slope = [m, ustar](double r) {
        if (r <= 0.0) return 0.0;
        return ustar.slope(m.volume(r)) * m.volume_derivative(r);
    };
    SectorFunction uu = u;
    Fn inverse = [m, uu](double t) { return m.inverse_volume(distribution(uu, t)); };
    std::vector<double> breaks;
    for (double s : ustar.breakpoints())
        if (s > 0.0 && std::isfinite(s)) breaks.push_back(m.inverse_volume(s));
    RadialProfile prof = RadialProfile::from_monotone_decreasing(
        value, slope, Rsup, breaks, u.sup_value(), inverse);
    return SectorFunction::radial(m, prof);
}

namespace {

void check_lorentz_indices(double p, double q) {
    if (!(p > 1.0) || std::isinf(p))
        throw std::invalid_argument("lorentz norm: p must lie in (1, inf)");
    if (!(q >= 1.0)) throw std::invalid_argument("lorentz norm: q must lie in [1, inf]");
}

}  // namespace

double lorentz_norm(const SectorFunction& u, double p, double q) {
    check_lorentz_indices(p, q);
    if (u.is_zero()) return 0.0;
    const double sup = u.sup_value();
    if (std::isinf(q)) {
        SectorFunction uu = u;
        Fn obj = [uu, p](double t) {
            const double mu = distribution(uu, t);
            if (mu == 0.0) return 0.0;
            return t * std::pow(mu, 1.0 / p);  // +inf when the superlevel is unbounded
        };
        const double hi = weak_scan_ceiling(u, sup);
        SupScan s = log_sup_scan(obj, hi * 1e-16, hi, level_landmarks(u));
        return s.divergent ? kInf : s.value;
    }
    // layer cake: ||u||^q = p int t^{q-1} mu(t)^{q/p} dt
    SectorFunction uu = u;
    Fn integrand = [uu, p, q](double t) {
        const double mu = distribution(uu, t);
        if (mu == 0.0) return 0.0;
        return std::pow(t, q - 1.0) * std::pow(mu, q / p);
    };
    if (std::isinf(u.support_volume())) {
        Fn zeta = [&](double t) { return t * integrand(t); };
        if (pole_divergent(zeta, std::isfinite(sup) ? sup * 1e-2 : 1e-2)) return kInf;
    }
    double t_hi = sup;
    if (std::isinf(sup)) {
        Fn zeta = [&](double t) { return t * integrand(t); };
        if (tail_divergent(zeta, 1.0)) return kInf;
        t_hi = 1.0;
        while (t_hi * integrand(t_hi) > 1e-18 && t_hi < 1e28) t_hi *= 2.0;
    }
    double t_lo = 0.0;
    if (std::isinf(u.support_volume())) {
        t_lo = std::isfinite(sup) ? sup * 0.5 : t_hi * 0.5;
        while (t_lo * integrand(t_lo) > 1e-18 && t_lo > 1e-280) t_lo *= 0.5;
    }
    QuadOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-280;
    opts.throw_on_failure = false;
    opts.breakpoints = level_landmarks(u);
    QuadResult r = integrate(integrand, t_lo, t_hi, opts);
    if (!r.converged && r.abs_error > 1e-6 * std::fabs(r.value))
        throw NumericError("lorentz_norm: quadrature failed", r);
    return std::pow(p * std::max(r.value, 0.0), 1.0 / q);
}

double lorentz_type_norm(const SectorFunction& u, double p, double q) {
    check_lorentz_indices(p, q);
    if (u.is_zero()) return 0.0;
    const ModelManifold m = u.manifold();
    const double N = m.dim();
    const double sup = u.sup_value();

    if (std::isinf(q)) {
        SectorFunction uu = u;
        Fn obj = [uu, m, N, p](double t) {
            const double mu = distribution(uu, t);
            if (mu == 0.0) return 0.0;
            if (std::isinf(mu) || mu > 1e28)
                return std::numeric_limits<double>::quiet_NaN();  // beyond volume range
            return t * std::pow(m.inverse_volume(mu), N / p);
        };
        const double hi = weak_scan_ceiling(u, sup);
        SupScan s = log_sup_scan(obj, hi * 1e-16, hi, level_landmarks(u));
        return s.divergent ? kInf : s.value;
    }

    // q < inf: integrate (G(s)^{N/p} u*(s))^q ds/s
    if (u.radial_nonincreasing()) {
        // substitute s = V(r); the integrand is smooth in r
        const RadialProfile f = u.profile();
        const TailForm& tf = f.tail();
        if (std::isinf(f.support()) && !tf.zero && tf.exponent <= N / p + 1e-15) return kInf;
        Fn integrand = [m, f, N, p, q](double r) {
            const double fr = f(r);
            if (fr <= 0.0) return 0.0;
            const double V = m.volume(r);
            if (V <= 0.0) return 0.0;
            return std::pow(std::pow(r, N / p) * fr, q) * m.volume_derivative(r) / V;
        };
        const double val = halfline_integral(integrand, f.support(), f.breakpoints());
        return std::pow(std::max(val, 0.0), 1.0 / q);
    }

    const DecreasingProfile ustar = decreasing_rearrangement(u);
    const double supvol = u.support_volume();
    Fn integrand = [m, ustar, N, p, q](double s) {
        const double us = ustar(s);
        if (us <= 0.0) return 0.0;
        return std::pow(std::pow(m.inverse_volume(s), N / p) * us, q) / s;
    };
    if (std::isfinite(supvol)) {
        QuadOptions opts;
        opts.rel_tol = 1e-9;
        opts.abs_tol = 1e-280;
        opts.breakpoints = ustar.breakpoints();
        opts.throw_on_failure = false;
        Integrand ig;
        ig.evaluator = integrand;
        if (q / p < 1.0) {
            ig.singular_left = true;
            ig.singular_exponent = 1.0 - q / p;
        }
        QuadResult r = integrate(ig, 0.0, supvol, opts);
        if (!r.converged && r.abs_error > 1e-6 * std::fabs(r.value))
            throw NumericError("lorentz_type_norm: quadrature failed", r);
        return std::pow(std::max(r.value, 0.0), 1.0 / q);
    }
    const double val = halfline_integral(integrand, kInf, ustar.breakpoints(), 1e-9);
    return std::pow(std::max(val, 0.0), 1.0 / q);
}

double lambda_theta_norm(const SectorFunction& u, double q) {
    if (!(q >= 1.0) || std::isinf(q))
        throw std::invalid_argument("lambda_theta_norm: q must lie in [1, inf)");
    if (u.is_zero()) return 0.0;
    const ModelManifold m = u.manifold();
    const int N = m.dim();
    const double omega = m.sphere_area();

    Fn usharp;
    std::vector<double> breaks;
    double Rsup;
    if (u.radial_nonincreasing()) {
        const RadialProfile f = u.profile();
        usharp = [f](double r) { return f(r); };
        breaks = f.breakpoints();
        Rsup = f.support();
    } else {
        const DecreasingProfile ustar = decreasing_rearrangement(u);
        usharp = [m, ustar](double r) { return ustar(m.volume(r)); };
        for (double s : ustar.breakpoints())
            if (s > 0.0 && std::isfinite(s)) breaks.push_back(m.inverse_volume(s));
        const double supvol = u.support_volume();
        Rsup = std::isfinite(supvol) ? m.inverse_volume(supvol) : kInf;
    }
    Fn integrand = [usharp, m, N, omega, q](double r) {
        const double v = usharp(r);
        if (v <= 0.0 || r <= 0.0) return 0.0;
        const double ps = m.psi(r);
        const double dtheta = 0.5 * omega *
                              (3.0 * r * r * std::pow(ps, N - 1) +
                               (N - 1) * r * r * r * std::pow(ps, N - 2) * m.dpsi(r));
        return std::pow(v, q) * dtheta;
    };
    const double val = halfline_integral(integrand, Rsup, breaks);
    return std::pow(std::max(val, 0.0), 1.0 / q);
}

namespace {

double sector_integral(const SectorFunction& u, const std::function<double(const RadialProfile&, double)>& density) {
    double total = 0.0;
    for (const auto& sec : u.sectors()) {
        const RadialProfile& f = sec.profile;
        if (f.is_zero()) continue;
        Fn integrand = [&f, &density](double r) { return density(f, r); };
        // pole-side divergence screen for profiles unbounded at the pole
        if (std::isinf(f.sup_value())) {
            if (pole_divergent([&](double r) { return r * integrand(r); }, 1e-2))
                return kInf;
        }
        const double val = halfline_integral(integrand, f.support(), f.breakpoints());
        if (std::isinf(val)) return kInf;
        total += sec.weight * val;
    }
    return total;
}

}  // namespace

double dirichlet_energy(const SectorFunction& u) {
    const ModelManifold m = u.manifold();
    const int N = m.dim();
    // fused product avoids intermediate overflow at extreme tail radii
    return sector_integral(u, [m, N](const RadialProfile& f, double r) {
        const double d = f.slope(r);
        if (d == 0.0) return 0.0;
        const double t = d * std::pow(m.psi(r), 0.5 * (N - 1));
        return t * t;
    });
}

double hardy_term(const SectorFunction& u) {
    const ModelManifold m = u.manifold();
    const int N = m.dim();
    return sector_integral(u, [m, N](const RadialProfile& f, double r) {
        const double v = f(r);
        if (v <= 0.0 || r <= 0.0) return 0.0;
        const double t = v * std::pow(m.psi(r), 0.5 * (N - 1)) / r;
        return t * t;
    });
}

SectorFunction add(const SectorFunction& u, const SectorFunction& v) {
    const auto& a = u.sectors();
    const auto& b = v.sectors();
    if (u.manifold().dim() != v.manifold().dim() ||
        u.manifold().warping().kind() != v.manifold().warping().kind())
        throw std::invalid_argument("add: sector functions live on different manifolds");
    if (a.size() != b.size())
        throw std::invalid_argument("add: sector decompositions must conform");
    std::vector<Sector> out;
    for (size_t i = 0; i < a.size(); ++i) {
        if (std::fabs(a[i].weight - b[i].weight) > 1e-10 * u.manifold().sphere_area())
            throw std::invalid_argument("add: sector weights must conform");
        out.push_back({a[i].weight, RadialProfile::sum(a[i].profile, b[i].profile)});
    }
    return SectorFunction(u.manifold(), std::move(out));
}

SectorFunction subtract_extremal(const SectorFunction& u, double a) {
    const int N = u.manifold().dim();
    const double beta = 0.5 * (N - 2);
    std::vector<Sector> out;
    for (const auto& sec : u.sectors())
        out.push_back(
            {sec.weight, RadialProfile::abs_difference_with_power(sec.profile, a, beta)});
    return SectorFunction(u.manifold(), std::move(out));
}

}  // namespace hardylab
