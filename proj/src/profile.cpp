#include "hardylab/profile.hpp"

#include <algorithm>
#include <cmath>

namespace hardylab {
namespace {

constexpr double kTinyLevel = 1e-300;

double log_smoothstep(double r, double a, double b) {
    // 0 below a, 1 above b, C^1 transition in log r
    if (r <= a) return 0.0;
    if (r >= b) return 1.0;
    const double t = (std::log(r) - std::log(a)) / (std::log(b) - std::log(a));
    return t * t * (3.0 - 2.0 * t);
}

double log_smoothstep_slope(double r, double a, double b) {
    if (r <= a || r >= b) return 0.0;
    const double L = std::log(b) - std::log(a);
    const double t = (std::log(r) - std::log(a)) / L;
    return 6.0 * t * (1.0 - t) / (r * L);
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) {
                            return std::fabs(a - b) <=
                                   1e-14 * std::max({1.0, std::fabs(a), std::fabs(b)});
                        }),
            v.end());
    std::vector<double> out;
    for (double x : v)
        if (x > 0.0 && std::isfinite(x)) out.push_back(x);
    return out;
}

// Locates the extremum of `value` between xa and xb by golden section.
double refine_extremum(const Fn& value, double xa, double xb, bool maximum) {
    const double invphi = 0.6180339887498949;
    double a = xa, b = xb;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = value(x1), f2 = value(x2);
    if (maximum) {
        f1 = -f1;
        f2 = -f2;
    }
    for (int it = 0; it < 90; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = value(x1);
            if (maximum) f1 = -f1;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = value(x2);
            if (maximum) f2 = -f2;
        }
        if (b - a <= 1e-13 * std::max(1.0, std::fabs(b))) break;
    }
    return 0.5 * (a + b);
}

// Boundary between a constant run at level c and a non-constant run.
double refine_plateau_edge(const Fn& value, double x_const, double x_var, double c,
                           double ctol) {
    double a = x_const, b = x_var;
    for (int it = 0; it < 70; ++it) {
        const double m = 0.5 * (a + b);
        if (std::fabs(value(m) - c) <= ctol)
            a = m;
        else
            b = m;
        if (std::fabs(b - a) <= 1e-13 * std::max(1.0, std::fabs(b))) break;
    }
    return 0.5 * (a + b);
}

struct Run {
    int dir;
    size_t first, last;  // sample indices
};

// Decomposes `value` on the segments delimited by `breaks` (all finite,
// within (0, support]) into monotone pieces. Profiles in the catalog have
// finitely many slope sign changes, so a fixed sampling density suffices.
std::vector<MonotonePiece> decompose_numeric(const Fn& value, std::vector<double> breaks,
                                             double support, bool diverge0) {
    std::vector<MonotonePiece> pieces;
    std::vector<double> edges{0.0};
    for (double b : breaks)
        if (b > 0.0 && b < support) edges.push_back(b);
    edges.push_back(support);
    edges = [&edges]() {
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        return edges;
    }();

    const int M = 128;
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e];
        const double b = edges[e + 1];
        std::vector<double> xs(M + 1), vs(M + 1);
        const bool loggrid = (a == 0.0 && diverge0);
        for (int k = 0; k <= M; ++k) {
            if (loggrid) {
                const double lo = b * 1e-12;
                xs[k] = lo * std::pow(b / lo, double(k) / M);
            } else {
                xs[k] = a + (b - a) * double(k) / M;
            }
            xs[k] = std::min(xs[k], b);
            vs[k] = value(xs[k]);
        }
        double scale = 1e-30;
        for (double v : vs)
            if (std::isfinite(v)) scale = std::max(scale, std::fabs(v));
        const double ctol = 1e-12 * scale;

        std::vector<Run> runs;
        for (int k = 0; k < M; ++k) {
            const double d = vs[k + 1] - vs[k];
            int dir = 0;
            if (d > ctol)
                dir = 1;
            else if (d < -ctol)
                dir = -1;
            if (!runs.empty() && runs.back().dir == dir)
                runs.back().last = k + 1;
            else
                runs.push_back(Run{dir, size_t(k), size_t(k + 1)});
        }
        // absorb single-sample wobble runs into neighbours
        std::vector<Run> merged;
        for (const Run& r : runs) {
            if (!merged.empty() && merged.back().dir == r.dir)
                merged.back().last = r.last;
            else
                merged.push_back(r);
        }

        std::vector<double> cuts{a};
        for (size_t i = 0; i + 1 < merged.size(); ++i) {
            const Run& A = merged[i];
            const Run& B = merged[i + 1];
            double cut;
            if (A.dir != 0 && B.dir != 0) {
                cut = refine_extremum(value, xs[A.last > 0 ? A.last - 1 : 0],
                                      xs[std::min<size_t>(B.first + 1, M)], A.dir > 0);
            } else if (A.dir == 0) {
                cut = refine_plateau_edge(value, xs[A.last], xs[std::min<size_t>(B.first + 1, M)],
                                          vs[A.first], ctol);
            } else {
                cut = refine_plateau_edge(value, xs[B.first], xs[A.last > 0 ? A.last - 1 : 0],
                                          vs[B.last], ctol);
            }
            cuts.push_back(std::clamp(cut, a, b));
        }
        cuts.push_back(b);

        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            MonotonePiece pc;
            pc.lo = cuts[i];
            pc.hi = cuts[i + 1];
            if (pc.hi <= pc.lo) continue;
            pc.v_lo = (pc.lo == 0.0 && diverge0) ? kInf : value(pc.lo);
            pc.v_hi = value(pc.hi);
            const int dir = merged.size() > i ? merged[i].dir : 0;
            pc.dir = dir;
            if (pc.lo == 0.0 && diverge0) pc.dir = -1;
            if (pc.dir == 0) pc.v_lo = pc.v_hi = value(0.5 * (pc.lo + pc.hi));
            if (pc.v_lo < kTinyLevel && pc.v_hi < kTinyLevel && pc.dir == 0) continue;
            pieces.push_back(pc);
        }
    }
    return pieces;
}

}  // namespace

struct RadialProfile::Impl {
    Fn value;
    Fn slope;
    double support = 0.0;
    double sup_value = 0.0;
    bool noninc = true;
    std::vector<double> breakpoints;
    std::vector<MonotonePiece> pieces;
    TailForm tail;
};

RadialProfile::RadialProfile() : impl_(nullptr) {}
RadialProfile::RadialProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double RadialProfile::operator()(double r) const {
    if (!impl_) return 0.0;
    return impl_->value(r);
}

double RadialProfile::slope(double r) const {
    if (!impl_) return 0.0;
    if (impl_->slope) return impl_->slope(r);
    return derivative(impl_->value, r, 1e-2);
}

bool RadialProfile::has_analytic_slope() const { return impl_ && bool(impl_->slope); }
double RadialProfile::support() const { return impl_ ? impl_->support : 0.0; }
double RadialProfile::sup_value() const { return impl_ ? impl_->sup_value : 0.0; }
bool RadialProfile::nonincreasing() const { return impl_ ? impl_->noninc : true; }
bool RadialProfile::is_zero() const { return !impl_ || impl_->pieces.empty(); }

const std::vector<double>& RadialProfile::breakpoints() const {
    static const std::vector<double> empty;
    return impl_ ? impl_->breakpoints : empty;
}

const std::vector<MonotonePiece>& RadialProfile::pieces() const {
    static const std::vector<MonotonePiece> empty;
    return impl_ ? impl_->pieces : empty;
}

const TailForm& RadialProfile::tail() const {
    static const TailForm zero;
    return impl_ ? impl_->tail : zero;
}

RadialProfile RadialProfile::scaled(double c) const {
    if (c < 0.0) throw std::invalid_argument("RadialProfile::scaled: c must be >= 0");
    if (!impl_ || c == 0.0) return RadialProfile();
    auto src = impl_;
    auto impl = std::make_shared<Impl>(*src);
    impl->value = [src, c](double r) { return c * src->value(r); };
    impl->slope = src->slope ? Fn([src, c](double r) { return c * src->slope(r); }) : Fn();
    impl->sup_value = c * src->sup_value;
    impl->tail.coeff *= c;
    for (auto& pc : impl->pieces) {
        pc.v_lo *= c;
        pc.v_hi *= c;
        if (pc.inverse) {
            Fn inv = pc.inverse;
            pc.inverse = [inv, c](double t) { return inv(t / c); };
        }
    }
    return RadialProfile(impl);
}

RadialProfile RadialProfile::powered(double k) const {
    if (!(k > 0.0)) throw std::invalid_argument("RadialProfile::powered: k must be > 0");
    if (!impl_ || k == 1.0) return *this;
    auto src = impl_;
    auto impl = std::make_shared<Impl>(*src);
    impl->value = [src, k](double r) { return std::pow(src->value(r), k); };
    if (src->slope)
        impl->slope = [src, k](double r) {
            const double v = src->value(r);
            return v > 0.0 ? k * std::pow(v, k - 1.0) * src->slope(r) : 0.0;
        };
    else
        impl->slope = Fn();
    impl->sup_value = std::isinf(src->sup_value) ? kInf : std::pow(src->sup_value, k);
    impl->tail.coeff = src->tail.zero ? 0.0 : std::pow(src->tail.coeff, k);
    impl->tail.exponent = src->tail.exponent * k;
    for (auto& pc : impl->pieces) {
        pc.v_lo = std::isinf(pc.v_lo) ? kInf : std::pow(pc.v_lo, k);
        pc.v_hi = std::isinf(pc.v_hi) ? kInf : std::pow(pc.v_hi, k);
        if (pc.inverse) {
            Fn inv = pc.inverse;
            pc.inverse = [inv, k](double t) { return inv(std::pow(t, 1.0 / k)); };
        }
    }
    return RadialProfile(impl);
}

RadialProfile RadialProfile::zero() { return RadialProfile(); }

RadialProfile RadialProfile::bump(double amplitude, double radius) {
    if (!(amplitude > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("bump: amplitude and radius must be positive");
    auto impl = std::make_shared<Impl>();
    const double A = amplitude, R = radius;
    impl->value = [A, R](double r) {
        if (r >= R || r < 0.0) return 0.0;
        const double u = (r / R) * (r / R);
        return A * std::exp(1.0 - 1.0 / (1.0 - u));
    };
    impl->slope = [A, R](double r) {
        if (r >= R || r <= 0.0) return 0.0;
        const double u = (r / R) * (r / R);
        const double om = 1.0 - u;
        return -A * std::exp(1.0 - 1.0 / om) * 2.0 * r / (R * R * om * om);
    };
    impl->support = R;
    impl->sup_value = A;
    impl->noninc = true;
    impl->breakpoints = {R};
    MonotonePiece pc;
    pc.lo = 0.0;
    pc.hi = R;
    pc.dir = -1;
    pc.v_lo = A;
    pc.v_hi = 0.0;
    pc.inverse = [A, R](double t) {
        const double u = 1.0 - 1.0 / (1.0 - std::log(t / A));
        return R * std::sqrt(std::max(u, 0.0));
    };
    impl->pieces = {pc};
    return RadialProfile(impl);
}

RadialProfile RadialProfile::indicator(double amplitude, double radius) {
    if (!(amplitude > 0.0) || !(radius > 0.0))
        throw std::invalid_argument("indicator: amplitude and radius must be positive");
    auto impl = std::make_shared<Impl>();
    const double A = amplitude, R = radius;
    impl->value = [A, R](double r) { return (r >= 0.0 && r < R) ? A : 0.0; };
    impl->slope = [](double) { return 0.0; };
    impl->support = R;
    impl->sup_value = A;
    impl->noninc = true;
    impl->breakpoints = {R};
    MonotonePiece pc;
    pc.lo = 0.0;
    pc.hi = R;
    pc.dir = 0;
    pc.v_lo = A;
    pc.v_hi = A;
    impl->pieces = {pc};
    return RadialProfile(impl);
}

RadialProfile RadialProfile::power_bump(double amplitude, double lo, double hi, double p,
                                        double q) {
    if (!(amplitude > 0.0) || !(hi > lo) || lo < 0.0 || p < 0.0 || q < 0.0)
        throw std::invalid_argument("power_bump: invalid parameters");
    auto impl = std::make_shared<Impl>();
    const double A = amplitude;
    impl->value = [A, lo, hi, p, q](double r) {
        if (r <= lo || r >= hi) {
            if (p == 0.0 && r >= 0.0 && r <= lo && lo == 0.0) return A * std::pow(hi, q);
            return 0.0;
        }
        double v = A;
        if (p > 0.0) v *= std::pow(r - lo, p);
        if (q > 0.0) v *= std::pow(hi - r, q);
        return v;
    };
    impl->slope = [A, lo, hi, p, q](double r) {
        if (r <= lo || r >= hi) return 0.0;
        const double f1 = p > 0.0 ? std::pow(r - lo, p) : 1.0;
        const double f2 = q > 0.0 ? std::pow(hi - r, q) : 1.0;
        double d = 0.0;
        if (p > 0.0) d += p * std::pow(r - lo, p - 1.0) * f2;
        if (q > 0.0) d -= q * f1 * std::pow(hi - r, q - 1.0);
        return A * d;
    };
    impl->support = hi;
    impl->breakpoints = {lo, hi};
    if (p == 0.0) {
        impl->sup_value = A * std::pow(hi - lo, q);
        impl->noninc = (lo == 0.0);
        MonotonePiece pc;
        pc.lo = lo;
        pc.hi = hi;
        pc.dir = q > 0.0 ? -1 : 0;
        pc.v_lo = impl->sup_value;
        pc.v_hi = q > 0.0 ? 0.0 : impl->sup_value;
        pc.inverse = [A, hi, q](double t) { return hi - std::pow(t / A, 1.0 / q); };
        impl->pieces = {pc};
    } else if (q == 0.0) {
        impl->sup_value = A * std::pow(hi - lo, p);
        impl->noninc = false;
        MonotonePiece pc;
        pc.lo = lo;
        pc.hi = hi;
        pc.dir = 1;
        pc.v_lo = 0.0;
        pc.v_hi = impl->sup_value;
        pc.inverse = [A, lo, p](double t) { return lo + std::pow(t / A, 1.0 / p); };
        impl->pieces = {pc};
    } else {
        const double rstar = (p * hi + q * lo) / (p + q);
        const double vstar = impl->value(rstar);
        impl->sup_value = vstar;
        impl->noninc = false;
        MonotonePiece up{lo, rstar, +1, 0.0, vstar, Fn()};
        MonotonePiece down{rstar, hi, -1, vstar, 0.0, Fn()};
        impl->pieces = {up, down};
        impl->breakpoints.push_back(rstar);
        impl->breakpoints = sorted_unique(impl->breakpoints);
    }
    impl->breakpoints = sorted_unique(impl->breakpoints);
    return RadialProfile(impl);
}

RadialProfile RadialProfile::piecewise_linear(std::vector<double> r, std::vector<double> v) {
    if (r.size() != v.size() || r.size() < 2)
        throw std::invalid_argument("piecewise_linear: need matching node lists, size >= 2");
    for (size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1]))
            throw std::invalid_argument("piecewise_linear: radii must be strictly increasing");
    for (double x : v)
        if (x < 0.0) throw std::invalid_argument("piecewise_linear: values must be >= 0");
    if (v.back() != 0.0)
        throw std::invalid_argument("piecewise_linear: last value must be 0 (compact support)");
    if (r.front() > 0.0) {
        r.insert(r.begin(), 0.0);
        v.insert(v.begin(), v.front());
    }
    auto impl = std::make_shared<Impl>();
    auto rr = std::make_shared<std::vector<double>>(std::move(r));
    auto vv = std::make_shared<std::vector<double>>(std::move(v));
    impl->value = [rr, vv](double x) {
        const auto& R = *rr;
        const auto& V = *vv;
        if (x <= R.front()) return V.front();
        if (x >= R.back()) return 0.0;
        const size_t i =
            size_t(std::upper_bound(R.begin(), R.end(), x) - R.begin()) - 1;
        const double t = (x - R[i]) / (R[i + 1] - R[i]);
        return V[i] + t * (V[i + 1] - V[i]);
    };
    impl->slope = [rr, vv](double x) {
        const auto& R = *rr;
        const auto& V = *vv;
        if (x < R.front() || x >= R.back()) return 0.0;
        const size_t i =
            size_t(std::upper_bound(R.begin(), R.end(), x) - R.begin()) - 1;
        return (V[i + 1] - V[i]) / (R[i + 1] - R[i]);
    };
    impl->support = rr->back();
    impl->sup_value = *std::max_element(vv->begin(), vv->end());
    impl->noninc = std::is_sorted(vv->rbegin(), vv->rend());
    impl->breakpoints = sorted_unique(*rr);
    for (size_t i = 0; i + 1 < rr->size(); ++i) {
        MonotonePiece pc;
        pc.lo = (*rr)[i];
        pc.hi = (*rr)[i + 1];
        pc.v_lo = (*vv)[i];
        pc.v_hi = (*vv)[i + 1];
        pc.dir = pc.v_hi > pc.v_lo ? 1 : (pc.v_hi < pc.v_lo ? -1 : 0);
        if (pc.dir != 0) {
            const double a = pc.lo, b = pc.hi, va = pc.v_lo, vb = pc.v_hi;
            pc.inverse = [a, b, va, vb](double t) { return a + (t - va) * (b - a) / (vb - va); };
        }
        if (pc.v_lo == 0.0 && pc.v_hi == 0.0) continue;
        impl->pieces.push_back(pc);
    }
    return RadialProfile(impl);
}

RadialProfile RadialProfile::pchip(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 3) throw std::invalid_argument("pchip: need at least 3 samples");
    for (size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].first > samples[i - 1].first))
            throw std::invalid_argument("pchip: radii must be strictly increasing");
    for (auto& [x, y] : samples)
        if (y < 0.0) throw std::invalid_argument("pchip: values must be >= 0");
    if (samples.back().second != 0.0)
        throw std::invalid_argument("pchip: last value must be 0 (compact support)");
    if (samples.front().first > 0.0)
        samples.insert(samples.begin(), {0.0, samples.front().second});

    const size_t n = samples.size();
    std::vector<double> h(n - 1), sl(n - 1), d(n);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = samples[i + 1].first - samples[i].first;
        sl[i] = (samples[i + 1].second - samples[i].second) / h[i];
    }
    d[0] = sl[0];
    d[n - 1] = sl[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (sl[i - 1] * sl[i] <= 0.0)
            d[i] = 0.0;
        else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / sl[i - 1] + w2 / sl[i]);
        }
    }
    auto nodes = std::make_shared<std::vector<std::pair<double, double>>>(std::move(samples));
    auto tang = std::make_shared<std::vector<double>>(std::move(d));
    auto eval = [nodes, tang](double x, int deriv) -> double {
        const auto& p = *nodes;
        if (x <= p.front().first) return deriv ? 0.0 : p.front().second;
        if (x >= p.back().first) return 0.0;
        const size_t i = size_t(std::upper_bound(p.begin(), p.end(), x,
                                                 [](double v, const auto& q) {
                                                     return v < q.first;
                                                 }) -
                                p.begin()) -
                         1;
        const double x0 = p[i].first, x1 = p[i + 1].first;
        const double hh = x1 - x0;
        const double t = (x - x0) / hh;
        const double t2 = t * t, t3 = t2 * t;
        const double y0 = p[i].second, y1 = p[i + 1].second;
        const double d0 = (*tang)[i], d1 = (*tang)[i + 1];
        if (deriv == 0)
            return y0 * (2 * t3 - 3 * t2 + 1) + hh * d0 * (t3 - 2 * t2 + t) +
                   y1 * (-2 * t3 + 3 * t2) + hh * d1 * (t3 - t2);
        return (y0 * (6 * t2 - 6 * t) + hh * d0 * (3 * t2 - 4 * t + 1) +
                y1 * (6 * t - 6 * t2) + hh * d1 * (3 * t2 - 2 * t)) /
               hh;
    };
    auto impl = std::make_shared<Impl>();
    impl->value = [eval](double x) { return std::max(eval(x, 0), 0.0); };
    impl->slope = [eval](double x) { return eval(x, 1); };
    impl->support = nodes->back().first;
    impl->sup_value = 0.0;
    impl->noninc = true;
    for (size_t i = 0; i < nodes->size(); ++i) {
        impl->sup_value = std::max(impl->sup_value, (*nodes)[i].second);
        if (i && (*nodes)[i].second > (*nodes)[i - 1].second) impl->noninc = false;
        impl->breakpoints.push_back((*nodes)[i].first);
    }
    impl->breakpoints = sorted_unique(impl->breakpoints);
    for (size_t i = 0; i + 1 < nodes->size(); ++i) {
        MonotonePiece pc;
        pc.lo = (*nodes)[i].first;
        pc.hi = (*nodes)[i + 1].first;
        pc.v_lo = (*nodes)[i].second;
        pc.v_hi = (*nodes)[i + 1].second;
        pc.dir = pc.v_hi > pc.v_lo ? 1 : (pc.v_hi < pc.v_lo ? -1 : 0);
        if (pc.v_lo == 0.0 && pc.v_hi == 0.0) continue;
        impl->pieces.push_back(pc);
    }
    return RadialProfile(impl);
}

RadialProfile RadialProfile::phi_eps(int N, double eps) {
    if (N < 3 || !(eps > 0.0)) throw std::invalid_argument("phi_eps: need N >= 3, eps > 0");
    const double b = 0.5 * (N - 2) + eps;
    auto impl = std::make_shared<Impl>();
    impl->value = [b](double r) {
        if (r <= 0.0) return 0.0;
        return r <= 1.0 ? std::pow(r, b) : std::pow(r, -b);
    };
    impl->slope = [b](double r) {
        if (r <= 0.0) return 0.0;
        return r <= 1.0 ? b * std::pow(r, b - 1.0) : -b * std::pow(r, -b - 1.0);
    };
    impl->support = kInf;
    impl->sup_value = 1.0;
    impl->noninc = false;
    impl->breakpoints = {1.0};
    MonotonePiece up{0.0, 1.0, +1, 0.0, 1.0,
                     Fn([b](double t) { return std::pow(t, 1.0 / b); })};
    MonotonePiece down{1.0, kInf, -1, 1.0, 0.0,
                       Fn([b](double t) { return std::pow(t, -1.0 / b); })};
    impl->pieces = {up, down};
    impl->tail = TailForm{false, 1.0, b};
    return RadialProfile(impl);
}

RadialProfile RadialProfile::phi_eps_windowed(int N, double eps, double scale,
                                              double cutoff_hi) {
    if (N < 3 || !(eps > 0.0) || !(scale > 0.0) || !(cutoff_hi > 20.0 * scale))
        throw std::invalid_argument("phi_eps_windowed: invalid parameters");
    const double b = 0.5 * (N - 2) + eps;
    const double lam = scale, R = cutoff_hi, Rc = cutoff_hi / 10.0;
    auto impl = std::make_shared<Impl>();
    impl->value = [b, lam, R, Rc](double r) {
        if (r <= 0.0 || r >= R) return 0.0;
        const double core = r <= lam ? std::pow(r / lam, b) : std::pow(r / lam, -b);
        return core * (1.0 - log_smoothstep(r, Rc, R));
    };
    impl->slope = [b, lam, R, Rc](double r) {
        if (r <= 0.0 || r >= R) return 0.0;
        const double core = r <= lam ? std::pow(r / lam, b) : std::pow(r / lam, -b);
        const double dcore = r <= lam ? b * core / r : -b * core / r;
        const double w = 1.0 - log_smoothstep(r, Rc, R);
        const double dw = -log_smoothstep_slope(r, Rc, R);
        return dcore * w + core * dw;
    };
    impl->support = R;
    impl->sup_value = 1.0;
    impl->noninc = false;
    impl->breakpoints = {lam, Rc, R};
    MonotonePiece up{0.0, lam, +1, 0.0, 1.0,
                     Fn([b, lam](double t) { return lam * std::pow(t, 1.0 / b); })};
    MonotonePiece mid{lam, Rc, -1, 1.0, std::pow(Rc / lam, -b),
                      Fn([b, lam](double t) { return lam * std::pow(t, -1.0 / b); })};
    MonotonePiece down{Rc, R, -1, std::pow(Rc / lam, -b), 0.0, Fn()};
    impl->pieces = {up, mid, down};
    return RadialProfile(impl);
}

RadialProfile RadialProfile::extremal(int N, double a) {
    if (N < 3) throw std::invalid_argument("extremal: need N >= 3");
    if (a == 0.0) return RadialProfile();
    const double A = std::fabs(a);
    const double b = 0.5 * (N - 2);
    auto impl = std::make_shared<Impl>();
    impl->value = [A, b](double r) { return r > 0.0 ? A * std::pow(r, -b) : kInf; };
    impl->slope = [A, b](double r) { return r > 0.0 ? -A * b * std::pow(r, -b - 1.0) : 0.0; };
    impl->support = kInf;
    impl->sup_value = kInf;
    impl->noninc = true;
    MonotonePiece pc{0.0, kInf, -1, kInf, 0.0,
                     Fn([A, b](double t) { return std::pow(A / t, 1.0 / b); })};
    impl->pieces = {pc};
    impl->tail = TailForm{false, A, b};
    return RadialProfile(impl);
}

RadialProfile RadialProfile::truncated_power(double amplitude, double exponent,
                                             double window_lo, double window_hi) {
    if (!(amplitude > 0.0) || !(window_lo > 0.0) || !(window_hi >= 100.0 * window_lo))
        throw std::invalid_argument(
            "truncated_power: window must span at least two decades");
    const double A = amplitude, e = exponent;
    const double a0 = window_lo, a1 = 10.0 * window_lo;
    const double b1 = window_hi / 10.0, b0 = window_hi;
    auto impl = std::make_shared<Impl>();
    impl->value = [A, e, a0, a1, b1, b0](double r) {
        if (r <= a0 || r >= b0) return 0.0;
        return A * std::pow(r, e) * log_smoothstep(r, a0, a1) *
               (1.0 - log_smoothstep(r, b1, b0));
    };
    impl->slope = [A, e, a0, a1, b1, b0](double r) {
        if (r <= a0 || r >= b0) return 0.0;
        const double pw = A * std::pow(r, e);
        const double s1 = log_smoothstep(r, a0, a1);
        const double s2 = 1.0 - log_smoothstep(r, b1, b0);
        const double d1 = log_smoothstep_slope(r, a0, a1);
        const double d2 = -log_smoothstep_slope(r, b1, b0);
        return pw * (e / r * s1 * s2 + d1 * s2 + s1 * d2);
    };
    impl->support = b0;
    impl->noninc = false;
    impl->breakpoints = {a0, a1, b1, b0};
    impl->pieces = decompose_numeric(impl->value, impl->breakpoints, b0, false);
    impl->sup_value = 0.0;
    for (const auto& pc : impl->pieces)
        impl->sup_value = std::max({impl->sup_value, pc.v_lo, pc.v_hi});
    std::vector<double> bps = impl->breakpoints;
    for (const auto& pc : impl->pieces) {
        bps.push_back(pc.lo);
        bps.push_back(pc.hi);
    }
    impl->breakpoints = sorted_unique(bps);
    return RadialProfile(impl);
}

RadialProfile RadialProfile::sum(const RadialProfile& f, const RadialProfile& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    auto impl = std::make_shared<Impl>();
    const RadialProfile a = f, b = g;
    impl->value = [a, b](double r) { return a(r) + b(r); };
    if (a.has_analytic_slope() && b.has_analytic_slope())
        impl->slope = [a, b](double r) { return a.slope(r) + b.slope(r); };
    impl->support = std::max(a.support(), b.support());
    const bool diverge0 = std::isinf(a.sup_value()) || std::isinf(b.sup_value());
    std::vector<double> bps = a.breakpoints();
    for (double x : b.breakpoints()) bps.push_back(x);
    bps = sorted_unique(bps);
    impl->breakpoints = bps;

    double finite_end = impl->support;
    TailForm tail;
    if (std::isinf(impl->support)) {
        // at most one summand may extend to infinity (power tail)
        const RadialProfile& inf_one = std::isinf(a.support()) ? a : b;
        const RadialProfile& fin_one = std::isinf(a.support()) ? b : a;
        if (std::isinf(fin_one.support()))
            throw std::invalid_argument("RadialProfile::sum: at most one non-compact term");
        tail = inf_one.tail();
        finite_end = std::max(fin_one.support(),
                              bps.empty() ? 1.0 : bps.back());
    }
    impl->pieces = decompose_numeric(impl->value, bps, finite_end, diverge0);
    if (std::isinf(impl->support)) {
        MonotonePiece pc;
        pc.lo = finite_end;
        pc.hi = kInf;
        pc.dir = -1;
        pc.v_lo = impl->value(finite_end);
        pc.v_hi = 0.0;
        const double c = tail.coeff, e = tail.exponent;
        pc.inverse = [c, e](double t) { return std::pow(c / t, 1.0 / e); };
        impl->pieces.push_back(pc);
        impl->tail = tail;
    }
    impl->sup_value = 0.0;
    for (const auto& pc : impl->pieces)
        impl->sup_value = std::max({impl->sup_value, pc.v_lo, pc.v_hi});
    impl->noninc = a.nonincreasing() && b.nonincreasing();
    std::vector<double> allb = impl->breakpoints;
    for (const auto& pc : impl->pieces) {
        allb.push_back(pc.lo);
        if (std::isfinite(pc.hi)) allb.push_back(pc.hi);
    }
    impl->breakpoints = sorted_unique(allb);
    return RadialProfile(impl);
}

RadialProfile RadialProfile::abs_difference_with_power(const RadialProfile& f, double a,
                                                       double beta) {
    if (!(beta > 0.0))
        throw std::invalid_argument("abs_difference_with_power: beta must be > 0");
    if (a == 0.0) return f;
    if (std::isinf(f.sup_value()))
        throw std::invalid_argument(
            "abs_difference_with_power: profile must be bounded at the pole");
    const RadialProfile F = f;
    const double A = std::fabs(a);
    auto impl = std::make_shared<Impl>();
    impl->value = [F, a, beta, A](double r) {
        if (r <= 0.0) return kInf;
        const double fam = (a > 0.0 ? A : -A) * std::pow(r, -beta);
        return std::fabs(F(r) - fam);
    };
    impl->support = kInf;
    impl->sup_value = kInf;
    impl->noninc = false;

    // radius beyond which the difference is monotone decreasing
    double B = std::isfinite(F.support())
                   ? F.support()
                   : (F.breakpoints().empty() ? 1.0 : F.breakpoints().back());
    const TailForm ft = F.tail();
    double R0 = B;
    TailForm tail{false, A, beta};
    if (!std::isfinite(F.support()) && !ft.zero && a > 0.0) {
        if (std::fabs(ft.exponent - beta) < 1e-12) {
            tail.coeff = std::fabs(ft.coeff - A);
            if (tail.coeff == 0.0) tail.zero = true;
        } else if (ft.exponent > beta) {
            const double rc = std::pow(ft.coeff / A, 1.0 / (ft.exponent - beta));
            const double rs =
                std::pow(ft.coeff * ft.exponent / (A * beta), 1.0 / (ft.exponent - beta));
            R0 = std::max({B, 2.0 * rc, 2.0 * rs});
        } else {
            throw std::invalid_argument(
                "abs_difference_with_power: tail decays slower than the family");
        }
    } else if (!std::isfinite(F.support()) && !ft.zero) {
        // a < 0: sum of two decreasing powers beyond B
        tail.coeff += 0.0;  // dominated by the slower power; generic inversion is used
    }

    std::vector<double> bps = F.breakpoints();
    bps.push_back(R0);
    bps = sorted_unique(bps);
    impl->pieces = decompose_numeric(impl->value, bps, R0, true);
    if (!tail.zero) {
        MonotonePiece pc;
        pc.lo = R0;
        pc.hi = kInf;
        pc.dir = -1;
        pc.v_lo = impl->value(R0);
        pc.v_hi = 0.0;
        impl->pieces.push_back(pc);
        impl->tail = tail;
    } else {
        impl->support = R0;
    }
    std::vector<double> allb = bps;
    for (const auto& pc : impl->pieces) {
        allb.push_back(pc.lo);
        if (std::isfinite(pc.hi)) allb.push_back(pc.hi);
    }
    impl->breakpoints = sorted_unique(allb);
    return RadialProfile(impl);
}

RadialProfile RadialProfile::abs_difference(const RadialProfile& f, const Fn& g,
                                            double g_support) {
    if (!std::isfinite(f.support()) || !std::isfinite(g_support))
        throw std::invalid_argument("abs_difference: requires compact supports");
    const RadialProfile F = f;
    const Fn G = g;
    auto impl = std::make_shared<Impl>();
    impl->value = [F, G](double r) { return std::fabs(F(r) - G(r)); };
    impl->support = std::max(f.support(), g_support);
    impl->noninc = false;
    std::vector<double> bps = f.breakpoints();
    bps.push_back(g_support);
    bps = sorted_unique(bps);
    impl->pieces = decompose_numeric(impl->value, bps, impl->support, false);
    impl->sup_value = 0.0;
    for (const auto& pc : impl->pieces)
        impl->sup_value = std::max({impl->sup_value, pc.v_lo, pc.v_hi});
    std::vector<double> allb = bps;
    for (const auto& pc : impl->pieces) {
        allb.push_back(pc.lo);
        allb.push_back(pc.hi);
    }
    impl->breakpoints = sorted_unique(allb);
    return RadialProfile(impl);
}

RadialProfile RadialProfile::from_monotone_decreasing(Fn value, Fn slope, double support,
                                                      std::vector<double> breakpoints,
                                                      double sup_value, Fn level_inverse) {
    auto impl = std::make_shared<Impl>();
    impl->value = std::move(value);
    impl->slope = std::move(slope);
    impl->support = support;
    impl->sup_value = sup_value;
    impl->noninc = true;
    impl->breakpoints = sorted_unique(std::move(breakpoints));
    MonotonePiece pc;
    pc.lo = 0.0;
    pc.hi = support;
    pc.dir = -1;
    pc.v_lo = sup_value;
    pc.v_hi = 0.0;
    pc.inverse = std::move(level_inverse);
    impl->pieces = {pc};
    return RadialProfile(impl);
}

RadialProfile RadialProfile::composed_with_radius_map(const RadialProfile& f, Fn warp,
                                                      Fn unwarp, Fn slope) {
    if (f.is_zero()) return RadialProfile();
    auto impl = std::make_shared<Impl>();
    const RadialProfile F = f;
    const Fn W = warp;
    impl->value = [F, W](double x) { return F(W(x)); };
    impl->slope = std::move(slope);
    impl->support = std::isfinite(F.support()) ? unwarp(F.support()) : kInf;
    impl->sup_value = F.sup_value();
    impl->noninc = F.nonincreasing();
    for (double b : F.breakpoints())
        if (std::isfinite(b)) impl->breakpoints.push_back(unwarp(b));
    impl->breakpoints = sorted_unique(impl->breakpoints);
    for (const auto& pc : F.pieces()) {
        MonotonePiece q = pc;
        q.lo = pc.lo > 0.0 ? unwarp(pc.lo) : 0.0;
        q.hi = std::isfinite(pc.hi) ? unwarp(pc.hi) : kInf;
        if (pc.inverse) {
            Fn inv = pc.inverse;
            Fn un = unwarp;
            q.inverse = [inv, un](double t) { return un(inv(t)); };
        }
        impl->pieces.push_back(q);
    }
    return RadialProfile(impl);
}

double invert_piece(const MonotonePiece& piece, const Fn& value, double t) {
    if (piece.inverse) return piece.inverse(t);
    if (piece.dir == 0)
        throw std::logic_error("invert_piece: constant piece has no inverse");
    double lo = piece.lo, hi = piece.hi;
    if (std::isinf(hi)) {
        // decreasing to zero: find an upper bracket
        hi = std::max(2.0 * std::max(lo, 1e-6), lo + 1.0);
        for (int k = 0; k < 400 && value(hi) > t; ++k) hi *= 2.0;
    }
    if (std::isinf(piece.v_lo)) {
        double x = std::min(hi * 0.5, std::max(lo * 2.0, hi * 1e-8));
        for (int k = 0; k < 600 && value(x) <= t; ++k) x *= 0.5;
        lo = x;
    }
    const int dir = piece.dir;
    Fn inc = [dir, &value](double x) { return dir > 0 ? value(x) : -value(x); };
    const double y = dir > 0 ? t : -t;
    // clamp y into the achievable range to absorb roundoff at piece ends
    double flo = inc(lo), fhi = inc(hi);
    double yy = std::clamp(y, std::min(flo, fhi), std::max(flo, fhi));
    return monotone_invert(inc, yy, lo, hi, 1e-12);
}

// ---- DecreasingProfile ----

struct DecreasingProfile::Impl {
    Fn eval;
    Fn slope;
    double support = 0.0;
    double sup = 0.0;
    std::vector<double> breakpoints;
};

DecreasingProfile::DecreasingProfile() : impl_(nullptr) {}
DecreasingProfile::DecreasingProfile(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

DecreasingProfile DecreasingProfile::from_functions(Fn eval, Fn slope, double support_bound,
                                                    std::vector<double> breakpoints,
                                                    double sup_value) {
    auto impl = std::make_shared<Impl>();
    impl->eval = std::move(eval);
    impl->slope = std::move(slope);
    impl->support = support_bound;
    impl->sup = sup_value;
    impl->breakpoints = sorted_unique(std::move(breakpoints));
    return DecreasingProfile(impl);
}

DecreasingProfile DecreasingProfile::piecewise_linear(std::vector<double> s,
                                                      std::vector<double> v) {
    if (s.size() != v.size() || s.size() < 2)
        throw std::invalid_argument("DecreasingProfile::piecewise_linear: bad nodes");
    for (size_t i = 1; i < s.size(); ++i) {
        if (!(s[i] > s[i - 1]))
            throw std::invalid_argument("piecewise_linear: nodes must increase");
        if (v[i] > v[i - 1] + 1e-15)
            throw std::invalid_argument("piecewise_linear: values must be nonincreasing");
    }
    if (v.back() != 0.0)
        throw std::invalid_argument("piecewise_linear: last value must be 0");
    if (s.front() > 0.0) {
        s.insert(s.begin(), 0.0);
        v.insert(v.begin(), v.front());
    }
    auto ss = std::make_shared<std::vector<double>>(std::move(s));
    auto vv = std::make_shared<std::vector<double>>(std::move(v));
    Fn eval = [ss, vv](double x) {
        const auto& S = *ss;
        const auto& V = *vv;
        if (x <= S.front()) return V.front();
        if (x >= S.back()) return 0.0;
        const size_t i = size_t(std::upper_bound(S.begin(), S.end(), x) - S.begin()) - 1;
        const double t = (x - S[i]) / (S[i + 1] - S[i]);
        return V[i] + t * (V[i + 1] - V[i]);
    };
    Fn slope = [ss, vv](double x) {
        const auto& S = *ss;
        const auto& V = *vv;
        if (x < S.front() || x >= S.back()) return 0.0;
        const size_t i = size_t(std::upper_bound(S.begin(), S.end(), x) - S.begin()) - 1;
        return (V[i + 1] - V[i]) / (S[i + 1] - S[i]);
    };
    return from_functions(eval, slope, ss->back(), *ss, vv->front());
}

DecreasingProfile DecreasingProfile::truncated_power(double a, double expo, double window_lo,
                                                     double window_hi) {
    if (!(a > 0.0) || !(expo > 0.0) || !(window_lo > 0.0) ||
        !(window_hi >= 100.0 * window_lo))
        throw std::invalid_argument("DecreasingProfile::truncated_power: bad window");
    // constant cap below window_lo keeps the profile nonincreasing; smooth
    // one-decade cutoff before window_hi
    const double cap = a * std::pow(window_lo, -expo);
    const double b1 = window_hi / 10.0, b0 = window_hi;
    Fn eval = [a, expo, window_lo, cap, b1, b0](double s) {
        if (s >= b0) return 0.0;
        const double core = s <= window_lo ? cap : a * std::pow(s, -expo);
        return core * (1.0 - log_smoothstep(s, b1, b0));
    };
    Fn slope = [a, expo, window_lo, b1, b0](double s) {
        if (s >= b0 || s <= window_lo) return 0.0;
        const double core = a * std::pow(s, -expo);
        const double w = 1.0 - log_smoothstep(s, b1, b0);
        return -expo * core / s * w - core * log_smoothstep_slope(s, b1, b0);
    };
    return from_functions(eval, slope, b0, {window_lo, b1, b0}, cap);
}

double DecreasingProfile::operator()(double s) const {
    if (!impl_) return 0.0;
    return impl_->eval(s);
}

double DecreasingProfile::slope(double s) const {
    if (!impl_) return 0.0;
    if (impl_->slope) return impl_->slope(s);
    return derivative(impl_->eval, s, 1e-3);
}

bool DecreasingProfile::has_analytic_slope() const { return impl_ && bool(impl_->slope); }
double DecreasingProfile::support_bound() const { return impl_ ? impl_->support : 0.0; }
double DecreasingProfile::sup_value() const { return impl_ ? impl_->sup : 0.0; }
bool DecreasingProfile::is_zero() const { return !impl_; }

const std::vector<double>& DecreasingProfile::breakpoints() const {
    static const std::vector<double> empty;
    return impl_ ? impl_->breakpoints : empty;
}

DecreasingProfile DecreasingProfile::scaled(double c) const {
    if (c < 0.0) throw std::invalid_argument("DecreasingProfile::scaled: c must be >= 0");
    if (!impl_ || c == 0.0) return DecreasingProfile();
    auto src = impl_;
    auto impl = std::make_shared<Impl>(*src);
    impl->eval = [src, c](double s) { return c * src->eval(s); };
    impl->slope = src->slope ? Fn([src, c](double s) { return c * src->slope(s); }) : Fn();
    impl->sup = c * src->sup;
    return DecreasingProfile(impl);
}

}  // namespace hardylab
