#include "hardylab/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hardylab {

const char* to_string(WarpKind k) {
    switch (k) {
        case WarpKind::euclidean: return "euclidean";
        case WarpKind::hyperbolic: return "hyperbolic";
        case WarpKind::scaled_sinh: return "scaled_sinh";
        case WarpKind::tabulated: return "tabulated";
    }
    return "?";
}

WarpingSpec WarpingSpec::euclidean() {
    WarpingSpec s;
    s.kind_ = WarpKind::euclidean;
    return s;
}

WarpingSpec WarpingSpec::hyperbolic() {
    WarpingSpec s;
    s.kind_ = WarpKind::hyperbolic;
    return s;
}

WarpingSpec WarpingSpec::scaled_sinh(double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("scaled_sinh: lambda must be positive");
    WarpingSpec s;
    s.kind_ = WarpKind::scaled_sinh;
    s.lambda_ = lambda;
    return s;
}

WarpingSpec WarpingSpec::tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 4)
        throw std::domain_error("tabulated warping: need at least 4 samples");
    if (samples.front().first != 0.0)
        throw std::domain_error("tabulated warping: samples must start at r = 0");
    for (size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].first > samples[i - 1].first))
            throw std::domain_error("tabulated warping: r values must be strictly increasing");
    WarpingSpec s;
    s.kind_ = WarpKind::tabulated;
    s.samples_ = std::move(samples);

    // Fritsch-Carlson monotone cubic tangents
    const auto& p = s.samples_;
    const size_t n = p.size();
    std::vector<double> h(n - 1), slope(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        h[i] = p[i + 1].first - p[i].first;
        slope[i] = (p[i + 1].second - p[i].second) / h[i];
    }
    std::vector<double> d(n);
    d[0] = slope[0];
    d[n - 1] = slope[n - 2];
    for (size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    s.tangents_ = std::move(d);
    return s;
}

namespace {

// Hermite cubic on [x0, x1] with values/slopes at the ends.
double hermite(double x, double x0, double x1, double y0, double y1, double d0, double d1,
               int deriv) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    if (deriv == 0) {
        return y0 * (2 * t3 - 3 * t2 + 1) + h * d0 * (t3 - 2 * t2 + t) +
               y1 * (-2 * t3 + 3 * t2) + h * d1 * (t3 - t2);
    }
    // first derivative
    return (y0 * (6 * t2 - 6 * t) + h * d0 * (3 * t2 - 4 * t + 1) + y1 * (6 * t - 6 * t2) +
            h * d1 * (3 * t2 - 2 * t)) /
           h;
}

}  // namespace

double WarpingSpec::psi(double r) const {
    switch (kind_) {
        case WarpKind::euclidean: return r;
        case WarpKind::hyperbolic: return std::sinh(r);
        case WarpKind::scaled_sinh: return std::sinh(lambda_ * r) / lambda_;
        case WarpKind::tabulated: break;
    }
    const auto& p = samples_;
    if (r <= 0.0) return p.front().second;
    if (r >= p.back().first) {  // linear continuation
        const size_t n = p.size();
        const double slope = tangents_[n - 1];
        return p.back().second + slope * (r - p.back().first);
    }
    auto it = std::upper_bound(p.begin(), p.end(), r,
                               [](double v, const auto& q) { return v < q.first; });
    const size_t i = size_t(it - p.begin()) - 1;
    return hermite(r, p[i].first, p[i + 1].first, p[i].second, p[i + 1].second, tangents_[i],
                   tangents_[i + 1], 0);
}

double WarpingSpec::dpsi(double r) const {
    switch (kind_) {
        case WarpKind::euclidean: return 1.0;
        case WarpKind::hyperbolic: return std::cosh(r);
        case WarpKind::scaled_sinh: return std::cosh(lambda_ * r);
        case WarpKind::tabulated: break;
    }
    const auto& p = samples_;
    if (r <= 0.0) return tangents_.front();
    if (r >= p.back().first) return tangents_.back();
    auto it = std::upper_bound(p.begin(), p.end(), r,
                               [](double v, const auto& q) { return v < q.first; });
    const size_t i = size_t(it - p.begin()) - 1;
    return hermite(r, p[i].first, p[i + 1].first, p[i].second, p[i + 1].second, tangents_[i],
                   tangents_[i + 1], 1);
}

double WarpingSpec::ddpsi(double r) const {
    switch (kind_) {
        case WarpKind::euclidean: return 0.0;
        case WarpKind::hyperbolic: return std::sinh(r);
        case WarpKind::scaled_sinh: return lambda_ * std::sinh(lambda_ * r);
        case WarpKind::tabulated: break;
    }
    // second differences with the local sample spacing
    const auto& p = samples_;
    if (r >= p.back().first) return 0.0;
    auto it = std::upper_bound(p.begin(), p.end(), r,
                               [](double v, const auto& q) { return v < q.first; });
    const size_t i = it == p.begin() ? 0 : size_t(it - p.begin()) - 1;
    const double h = p[std::min(i + 1, p.size() - 1)].first - p[i].first;
    if (r - h >= 0.0) return (psi(r + h) - 2.0 * psi(r) + psi(r - h)) / (h * h);
    return (dpsi(r + h) - dpsi(r)) / h;
}

ValidationReport validate_warping(const WarpingSpec& spec, double r_max, int grid_points) {
    if (!(r_max > 0.0)) throw std::invalid_argument("validate_warping: r_max must be > 0");
    if (grid_points < 16)
        throw std::invalid_argument("validate_warping: grid_points must be >= 16");

    const double tol = spec.kind() == WarpKind::tabulated ? 1e-5 : 1e-8;

    std::vector<double> grid;
    for (int i = 1; i <= grid_points; ++i) grid.push_back(r_max * double(i) / grid_points);
    for (double r = r_max * 0.5; r > 1e-6 * r_max; r *= 0.5) grid.push_back(r);
    std::sort(grid.begin(), grid.end());

    ValidationReport rep;
    rep.tolerance = tol;
    rep.checks.push_back({"psi(0)=0", std::fabs(spec.psi(0.0)), true});

    double d0;
    if (spec.kind() == WarpKind::tabulated) {
        d0 = spec.dpsi(0.0);
    } else {
        const double h = 1e-6 * std::min(1.0, r_max);
        d0 = (spec.psi(h) - spec.psi(0.0)) / h;  // one-sided; analytic kinds have dpsi too
        d0 = 0.5 * (d0 + spec.dpsi(0.0));
    }
    rep.checks.push_back({"psi'(0)=1", std::fabs(d0 - 1.0), true});

    double conv = 0.0, geq = 0.0, sturm = 0.0;
    for (double r : grid) {
        conv = std::max(conv, -spec.ddpsi(r));
        const double ps = spec.psi(r);
        geq = std::max(geq, (r - ps) / std::max(1.0, r));
        sturm = std::max(sturm, (ps - r * spec.dpsi(r)) / std::max(1.0, ps));
    }
    rep.checks.push_back({"convexity", std::max(conv, 0.0), true});
    rep.checks.push_back({"psi>=r", std::max(geq, 0.0), true});
    rep.checks.push_back({"r*psi'>=psi", std::max(sturm, 0.0), true});

    rep.pass = true;
    for (auto& c : rep.checks) {
        c.pass = c.violation <= tol;
        rep.pass = rep.pass && c.pass;
    }
    return rep;
}

struct ModelManifold::Impl {
    int dim;
    WarpingSpec warp;
    double omega;
    // cumulative volume anchors on a geometric radius ladder
    std::vector<double> anchor_r;
    std::vector<double> anchor_v;
    double saturation_radius = kInf;  // volumes beyond here exceed double range

    double psi_pow(double r) const { return std::pow(warp.psi(r), dim - 1); }

    double volume_from(double v0, double r0, double r1) const {
        if (r1 <= r0) return v0;
        QuadOptions opts;
        opts.rel_tol = 5e-14;
        opts.abs_tol = std::max(1e-280, 1e-15 * v0);
        opts.throw_on_failure = false;
        QuadResult q = integrate([this](double t) { return psi_pow(t); }, r0, r1, opts);
        return v0 + omega * q.value;
    }

    double volume(double r) const {
        if (!(r > 0.0)) return 0.0;
        if (r >= saturation_radius) return kInf;
        if (r <= anchor_r.front()) return volume_from(0.0, 0.0, r);
        auto it = std::upper_bound(anchor_r.begin(), anchor_r.end(), r);
        const size_t i = size_t(it - anchor_r.begin()) - 1;
        return volume_from(anchor_v[i], anchor_r[i], r);
    }
};

ModelManifold::ModelManifold(int dim, WarpingSpec warping) {
    if (dim < 3) throw std::invalid_argument("ModelManifold: dimension must be >= 3");
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->warp = std::move(warping);
    impl->omega =
        2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);

    impl->anchor_r.push_back(1e-9);
    impl->anchor_v.push_back(impl->volume_from(0.0, 0.0, 1e-9));
    while (impl->anchor_v.back() < 1e290 && impl->anchor_r.back() < 1e9) {
        const double r0 = impl->anchor_r.back();
        const double r1 = r0 * 2.0;
        const double v1 = impl->volume_from(impl->anchor_v.back(), r0, r1);
        if (!std::isfinite(v1)) {
            impl->saturation_radius = r1;
            break;
        }
        impl->anchor_r.push_back(r1);
        impl->anchor_v.push_back(v1);
    }
    if (impl->anchor_v.back() >= 1e290)
        impl->saturation_radius = 2.0 * impl->anchor_r.back();
    impl_ = std::move(impl);
}

int ModelManifold::dim() const { return impl_->dim; }
double ModelManifold::sphere_area() const { return impl_->omega; }
const WarpingSpec& ModelManifold::warping() const { return impl_->warp; }
bool ModelManifold::is_euclidean() const {
    return impl_->warp.kind() == WarpKind::euclidean;
}

double ModelManifold::psi(double r) const { return impl_->warp.psi(r); }
double ModelManifold::dpsi(double r) const { return impl_->warp.dpsi(r); }
double ModelManifold::ddpsi(double r) const { return impl_->warp.ddpsi(r); }

double ModelManifold::volume(double r) const {
    if (r < 0.0) throw std::invalid_argument("volume: r must be >= 0");
    if (is_euclidean())
        return impl_->omega * std::pow(r, impl_->dim) / impl_->dim;
    return impl_->volume(r);
}

double ModelManifold::volume_derivative(double r) const {
    return impl_->omega * impl_->psi_pow(r);
}

double ModelManifold::inverse_volume(double s) const {
    if (s < 0.0) throw std::invalid_argument("inverse_volume: s must be >= 0");
    if (s == 0.0) return 0.0;
    const int N = impl_->dim;
    if (is_euclidean()) return std::pow(N * s / impl_->omega, 1.0 / N);

    double hi = std::pow(N * s / impl_->omega, 1.0 / N);  // upper bracket, V >= flat volume
    double lo = 0.0;
    double vhi = volume(hi);
    for (int k = 0; k < 200 && vhi < s; ++k) {  // only for invalid (non-convex) specs
        lo = hi;
        hi *= 2.0;
        vhi = volume(hi);
    }
    // seed from the anchor table
    double x = hi;
    const auto& ar = impl_->anchor_r;
    const auto& av = impl_->anchor_v;
    auto it = std::lower_bound(av.begin(), av.end(), s);
    if (it != av.begin() && it != av.end()) {
        const size_t i = size_t(it - av.begin());
        const double t = (std::log(s) - std::log(av[i - 1])) /
                         (std::log(av[i]) - std::log(av[i - 1]));
        x = std::min(hi, ar[i - 1] * std::pow(ar[i] / ar[i - 1], t));
    }
    // Newton on log V: one step is exact for power-law volumes and stays
    // stable for exponentially growing ones, where plain Newton overshoots
    // from below and then crawls back at ~1/rate per iteration.
    const double tol = 1e-13 * s;
    const double logs = std::log(s);
    for (int iter = 0; iter < 200; ++iter) {
        const double v = volume(x);
        if (std::isfinite(v) && std::fabs(v - s) <= tol) return x;
        if (v > s)
            hi = x;
        else
            lo = x;
        double xn;
        if (std::isfinite(v) && v > 0.0) {
            const double dv = volume_derivative(x);
            xn = x - (std::log(v) - logs) * v / dv;
        } else {
            xn = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
        }
        if (!(xn > lo && xn < hi)) xn = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * hi;
        x = xn;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return x;
}

double ModelManifold::jacobian(double t) const {
    if (t < 0.0) throw std::invalid_argument("jacobian: t must be >= 0");
    if (t == 0.0 || is_euclidean()) return 1.0;
    const int N = impl_->dim;
    const double x = std::pow(N * t / impl_->omega, 1.0 / N);
    if (x < 1e-150) return 1.0;
    return std::pow(impl_->warp.psi(x) / x, N - 1);
}

double ModelManifold::jacobian_derivative(double t) const {
    if (is_euclidean()) return 0.0;
    if (!(t > 0.0)) throw std::invalid_argument("jacobian_derivative: t must be > 0");
    const int N = impl_->dim;
    const double x = std::pow(N * t / impl_->omega, 1.0 / N);
    const double ps = impl_->warp.psi(x);
    const double dps = impl_->warp.dpsi(x);
    // (psi' x - psi)/x^2, series fallback near the pole
    double q;
    if (x < 1e-5)
        q = impl_->warp.ddpsi(x) / 3.0;
    else
        q = (dps * x - ps) / (x * x);
    const double dxdt = x / (N * t);
    return (N - 1) * std::pow(ps / x, N - 2) * q * dxdt;
}

std::pair<double, double> ModelManifold::sectional_curvatures(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("sectional_curvatures: r must be > 0");
    if (is_euclidean()) return {0.0, 0.0};
    const double ps = impl_->warp.psi(r);
    const double dps = impl_->warp.dpsi(r);
    const double dd = impl_->warp.ddpsi(r);
    return {-dd / ps, -(dps * dps - 1.0) / (ps * ps)};
}

double ModelManifold::complete_lemma_ratio(double r) const {
    if (!(r > 0.0)) throw std::invalid_argument("complete_lemma_ratio: r must be > 0");
    const int N = impl_->dim;
    const double num =
        std::pow(r * r * r * impl_->psi_pow(r), double(N - 2) / double(N + 2));
    // integrand psi(t)^{N-1}/t^2 ~ t^{N-3} near 0: bounded for N >= 3
    QuadOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-14 * std::max(1.0, num);
    QuadResult den = integrate(
        [this, N](double t) {
            const double ps = impl_->warp.psi(t);
            if (t < 1e-160) return 0.0;
            return std::pow(ps, N - 1) / (t * t);
        },
        0.0, r, opts);
    return num / den.value;
}

}  // namespace hardylab
