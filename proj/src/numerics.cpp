#include "hardylab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace hardylab {
namespace {

// 15-point Kronrod nodes with embedded 7-point Gauss rule (QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const {
        if (error != o.error) return error < o.error;
        return a > o.a;  // deterministic tie-break
    }
};

Segment gauss_kronrod(const Fn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * kXgk[j]);
        fv[14 - j] = f(c + h * kXgk[j]);
    }
    fv[7] = f(c);
    double res_k = kWgk[7] * fv[7];
    double res_g = kWg[3] * fv[7];
    double res_abs = kWgk[7] * std::fabs(fv[7]);
    for (int j = 0; j < 7; ++j) {
        res_k += kWgk[j] * (fv[j] + fv[14 - j]);
        res_abs += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
        if (j % 2 == 1) res_g += kWg[j / 2] * (fv[j] + fv[14 - j]);
    }
    const double mean = 0.5 * res_k;
    double res_asc = kWgk[7] * std::fabs(fv[7] - mean);
    for (int j = 0; j < 7; ++j)
        res_asc += kWgk[j] * (std::fabs(fv[j] - mean) + std::fabs(fv[14 - j] - mean));
    res_asc *= h;
    double err = std::fabs((res_k - res_g) * h);
    if (res_asc != 0.0 && err != 0.0)
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    const double eps = 50.0 * std::numeric_limits<double>::epsilon() * res_abs * h;
    err = std::max(err, eps);
    return Segment{a, b, res_k * h, err};
}

QuadResult adapt_finite(const Fn& f, double a, double b, const QuadOptions& opts,
                        const std::vector<double>& splits) {
    std::priority_queue<Segment> heap;
    long evals = 0;
    std::vector<double> pts{a};
    for (double p : splits)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        heap.push(gauss_kronrod(f, pts[i], pts[i + 1]));
        evals += 15;
    }
    double sum_val = 0.0, sum_err = 0.0;
    {
        std::priority_queue<Segment> copy = heap;
        while (!copy.empty()) {
            sum_val += copy.top().value;
            sum_err += copy.top().error;
            copy.pop();
        }
    }
    std::vector<Segment> frozen;  // intervals too small to split; errors kept
    while (sum_err > std::max(opts.abs_tol, opts.rel_tol * std::fabs(sum_val)) &&
           evals + 30 <= opts.max_evaluations && !heap.empty()) {
        Segment worst = heap.top();
        heap.pop();
        if (worst.b - worst.a < 16.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(1.0, std::fabs(worst.a))) {
            frozen.push_back(worst);
            continue;
        }
        const double m = 0.5 * (worst.a + worst.b);
        Segment left = gauss_kronrod(f, worst.a, m);
        Segment right = gauss_kronrod(f, m, worst.b);
        evals += 30;
        sum_val += left.value + right.value - worst.value;
        sum_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // deterministic final accumulation: sum segments ordered by left endpoint
    std::vector<Segment> segs = frozen;
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    QuadResult out;
    for (const Segment& s : segs) {
        out.value += s.value;
        out.abs_error += s.error;
    }
    out.evaluations = evals;
    out.converged =
        out.abs_error <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(out.value));
    return out;
}

}  // namespace
}  // namespace hardylab

namespace hardylab {

QuadResult integrate(const Fn& f, double a, double b, const QuadOptions& opts) {
    Integrand g;
    g.evaluator = f;
    return integrate(g, a, b, opts);
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts) {
    if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
    if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0))
        throw std::invalid_argument("integrate: tolerances must be positive");

    Fn g = f.evaluator;
    double lo = a, hi = b;
    std::vector<double> splits = opts.breakpoints;
    double tail_bound = 0.0;

    // Left endpoint power singularity: x = a + u^{1/(1-alpha)} flattens f ~ (x-a)^{-alpha}.
    if (f.singular_left && f.singular_exponent > 0.0 && f.singular_exponent < 1.0 &&
        std::isfinite(b)) {
        const double beta = 1.0 / (1.0 - f.singular_exponent);
        Fn inner = g;
        const double a0 = a;
        g = [inner, a0, beta](double u) {
            const double x = a0 + std::pow(u, beta);
            return inner(x) * beta * std::pow(u, beta - 1.0);
        };
        lo = 0.0;
        hi = std::pow(b - a, 1.0 / beta);
        std::vector<double> mapped;
        for (double p : splits)
            if (p > a && p < b) mapped.push_back(std::pow(p - a, 1.0 / beta));
        splits = mapped;
    } else if (!std::isfinite(b)) {
        switch (f.decay) {
            case DecayHint::compact_support:
                hi = std::max(a + 1e-30, f.decay_param);
                break;
            case DecayHint::exponential_decay: {
                // truncate where the bounding exponential tail is negligible
                const double rate = std::max(f.decay_param, 1e-8);
                double T = std::max(a + 1.0, 1.0);
                double bound;
                for (int k = 0; k < 200; ++k) {
                    bound = std::fabs(g(T)) / rate;
                    if (bound <= 0.01 * opts.abs_tol || T > 1e6) break;
                    T *= 1.5;
                }
                tail_bound = bound;
                hi = T;
                break;
            }
            case DecayHint::power_decay: {
                const double p = f.decay_param;
                if (p <= 1.0)
                    throw NumericError("integrate: divergent power tail", QuadResult{});
                double T = std::max(a + 1.0, 1.0);
                double bound;
                for (int k = 0; k < 400; ++k) {
                    bound = std::fabs(g(T)) * T / (p - 1.0);
                    if (bound <= 0.01 * opts.abs_tol || T > 1e12) break;
                    T *= 2.0;
                }
                tail_bound = bound;
                hi = T;
                break;
            }
            case DecayHint::unknown: {
                // x = a + t/(1-t)
                Fn inner = g;
                const double a0 = a;
                g = [inner, a0](double t) {
                    const double om = 1.0 - t;
                    return inner(a0 + t / om) / (om * om);
                };
                std::vector<double> mapped;
                for (double p : splits)
                    if (p > a && std::isfinite(p)) {
                        const double d = p - a;
                        mapped.push_back(d / (1.0 + d));
                    }
                splits = mapped;
                lo = 0.0;
                hi = 1.0;
                break;
            }
        }
        if (!(lo < hi)) {  // empty after truncation
            QuadResult r;
            r.abs_error = tail_bound;
            return r;
        }
    }

    QuadResult r = adapt_finite(g, lo, hi, opts, splits);
    r.abs_error += tail_bound;
    r.converged = r.abs_error <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(r.value));
    if (!r.converged && opts.throw_on_failure)
        throw NumericError("integrate: tolerance not reached within node budget", r);
    return r;
}

double halfline_integral(const Fn& integrand, double support, std::vector<double> breaks,
                         double rel_tol, double singular_exponent) {
    QuadOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = 1e-280;
    opts.breakpoints = breaks;
    opts.throw_on_failure = false;
    Integrand head_ig;
    head_ig.evaluator = integrand;
    if (singular_exponent > 0.0 && singular_exponent < 1.0) {
        head_ig.singular_left = true;
        head_ig.singular_exponent = singular_exponent;
    }
    if (std::isfinite(support)) {
        QuadResult r = integrate(head_ig, 0.0, support, opts);
        if (!r.converged && r.abs_error > 1e-6 * std::fabs(r.value))
            throw NumericError("halfline_integral: quadrature failed", r);
        return r.value;
    }
    double R0 = 1.0;
    for (double b : breaks)
        if (std::isfinite(b)) R0 = std::max(R0, b);
    R0 *= 2.0;
    // measured decay exponent of x*integrand(x) along doublings; the window
    // slides outward until the pre-asymptotic regime is cleared
    double alpha_min = kInf;
    bool decays = false;
    for (int attempt = 0; attempt < 40 && !decays; ++attempt) {
        double x = R0;
        double prev = std::fabs(x * integrand(x));
        alpha_min = kInf;
        decays = true;
        for (int k = 0; k < 12; ++k) {
            x *= 2.0;
            const double cur = std::fabs(x * integrand(x));
            if (!std::isfinite(cur)) return kInf;
            if (cur > 1e-300 && prev > 1e-300) {
                const double alpha = std::log2(prev / cur);
                alpha_min = std::min(alpha_min, alpha);
                if (cur >= prev * 1.02) decays = false;
            } else if (cur <= 1e-300) {
                alpha_min = std::min(alpha_min, 4.0);  // already negligible
            }
            prev = cur;
        }
        if (decays && alpha_min > 0.02) break;
        decays = false;
        if (attempt + 1 < 40) R0 *= 4096.0;
    }
    if (!decays || !(alpha_min > 0.02)) return kInf;
    QuadResult head = integrate(head_ig, 0.0, R0, opts);
    // g ~ x^{-1-alpha}: remaining tail beyond R is ~ (R*g(R))/alpha
    const double g0 = std::fabs(R0 * integrand(R0));
    const double scale = std::max(std::fabs(head.value), g0 / std::max(alpha_min, 0.02));
    double lnR1 = std::log(R0);
    if (g0 > 0.0) {
        const double target = std::max(1e-14 * scale, 1e-290);
        lnR1 = std::log(R0) +
               std::max(0.0, std::log(g0 / (target * std::max(alpha_min, 0.02)))) /
                   std::max(alpha_min, 0.02);
        lnR1 = std::min(lnR1, std::log(R0) + 700.0);
    }
    QuadResult tail{0.0, 0.0, 0, true};
    if (lnR1 > std::log(R0) + 1e-9) {
        Fn logint = [&integrand](double y) {
            const double r = std::exp(y);
            return integrand(r) * r;
        };
        QuadOptions topts = opts;
        topts.breakpoints.clear();
        tail = integrate(logint, std::log(R0), lnR1, topts);
    }
    if ((!head.converged || !tail.converged) &&
        head.abs_error + tail.abs_error > 1e-6 * std::fabs(head.value + tail.value))
        throw NumericError("halfline_integral: quadrature failed", head);
    return head.value + tail.value;
}


double monotone_invert(const Fn& increasing, double y, double lo, double hi, double tol) {
    if (!(lo <= hi)) throw std::invalid_argument("monotone_invert: requires lo <= hi");
    double flo = increasing(lo);
    double fhi = increasing(hi);
    const double ftol = tol * std::max(std::fabs(y), 1.0);
    const double slack = 1e-12 * std::max({std::fabs(flo), std::fabs(fhi), 1.0});
    if (y < flo - slack || y > fhi + slack)
        throw std::invalid_argument("monotone_invert: y outside [F(lo), F(hi)]");
    if (std::fabs(flo - y) <= ftol && flo >= y) return lo;
    if (std::fabs(fhi - y) <= ftol && fhi <= y) return hi;

    double x = lo, fx = flo;
    for (int iter = 0; iter < 300; ++iter) {
        // secant proposal; bisection fallback, geometric for wide brackets so
        // roots many orders below the bracket width are still resolved
        double mid = (lo > 0.0 && hi > 16.0 * lo) ? std::sqrt(lo * hi)
                                                  : 0.5 * (lo + hi);
        double xs = mid;
        if (fhi != flo) {
            xs = lo + (y - flo) * (hi - lo) / (fhi - flo);
            const double margin = 0.01 * (hi - lo);
            if (!(xs > lo + margin && xs < hi - margin)) xs = mid;
        }
        x = xs;
        fx = increasing(x);
        if (std::fabs(fx - y) <= ftol) return x;
        if (fx < y) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                               std::max(std::fabs(lo), std::fabs(hi)) +
                           1e-300)
            break;
    }
    return 0.5 * (lo + hi);
}

double derivative(const Fn& f, double x, double scale) {
    const double h = scale * std::max(std::fabs(x), 1.0) * 1e-6;
    auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

ScalarMin minimize_scalar(const Fn& f, double lo, double hi, int grid) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: requires lo < hi");
    if (grid < 8) throw std::invalid_argument("minimize_scalar: grid must be >= 8");
    int best = 0;
    std::vector<double> xs(grid + 1), fs(grid + 1);
    for (int i = 0; i <= grid; ++i) {
        xs[i] = lo + (hi - lo) * double(i) / double(grid);
        fs[i] = f(xs[i]);
        if (fs[i] < fs[best]) best = i;  // strict: leftmost tie-break
    }
    double a = xs[std::max(0, best - 1)];
    double b = xs[std::min(grid, best + 1)];
    // golden-section refinement
    const double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 90; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
        if (b - a <= 1e-12 * std::max(1.0, std::fabs(a)) + 1e-15) break;
    }
    double xr = f1 <= f2 ? x1 : x2;
    double fr = std::min(f1, f2);
    if (fr < fs[best]) return ScalarMin{xr, fr};
    return ScalarMin{xs[best], fs[best]};
}

}  // namespace hardylab
