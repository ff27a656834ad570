#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "hardylab/manifold.hpp"

using namespace hardylab;
namespace {
constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::pair<double, double>> sample_sinh(int n, double rmax) {
    // graded mesh, dense at the pole where the validation checks are tight
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i <= n; ++i) {
        const double t = double(i) / n;
        const double r = rmax * t * t * t;
        if (i > 0 && r <= out.back().first) continue;
        out.push_back({r, std::sinh(r)});
    }
    return out;
}
}  // namespace

TEST_CASE("validate_warping: euclidean and hyperbolic pass") {
    for (auto spec : {WarpingSpec::euclidean(), WarpingSpec::hyperbolic(),
                      WarpingSpec::scaled_sinh(2.0)}) {
        auto rep = validate_warping(spec, 10.0, 64);
        CHECK(rep.pass);
        for (const auto& c : rep.checks) CHECK(c.violation <= 1e-8);
    }
    // euclidean satisfies every axiom with equality
    auto rep = validate_warping(WarpingSpec::euclidean(), 10.0, 64);
    for (const auto& c : rep.checks) CHECK(c.violation == 0.0);
}

TEST_CASE("validate_warping: tabulated 0.9*r fails psi'(0)=1 with violation 0.1") {
    std::vector<std::pair<double, double>> samples;
    for (int i = 0; i <= 64; ++i) {
        const double r = 10.0 * i / 64.0;
        samples.push_back({r, 0.9 * r});
    }
    auto rep = validate_warping(WarpingSpec::tabulated(samples), 10.0, 64);
    CHECK_FALSE(rep.pass);
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name == "psi'(0)=1") {
            found = true;
            CHECK(c.violation == doctest::Approx(0.1).epsilon(1e-6));
            CHECK_FALSE(c.pass);
        }
    CHECK(found);
}

TEST_CASE("validate_warping: tabulated sinh passes at loosened tolerance") {
    auto rep = validate_warping(WarpingSpec::tabulated(sample_sinh(400, 12.0)), 10.0, 64);
    CHECK(rep.pass);
}

TEST_CASE("tabulated: non-increasing samples rejected") {
    std::vector<std::pair<double, double>> bad{{0.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}};
    CHECK_THROWS_AS(WarpingSpec::tabulated(bad), std::domain_error);
}

TEST_CASE("volume: closed forms") {
    ModelManifold e3(3, WarpingSpec::euclidean());
    CHECK(e3.sphere_area() == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(e3.volume(1.0) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-12));
    CHECK(e3.volume(0.0) == 0.0);

    // hyperbolic N=3: V(1) = pi (sinh 2 - 2), frozen from an independent oracle
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    CHECK(h3.volume(1.0) == doctest::Approx(5.110932705708289).epsilon(1e-9));
    CHECK(h3.volume(0.0) == 0.0);
}

TEST_CASE("volume/inverse_volume: euclidean closed forms at 100 points, rel 1e-10") {
    for (int N : {3, 4, 5}) {
        ModelManifold m(N, WarpingSpec::euclidean());
        const double omega = 2.0 * std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N);
        CHECK(m.sphere_area() == doctest::Approx(omega).epsilon(1e-13));
        for (int i = 1; i <= 100; ++i) {
            const double r = 1e-3 * std::pow(1e6, double(i) / 100.0);
            const double vref = omega * std::pow(r, N) / N;
            CHECK(m.volume(r) == doctest::Approx(vref).epsilon(1e-10));
            CHECK(m.inverse_volume(vref) == doctest::Approx(r).epsilon(1e-10));
            CHECK(m.jacobian(m.volume(r)) == doctest::Approx(1.0).epsilon(1e-12));
            auto [kr, kp] = m.sectional_curvatures(r);
            CHECK(std::fabs(kr) <= 1e-12);
            CHECK(std::fabs(kp) <= 1e-12);
        }
    }
}

TEST_CASE("inverse_volume: identity G(V(r)) = r across kinds") {
    std::mt19937_64 rng(99);
    for (auto spec : {WarpingSpec::euclidean(), WarpingSpec::hyperbolic(),
                      WarpingSpec::scaled_sinh(0.5),
                      WarpingSpec::tabulated(sample_sinh(600, 30.0))}) {
        for (int N : {3, 5}) {
            ModelManifold m(N, spec);
            for (int k = 0; k < 40; ++k) {
                const double r = std::pow(10.0, uniform(rng, -4.0, 1.0));
                const double v = m.volume(r);
                CHECK(m.inverse_volume(v) == doctest::Approx(r).epsilon(1e-9));
            }
            CHECK(m.inverse_volume(0.0) == 0.0);
        }
    }
}

TEST_CASE("inverse_volume: derived hyperbolic anchor") {
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    CHECK(h3.inverse_volume(5.110932705708289) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("inverse_volume: deep into the exponential-growth regime") {
    // volumes of order 1e80+ where one Newton overshoot used to stall the
    // bracketed iteration
    for (auto spec : {WarpingSpec::hyperbolic(), WarpingSpec::scaled_sinh(1.9993200),
                      WarpingSpec::scaled_sinh(0.31)}) {
        for (int N : {3, 4, 5}) {
            ModelManifold m(N, spec);
            for (double r : {12.0, 31.5416002, 55.0, 90.0}) {
                const double v = m.volume(r);
                if (!std::isfinite(v)) continue;
                CHECK(m.inverse_volume(v) == doctest::Approx(r).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("volume bounds and doubling lemma") {
    std::mt19937_64 rng(2024);
    for (auto spec : {WarpingSpec::euclidean(), WarpingSpec::hyperbolic(),
                      WarpingSpec::scaled_sinh(2.0)}) {
        ModelManifold m(4, spec);
        const double omega = m.sphere_area();
        for (int k = 0; k < 300; ++k) {
            const double r = std::pow(10.0, uniform(rng, -3.0, 1.0));
            const double flat = omega * std::pow(r, 4) / 4.0;
            CHECK(m.volume(r) >= flat * (1.0 - 1e-10));
            const double s = std::pow(10.0, uniform(rng, -3.0, 3.0));
            const double kap = 1.0 + 9.0 * uniform(rng, 0.0, 1.0);
            CHECK(m.inverse_volume(kap * s) <= kap * m.inverse_volume(s) * (1.0 + 1e-10));
            CHECK(m.inverse_volume(s) <=
                  std::pow(4.0 * s / omega, 0.25) * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("jacobian: values and monotonicity") {
    ModelManifold e3(3, WarpingSpec::euclidean());
    CHECK(e3.jacobian(0.7) == 1.0);
    CHECK(e3.jacobian(0.0) == 1.0);

    ModelManifold h3(3, WarpingSpec::hyperbolic());
    // t = 4pi/3 corresponds to flat radius 1: J = sinh(1)^2
    CHECK(h3.jacobian(4.0 * kPi / 3.0) ==
          doctest::Approx(1.3810978455418157).epsilon(1e-12));
    CHECK(h3.jacobian(0.0) == 1.0);

    std::mt19937_64 rng(5);
    for (auto spec : {WarpingSpec::hyperbolic(), WarpingSpec::scaled_sinh(0.7)}) {
        ModelManifold m(5, spec);
        for (int k = 0; k < 200; ++k) {
            double t1 = std::pow(10.0, uniform(rng, -6.0, 4.0));
            double t2 = std::pow(10.0, uniform(rng, -6.0, 4.0));
            if (t1 > t2) std::swap(t1, t2);
            CHECK(m.jacobian(t1) <= m.jacobian(t2) + 1e-12);
        }
    }
}

TEST_CASE("jacobian_derivative matches finite differences") {
    ModelManifold h4(4, WarpingSpec::hyperbolic());
    for (double t : {0.01, 0.5, 3.0, 40.0}) {
        const double fd =
            derivative([&h4](double x) { return h4.jacobian(x); }, t, 1.0);
        CHECK(h4.jacobian_derivative(t) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("sectional curvatures") {
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto [kr, kp] = h3.sectional_curvatures(1.0);
    CHECK(kr == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(kp == doctest::Approx(-1.0).epsilon(1e-12));

    ModelManifold s3(3, WarpingSpec::scaled_sinh(2.0));
    auto [kr2, kp2] = s3.sectional_curvatures(0.5);
    CHECK(kr2 == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(kp2 == doctest::Approx(-4.0).epsilon(1e-12));

    // valid specs have nonpositive curvatures
    ModelManifold t3(3, WarpingSpec::tabulated(sample_sinh(400, 12.0)));
    for (double r : {0.5, 1.0, 3.0}) {
        auto [a, b] = t3.sectional_curvatures(r);
        CHECK(a <= 1e-5);
        CHECK(b <= 1e-5);
    }
}

TEST_CASE("complete lemma ratio: r->0 limit equals N-2") {
    for (int N : {3, 4, 5}) {
        ModelManifold e(N, WarpingSpec::euclidean());
        CHECK(e.complete_lemma_ratio(1e-3) == doctest::Approx(N - 2.0).epsilon(1e-3));
        ModelManifold h(N, WarpingSpec::hyperbolic());
        CHECK(h.complete_lemma_ratio(1e-3) == doctest::Approx(N - 2.0).epsilon(1e-3));
    }
}

TEST_CASE("complete lemma ratio: bounded on hyperbolic N=3") {
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    double prev = kInf;
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
        const double v = h3.complete_lemma_ratio(r);
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        CHECK(v < 10.0);  // nonexploding
        prev = v;
    }
    (void)prev;
}

TEST_CASE("psi ratio monotonicity (sturm consequence)") {
    std::mt19937_64 rng(31);
    for (auto spec : {WarpingSpec::hyperbolic(), WarpingSpec::scaled_sinh(1.5)}) {
        for (int k = 0; k < 100; ++k) {
            double r2 = std::pow(10.0, uniform(rng, -3.0, 1.0));
            double r1 = r2 * (1.0 + uniform(rng, 0.0, 5.0));
            CHECK(spec.psi(r1) / spec.psi(r2) >= r1 / r2 - 1e-10);
        }
    }
}

TEST_CASE("dimension below 3 rejected") {
    CHECK_THROWS_AS(ModelManifold(2, WarpingSpec::euclidean()), std::invalid_argument);
}

TEST_CASE("concurrent volume and inversion calls agree with serial results") {
    ModelManifold h4(4, WarpingSpec::hyperbolic());
    std::vector<double> rs;
    for (int i = 0; i < 64; ++i) rs.push_back(1e-2 * std::pow(1e3, i / 63.0));
    std::vector<double> serial(rs.size());
    for (size_t i = 0; i < rs.size(); ++i)
        serial[i] = h4.inverse_volume(h4.volume(rs[i]));
    std::vector<double> parallel(rs.size());
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t]() {
            for (size_t i = t; i < rs.size(); i += 4)
                parallel[i] = h4.inverse_volume(h4.volume(rs[i]));
        });
    for (auto& th : pool) th.join();
    for (size_t i = 0; i < rs.size(); ++i) CHECK(parallel[i] == serial[i]);
}
