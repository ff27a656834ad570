#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hardylab/hardy.hpp"
#include "hardylab/transfer.hpp"

using namespace hardylab;
using namespace hardylab::transfer;
namespace {
constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double a, double b) {
    return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
}

RadialProfile random_profile(std::mt19937_64& rng) {
    const int k = 3 + int(rng() % 4);
    std::vector<double> r{0.0}, v{uniform(rng, 0.0, 1.5)};
    double x = 0.0;
    for (int i = 0; i < k; ++i) {
        x += uniform(rng, 0.2, 1.2);
        r.push_back(x);
        v.push_back(i + 1 == k ? 0.0 : uniform(rng, 0.0, 2.0));
    }
    return RadialProfile::piecewise_linear(r, v);
}
}  // namespace

TEST_CASE("transport map: euclidean identity and hyperbolic anchors") {
    ModelManifold e3(3, WarpingSpec::euclidean());
    auto Te = transport_map(e3);
    for (double r : {0.2, 1.0, 5.0}) {
        CHECK(Te.r_to_rho(r) == doctest::Approx(r).epsilon(1e-12));
        CHECK(Te.h(r) == doctest::Approx(1.0).epsilon(1e-12));
    }

    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto Th = transport_map(h3);
    CHECK(Th.r_to_rho(1.0) == doctest::Approx(1.0685721502293808).epsilon(1e-9));
    CHECK(Th.h(1.0) == doctest::Approx(0.90926741396185185).epsilon(1e-9));
    CHECK(Th.rho_to_r(1.0685721502293808) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("transport map: volume matching, contraction, pole limit") {
    for (auto spec : {WarpingSpec::hyperbolic(), WarpingSpec::scaled_sinh(1.7)}) {
        for (int N : {3, 5}) {
            ModelManifold m(N, spec);
            auto T = transport_map(m);
            const double omega = m.sphere_area();
            for (int i = 0; i < 100; ++i) {
                const double r = 1e-3 * std::pow(1e4, i / 99.0);
                const double rho = T.r_to_rho(r);
                const double resid =
                    std::fabs(m.volume(r) - omega * std::pow(rho, N) / N) /
                    std::max(m.volume(r), 1e-300);
                CHECK(resid <= 1e-9);
                CHECK(T.h(r) <= 1.0 + 1e-10);
            }
            CHECK(T.h(1e-4) == doctest::Approx(1.0).epsilon(1e-3));
        }
    }
}

TEST_CASE("transport function: euclidean identity, level sets, isometry") {
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto u = SectorFunction::radial(h3, RadialProfile::indicator(1.0, 1.0));
    auto v = transport_function(u);
    CHECK(v.manifold().is_euclidean());
    // S(1_{r<1}) = 1_{rho < 1.06857...}
    CHECK(v.profile()(1.06) == doctest::Approx(1.0));
    CHECK(v.profile()(1.075) == doctest::Approx(0.0));
    CHECK(v.profile().support() == doctest::Approx(1.0685721502293808).epsilon(1e-9));

    ModelManifold e3(3, WarpingSpec::euclidean());
    auto w = SectorFunction::radial(e3, RadialProfile::bump(1.0, 2.0));
    auto wt = transport_function(w);
    for (double r : {0.3, 1.0, 1.9})
        CHECK(wt.profile()(r) == doctest::Approx(w.profile()(r)).epsilon(1e-12));
}

TEST_CASE("transport isometry: Lorentz (2*,2) norms agree on random sector functions") {
    std::mt19937_64 rng(808);
    ModelManifold h4(4, WarpingSpec::hyperbolic());
    const double p = 2.0 * 4 / (4 - 2.0);
    for (int k = 0; k < 3; ++k) {
        const double w = uniform(rng, 0.2, 0.8) * h4.sphere_area();
        SectorFunction u(h4, {Sector{w, random_profile(rng)},
                              Sector{h4.sphere_area() - w, random_profile(rng)}});
        auto v = transport_function(u);
        CHECK(lorentz_norm(v, p, 2.0) ==
              doctest::Approx(lorentz_norm(u, p, 2.0)).epsilon(1e-6));
        // equidistribution at sampled levels
        for (double t : {0.2, 0.7}) {
            if (t >= u.sup_value()) continue;
            CHECK(distribution(v, t) == doctest::Approx(distribution(u, t)).epsilon(1e-8));
        }
    }
}

TEST_CASE("gradient contraction under transport for radial functions") {
    std::mt19937_64 rng(4141);
    for (auto spec : {WarpingSpec::hyperbolic(), WarpingSpec::scaled_sinh(0.8)}) {
        ModelManifold m(3, spec);
        for (int k = 0; k < 4; ++k) {
            auto u = SectorFunction::radial(m, random_profile(rng));
            if (u.is_zero()) continue;
            auto v = transport_function(u);
            const double em = dirichlet_energy(u);
            const double ef = dirichlet_energy(v);
            CHECK(ef <= em + 1e-8 * std::max(1.0, em));
        }
    }
}

TEST_CASE("alvino constant: frozen oracle values and monotonicity") {
    CHECK(alvino_constant(3) == doctest::Approx(1.2407009817988).epsilon(1e-10));
    CHECK(alvino_constant(4) == doctest::Approx(0.67093826696541392).epsilon(1e-10));
    double prev = kInf;
    for (int N = 3; N <= 10; ++N) {
        const double s = alvino_constant(N);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("embedding ratio stays below the sharp constant") {
    std::mt19937_64 rng(5150);
    for (auto spec : {WarpingSpec::euclidean(), WarpingSpec::hyperbolic(),
                      WarpingSpec::scaled_sinh(1.2)}) {
        for (int N : {3, 4}) {
            ModelManifold m(N, spec);
            auto u = SectorFunction::radial(m, RadialProfile::bump(1.0, 1.0));
            auto rep = embedding_ratio(u);
            CHECK(rep.ratio <= rep.sharp_constant + 1e-6);
            CHECK(rep.gap >= -1e-6);
            for (int k = 0; k < 3; ++k) {
                auto ur = SectorFunction::radial(m, random_profile(rng));
                if (ur.is_zero()) continue;
                auto rr = embedding_ratio(ur);
                CHECK(rr.ratio <= rr.sharp_constant + 1e-6);
            }
        }
    }
    // zero input rejected
    ModelManifold e3(3, WarpingSpec::euclidean());
    CHECK_THROWS_AS(embedding_ratio(SectorFunction::radial(e3, RadialProfile::zero())),
                    std::invalid_argument);
}

TEST_CASE("scaling sequence: flat invariance and hyperbolic convergence") {
    auto bump = RadialProfile::bump(1.0, 1.0);
    ModelManifold e3(3, WarpingSpec::euclidean());
    const double flat1 = scaling_sequence_ratio(e3, bump, 1);
    const double flat7 = scaling_sequence_ratio(e3, bump, 7);
    CHECK(flat7 == doctest::Approx(flat1).epsilon(1e-8));
    CHECK(flat1 <= alvino_constant(3) + 1e-6);

    ModelManifold h3(3, WarpingSpec::hyperbolic());
    double prev_gap = kInf;
    for (int k : {1, 4, 16, 64}) {
        const double ratio = scaling_sequence_ratio(h3, bump, k);
        const double gap = std::fabs(ratio - flat1);
        CHECK(gap < prev_gap);
        prev_gap = gap;
        if (k == 64) CHECK(gap <= 0.02 * flat1);
    }
}

TEST_CASE("weighted euclidean hardy: unweighted closed form and sinh ratio weight") {
    auto phi = hardy::sharpness_family(3, 0.1);
    auto [lhs, rhs] = weighted_euclidean_hardy_check(3, [](double) { return 1.0; }, phi);
    CHECK(lhs / rhs == doctest::Approx(0.25 / 0.36).epsilon(1e-7));

    auto bump = RadialProfile::bump(1.0, 1.5);
    auto [l2, r2] = weighted_euclidean_hardy_check(
        3, [](double r) { return r > 0.0 ? std::pow(std::sinh(r) / r, 2.0) : 1.0; }, bump);
    CHECK(l2 <= r2 + 1e-10);
    CHECK(l2 > 0.0);

    auto [lz, rz] =
        weighted_euclidean_hardy_check(3, [](double) { return 1.0; }, RadialProfile::zero());
    CHECK(lz == 0.0);
    CHECK(rz == 0.0);
}

TEST_CASE("manifold -> euclid deficit: flat reduction and radial-decreasing equality") {
    ModelManifold e3(3, WarpingSpec::euclidean());
    auto u = SectorFunction::radial(e3, RadialProfile::bump(1.0, 1.0));
    auto [md, fd] = manifold_to_euclid_deficit(u);
    CHECK(md == doctest::Approx(fd).epsilon(1e-7));

    // radial decreasing on hyperbolic: the transfer is an identity up to
    // quadrature, so the gap vanishes
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto uh = SectorFunction::radial(h3, RadialProfile::bump(1.0, 1.0));
    auto [mdh, fdh] = manifold_to_euclid_deficit(uh);
    CHECK(mdh > 0.0);
    CHECK(fdh > 0.0);
    CHECK(mdh >= fdh - 1e-8 * std::max(1.0, std::fabs(fdh)));
    CHECK(mdh == doctest::Approx(fdh).epsilon(1e-7));
}

TEST_CASE("manifold -> euclid deficit: strict gap for a non-monotone profile") {
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto f = RadialProfile::piecewise_linear({0.0, 0.7, 1.6}, {0.2, 1.0, 0.0});
    auto u = SectorFunction::radial(h3, f);
    auto [md, fd] = manifold_to_euclid_deficit(u);
    CHECK(md >= fd - 1e-8);
    CHECK(md > fd + 1e-3);  // rearrangement strictly lowers the deficit here
}

TEST_CASE("equidistribution of the transplanted flat profile") {
    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto u = SectorFunction::radial(
        h3, RadialProfile::piecewise_linear({0.0, 0.5, 1.2}, {0.6, 1.0, 0.0}));
    auto phi = hardy::to_euclidean_profile(h3, decreasing_rearrangement(u));
    // F(x) = phi(omega x^N/N) on flat space has F* = phi
    ModelManifold e3(3, WarpingSpec::euclidean());
    const double omega = e3.sphere_area();
    const double support =
        std::pow(3.0 * phi.support_bound() / omega, 1.0 / 3.0);
    auto F = RadialProfile::from_monotone_decreasing(
        [phi, omega](double x) { return phi(omega * x * x * x / 3.0); }, Fn(), support,
        {}, phi.sup_value(), Fn());
    auto Fstar = decreasing_rearrangement(SectorFunction::radial(e3, F));
    for (double s : {0.05, 0.3, 0.9, 2.0})
        CHECK(Fstar(s) == doctest::Approx(phi(s)).epsilon(1e-7));
}

TEST_CASE("euclid -> manifold deficit: reduction and inequality") {
    ModelManifold e3(3, WarpingSpec::euclidean());
    auto u = SectorFunction::radial(e3, RadialProfile::bump(1.0, 1.0));
    auto [fd, md] = euclid_to_manifold_deficit(e3, u);
    CHECK(fd == doctest::Approx(md).epsilon(1e-7));

    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto [fd2, md2] = euclid_to_manifold_deficit(h3, u);
    CHECK(fd2 >= md2 - 1e-8);
    CHECK(md2 >= -1e-8);

    // the weight at r=1 on hyperbolic space
    CHECK(1.0 / h3.psi(1.0) == doctest::Approx(0.85091812823932155).epsilon(1e-12));
}

TEST_CASE("weighted manifold hardy check") {
    ModelManifold e3(3, WarpingSpec::euclidean());
    auto [lhs, rhs] = weighted_manifold_hardy_check(e3, hardy::sharpness_family(3, 0.1));
    CHECK(lhs / rhs == doctest::Approx(0.25 / 0.36).epsilon(1e-7));

    ModelManifold h3(3, WarpingSpec::hyperbolic());
    auto [l2, r2] = weighted_manifold_hardy_check(h3, RadialProfile::bump(1.0, 2.0));
    CHECK(l2 <= r2 + 1e-10);
    CHECK(l2 > 0.0);

    auto [lz, rz] = weighted_manifold_hardy_check(h3, RadialProfile::zero());
    CHECK(lz == 0.0);
    CHECK(rz == 0.0);
}

TEST_CASE("deficit transfers hold across kinds and dimensions on seeded inputs") {
    std::mt19937_64 rng(616);
    for (auto spec : {WarpingSpec::euclidean(), WarpingSpec::hyperbolic(),
                      WarpingSpec::scaled_sinh(0.6)}) {
        for (int N : {3, 4, 5}) {
            ModelManifold m(N, spec);
            ModelManifold flat(N, WarpingSpec::euclidean());
            for (int k = 0; k < 2; ++k) {
                auto u = SectorFunction::radial(m, random_profile(rng));
                if (u.is_zero()) continue;
                auto [md, fd] = manifold_to_euclid_deficit(u);
                CHECK(md >= fd - 1e-8 * std::max(1.0, std::fabs(fd)));
                auto uf = SectorFunction::radial(flat, random_profile(rng));
                if (uf.is_zero()) continue;
                auto [fd2, md2] = euclid_to_manifold_deficit(m, uf);
                CHECK(fd2 >= md2 - 1e-8 * std::max(1.0, std::fabs(md2)));
            }
        }
    }
}
