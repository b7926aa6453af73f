#include <cmath>
#include <random>

#include <doctest.h>

#include "dsthin/errors.hpp"
#include "dsthin/geometry.hpp"

using namespace dsthin;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("make_unit_cell computes nu and rejects degenerate lattices")
{
    CHECK(make_unit_cell(0.5, 0, 0, 0.5).nu == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(make_unit_cell(0.5, 0, 0.1, 0.5).nu == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(make_unit_cell(0.47, 0.21, 0.12, 0.61).nu == doctest::Approx(0.2615).epsilon(1e-12));
    CHECK_THROWS_AS(make_unit_cell(0.5, 0.5, 0.5, 0.5), DegenerateLattice);
    CHECK_THROWS_AS(make_unit_cell(0.3, 0.2, 0.6, 0.4), DegenerateLattice);
}

TEST_CASE("unit cell invariant: stored nu equals recomputed nu exactly")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double a = d(rng), b = d(rng), c = d(rng), e = d(rng);
        if (std::abs(a * e - c * b) <= 1e-9)
            continue;
        const auto cell = make_unit_cell(a, b, c, e);
        CHECK(cell.nu == cell.d1x * cell.d2y - cell.d2x * cell.d1y);
    }
}

TEST_CASE("sample_direction matches the published linear map")
{
    const auto cell = make_unit_cell(0.5, 0, 0.1, 0.5);
    const Steering br;

    const auto d = sample_direction(cell, 17, 19, 1, 0, br);
    CHECK(d.u == doctest::Approx(0.1176).epsilon(1e-3));
    CHECK(d.v == doctest::Approx(-0.0235).epsilon(1e-2));

    // zero index is the steering direction
    const Steering st{0.3, -0.1};
    const auto d0 = sample_direction(cell, 17, 19, 0, 0, st);
    CHECK(d0.u == st.u0);
    CHECK(d0.v == st.v0);

    const auto sq = make_unit_cell(0.5, 0, 0, 0.5);
    const auto d11 = sample_direction(sq, 11, 13, 1, 1, br);
    CHECK(d11.u == doctest::Approx(0.1818).epsilon(1e-3));
    CHECK(d11.v == doctest::Approx(0.1538).epsilon(1e-3));
}

TEST_CASE("mid_direction sits halfway between adjacent samples")
{
    const auto cell = make_unit_cell(0.5, 0, 0.1, 0.5);
    const Steering br;

    const auto m00 = mid_direction(cell, 17, 19, 0, 0, br);
    CHECK(m00.u == doctest::Approx(0.0588).epsilon(1e-3));
    CHECK(m00.v == doctest::Approx(0.0409).epsilon(2e-3));

    // steering shifts the map additively
    const Steering st{0.2, 0.0};
    const auto ms = mid_direction(cell, 17, 19, 0, 0, st);
    CHECK(ms.u == doctest::Approx(m00.u + 0.2).epsilon(1e-15));
    CHECK(ms.v == doctest::Approx(m00.v).epsilon(1e-15));

    // average of samples (m, n) and (m+1, n+1)
    const auto a = sample_direction(cell, 11, 13, 3, 4, br);
    const auto b = sample_direction(cell, 11, 13, 4, 5, br);
    const auto mid = mid_direction(cell, 11, 13, 3, 4, br);
    CHECK(mid.u == doctest::Approx(0.5 * (a.u + b.u)).epsilon(1e-12));
    CHECK(mid.v == doctest::Approx(0.5 * (a.v + b.v)).epsilon(1e-12));
}

TEST_CASE("chi_psi basics")
{
    const Steering br;
    const auto sq = make_unit_cell(0.5, 0, 0, 0.5);
    auto [chi0, psi0] = chi_psi(sq, 0.0, 0.0, br);
    CHECK(chi0 == 0.0);
    CHECK(psi0 == 0.0);
    auto [chi1, psi1] = chi_psi(sq, 1.0, 0.0, br);
    CHECK(chi1 == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(psi1 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("round trip: chi_psi of sample_direction hits the sample nodes")
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> comp(-0.9, 0.9);
    std::uniform_int_distribution<int> dim(1, 64);
    int trials = 0;
    while (trials < 1000) {
        const double a = comp(rng), b = comp(rng), c = comp(rng), e = comp(rng);
        if (std::abs(a * e - c * b) <= 1e-3)
            continue;
        ++trials;
        const auto cell = make_unit_cell(a, b, c, e);
        const int P = dim(rng), Q = dim(rng);
        std::uniform_int_distribution<int> kd(0, P - 1), ld(0, Q - 1);
        const int k = kd(rng), l = ld(rng);
        const Steering st{comp(rng) * 0.5, comp(rng) * 0.5};
        const auto d = sample_direction(cell, P, Q, k, l, st);
        const auto [chi, psi] = chi_psi(cell, d.u, d.v, st);
        CHECK(chi == doctest::Approx(2.0 * kPi * k / P).epsilon(1e-9).scale(1.0));
        CHECK(psi == doctest::Approx(2.0 * kPi * l / Q).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("affine steering and lattice covariance of the sample map")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> comp(0.1, 0.8);
    for (int i = 0; i < 200; ++i) {
        const double a = comp(rng), e = comp(rng), c = comp(rng) * 0.3, b = 0.0;
        const auto cell = make_unit_cell(a, b, c, e);
        const int P = 7, Q = 9;
        const int k = i % P, l = (i / P) % Q;
        const Steering st{0.25, -0.15};
        const Steering br;
        const auto steered = sample_direction(cell, P, Q, k, l, st);
        const auto base = sample_direction(cell, P, Q, k, l, br);
        CHECK(steered.u == base.u + st.u0);
        CHECK(steered.v == base.v + st.v0);

        const double s = 1.7;
        const auto scaled = make_unit_cell(s * a, s * b, s * c, s * e);
        const auto ds = sample_direction(scaled, P, Q, k, l, br);
        CHECK(ds.u == doctest::Approx(base.u / s).epsilon(1e-12));
        CHECK(ds.v == doctest::Approx(base.v / s).epsilon(1e-12));
    }
}

TEST_CASE("grating lobes: positions, periodicity, and the GL-free test")
{
    const Steering br;
    const auto sq = make_unit_cell(0.5, 0, 0, 0.5);
    for (const auto& gl : grating_lobes(sq, br, 2)) {
        CHECK(gl.dir.u == doctest::Approx(2.0 * gl.b).epsilon(1e-12));
        CHECK(gl.dir.v == doctest::Approx(2.0 * gl.c).epsilon(1e-12));
    }

    const auto skew = make_unit_cell(0.5, 0, 0.1, 0.5);
    bool saw10 = false, saw01 = false;
    for (const auto& gl : grating_lobes(skew, br, 1)) {
        if (gl.b == 1 && gl.c == 0) {
            saw10 = true;
            CHECK(gl.dir.u == doctest::Approx(2.0).epsilon(1e-12));
            CHECK(gl.dir.v == doctest::Approx(-0.4).epsilon(1e-12));
        }
        if (gl.b == 0 && gl.c == 1) {
            saw01 = true;
            CHECK(gl.dir.u == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
            CHECK(gl.dir.v == doctest::Approx(2.0).epsilon(1e-12));
        }
    }
    CHECK(saw10);
    CHECK(saw01);

    CHECK(is_gl_free(sq, br));
    CHECK_FALSE(is_gl_free(make_unit_cell(1.0, 0, 0, 1.0), br)); // lobes at norm exactly 1
    CHECK(is_gl_free(make_unit_cell(0.47, 0.21, 0.12, 0.61), br));

    // every grating lobe lands on a 2 pi multiple in (chi, psi)
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> comp(0.1, 0.8);
    for (int i = 0; i < 100; ++i) {
        const auto cell = make_unit_cell(comp(rng), comp(rng) * 0.3, comp(rng) * 0.3, comp(rng));
        for (const auto& gl : grating_lobes(cell, br, 2)) {
            const auto [chi, psi] = chi_psi(cell, gl.dir.u, gl.dir.v, br);
            CHECK(std::abs(chi / (2 * kPi) - std::round(chi / (2 * kPi))) < 1e-9);
            CHECK(std::abs(psi / (2 * kPi) - std::round(psi / (2 * kPi))) < 1e-9);
        }
    }
}

TEST_CASE("direction visibility flag")
{
    CHECK(make_direction(0.6, 0.8).visible);
    CHECK_FALSE(make_direction(0.8, 0.8).visible);
    CHECK(make_direction(1.0, 0.0).visible);
}

TEST_CASE("steering_from_angles helper")
{
    const auto s = steering_from_angles(30.0, 0.0);
    CHECK(s.u0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s.v0 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}
