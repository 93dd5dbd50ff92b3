#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <cspectra/grid.hpp>
#include <cspectra/harmonics.hpp>
#include <cspectra/transforms.hpp>

#include "helpers.hpp"

using namespace cspectra;
using testutil::random_spectrum;
using testutil::unit_mode;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("spectral transforms act diagonally") {
    auto grid = SphereGrid::make(3, 24);
    for (int k : {0, 2, 3, 4, 7}) {
        HarmonicSpectrum s = unit_mode(3, k, 1, 10);
        HarmonicSpectrum rs = radon_transform(s);
        HarmonicSpectrum cs = cosine_transform(s);
        CHECK(rs.at(k, 1) == doctest::Approx(radon_eigenvalue(3, k)).epsilon(1e-15));
        CHECK(cs.at(k, 1) == doctest::Approx(cosine_eigenvalue(3, k)).epsilon(1e-15));
    }
    CHECK_THROWS((void)radon_transform(HarmonicSpectrum(2, 4)));
}

TEST_CASE("quadrature radon agrees with the spectral route") {
    auto grid = SphereGrid::make(3, 48);
    HarmonicSpectrum s = random_spectrum(3, 12, 5);
    s *= 1.0 / s.l2_norm();
    ScalarField f = synthesize(s, grid);
    ScalarField a = radon_transform(f, TransformBackend::spectral);
    ScalarField b = radon_transform(f, TransformBackend::quadrature);
    CHECK(sup_distance(a, b) <= 1e-6);
}

TEST_CASE("quadrature cosine agrees with the spectral route") {
    // |u.x| is only C^0, so the grid rule converges slowly; 1e-3 at T=48
    auto grid = SphereGrid::make(3, 48);
    HarmonicSpectrum s = random_spectrum(3, 12, 6);
    s *= 1.0 / s.l2_norm();
    ScalarField f = synthesize(s, grid);
    ScalarField a = cosine_transform(f, TransformBackend::spectral);
    ScalarField b = cosine_transform(f, TransformBackend::quadrature);
    CHECK(sup_distance(a, b) <= 1e-3);
}

TEST_CASE("quadrature cosine on the constant gives 2 pi") {
    auto grid = SphereGrid::make(3, 48);
    ScalarField one(grid, 1.0);
    ScalarField c = cosine_transform(one, TransformBackend::quadrature);
    // integral of |u.x| over the sphere is exactly 2 pi for every u
    CHECK(std::abs(c.min_value() - 2.0 * kPi) <= 2e-3);
    CHECK(std::abs(c.max_value() - 2.0 * kPi) <= 2e-3);
}

TEST_CASE("transforms are self-adjoint") {
    auto grid = SphereGrid::make(3, 32);
    ScalarField f = synthesize(random_spectrum(3, 10, 21), grid);
    ScalarField g = synthesize(random_spectrum(3, 10, 22), grid);
    CHECK(self_adjointness_defect(f, g, TransformKind::radon) <= 1e-12);
    CHECK(self_adjointness_defect(f, g, TransformKind::cosine) <= 1e-12);
}

TEST_CASE("radon transform preserves the mean and kills odd content") {
    auto grid = SphereGrid::make(3, 32);
    HarmonicSpectrum s = random_spectrum(3, 9, 30);
    ScalarField f = synthesize(s, grid);
    ScalarField rf = radon_transform(f);
    HarmonicSpectrum rs = analyze(rf, 9);
    CHECK(rs.at(0, 1) == doctest::Approx(s.at(0, 1)).epsilon(1e-12));
    for (int k = 1; k <= 9; k += 2) CHECK(rs.degree_energy(k) <= 1e-24);
}

TEST_CASE("great-circle rule needs a dense circle") {
    auto grid = SphereGrid::make(3, 24);
    ScalarField f(grid, 1.0);
    CHECK_THROWS((void)radon_transform(f, TransformBackend::quadrature, 16));
}

TEST_CASE("quadrature radon on S^1 is rejected") {
    auto grid = SphereGrid::make(2, 24);
    ScalarField f(grid, 1.0);
    CHECK_THROWS((void)radon_transform(f, TransformBackend::quadrature));
}

TEST_CASE("cosine transform maps even functions to even functions") {
    auto grid = SphereGrid::make(3, 32);
    HarmonicSpectrum s = random_spectrum(3, 8, 44);
    ScalarField f = synthesize(s, grid);
    HarmonicSpectrum cs = analyze(cosine_transform(f), 10);
    for (int k = 1; k <= 9; k += 2) CHECK(cs.degree_energy(k) <= 1e-24);
}
