#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <cspectra/grid.hpp>
#include <cspectra/harmonics.hpp>

#include "helpers.hpp"

using namespace cspectra;
using testutil::random_spectrum;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("harmonic dimensions") {
    CHECK(dim_harmonic(3, 0) == 1);
    CHECK(dim_harmonic(3, 1) == 3);
    CHECK(dim_harmonic(3, 2) == 5);
    CHECK(dim_harmonic(3, 7) == 15);
    CHECK(dim_harmonic(4, 2) == 9);
    CHECK(dim_harmonic(2, 0) == 1);
    CHECK(dim_harmonic(2, 5) == 2);
    // N(n,k) = N(n,k-1)·(k+n-3)/k + N(n-1,k) consistency spot checks
    CHECK(dim_harmonic(5, 3) == 30);
    CHECK(dim_harmonic(8, 4) == 294);
}

TEST_CASE("unit ball volumes") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(unit_ball_volume(2) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-15));
    CHECK(unit_ball_volume(4) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-15));
}

TEST_CASE("radon eigenvalues: closed forms") {
    CHECK(radon_eigenvalue(3, 0) == 1.0);
    CHECK(radon_eigenvalue(3, 2) == -0.5);
    CHECK(radon_eigenvalue(3, 4) == 0.375);
    CHECK(radon_eigenvalue(3, 6) == doctest::Approx(-5.0 / 16.0).epsilon(1e-15));
    CHECK(radon_eigenvalue(4, 2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(radon_eigenvalue(3, 3) == 0.0);  // odd degrees are annihilated
    CHECK(radon_eigenvalue(5, 7) == 0.0);
}

TEST_CASE("cosine eigenvalues: closed forms") {
    CHECK(cosine_eigenvalue(3, 0) == doctest::Approx(2.0 * kPi).epsilon(1e-15));
    CHECK(cosine_eigenvalue(3, 2) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(cosine_eigenvalue(3, 4) == doctest::Approx(-kPi / 12.0).epsilon(1e-14));
    CHECK(cosine_eigenvalue(2, 0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(cosine_eigenvalue(2, 2) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    // S^1 pattern w_k = 4(-1)^{(k-2)/2}/(k^2-1) for even k
    CHECK(cosine_eigenvalue(2, 4) == doctest::Approx(-4.0 / 15.0).epsilon(1e-14));
    CHECK(cosine_eigenvalue(3, 1) == 0.0);
    // k=0 value is positive in every dimension (C maps positive to positive)
    for (int n = 2; n <= 8; ++n) CHECK(cosine_eigenvalue(n, 0) > 0.0);
}

TEST_CASE("box eigenvalues") {
    CHECK(box_eigenvalue(3, 0) == 2.0);
    CHECK(box_eigenvalue(3, 1) == 0.0);
    CHECK(box_eigenvalue(3, 2) == -4.0);
    CHECK(box_eigenvalue(4, 2) == -5.0);
}

TEST_CASE("box-cosine-radon factorization per degree") {
    for (int n = 3; n <= 8; ++n) {
        double w = unit_ball_volume(n - 1);
        for (int k = 0; k <= 200; k += 2) {
            double lhs = box_eigenvalue(n, k) * cosine_eigenvalue(n, k);
            double rhs = 2.0 * (n - 1) * w * radon_eigenvalue(n, k);
            double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
            CHECK(std::abs(lhs - rhs) / scale <= 1e-12);
        }
    }
}

TEST_CASE("basis orthonormality under quadrature") {
    auto grid = SphereGrid::make(3, 24);
    int L = 8;
    std::vector<ScalarField> basis;
    std::vector<std::pair<int, int>> idx;
    for (int k = 0; k <= L; ++k)
        for (int l = 1; l <= static_cast<int>(dim_harmonic(3, k)); ++l) {
            basis.push_back(synthesize(testutil::unit_mode(3, k, l, L), grid));
            idx.push_back({k, l});
        }
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = a; b < basis.size(); ++b) {
            double want = a == b ? 1.0 : 0.0;
            CHECK(inner_product(basis[a], basis[b]) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("analysis-synthesis roundtrip at full bandwidth") {
    for (int n : {2, 3}) {
        auto grid = SphereGrid::make(n, 48);
        HarmonicSpectrum s = random_spectrum(n, grid->max_analysis_degree(), 31 + n);
        HarmonicSpectrum back = analyze(synthesize(s, grid), grid->max_analysis_degree());
        CHECK((back - s).l2_norm() / s.l2_norm() <= 1e-11);
    }
}

TEST_CASE("aliasing guard flags out-of-band products") {
    auto grid = SphereGrid::make(3, 24);
    ScalarField f = synthesize(random_spectrum(3, 20, 9), grid);
    ScalarField sq = f * f;  // content up to degree 40 > exactness headroom
    CHECK_THROWS_AS((void)analyze_checked(sq, grid->work_degree(), 1e-12),
                    const std::runtime_error&);
    // smooth low-degree data passes
    ScalarField g = synthesize(random_spectrum(3, 4, 9), grid);
    CHECK_NOTHROW((void)analyze_checked(g + g * g * 0.1, grid->work_degree()));
}

TEST_CASE("jet derivatives match finite differences of evaluate") {
    auto grid = SphereGrid::make(3, 24);
    HarmonicSpectrum s = random_spectrum(3, 6, 12);
    FieldJet jet = synthesize_jet(s, grid);
    // pick an interior node and difference along theta and phi
    int P = 2 * grid->resolution();
    std::size_t j = static_cast<std::size_t>(10 * P + 7);
    double theta = grid->colatitudes()[10], phi = grid->azimuths()[7];
    double eps = 1e-5;
    auto at = [&](double t, double p) {
        return evaluate(s, {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)});
    };
    double ft = (at(theta + eps, phi) - at(theta - eps, phi)) / (2 * eps);
    double fp = (at(theta, phi + eps) - at(theta, phi - eps)) / (2 * eps);
    double ftt = (at(theta + eps, phi) - 2 * at(theta, phi) + at(theta - eps, phi)) / (eps * eps);
    double fpp = (at(theta, phi + eps) - 2 * at(theta, phi) + at(theta, phi - eps)) / (eps * eps);
    double ftp = (at(theta + eps, phi + eps) - at(theta + eps, phi - eps) -
                  at(theta - eps, phi + eps) + at(theta - eps, phi - eps)) /
                 (4 * eps * eps);
    CHECK(jet.f[j] == doctest::Approx(at(theta, phi)).epsilon(1e-12));
    CHECK(jet.ft[j] == doctest::Approx(ft).epsilon(1e-8));
    CHECK(jet.fp[j] == doctest::Approx(fp).epsilon(1e-8));
    CHECK(jet.ftt[j] == doctest::Approx(ftt).epsilon(1e-5));
    CHECK(jet.fpp[j] == doctest::Approx(fpp).epsilon(1e-5));
    CHECK(jet.ftp[j] == doctest::Approx(ftp).epsilon(1e-5));
}

TEST_CASE("laplacian through the jet reproduces -k(k+1)") {
    auto grid = SphereGrid::make(3, 24);
    for (int k : {2, 5, 8}) {
        HarmonicSpectrum s = random_spectrum(3, k, 40 + k, k);
        FieldJet jet = synthesize_jet(s, grid);
        int P = 2 * grid->resolution();
        for (std::size_t j : {std::size_t(3 * P + 1), std::size_t(12 * P + 20)}) {
            double theta = grid->colatitudes()[j / P];
            double st = std::sin(theta), ct = std::cos(theta);
            double lap = jet.ftt[j] + ct / st * jet.ft[j] + jet.fpp[j] / (st * st);
            CHECK(lap == doctest::Approx(-k * (k + 1.0) * jet.f[j]).epsilon(1e-9));
        }
    }
}

TEST_CASE("sobolev norm scaling") {
    HarmonicSpectrum s(3, 6);
    s.at(2, 1) = 1.0;
    s.at(4, 2) = 2.0;
    double h2 = sobolev_norm(s, SobolevIndex(1.0));
    CHECK(h2 == doctest::Approx(std::sqrt(5.0 + 4.0 * 17.0)).epsilon(1e-14));
    CHECK(sobolev_norm(s, SobolevIndex(0.0)) == doctest::Approx(s.l2_norm()).epsilon(1e-14));
    CHECK_THROWS((void)SobolevIndex(std::nan("")));
}

TEST_CASE("spectrum json roundtrip") {
    HarmonicSpectrum s = random_spectrum(3, 5, 77);
    HarmonicSpectrum back = spectrum_from_json(spectrum_to_json(s));
    CHECK(back.ambient_dim() == 3);
    CHECK(back.max_degree() == 5);
    CHECK((back - s).l2_norm() == 0.0);  // 17 significant digits survive the trip
}

TEST_CASE("degree energy bookkeeping") {
    HarmonicSpectrum s(3, 4);
    s.at(2, 1) = 3.0;
    s.at(2, 5) = 4.0;
    s.at(4, 9) = 12.0;
    CHECK(s.degree_energy(2) == doctest::Approx(25.0));
    CHECK(s.degree_energy(3) == 0.0);
    CHECK(s.l2_norm() == doctest::Approx(13.0));
    s.scale_degree(2, 2.0);
    CHECK(s.degree_energy(2) == doctest::Approx(100.0));
    HarmonicSpectrum t = s.truncated(2);
    CHECK(t.max_degree() == 2);
    CHECK(t.degree_energy(2) == doctest::Approx(100.0));
}
