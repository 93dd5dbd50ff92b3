#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cspectra/grid.hpp"

namespace cspectra {

// dim S^k = N(n,k) = (2k+n-2)/(k+n-2) * C(k+n-2, k)
long long dim_harmonic(int n, int k);

// omega_k: volume of the k-dimensional unit ball.
double unit_ball_volume(int k);

// Eigenvalues of the spherical Radon transform, the cosine transform and
// box = Delta + n - 1 on degree-k harmonics.
double radon_eigenvalue(int n, int k);   // v_{k,n}; needs n >= 3
double cosine_eigenvalue(int n, int k);  // w_{k,n}, includes the omega_{n-1} factor
double box_eigenvalue(int n, int k);     // (n-1) - k(k+n-2)

struct SobolevIndex {
    double s = 0.0;
    explicit SobolevIndex(double order);
};

// Coefficient table of a function on S^{n-1} in a real orthonormal basis,
// indexed by (degree k, order l) with 1 <= l <= N(n,k).
class HarmonicSpectrum {
  public:
    HarmonicSpectrum(int ambient_dim, int max_degree);

    int ambient_dim() const { return n_; }
    int max_degree() const { return L_; }
    std::size_t coefficient_count() const { return coeffs_.size(); }

    double at(int k, int l) const { return coeffs_[index(k, l)]; }
    double& at(int k, int l) { return coeffs_[index(k, l)]; }
    long long degree_dimension(int k) const;

    const std::vector<double>& raw() const { return coeffs_; }
    std::vector<double>& raw() { return coeffs_; }

    double l2_norm() const;
    double degree_energy(int k) const;  // sum of squared coefficients at degree k

    HarmonicSpectrum& operator+=(const HarmonicSpectrum& o);
    HarmonicSpectrum& operator-=(const HarmonicSpectrum& o);
    HarmonicSpectrum& operator*=(double s);
    void scale_degree(int k, double s);
    HarmonicSpectrum truncated(int max_degree) const;

  private:
    std::size_t index(int k, int l) const;
    int n_, L_;
    std::vector<std::size_t> offsets_;  // per-degree start, size L_+2
    std::vector<double> coeffs_;
};

HarmonicSpectrum operator+(HarmonicSpectrum a, const HarmonicSpectrum& b);
HarmonicSpectrum operator-(HarmonicSpectrum a, const HarmonicSpectrum& b);
HarmonicSpectrum operator*(HarmonicSpectrum a, double s);

// ||f||_{H^s}^2 = sum_k (1+k^2)^s ||pi_k f||_2^2
double sobolev_norm(const HarmonicSpectrum& spec, SobolevIndex s);

// Quadrature projection onto degrees <= L; requires grid exactness >= 2L.
HarmonicSpectrum analyze(const ScalarField& field, int max_degree);
// As analyze, but rejects input whose top-two-degree energy exceeds
// aliasing_tol relative to the total (nodewise products gone out of band).
HarmonicSpectrum analyze_checked(const ScalarField& field, int max_degree,
                                 double aliasing_tol = 1e-6);
ScalarField synthesize(const HarmonicSpectrum& spec, GridPtr grid);

// Field plus analytic first/second angular derivatives on the grid nodes.
// n=3: derivatives w.r.t. (theta, phi); n=2: ft=f', ftt=f'' and the phi
// slots are unused.
struct FieldJet {
    ScalarField f, ft, fp, ftt, ftp, fpp;
};
FieldJet synthesize_jet(const HarmonicSpectrum& spec, GridPtr grid);

// Pointwise evaluation away from grid nodes.
double evaluate(const HarmonicSpectrum& spec, const Vec3& u);

// JSON object {n, L, coeffs: [[k, l, value], ...]}.
std::string spectrum_to_json(const HarmonicSpectrum& spec);
HarmonicSpectrum spectrum_from_json(const std::string& text);

}  // namespace cspectra
