#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cspectra/grid.hpp"
#include "cspectra/harmonics.hpp"

namespace cspectra {

// Per-node symmetric tangent matrix A[f] = cov Hessian + f I in the fixed
// orthonormal frame (e_theta, e_phi); 1x1 (a11 only) on S^1.
class HessianField {
  public:
    HessianField(GridPtr grid, int tangent_dim);

    const GridPtr& grid() const { return grid_; }
    int tangent_dim() const { return dim_; }

    std::vector<double> a11, a12, a22;

    double min_eigenvalue() const;  // min over nodes of the smallest eigenvalue
    ScalarField trace() const;

    static HessianField identity(GridPtr grid);

  private:
    GridPtr grid_;
    int dim_;
};

// A[f] via analytic spectral derivatives. Rejects fields whose analysis
// residual exceeds 1e-6 (input not band-limited on this grid).
HessianField hessian_operator(const ScalarField& f);
HessianField hessian_operator(const HarmonicSpectrum& spec, GridPtr grid);

// Q(f_1,...,f_{n-1}): n=3 takes two fields, n=2 one (Q(f) = f'' + f).
ScalarField mixed_discriminant(const std::vector<ScalarField>& fs);
ScalarField mixed_discriminant(const std::vector<HessianField>& as, GridPtr grid);

// V(f_1,...,f_n) = (1/n) int f_1 Q(f_2,...,f_n) dx
double mixed_volume(const std::vector<ScalarField>& fs);

// A sampled support function certified C^2_+: min eigenvalue of A[f] over
// all nodes exceeds 1e-8 * max(1, sup f).
class SupportField {
  public:
    static SupportField certify(const ScalarField& f, bool require_positive = false);
    static SupportField certify(const HarmonicSpectrum& spec, GridPtr grid,
                                bool require_positive = false);

    const ScalarField& field() const { return field_; }
    const HarmonicSpectrum& spectrum() const { return spectrum_; }
    const GridPtr& grid() const { return field_.grid(); }
    double min_hessian_eigenvalue() const { return min_eig_; }

  private:
    SupportField(ScalarField f, HarmonicSpectrum spec, double min_eig);
    ScalarField field_;
    HarmonicSpectrum spectrum_;
    double min_eig_;
};

// Strictly positive radial function of a star body.
class RadialField {
  public:
    explicit RadialField(ScalarField f);
    const ScalarField& field() const { return field_; }
    const GridPtr& grid() const { return field_.grid(); }

  private:
    ScalarField field_;
};

// h_{Pi_i K} = (1/2) C Q_i(h); n=3 with i in {1,2}. On S^1, Pi K = 2 K^{pi/2}.
SupportField project_i(const SupportField& f, int i);
// General bilinear mixed projection, n=3 only.
SupportField mixed_projection(const SupportField& f1, const SupportField& f2);

// h_{Gamma K} = C(rho^{n+1})
SupportField centroid_body(const RadialField& rho);

// rho_{K*} = 1/h_K and the pointwise inverse.
RadialField polar_body(const SupportField& f);
SupportField polar_body(const RadialField& rho);

// Theta_i(h) = C((Pi_i h)^{-(n+1)}); n=3.
SupportField theta_map(const SupportField& f, int i);

// pi_0 f + pi_1 f with the orthogonal (1/omega_n-normalized) projection.
ScalarField degree01_projection(const ScalarField& f);

// 2-D curvature image: solves g'' + g = f^{-3} by Fourier division.
SupportField curvature_image_2d(const SupportField& f);

// Exact conversions between support and radial representation on S^1
// (Newton on the normal-angle parametrization / boundary maximization).
ScalarField radial_from_support_2d(const SupportField& h);
ScalarField support_from_radial_2d(const ScalarField& rho);
// h(theta) -> h(theta - angle)
ScalarField rotate_field_2d(const ScalarField& f, double angle);

// sup over nodes of |p| + |grad p| + |Hess p|_op; the C^2 distance proxy.
double c2_norm(const HarmonicSpectrum& p, GridPtr grid);

struct BodySpec {
    enum class Kind { ball, offset_ball, ellipsoid, harmonic_perturbation, random_smooth };
    struct Mode {
        int k = 0;
        int l = 1;
        double amplitude = 0.0;
    };

    Kind kind = Kind::ball;
    double radius = 1.0;            // ball, offset_ball, perturbation base
    Vec3 center{};                  // offset_ball
    std::vector<double> semi_axes;  // ellipsoid (size n)
    std::vector<Mode> modes;        // harmonic_perturbation
    std::uint64_t seed = 0;         // random_smooth
    int max_degree = 8;             // random_smooth
    double amplitude = 0.01;        // random_smooth, C^2-proxy size
    bool even_only = false;         // random_smooth: origin-symmetric bodies
};

SupportField realize(const BodySpec& spec, GridPtr grid);
std::string bodyspec_to_json(const BodySpec& spec);
BodySpec bodyspec_from_json(const std::string& text);

}  // namespace cspectra
