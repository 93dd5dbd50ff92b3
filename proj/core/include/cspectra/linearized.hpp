#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cspectra/bodycalc.hpp"
#include "cspectra/grid.hpp"
#include "cspectra/harmonics.hpp"

namespace cspectra {

// Scalar ball values of the operator chains: Pi_i^j(c 1) = c^i omega_{n-1}
// iterated, Theta_i(1) = 2 omega_{n-1}^{-n}, Theta_i^2(1) by homogeneity.
double pi_chain_scalar(int n, int i, int applications);
double theta_scalar(int n, int i);
double theta_sq_scalar(int n, int i);

// Diagonal derivative tables at the ball. dx: degree-k multiplier of
// DX_{i,1}^{2m}{0,.}; dy: of DY_{i,1}^{2}{0,.}. Degrees 0 and 1 are exact
// zeros by construction.
class MultiplierTable {
  public:
    static MultiplierTable dx(int n, int i, int m, int max_degree);
    static MultiplierTable dy(int n, int i, int max_degree);

    int ambient_dim() const { return n_; }
    int order() const { return i_; }
    int power() const { return m_; }  // 0 for dy tables
    int max_degree() const { return static_cast<int>(entries_.size()) - 1; }
    double scale() const { return scale_; }

    double multiplier(int k) const { return entries_[k]; }
    double factor(int k) const { return entries_[k] / scale_; }  // scale-normalized

  private:
    MultiplierTable() = default;
    int n_ = 0, i_ = 0, m_ = 0;
    double scale_ = 1.0;
    std::vector<double> entries_;
};

double dx_multiplier(int n, int i, int m, int k);
double dy_multiplier(int n, int i, int k);

// Number of harmonics of degree <= max_degree whose multiplier vanishes
// (relative tolerance against the table's scale).
long long kernel_dimension(const MultiplierTable& table, int max_degree, double tol = 1e-8);

// CSV rows: k,multiplier
void write_multiplier_csv(std::ostream& out, const MultiplierTable& table);

// g - i^{2m} R^{2m} g = h and g - (i^2(n+1)^2/(4 omega_{n-1}^2)) C^2 R^2 g = h,
// solved by per-degree division. Low-degree content must vanish: k in {0,1}
// for x, additionally k=2 when i = n-1 for y.
HarmonicSpectrum solve_resolvent_x(const HarmonicSpectrum& h, int i, int m);
HarmonicSpectrum solve_resolvent_y(const HarmonicSpectrum& h, int i);

// Fixed-point defect maps about the unit ball (n=3). x_map applies Pi_i 2m
// times, y_map applies Theta_i m times; both subtract the volume-matched
// scaled input and its degree-1 (translation) content.
ScalarField x_map(const ScalarField& g, int i, int m = 1);
ScalarField y_map(const ScalarField& g, int i, int m = 2);

struct DerivativeReport {
    std::string map_id;
    std::vector<double> steps;
    // central difference per step; analytic present only for registered maps
    std::vector<ScalarField> finite_differences;
    bool has_analytic = false;
    ScalarField analytic;
    std::vector<double> relative_errors;  // sup-norm, per step
};

// P(base + t dir) via central differences; attaches the analytic derivative
// when one is registered for map_id: q1,q2 (any base), pi1,pi2,pi1_sq,pi2_sq
// (base a ball), x1,x2,y1,y2 (base 0).
DerivativeReport finite_difference_derivative(const std::string& map_id, const ScalarField& base,
                                              const ScalarField& direction,
                                              const std::vector<double>& steps);

std::string derivative_report_to_json(const DerivativeReport& report);

}  // namespace cspectra
