#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

namespace cspectra {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    double r = norm(a);
    return {a.x / r, a.y / r, a.z / r};
}

// Quadrature grid on S^2 (Gauss-Legendre colatitudes x uniform longitudes) or
// S^1 (uniform angles). Immutable; build through make().
class SphereGrid {
  public:
    // n=3, resolution T: T Gauss-Legendre colatitudes x 2T longitudes.
    // n=2, resolution T: 2T uniform angles.
    static std::shared_ptr<const SphereGrid> make(int ambient_dim, int resolution);

    int ambient_dim() const { return n_; }
    int resolution() const { return resolution_; }
    std::size_t size() const { return nodes_.size(); }

    const std::vector<Vec3>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    // n=3 structure: node index = it * (2T) + ip.
    const std::vector<double>& colatitudes() const { return colatitudes_; }
    const std::vector<double>& azimuths() const { return azimuths_; }
    // n=2: angle of node j.
    const std::vector<double>& angles() const { return azimuths_; }

    // Quadrature is exact for band-limited integrands up to this degree.
    int exactness_degree() const { return exactness_degree_; }
    // Highest degree a single analysis pass is trusted for.
    int max_analysis_degree() const { return resolution_ - 1; }
    // Re-analysis degree for nodewise products/powers; leaves quadrature
    // headroom so the top retained degrees are still integrated exactly.
    int work_degree() const { return (2 * resolution_) / 3; }

    double surface_measure() const;  // 4*pi (S^2) or 2*pi (S^1)

  private:
    SphereGrid() = default;
    int n_ = 3;
    int resolution_ = 0;
    int exactness_degree_ = 0;
    std::vector<Vec3> nodes_;
    std::vector<double> weights_;
    std::vector<double> colatitudes_;
    std::vector<double> azimuths_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

// Function values sampled on a SphereGrid.
class ScalarField {
  public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid, double fill = 0.0);
    ScalarField(GridPtr grid, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }
    double& operator[](std::size_t j) { return values_[j]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(const ScalarField& o);
    ScalarField& operator*=(double s);
    ScalarField& operator+=(double s);

    double min_value() const;
    double max_value() const;
    double sup_norm() const;
    bool all_finite() const;

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);
ScalarField operator+(ScalarField a, double s);
ScalarField operator-(ScalarField a, double s);

// Nodewise integer power (negative allowed; caller guarantees nonzero values).
ScalarField pow_field(const ScalarField& f, int exponent);
ScalarField reciprocal(const ScalarField& f);

// Pairwise-summed quadrature; deterministic across thread counts.
double integrate(const ScalarField& f);
double inner_product(const ScalarField& f, const ScalarField& g);
double sup_distance(const ScalarField& f, const ScalarField& g);

// CSV rows: node_index,x,y,z,weight,value
void write_field_csv(std::ostream& out, const ScalarField& f);
ScalarField read_field_csv(std::istream& in, GridPtr grid);

}  // namespace cspectra
