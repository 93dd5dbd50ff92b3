#include "cspectra/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cspectra/parallel.hpp"

namespace cspectra {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes/weights on (-1,1) by Newton iteration on P_T.
void gauss_legendre(int T, std::vector<double>& x, std::vector<double>& w) {
    x.assign(T, 0.0);
    w.assign(T, 0.0);
    for (int i = 0; i < T; ++i) {
        // Chebyshev-based initial guess for the i-th root (descending order).
        double xi = std::cos(kPi * (i + 0.75) / (T + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Evaluate P_T and P_T' by the three-term recurrence.
            double p0 = 1.0, p1 = xi;
            for (int l = 2; l <= T; ++l) {
                double p2 = ((2 * l - 1) * xi * p1 - (l - 1) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = T * (xi * p1 - p0) / (xi * xi - 1.0);
            double dx = p1 / dp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // One clean-up pass so node and weight agree to machine precision.
        {
            double p0 = 1.0, p1 = xi;
            for (int l = 2; l <= T; ++l) {
                double p2 = ((2 * l - 1) * xi * p1 - (l - 1) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = T * (xi * p1 - p0) / (xi * xi - 1.0);
        }
        x[i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
}

}  // namespace

std::shared_ptr<const SphereGrid> SphereGrid::make(int ambient_dim, int resolution) {
    if (ambient_dim != 2 && ambient_dim != 3)
        throw std::invalid_argument("SphereGrid: ambient dimension must be 2 or 3");
    if (resolution < 4) throw std::invalid_argument("SphereGrid: resolution must be >= 4");

    auto grid = std::shared_ptr<SphereGrid>(new SphereGrid());
    grid->n_ = ambient_dim;
    grid->resolution_ = resolution;

    if (ambient_dim == 3) {
        int T = resolution;
        std::vector<double> x, w;
        gauss_legendre(T, x, w);
        grid->colatitudes_.resize(T);
        for (int i = 0; i < T; ++i) grid->colatitudes_[i] = std::acos(x[i]);

        int P = 2 * T;
        grid->azimuths_.resize(P);
        for (int j = 0; j < P; ++j) grid->azimuths_[j] = 2.0 * kPi * j / P;

        grid->nodes_.resize(static_cast<std::size_t>(T) * P);
        grid->weights_.resize(grid->nodes_.size());
        double wphi = 2.0 * kPi / P;
        for (int i = 0; i < T; ++i) {
            double st = std::sin(grid->colatitudes_[i]);
            double ct = x[i];
            for (int j = 0; j < P; ++j) {
                std::size_t idx = static_cast<std::size_t>(i) * P + j;
                double cp = std::cos(grid->azimuths_[j]);
                double sp = std::sin(grid->azimuths_[j]);
                grid->nodes_[idx] = {st * cp, st * sp, ct};
                grid->weights_[idx] = w[i] * wphi;
            }
        }
        grid->exactness_degree_ = 2 * T - 1;
    } else {
        int P = 2 * resolution;
        grid->azimuths_.resize(P);
        grid->nodes_.resize(P);
        grid->weights_.resize(P);
        for (int j = 0; j < P; ++j) {
            double a = 2.0 * kPi * j / P;
            grid->azimuths_[j] = a;
            grid->nodes_[j] = {std::cos(a), std::sin(a), 0.0};
            grid->weights_[j] = 2.0 * kPi / P;
        }
        grid->exactness_degree_ = P - 1;
    }
    return grid;
}

double SphereGrid::surface_measure() const { return n_ == 3 ? 4.0 * kPi : 2.0 * kPi; }

ScalarField::ScalarField(GridPtr grid, double fill)
    : grid_(std::move(grid)), values_(grid_->size(), fill) {}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size())
        throw std::invalid_argument("ScalarField: value count does not match grid");
}

namespace {
void check_same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid())
        throw std::invalid_argument("ScalarField: operands live on different grids");
}
}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    check_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += o.values_[j];
    return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
    check_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= o.values_[j];
    return *this;
}
ScalarField& ScalarField::operator*=(const ScalarField& o) {
    check_same_grid(*this, o);
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] *= o.values_[j];
    return *this;
}
ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}
ScalarField& ScalarField::operator+=(double s) {
    for (double& v : values_) v += s;
    return *this;
}

double ScalarField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}
bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }
ScalarField operator+(ScalarField a, double s) { return a += s; }
ScalarField operator-(ScalarField a, double s) { return a += -s; }

ScalarField pow_field(const ScalarField& f, int exponent) {
    ScalarField out = f;
    for (double& v : out.values()) v = std::pow(v, exponent);
    return out;
}

ScalarField reciprocal(const ScalarField& f) {
    ScalarField out = f;
    for (double& v : out.values()) {
        if (v == 0.0) throw std::domain_error("reciprocal: field vanishes at a node");
        v = 1.0 / v;
    }
    return out;
}

double integrate(const ScalarField& f) {
    const auto& w = f.grid()->weights();
    std::vector<double> terms(f.size());
    parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t j = b; j < e; ++j) terms[j] = w[j] * f[j];
    });
    return pairwise_sum(terms);
}

double inner_product(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f, g);
    const auto& w = f.grid()->weights();
    std::vector<double> terms(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) terms[j] = w[j] * f[j] * g[j];
    return pairwise_sum(terms);
}

double sup_distance(const ScalarField& f, const ScalarField& g) {
    check_same_grid(f, g);
    double m = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) m = std::max(m, std::abs(f[j] - g[j]));
    return m;
}

void write_field_csv(std::ostream& out, const ScalarField& f) {
    const auto& nodes = f.grid()->nodes();
    const auto& w = f.grid()->weights();
    out << "node_index,x,y,z,weight,value\n";
    char buf[160];
    for (std::size_t j = 0; j < f.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", j, nodes[j].x,
                      nodes[j].y, nodes[j].z, w[j], f[j]);
        out << buf;
    }
}

ScalarField read_field_csv(std::istream& in, GridPtr grid) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("field csv: empty input");
    std::vector<double> values(grid->size(), 0.0);
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 6) throw std::runtime_error("field csv: malformed row");
        std::size_t idx = std::stoul(cells[0]);
        if (idx >= values.size()) throw std::runtime_error("field csv: node index out of range");
        values[idx] = std::stod(cells[5]);
        ++count;
    }
    if (count != grid->size()) throw std::runtime_error("field csv: row count does not match grid");
    return ScalarField(std::move(grid), std::move(values));
}

}  // namespace cspectra
