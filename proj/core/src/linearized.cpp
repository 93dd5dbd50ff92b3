#include "cspectra/linearized.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cspectra {

double pi_chain_scalar(int n, int i, int applications) {
    double w = unit_ball_volume(n - 1);
    double c = 1.0;
    for (int j = 0; j < applications; ++j) c = std::pow(c, i) * w;
    return c;
}

double theta_scalar(int n, int /*i*/) {
    return 2.0 * std::pow(unit_ball_volume(n - 1), -n);
}

double theta_sq_scalar(int n, int i) {
    return std::pow(theta_scalar(n, i), 1.0 - i * (n + 1));
}

double dx_multiplier(int n, int i, int m, int k) {
    if (n < 3 || i < 1 || i > n - 1 || m < 1)
        throw std::invalid_argument("dx_multiplier: need n >= 3, 1 <= i <= n-1, m >= 1");
    if (k < 2) return 0.0;
    double scale = pi_chain_scalar(n, i, 2 * m);
    double iv = i * radon_eigenvalue(n, k);
    return scale * (1.0 - std::pow(iv, 2 * m));
}

double dy_multiplier(int n, int i, int k) {
    if (n < 3 || i < 1 || i > n - 1)
        throw std::invalid_argument("dy_multiplier: need n >= 3, 1 <= i <= n-1");
    if (k < 2) return 0.0;
    double w = unit_ball_volume(n - 1);
    double coef = static_cast<double>(i) * i * (n + 1) * (n + 1) / (4.0 * w * w);
    double v = radon_eigenvalue(n, k), c = cosine_eigenvalue(n, k);
    return theta_sq_scalar(n, i) * (1.0 - coef * v * v * c * c);
}

MultiplierTable MultiplierTable::dx(int n, int i, int m, int max_degree) {
    MultiplierTable t;
    t.n_ = n;
    t.i_ = i;
    t.m_ = m;
    t.scale_ = pi_chain_scalar(n, i, 2 * m);
    t.entries_.resize(max_degree + 1);
    for (int k = 0; k <= max_degree; ++k) t.entries_[k] = dx_multiplier(n, i, m, k);
    return t;
}

MultiplierTable MultiplierTable::dy(int n, int i, int max_degree) {
    MultiplierTable t;
    t.n_ = n;
    t.i_ = i;
    t.m_ = 0;
    t.scale_ = theta_sq_scalar(n, i);
    t.entries_.resize(max_degree + 1);
    for (int k = 0; k <= max_degree; ++k) t.entries_[k] = dy_multiplier(n, i, k);
    return t;
}

long long kernel_dimension(const MultiplierTable& table, int max_degree, double tol) {
    long long dim = 0;
    int top = std::min(max_degree, table.max_degree());
    for (int k = 0; k <= top; ++k)
        if (std::abs(table.factor(k)) < tol) dim += dim_harmonic(table.ambient_dim(), k);
    return dim;
}

void write_multiplier_csv(std::ostream& out, const MultiplierTable& table) {
    char buf[64];
    out << "k,multiplier\n";
    for (int k = 0; k <= table.max_degree(); ++k) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g\n", k, table.multiplier(k));
        out << buf;
    }
}

namespace {
void require_clean_low_degrees(const HarmonicSpectrum& h, int max_forbidden) {
    double tol = 1e-12 * std::max(1.0, h.l2_norm());
    for (int k = 0; k <= std::min(max_forbidden, h.max_degree()); ++k)
        if (std::sqrt(h.degree_energy(k)) > tol) {
            std::ostringstream msg;
            msg << "resolvent: right-hand side has forbidden degree-" << k << " content";
            throw std::invalid_argument(msg.str());
        }
}

HarmonicSpectrum divide_by(const HarmonicSpectrum& h, int low,
                           const std::function<double(int)>& denom) {
    require_clean_low_degrees(h, low);
    HarmonicSpectrum g = h;
    for (int k = 0; k <= low; ++k) g.scale_degree(k, 0.0);
    for (int k = low + 1; k <= h.max_degree(); ++k) {
        double d = denom(k);
        if (std::abs(d) < 1e-10) {
            if (std::sqrt(h.degree_energy(k)) > 1e-12 * std::max(1.0, h.l2_norm())) {
                std::ostringstream msg;
                msg << "resolvent: multiplier vanishes at degree " << k;
                throw std::invalid_argument(msg.str());
            }
            g.scale_degree(k, 0.0);
            continue;
        }
        g.scale_degree(k, 1.0 / d);
    }
    return g;
}
}  // namespace

HarmonicSpectrum solve_resolvent_x(const HarmonicSpectrum& h, int i, int m) {
    int n = h.ambient_dim();
    if (n < 3) throw std::invalid_argument("solve_resolvent_x: needs n >= 3");
    return divide_by(h, 1, [n, i, m](int k) {
        return 1.0 - std::pow(i * radon_eigenvalue(n, k), 2 * m);
    });
}

HarmonicSpectrum solve_resolvent_y(const HarmonicSpectrum& h, int i) {
    int n = h.ambient_dim();
    if (n < 3) throw std::invalid_argument("solve_resolvent_y: needs n >= 3");
    double w = unit_ball_volume(n - 1);
    double coef = static_cast<double>(i) * i * (n + 1) * (n + 1) / (4.0 * w * w);
    int low = (i == n - 1) ? 2 : 1;
    return divide_by(h, low, [n, coef](int k) {
        double v = radon_eigenvalue(n, k), c = cosine_eigenvalue(n, k);
        return 1.0 - coef * v * v * c * c;
    });
}

namespace {
double mean_value(const ScalarField& f) {
    return integrate(f) / f.grid()->surface_measure();
}

// degree-1 orthogonal projection (the translation content)
ScalarField degree1_part(const ScalarField& f) {
    HarmonicSpectrum s = analyze(f, 1);
    s.scale_degree(0, 0.0);
    return synthesize(s, f.grid());
}

std::vector<ScalarField> volume_args(const ScalarField& f, int copies, GridPtr grid) {
    int n = grid->ambient_dim();
    std::vector<ScalarField> args(copies, f);
    args.resize(n, ScalarField(grid, 1.0));
    return args;
}
}  // namespace

ScalarField x_map(const ScalarField& g, int i, int m) {
    GridPtr grid = g.grid();
    int n = grid->ambient_dim();
    if (n != 3) throw std::invalid_argument("x_map: n=3 only");
    if (i < 1 || i > 2 || m < 1 || m > 4) throw std::invalid_argument("x_map: i in {1,2}, m in 1..4");
    ScalarField F = g + 1.0;
    SupportField body = SupportField::certify(F);
    // run the Pi chain with the homogeneity scale lambda tracked separately
    // (Pi_i(c h) = c^i Pi_i h) so iterates stay O(1)
    double lambda = 1.0;
    SupportField h = body;
    for (int step = 0; step < 2 * m; ++step) {
        SupportField p = project_i(h, i);
        double c = mean_value(p.field());
        h = SupportField::certify(p.field() * (1.0 / c));
        lambda = std::pow(lambda, i) * c;
    }
    double vh = mixed_volume(volume_args(h.field(), i + 1, grid));
    double vf = mixed_volume(volume_args(F, i + 1, grid));
    double r = lambda * std::pow(vh / vf, 1.0 / (1 + i));
    ScalarField scaled = F * r;
    return h.field() * (-lambda) + scaled - degree1_part(scaled);
}

ScalarField y_map(const ScalarField& g, int i, int m) {
    GridPtr grid = g.grid();
    int n = grid->ambient_dim();
    if (n != 3) throw std::invalid_argument("y_map: n=3 only");
    if (i < 1 || i > 2 || m < 1 || m > 4) throw std::invalid_argument("y_map: i in {1,2}, m in 1..4");
    ScalarField F = g + 1.0;
    SupportField body = SupportField::certify(F, /*require_positive=*/true);
    double lambda = 1.0;
    SupportField h = body;
    for (int step = 0; step < m; ++step) {
        SupportField p = theta_map(h, i);
        double c = mean_value(p.field());
        h = SupportField::certify(p.field() * (1.0 / c), /*require_positive=*/true);
        lambda = std::pow(lambda, -static_cast<double>(i) * (n + 1)) * c;
    }
    double vh = mixed_volume(volume_args(h.field(), n, grid));
    double vf = mixed_volume(volume_args(F, n, grid));
    double r = lambda * std::pow(vh / vf, 1.0 / n);
    ScalarField scaled = F * r;
    return h.field() * (-lambda) + scaled - degree1_part(scaled);
}

namespace {
using MapFn = std::function<ScalarField(const ScalarField&)>;

bool is_constant(const ScalarField& f, double* value) {
    double c = mean_value(f);
    ScalarField d = f;
    d += -c;
    if (d.sup_norm() > 1e-12 * std::max(1.0, std::abs(c))) return false;
    *value = c;
    return true;
}

ScalarField apply_degree_multipliers(const ScalarField& g,
                                     const std::function<double(int)>& mult) {
    HarmonicSpectrum s = analyze(g, g.grid()->work_degree());
    for (int k = 0; k <= s.max_degree(); ++k) s.scale_degree(k, mult(k));
    return synthesize(s, g.grid());
}
}  // namespace

DerivativeReport finite_difference_derivative(const std::string& map_id, const ScalarField& base,
                                              const ScalarField& direction,
                                              const std::vector<double>& steps) {
    GridPtr grid = base.grid();
    int n = grid->ambient_dim();

    MapFn apply;
    bool have_analytic = false;
    ScalarField analytic;

    auto parse_i = [&](char c) { return c - '0'; };

    if (map_id == "q1" || map_id == "q2") {
        int i = parse_i(map_id[1]);
        if (n == 3 && i == 2) {
            apply = [](const ScalarField& f) { return mixed_discriminant({f, f}); };
            analytic = mixed_discriminant({base, direction}) * 2.0;
        } else if (n == 3 && i == 1) {
            ScalarField ones(grid, 1.0);
            apply = [ones](const ScalarField& f) { return mixed_discriminant({f, ones}); };
            analytic = mixed_discriminant({direction, ones});
        } else if (n == 2 && i == 1) {
            apply = [](const ScalarField& f) { return mixed_discriminant({f}); };
            analytic = mixed_discriminant({direction});
        } else {
            throw std::invalid_argument("derivative: map " + map_id + " needs n=3 (or q1 at n=2)");
        }
        have_analytic = true;
    } else if (map_id == "pi1" || map_id == "pi2" || map_id == "pi1_sq" || map_id == "pi2_sq") {
        int i = parse_i(map_id[2]);
        int reps = map_id.size() > 3 ? 2 : 1;
        apply = [i, reps](const ScalarField& f) {
            SupportField s = SupportField::certify(f);
            for (int j = 0; j < reps; ++j) s = project_i(s, i);
            return s.field();
        };
        double c = 0.0;
        if (is_constant(base, &c) && (reps == 1 || std::abs(c - 1.0) < 1e-12)) {
            double w = unit_ball_volume(n - 1);
            double prefactor = reps == 1 ? std::pow(c, i - 1) * w : pi_chain_scalar(n, i, 2);
            analytic = apply_degree_multipliers(direction, [=](int k) {
                return prefactor * std::pow(i * radon_eigenvalue(n, k), reps);
            });
            have_analytic = true;
        }
    } else if (map_id == "x1" || map_id == "x2" || map_id == "y1" || map_id == "y2") {
        int i = parse_i(map_id[1]);
        bool is_x = map_id[0] == 'x';
        apply = [i, is_x](const ScalarField& f) { return is_x ? x_map(f, i) : y_map(f, i); };
        if (base.sup_norm() < 1e-12) {
            analytic = apply_degree_multipliers(direction, [=](int k) {
                return is_x ? dx_multiplier(n, i, 1, k) : dy_multiplier(n, i, k);
            });
            have_analytic = true;
        }
    } else {
        throw std::invalid_argument("derivative: unknown map '" + map_id + "'");
    }

    DerivativeReport report;
    report.map_id = map_id;
    report.steps = steps;
    report.has_analytic = have_analytic;
    if (have_analytic) report.analytic = analytic;
    for (double t : steps) {
        if (t <= 0.0) throw std::invalid_argument("derivative: steps must be positive");
        ScalarField plus = apply(base + direction * t);
        ScalarField minus = apply(base + direction * (-t));
        ScalarField fd = (plus - minus) * (0.5 / t);
        if (have_analytic) {
            double ref = std::max(analytic.sup_norm(), 1e-300);
            report.relative_errors.push_back(sup_distance(fd, analytic) / ref);
        }
        report.finite_differences.push_back(std::move(fd));
    }
    return report;
}

std::string derivative_report_to_json(const DerivativeReport& report) {
    nlohmann::json j;
    j["map"] = report.map_id;
    j["steps"] = report.steps;
    j["has_analytic"] = report.has_analytic;
    if (report.has_analytic) {
        j["analytic_sup_norm"] = report.analytic.sup_norm();
        j["relative_errors"] = report.relative_errors;
    }
    auto sups = nlohmann::json::array();
    for (const auto& f : report.finite_differences) sups.push_back(f.sup_norm());
    j["finite_difference_sup_norms"] = std::move(sups);
    return j.dump(2);
}

}  // namespace cspectra
