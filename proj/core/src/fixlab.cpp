#include "cspectra/fixlab.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "cspectra/harmonics.hpp"

namespace cspectra {

namespace {
constexpr double kPi = std::numbers::pi;

double mean_of(const HarmonicSpectrum& s, GridPtr grid) {
    return s.at(0, 1) / std::sqrt(grid->surface_measure());
}
}  // namespace

std::pair<double, double> ball_distance(const SupportField& f) {
    GridPtr grid = f.grid();
    HarmonicSpectrum p = f.spectrum();
    double lambda = mean_of(p, grid);
    if (lambda <= 0.0) throw std::invalid_argument("ball_distance: nonpositive mean width");
    p.scale_degree(0, 0.0);
    p.scale_degree(std::min(1, p.max_degree()), 0.0);
    p *= 1.0 / lambda;
    double l2 = p.l2_norm();
    return {c2_norm(p, grid), l2};
}

SupportField pgc_step_2d(const SupportField& f) {
    if (f.grid()->ambient_dim() != 2) throw std::invalid_argument("pgc_step_2d: n=2 only");
    RadialField rho(radial_from_support_2d(f));
    SupportField gamma = centroid_body(rho);
    SupportField pi_gamma = project_i(gamma, 1);
    ScalarField polar_support = support_from_radial_2d(reciprocal(pi_gamma.field()));
    return SupportField::certify(polar_support, /*require_positive=*/true);
}

double ellipse_distance_2d(const SupportField& f) {
    GridPtr grid = f.grid();
    if (grid->ambient_dim() != 2) throw std::invalid_argument("ellipse_distance_2d: n=2 only");
    ScalarField rho = radial_from_support_2d(f);
    const auto& ang = grid->angles();
    const auto& w = grid->weights();
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;
    for (std::size_t j = 0; j < grid->size(); ++j) {
        double r4 = 0.25 * w[j] * rho[j] * rho[j] * rho[j] * rho[j];
        double c = std::cos(ang[j]), s = std::sin(ang[j]);
        m11 += r4 * c * c;
        m12 += r4 * c * s;
        m22 += r4 * s * s;
    }
    double det = m11 * m22 - m12 * m12;
    if (det <= 1e-20) throw std::runtime_error("ellipse_distance_2d: degenerate second moments");
    double root = std::sqrt(det);
    double b11 = m11 / root, b12 = m12 / root, b22 = m22 / root;  // det 1
    // eigendecomposition of the normalized moment matrix
    double alpha = 0.5 * std::atan2(2.0 * b12, b11 - b22);
    double tr = b11 + b22;
    double gap = std::sqrt(std::max(0.25 * tr * tr - 1.0, 0.0));
    double e1 = 0.5 * tr + gap, e2 = 0.5 * tr - gap;
    double ca = std::cos(alpha), sa = std::sin(alpha);
    // inverse whitening W^{-1} = R diag(sqrt(e)) R^T, det 1
    double s1 = std::sqrt(e1), s2 = std::sqrt(e2);
    double w11 = s1 * ca * ca + s2 * sa * sa;
    double w12 = (s1 - s2) * ca * sa;
    double w22 = s1 * sa * sa + s2 * ca * ca;
    HarmonicSpectrum rs = analyze(rho, grid->work_degree());
    ScalarField whitened(grid);
    for (std::size_t j = 0; j < grid->size(); ++j) {
        double c = std::cos(ang[j]), s = std::sin(ang[j]);
        double x = w11 * c + w12 * s, y = w12 * c + w22 * s;
        double len = std::sqrt(x * x + y * y);
        whitened[j] = evaluate(rs, {x / len, y / len, 0.0}) / len;
    }
    SupportField wk = SupportField::certify(support_from_radial_2d(whitened),
                                            /*require_positive=*/true);
    return ball_distance(wk).first;
}

Trajectory iterate(const IterationConfig& cfg) {
    if (cfg.map == IterationConfig::Map::pgc_2d ? cfg.n != 2 : cfg.n != 3)
        throw std::invalid_argument("iterate: map/dimension mismatch");
    if (cfg.steps < 1) throw std::invalid_argument("iterate: steps >= 1");
    GridPtr grid = SphereGrid::make(cfg.n, cfg.resolution);
    SupportField body = realize(cfg.body, grid);
    double omega_n = unit_ball_volume(cfg.n);

    Trajectory traj;
    traj.has_ellipse = cfg.n == 2;
    for (int step = 1; step <= cfg.steps; ++step) {
        TrajectoryRecord rec;
        rec.step = step;
        try {
            switch (cfg.map) {
                case IterationConfig::Map::pi_sq:
                    body = project_i(project_i(body, cfg.i), cfg.i);
                    break;
                case IterationConfig::Map::theta_sq:
                    body = theta_map(theta_map(body, cfg.i), cfg.i);
                    break;
                case IterationConfig::Map::pgc_2d:
                    body = pgc_step_2d(body);
                    break;
            }
            HarmonicSpectrum s = body.spectrum();
            s.scale_degree(1, 0.0);  // recenter
            double lambda;
            if (cfg.normalization == IterationConfig::Normalization::mean_width) {
                lambda = mean_of(s, grid);
            } else {
                std::vector<ScalarField> args(cfg.n, synthesize(s, grid));
                lambda = std::pow(mixed_volume(args) / omega_n, 1.0 / cfg.n);
            }
            if (lambda <= 0.0) throw std::runtime_error("iterate: nonpositive scale");
            s *= 1.0 / lambda;
            body = SupportField::certify(s, grid);
            rec.scale = lambda;
        } catch (const std::exception& e) {
            traj.completed = false;
            traj.diagnostic = e.what();
            break;
        }
        auto [c2, l2] = ball_distance(body);
        rec.c2_proxy = c2;
        rec.l2 = l2;
        const HarmonicSpectrum& s = body.spectrum();
        for (int q = 0; q < 4; ++q) {
            int k = 2 * (q + 1);
            rec.even_energy[q] = k <= s.max_degree() ? s.degree_energy(k) : 0.0;
        }
        if (traj.has_ellipse) rec.ellipse_dist = ellipse_distance_2d(body);
        traj.records.push_back(rec);
    }
    return traj;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "step,scale,c2_proxy,l2,e2,e4,e6,e8";
    if (traj.has_ellipse) out << ",ellipse_dist";
    out << "\n";
    char buf[256];
    for (const auto& r : traj.records) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g", r.step,
                      r.scale, r.c2_proxy, r.l2, r.even_energy[0], r.even_energy[1],
                      r.even_energy[2], r.even_energy[3]);
        out << buf;
        if (traj.has_ellipse) {
            std::snprintf(buf, sizeof(buf), ",%.12g", r.ellipse_dist);
            out << buf;
        }
        out << "\n";
    }
}

namespace {
void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
}
}  // namespace

IterationConfig iteration_config_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    reject_unknown_keys(j, {"map", "i", "n", "resolution", "steps", "normalization", "body"},
                        "run");
    IterationConfig cfg;
    std::string map = j.at("map").get<std::string>();
    if (map == "pi_sq")
        cfg.map = IterationConfig::Map::pi_sq;
    else if (map == "theta_sq")
        cfg.map = IterationConfig::Map::theta_sq;
    else if (map == "pgc_2d")
        cfg.map = IterationConfig::Map::pgc_2d;
    else
        throw std::invalid_argument("config: unknown map '" + map + "'");
    cfg.n = cfg.map == IterationConfig::Map::pgc_2d ? 2 : 3;
    cfg.i = j.value("i", 1);
    cfg.n = j.value("n", cfg.n);
    cfg.resolution = j.value("resolution", 48);
    cfg.steps = j.value("steps", 20);
    std::string norm = j.value("normalization", std::string("mean_width"));
    if (norm == "mean_width")
        cfg.normalization = IterationConfig::Normalization::mean_width;
    else if (norm == "volume")
        cfg.normalization = IterationConfig::Normalization::volume;
    else
        throw std::invalid_argument("config: unknown normalization '" + norm + "'");
    const auto& body = j.at("body");
    reject_unknown_keys(
        body, {"kind", "radius", "center", "semi_axes", "modes", "seed", "L", "amplitude",
               "even_only"},
        "body");
    cfg.body = bodyspec_from_json(body.dump());
    return cfg;
}

std::string iteration_config_to_json(const IterationConfig& cfg) {
    nlohmann::json j;
    switch (cfg.map) {
        case IterationConfig::Map::pi_sq: j["map"] = "pi_sq"; break;
        case IterationConfig::Map::theta_sq: j["map"] = "theta_sq"; break;
        case IterationConfig::Map::pgc_2d: j["map"] = "pgc_2d"; break;
    }
    j["i"] = cfg.i;
    j["n"] = cfg.n;
    j["resolution"] = cfg.resolution;
    j["steps"] = cfg.steps;
    j["normalization"] =
        cfg.normalization == IterationConfig::Normalization::volume ? "volume" : "mean_width";
    j["body"] = nlohmann::json::parse(bodyspec_to_json(cfg.body));
    return j.dump(2);
}

}  // namespace cspectra
