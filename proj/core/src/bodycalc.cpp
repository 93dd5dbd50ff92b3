#include "cspectra/bodycalc.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cspectra/parallel.hpp"
#include "cspectra/transforms.hpp"

namespace cspectra {

namespace {
constexpr double kPi = std::numbers::pi;

double sym2_min_eig(double a11, double a12, double a22) {
    double mean = 0.5 * (a11 + a22);
    double rad = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    return mean - rad;
}

double sym2_op_norm(double a11, double a12, double a22) {
    double mean = 0.5 * (a11 + a22);
    double rad = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    return std::max(std::abs(mean + rad), std::abs(mean - rad));
}
}  // namespace

HessianField::HessianField(GridPtr grid, int tangent_dim)
    : grid_(std::move(grid)), dim_(tangent_dim) {
    a11.assign(grid_->size(), 0.0);
    if (dim_ == 2) {
        a12.assign(grid_->size(), 0.0);
        a22.assign(grid_->size(), 0.0);
    }
}

double HessianField::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < a11.size(); ++j) {
        double e = dim_ == 2 ? sym2_min_eig(a11[j], a12[j], a22[j]) : a11[j];
        m = std::min(m, e);
    }
    return m;
}

ScalarField HessianField::trace() const {
    ScalarField t(grid_);
    for (std::size_t j = 0; j < a11.size(); ++j)
        t[j] = dim_ == 2 ? a11[j] + a22[j] : a11[j];
    return t;
}

HessianField HessianField::identity(GridPtr grid) {
    HessianField h(grid, grid->ambient_dim() - 1);
    for (std::size_t j = 0; j < h.a11.size(); ++j) {
        h.a11[j] = 1.0;
        if (h.tangent_dim() == 2) h.a22[j] = 1.0;
    }
    return h;
}

HessianField hessian_operator(const HarmonicSpectrum& spec, GridPtr grid) {
    FieldJet jet = synthesize_jet(spec, grid);
    HessianField h(grid, grid->ambient_dim() - 1);
    if (grid->ambient_dim() == 3) {
        int P = 2 * grid->resolution();
        for (std::size_t j = 0; j < grid->size(); ++j) {
            double theta = grid->colatitudes()[j / P];
            double st = std::sin(theta), cot = std::cos(theta) / st;
            h.a11[j] = jet.ftt[j] + jet.f[j];
            h.a12[j] = (jet.ftp[j] - cot * jet.fp[j]) / st;
            h.a22[j] = jet.fpp[j] / (st * st) + cot * jet.ft[j] + jet.f[j];
        }
    } else {
        for (std::size_t j = 0; j < grid->size(); ++j) h.a11[j] = jet.ftt[j] + jet.f[j];
    }
    return h;
}

HessianField hessian_operator(const ScalarField& f) {
    HarmonicSpectrum spec = analyze(f, f.grid()->max_analysis_degree());
    ScalarField back = synthesize(spec, f.grid());
    double residual = sup_distance(back, f);
    if (residual > 1e-6 * std::max(1.0, f.sup_norm()))
        throw std::invalid_argument("hessian_operator: field not band-limited on this grid");
    return hessian_operator(spec, f.grid());
}

ScalarField mixed_discriminant(const std::vector<HessianField>& as, GridPtr grid) {
    int n = grid->ambient_dim();
    if (static_cast<int>(as.size()) != n - 1)
        throw std::invalid_argument("mixed_discriminant: expected n-1 arguments");
    ScalarField q(grid);
    if (n == 3) {
        const auto& A = as[0];
        const auto& B = as[1];
        for (std::size_t j = 0; j < grid->size(); ++j)
            q[j] = 0.5 * (A.a11[j] * B.a22[j] + A.a22[j] * B.a11[j] - 2.0 * A.a12[j] * B.a12[j]);
    } else {
        for (std::size_t j = 0; j < grid->size(); ++j) q[j] = as[0].a11[j];
    }
    return q;
}

ScalarField mixed_discriminant(const std::vector<ScalarField>& fs) {
    if (fs.empty()) throw std::invalid_argument("mixed_discriminant: no arguments");
    GridPtr grid = fs[0].grid();
    std::vector<HessianField> as;
    as.reserve(fs.size());
    for (const auto& f : fs) as.push_back(hessian_operator(f));
    return mixed_discriminant(as, grid);
}

double mixed_volume(const std::vector<ScalarField>& fs) {
    if (fs.empty()) throw std::invalid_argument("mixed_volume: no arguments");
    GridPtr grid = fs[0].grid();
    int n = grid->ambient_dim();
    if (static_cast<int>(fs.size()) != n)
        throw std::invalid_argument("mixed_volume: expected n arguments");
    std::vector<ScalarField> rest(fs.begin() + 1, fs.end());
    ScalarField q = mixed_discriminant(rest);
    return inner_product(fs[0], q) / n;
}

SupportField::SupportField(ScalarField f, HarmonicSpectrum spec, double min_eig)
    : field_(std::move(f)), spectrum_(std::move(spec)), min_eig_(min_eig) {}

SupportField SupportField::certify(const HarmonicSpectrum& spec, GridPtr grid,
                                   bool require_positive) {
    ScalarField f = synthesize(spec, grid);
    HessianField h = hessian_operator(spec, grid);
    double min_eig = h.min_eigenvalue();
    double threshold = 1e-8 * std::max(1.0, f.sup_norm());
    if (min_eig < threshold) {
        std::ostringstream msg;
        msg << "SupportField: convexity certification failed (min A-eigenvalue " << min_eig
            << " < threshold " << threshold << ")";
        throw std::runtime_error(msg.str());
    }
    if (require_positive && f.min_value() <= 0.0)
        throw std::runtime_error("SupportField: positivity required but field is not positive");
    return SupportField(std::move(f), spec, min_eig);
}

SupportField SupportField::certify(const ScalarField& f, bool require_positive) {
    HarmonicSpectrum spec = analyze(f, f.grid()->work_degree());
    SupportField s = certify(spec, f.grid(), require_positive);
    double residual = sup_distance(s.field(), f);
    if (residual > 1e-6 * std::max(1.0, f.sup_norm()))
        throw std::runtime_error("SupportField: analysis residual too large (not band-limited)");
    return s;
}

RadialField::RadialField(ScalarField f) : field_(std::move(f)) {
    if (!field_.all_finite() || field_.min_value() <= 0.0)
        throw std::invalid_argument("RadialField: values must be strictly positive");
}

SupportField mixed_projection(const SupportField& f1, const SupportField& f2) {
    GridPtr grid = f1.grid();
    if (grid->ambient_dim() != 3)
        throw std::invalid_argument("mixed_projection: bilinear form available for n=3 only");
    std::vector<HessianField> as;
    as.push_back(hessian_operator(f1.spectrum(), grid));
    as.push_back(hessian_operator(f2.spectrum(), grid));
    ScalarField q = mixed_discriminant(as, grid);
    HarmonicSpectrum qs = analyze_checked(q, grid->work_degree());
    HarmonicSpectrum out = cosine_transform(qs) * 0.5;
    return SupportField::certify(out, grid);
}

SupportField project_i(const SupportField& f, int i) {
    GridPtr grid = f.grid();
    if (grid->ambient_dim() == 2) {
        ScalarField rotated = rotate_field_2d(f.field(), 0.5 * kPi);
        return SupportField::certify(rotated * 2.0);
    }
    if (i != 1 && i != 2) throw std::invalid_argument("project_i: i must be 1 or 2 for n=3");
    std::vector<HessianField> as;
    as.push_back(hessian_operator(f.spectrum(), grid));
    as.push_back(i == 2 ? hessian_operator(f.spectrum(), grid) : HessianField::identity(grid));
    ScalarField q = mixed_discriminant(as, grid);
    HarmonicSpectrum qs = analyze_checked(q, grid->work_degree());
    HarmonicSpectrum out = cosine_transform(qs) * 0.5;
    return SupportField::certify(out, grid);
}

SupportField centroid_body(const RadialField& rho) {
    GridPtr grid = rho.grid();
    int n = grid->ambient_dim();
    ScalarField p = pow_field(rho.field(), n + 1);
    HarmonicSpectrum ps = analyze_checked(p, grid->work_degree());
    HarmonicSpectrum out = cosine_transform(ps);
    return SupportField::certify(out, grid, /*require_positive=*/true);
}

RadialField polar_body(const SupportField& f) {
    if (f.field().min_value() <= 0.0)
        throw std::invalid_argument("polar_body: support function must be positive");
    return RadialField(reciprocal(f.field()));
}

SupportField polar_body(const RadialField& rho) {
    return SupportField::certify(reciprocal(rho.field()), /*require_positive=*/true);
}

SupportField theta_map(const SupportField& f, int i) {
    GridPtr grid = f.grid();
    if (grid->ambient_dim() != 3) throw std::invalid_argument("theta_map: n=3 only");
    SupportField pi_f = project_i(f, i);
    if (pi_f.field().min_value() <= 0.0)
        throw std::domain_error("theta_map: Pi_i f is not strictly positive");
    ScalarField p = pow_field(pi_f.field(), -(grid->ambient_dim() + 1));
    HarmonicSpectrum ps = analyze_checked(p, grid->work_degree());
    HarmonicSpectrum out = cosine_transform(ps);
    return SupportField::certify(out, grid, /*require_positive=*/true);
}

ScalarField degree01_projection(const ScalarField& f) {
    return synthesize(analyze(f, 1), f.grid());
}

namespace {
// Evaluate a 2-D spectrum and two derivatives at an arbitrary angle.
void eval2d(const HarmonicSpectrum& spec, double a, double& h, double& h1, double& h2) {
    h = spec.at(0, 1) / std::sqrt(2.0 * kPi);
    h1 = 0.0;
    h2 = 0.0;
    for (int k = 1; k <= spec.max_degree(); ++k) {
        double ck = spec.at(k, 1) / std::sqrt(kPi);
        double sk = spec.at(k, 2) / std::sqrt(kPi);
        double c = std::cos(k * a), s = std::sin(k * a);
        h += ck * c + sk * s;
        h1 += k * (-ck * s + sk * c);
        h2 += -static_cast<double>(k) * k * (ck * c + sk * s);
    }
}

double wrap_pi(double x) {
    while (x > kPi) x -= 2.0 * kPi;
    while (x < -kPi) x += 2.0 * kPi;
    return x;
}
}  // namespace

SupportField curvature_image_2d(const SupportField& f) {
    GridPtr grid = f.grid();
    if (grid->ambient_dim() != 2) throw std::invalid_argument("curvature_image_2d: n=2 only");
    const HarmonicSpectrum& hs = f.spectrum();
    double odd = 0.0, total = 0.0;
    for (int k = 0; k <= hs.max_degree(); ++k) {
        total += hs.degree_energy(k);
        if (k % 2 == 1) odd += hs.degree_energy(k);
    }
    if (std::sqrt(odd) > 1e-10 * std::max(1.0, std::sqrt(total)))
        throw std::invalid_argument("curvature_image_2d: input not origin-symmetric");
    ScalarField rhs = pow_field(f.field(), -3);
    HarmonicSpectrum rs = analyze_checked(rhs, grid->work_degree());
    HarmonicSpectrum gs(2, rs.max_degree());
    for (int k = 0; k <= rs.max_degree(); ++k) {
        if (k % 2 == 1) continue;  // symmetric input: odd modes are noise
        double div = 1.0 - static_cast<double>(k) * k;
        gs.at(k, 1) = rs.at(k, 1) / div;
        if (k >= 1) gs.at(k, 2) = rs.at(k, 2) / div;
    }
    return SupportField::certify(gs, grid);
}

ScalarField radial_from_support_2d(const SupportField& h) {
    GridPtr grid = h.grid();
    if (grid->ambient_dim() != 2) throw std::invalid_argument("radial_from_support_2d: n=2 only");
    const HarmonicSpectrum& spec = h.spectrum();
    ScalarField rho(grid);
    const auto& angles = grid->angles();
    for (std::size_t j = 0; j < grid->size(); ++j) {
        double target = angles[j];
        double th = target;  // boundary normal angle; near target for near-disks
        for (int iter = 0; iter < 60; ++iter) {
            double hv, h1, h2;
            eval2d(spec, th, hv, h1, h2);
            double phi = th + std::atan2(h1, hv);
            double err = wrap_pi(phi - target);
            // d phi / d theta = h (h + h'') / (h^2 + h'^2) > 0 by convexity
            double dphi = hv * (hv + h2) / (hv * hv + h1 * h1);
            th -= err / dphi;
            if (std::abs(err) < 1e-15) break;
        }
        double hv, h1, h2;
        eval2d(spec, th, hv, h1, h2);
        rho[j] = std::sqrt(hv * hv + h1 * h1);
    }
    return rho;
}

ScalarField support_from_radial_2d(const ScalarField& rho) {
    GridPtr grid = rho.grid();
    if (grid->ambient_dim() != 2) throw std::invalid_argument("support_from_radial_2d: n=2 only");
    if (rho.min_value() <= 0.0)
        throw std::invalid_argument("support_from_radial_2d: radial function must be positive");
    HarmonicSpectrum spec = analyze(rho, grid->work_degree());
    const auto& angles = grid->angles();
    ScalarField h(grid);
    for (std::size_t j = 0; j < grid->size(); ++j) {
        double theta = angles[j];
        // dense scan for the supporting boundary direction, then Newton
        std::size_t best = 0;
        double best_val = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < grid->size(); ++m) {
            double val = rho[m] * std::cos(angles[m] - theta);
            if (val > best_val) {
                best_val = val;
                best = m;
            }
        }
        double phi = angles[best];
        for (int iter = 0; iter < 30; ++iter) {
            double r, r1, r2;
            eval2d(spec, phi, r, r1, r2);
            double c = std::cos(phi - theta), s = std::sin(phi - theta);
            double g1 = r1 * c - r * s;
            double g2 = r2 * c - 2.0 * r1 * s - r * c;
            if (g2 >= 0.0) break;  // fall back to the scan value
            double step = g1 / g2;
            phi -= step;
            if (std::abs(step) < 1e-15) break;
        }
        double r, r1, r2;
        eval2d(spec, phi, r, r1, r2);
        h[j] = std::max(r * std::cos(phi - theta), best_val);
    }
    return h;
}

ScalarField rotate_field_2d(const ScalarField& f, double angle) {
    GridPtr grid = f.grid();
    if (grid->ambient_dim() != 2) throw std::invalid_argument("rotate_field_2d: n=2 only");
    std::size_t P = grid->size();
    double steps = angle * P / (2.0 * kPi);
    long shift = std::lround(steps);
    if (std::abs(steps - shift) < 1e-12) {
        // exact node shift
        ScalarField out(grid);
        for (std::size_t j = 0; j < P; ++j) {
            long src = (static_cast<long>(j) - shift) % static_cast<long>(P);
            if (src < 0) src += static_cast<long>(P);
            out[j] = f[static_cast<std::size_t>(src)];
        }
        return out;
    }
    HarmonicSpectrum spec = analyze(f, grid->work_degree());
    HarmonicSpectrum rot(2, spec.max_degree());
    rot.at(0, 1) = spec.at(0, 1);
    for (int k = 1; k <= spec.max_degree(); ++k) {
        double c = std::cos(k * angle), s = std::sin(k * angle);
        double ck = spec.at(k, 1), sk = spec.at(k, 2);
        rot.at(k, 1) = ck * c - sk * s;
        rot.at(k, 2) = ck * s + sk * c;
    }
    return synthesize(rot, grid);
}

double c2_norm(const HarmonicSpectrum& p, GridPtr grid) {
    FieldJet jet = synthesize_jet(p, grid);
    double m = 0.0;
    if (grid->ambient_dim() == 3) {
        int P = 2 * grid->resolution();
        for (std::size_t j = 0; j < grid->size(); ++j) {
            double theta = grid->colatitudes()[j / P];
            double st = std::sin(theta), cot = std::cos(theta) / st;
            double grad = std::sqrt(jet.ft[j] * jet.ft[j] +
                                    (jet.fp[j] / st) * (jet.fp[j] / st));
            double h11 = jet.ftt[j];
            double h12 = (jet.ftp[j] - cot * jet.fp[j]) / st;
            double h22 = jet.fpp[j] / (st * st) + cot * jet.ft[j];
            m = std::max(m, std::abs(jet.f[j]) + grad + sym2_op_norm(h11, h12, h22));
        }
    } else {
        for (std::size_t j = 0; j < grid->size(); ++j)
            m = std::max(m, std::abs(jet.f[j]) + std::abs(jet.ft[j]) + std::abs(jet.ftt[j]));
    }
    return m;
}

namespace {
double constant_coefficient(int n, double value) {
    // coefficient of the constant basis function for a field identically `value`
    return value * std::sqrt(n == 3 ? 4.0 * kPi : 2.0 * kPi);
}
}  // namespace

SupportField realize(const BodySpec& spec, GridPtr grid) {
    int n = grid->ambient_dim();
    switch (spec.kind) {
        case BodySpec::Kind::ball: {
            if (spec.radius <= 0.0) throw std::invalid_argument("BodySpec: ball radius > 0");
            return SupportField::certify(ScalarField(grid, spec.radius));
        }
        case BodySpec::Kind::offset_ball: {
            if (spec.radius <= 0.0) throw std::invalid_argument("BodySpec: ball radius > 0");
            ScalarField f(grid);
            const auto& nodes = grid->nodes();
            for (std::size_t j = 0; j < grid->size(); ++j)
                f[j] = spec.radius + dot(spec.center, nodes[j]);
            return SupportField::certify(f);
        }
        case BodySpec::Kind::ellipsoid: {
            if (static_cast<int>(spec.semi_axes.size()) != n)
                throw std::invalid_argument("BodySpec: ellipsoid needs n semi-axes");
            ScalarField f(grid);
            const auto& nodes = grid->nodes();
            for (std::size_t j = 0; j < grid->size(); ++j) {
                const Vec3& u = nodes[j];
                double s = spec.semi_axes[0] * spec.semi_axes[0] * u.x * u.x +
                           spec.semi_axes[1] * spec.semi_axes[1] * u.y * u.y;
                if (n == 3) s += spec.semi_axes[2] * spec.semi_axes[2] * u.z * u.z;
                f[j] = std::sqrt(s);
            }
            return SupportField::certify(f);
        }
        case BodySpec::Kind::harmonic_perturbation: {
            int L = 0;
            for (const auto& mode : spec.modes) L = std::max(L, mode.k);
            HarmonicSpectrum s(n, std::max(L, 1));
            s.at(0, 1) = constant_coefficient(n, spec.radius);
            for (const auto& mode : spec.modes) s.at(mode.k, mode.l) += mode.amplitude;
            return SupportField::certify(s, grid);
        }
        case BodySpec::Kind::random_smooth: {
            if (spec.max_degree < 2) throw std::invalid_argument("BodySpec: random L >= 2");
            std::mt19937_64 rng(spec.seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            HarmonicSpectrum p(n, spec.max_degree);
            for (int k = 2; k <= spec.max_degree; ++k) {
                if (spec.even_only && k % 2 == 1) {
                    // keep the RNG stream aligned across the symmetric switch
                    for (int l = 1; l <= static_cast<int>(p.degree_dimension(k)); ++l) gauss(rng);
                    continue;
                }
                double decay = std::pow(static_cast<double>(k), -3.0);
                for (int l = 1; l <= static_cast<int>(p.degree_dimension(k)); ++l)
                    p.at(k, l) = decay * gauss(rng);
            }
            double size = c2_norm(p, grid);
            if (size > 0.0) p *= spec.amplitude / size;
            p.at(0, 1) += constant_coefficient(n, 1.0);
            return SupportField::certify(p, grid);
        }
    }
    throw std::logic_error("BodySpec: unknown kind");
}

namespace {
const char* kind_name(BodySpec::Kind kind) {
    switch (kind) {
        case BodySpec::Kind::ball: return "ball";
        case BodySpec::Kind::offset_ball: return "offset_ball";
        case BodySpec::Kind::ellipsoid: return "ellipsoid";
        case BodySpec::Kind::harmonic_perturbation: return "harmonic_perturbation";
        case BodySpec::Kind::random_smooth: return "random_smooth";
    }
    return "?";
}

BodySpec::Kind kind_from_name(const std::string& name) {
    if (name == "ball") return BodySpec::Kind::ball;
    if (name == "offset_ball") return BodySpec::Kind::offset_ball;
    if (name == "ellipsoid") return BodySpec::Kind::ellipsoid;
    if (name == "harmonic_perturbation") return BodySpec::Kind::harmonic_perturbation;
    if (name == "random_smooth") return BodySpec::Kind::random_smooth;
    throw std::invalid_argument("BodySpec: unknown kind '" + name + "'");
}
}  // namespace

std::string bodyspec_to_json(const BodySpec& spec) {
    nlohmann::json j;
    j["kind"] = kind_name(spec.kind);
    switch (spec.kind) {
        case BodySpec::Kind::ball:
            j["radius"] = spec.radius;
            break;
        case BodySpec::Kind::offset_ball:
            j["radius"] = spec.radius;
            j["center"] = {spec.center.x, spec.center.y, spec.center.z};
            break;
        case BodySpec::Kind::ellipsoid:
            j["semi_axes"] = spec.semi_axes;
            break;
        case BodySpec::Kind::harmonic_perturbation: {
            j["radius"] = spec.radius;
            auto modes = nlohmann::json::array();
            for (const auto& m : spec.modes)
                modes.push_back({{"k", m.k}, {"l", m.l}, {"amplitude", m.amplitude}});
            j["modes"] = std::move(modes);
            break;
        }
        case BodySpec::Kind::random_smooth:
            j["seed"] = spec.seed;
            j["L"] = spec.max_degree;
            j["amplitude"] = spec.amplitude;
            j["even_only"] = spec.even_only;
            break;
    }
    return j.dump();
}

BodySpec bodyspec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BodySpec spec;
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    switch (spec.kind) {
        case BodySpec::Kind::ball:
            spec.radius = j.value("radius", 1.0);
            break;
        case BodySpec::Kind::offset_ball: {
            spec.radius = j.value("radius", 1.0);
            auto c = j.at("center");
            spec.center = {c.at(0).get<double>(), c.at(1).get<double>(),
                           c.size() > 2 ? c.at(2).get<double>() : 0.0};
            break;
        }
        case BodySpec::Kind::ellipsoid:
            spec.semi_axes = j.at("semi_axes").get<std::vector<double>>();
            break;
        case BodySpec::Kind::harmonic_perturbation:
            spec.radius = j.value("radius", 1.0);
            for (const auto& m : j.at("modes"))
                spec.modes.push_back({m.at("k").get<int>(), m.at("l").get<int>(),
                                      m.at("amplitude").get<double>()});
            break;
        case BodySpec::Kind::random_smooth:
            spec.seed = j.at("seed").get<std::uint64_t>();
            spec.max_degree = j.at("L").get<int>();
            spec.amplitude = j.at("amplitude").get<double>();
            spec.even_only = j.value("even_only", false);
            break;
    }
    return spec;
}

}  // namespace cspectra
