// cspectra command-line front end: selftest, multiplier tables, transform and
// derivative checks, resolvent solves, iteration sweeps, 2-D identity runs.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <cspectra/bodycalc.hpp>
#include <cspectra/fixlab.hpp>
#include <cspectra/grid.hpp>
#include <cspectra/harmonics.hpp>
#include <cspectra/linearized.hpp>
#include <cspectra/parallel.hpp>
#include <cspectra/transforms.hpp>

using namespace cspectra;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

HarmonicSpectrum random_direction(int n, int degree, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    HarmonicSpectrum s(n, degree);
    for (int l = 1; l <= static_cast<int>(s.degree_dimension(degree)); ++l) s.at(degree, l) = gauss(rng);
    double norm = s.l2_norm();
    if (norm > 0.0) s *= 1.0 / norm;
    return s;
}

// ---------------------------------------------------------------- selftest

struct Check {
    std::string name;
    double target, tolerance, measured;
    bool pass;
};

void add(std::vector<Check>& out, const std::string& name, double target, double tol,
         double measured, bool absolute_defect = false) {
    bool pass = absolute_defect ? std::abs(measured) <= tol : std::abs(measured - target) <= tol;
    out.push_back({name, target, tol, measured, pass});
}

int cmd_selftest(const std::string& json_out) {
    std::vector<Check> checks;

    add(checks, "radon_eigenvalue_2_3", -0.5, 1e-15, radon_eigenvalue(3, 2));
    add(checks, "cosine_eigenvalue_2_3", kPi / 2, 1e-14, cosine_eigenvalue(3, 2));
    add(checks, "radon_eigenvalue_4_3", 0.375, 1e-15, radon_eigenvalue(3, 4));
    add(checks, "cosine_eigenvalue_4_3", -kPi / 12, 1e-14, cosine_eigenvalue(3, 4));

    // box C = 2(n-1) omega_{n-1} R per degree
    double defect = 0.0;
    for (int n = 3; n <= 8; ++n) {
        double w = unit_ball_volume(n - 1);
        for (int k = 0; k <= 200; k += 2) {
            double lhs = box_eigenvalue(n, k) * cosine_eigenvalue(n, k);
            double rhs = 2.0 * (n - 1) * w * radon_eigenvalue(n, k);
            double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
            defect = std::max(defect, std::abs(lhs - rhs) / scale);
        }
    }
    add(checks, "box_cosine_radon_identity", 0.0, 1e-12, defect, true);

    // multiplier nondegeneracy |i v_{k,n}| <= (n-2)/(n-1) for i < n-1
    double worst = 0.0;
    for (int n = 3; n <= 8; ++n)
        for (int i = 1; i < n - 1; ++i)
            for (int k = 2; k <= 100; k += 2)
                worst = std::max(worst, std::abs(i * radon_eigenvalue(n, k)) -
                                            static_cast<double>(n - 2) / (n - 1));
    add(checks, "radon_multiplier_bound", 0.0, 1e-14, std::max(worst, 0.0), true);

    auto grid = SphereGrid::make(3, 48);
    // quadrature moments
    ScalarField one(grid, 1.0);
    add(checks, "surface_area_s2", 4.0 * kPi, 1e-12, integrate(one));
    double m1 = 0.0, m2 = 0.0;
    {
        ScalarField cx(grid), cxx(grid), cxy(grid);
        const auto& nodes = grid->nodes();
        for (std::size_t j = 0; j < grid->size(); ++j) {
            cx[j] = nodes[j].x;
            cxx[j] = nodes[j].x * nodes[j].x;
            cxy[j] = nodes[j].x * nodes[j].y;
        }
        m1 = std::abs(integrate(cx));
        m2 = std::max(std::abs(integrate(cxx) - unit_ball_volume(3)), std::abs(integrate(cxy)));
    }
    add(checks, "moment_first_vanishes", 0.0, 1e-12, m1, true);
    add(checks, "moment_second_isotropic", 0.0, 1e-12, m2, true);

    // analyze/synthesize roundtrip on a random band-limited field
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss(0.0, 1.0);
        HarmonicSpectrum s(3, 12);
        for (int k = 0; k <= 12; ++k)
            for (int l = 1; l <= static_cast<int>(s.degree_dimension(k)); ++l)
                s.at(k, l) = gauss(rng);
        HarmonicSpectrum back = analyze(synthesize(s, grid), 12);
        add(checks, "analysis_roundtrip", 0.0, 1e-12, (back - s).l2_norm() / s.l2_norm(), true);

        ScalarField f = synthesize(s, grid);
        ScalarField g = synthesize(random_direction(3, 6, 11), grid);
        add(checks, "radon_self_adjoint", 0.0, 1e-12,
            self_adjointness_defect(f, g, TransformKind::radon), true);
        add(checks, "cosine_self_adjoint", 0.0, 1e-12,
            self_adjointness_defect(f, g, TransformKind::cosine), true);
    }

    // ball values
    SupportField ball = SupportField::certify(one);
    add(checks, "pi_1_ball", kPi, 1e-8, project_i(ball, 1).field()[0]);
    add(checks, "pi_2_ball", kPi, 1e-8, project_i(ball, 2).field()[0]);
    double theta1 = 2.0 / (kPi * kPi * kPi);
    add(checks, "theta_1_ball", theta1, 1e-8, theta_map(ball, 1).field()[0]);
    add(checks, "theta_2_ball", theta1, 1e-8, theta_map(ball, 2).field()[0]);
    {
        double r = std::pow(theta1, 1.0 / 9.0);
        SupportField rb = SupportField::certify(ScalarField(grid, r));
        add(checks, "theta_2_fixed_radius", r, 1e-6, theta_map(rb, 2).field()[0]);
    }

    // kernel dimensions of the linearizations
    add(checks, "kernel_dim_dx_n4_i2_m4", 5.0, 0.0,
        static_cast<double>(kernel_dimension(MultiplierTable::dx(4, 2, 4, 20), 20)));
    add(checks, "kernel_dim_dy_n3_i2", 9.0, 0.0,
        static_cast<double>(kernel_dimension(MultiplierTable::dy(3, 2, 20), 20)));
    add(checks, "kernel_dim_dy_n3_i1", 4.0, 0.0,
        static_cast<double>(kernel_dimension(MultiplierTable::dy(3, 1, 20), 20)));

    // resolvent worked value
    {
        HarmonicSpectrum h(4, 4);
        h.at(2, 1) = 1.0;
        add(checks, "resolvent_x_worked_value", 6561.0 / 6305.0, 1e-12,
            solve_resolvent_x(h, 2, 4).at(2, 1));
    }

    // 2-D identity on the disk of radius 1.3
    {
        auto circle = SphereGrid::make(2, 48);
        double r = 1.3;
        SupportField disk = SupportField::certify(ScalarField(circle, r));
        SupportField pi = project_i(disk, 1);
        SupportField gamma = centroid_body(RadialField(reciprocal(pi.field())));
        SupportField lambda = curvature_image_2d(disk);
        double want = 0.5 / (r * r * r);
        add(checks, "identity_2d_disk_gamma", want, 1e-8, gamma.field()[0]);
        add(checks, "identity_2d_disk_lambda", want, 1e-8, 0.5 * lambda.field()[0]);
    }

    // mixed volume permutation symmetry on a convex pair
    {
        BodySpec e;
        e.kind = BodySpec::Kind::ellipsoid;
        e.semi_axes = {1.0, 1.2, 0.9};
        ScalarField f = realize(e, grid).field();
        double v1 = mixed_volume({f, f, one});
        double v2 = mixed_volume({one, f, f});
        double v3 = mixed_volume({f, one, f});
        add(checks, "mixed_volume_symmetry", 0.0, 1e-8,
            std::max(std::abs(v1 - v2), std::abs(v1 - v3)) / std::abs(v1), true);
    }

    json report;
    bool all_pass = true;
    auto arr = json::array();
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", c.measured);
        arr.push_back({{"name", c.name},
                       {"target", c.target},
                       {"tolerance", c.tolerance},
                       {"measured", json::parse(buf)},
                       {"status", c.pass ? "pass" : "fail"}});
    }
    report["checks"] = std::move(arr);
    report["status"] = all_pass ? "pass" : "fail";
    std::string text = report.dump(2) + "\n";
    if (!json_out.empty())
        spit(json_out, text);
    else
        std::cout << text;
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- commands

int cmd_multipliers(int n, int i, int m, int L, const std::string& out_path) {
    MultiplierTable dx = MultiplierTable::dx(n, i, m, L);
    MultiplierTable dy = MultiplierTable::dy(n, i, L);
    std::ostringstream out;
    out << "k,dx_multiplier,dx_factor,dy_multiplier,dy_factor\n";
    char buf[160];
    for (int k = 0; k <= L; ++k) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g\n", k, dx.multiplier(k),
                      dx.factor(k), dy.multiplier(k), dy.factor(k));
        out << buf;
    }
    if (!out_path.empty())
        spit(out_path, out.str());
    else
        std::cout << out.str();
    return 0;
}

int cmd_transform(const std::string& kind, const std::string& backend, int resolution,
                  const std::string& body_path, const std::string& out_path, bool compare) {
    BodySpec spec = bodyspec_from_json(slurp(body_path));
    auto grid = SphereGrid::make(3, resolution);
    ScalarField f = realize(spec, grid).field();
    TransformBackend be =
        backend == "quadrature" ? TransformBackend::quadrature : TransformBackend::spectral;
    ScalarField out = kind == "radon" ? radon_transform(f, be) : cosine_transform(f, be);
    if (compare) {
        TransformBackend other = be == TransformBackend::spectral ? TransformBackend::quadrature
                                                                  : TransformBackend::spectral;
        ScalarField alt = kind == "radon" ? radon_transform(f, other) : cosine_transform(f, other);
        std::printf("backend_sup_difference %.12g\n", sup_distance(out, alt));
    }
    if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::binary);
        write_field_csv(os, out);
    }
    return 0;
}

int cmd_derivcheck(const std::string& map_id, int resolution, int degree, std::uint64_t seed,
                   const std::vector<double>& steps, double tol, const std::string& out_path) {
    int n = 3;
    auto grid = SphereGrid::make(n, resolution);
    ScalarField direction = synthesize(random_direction(n, degree, seed), grid);
    ScalarField base(grid, map_id[0] == 'x' || map_id[0] == 'y' ? 0.0 : 1.0);
    DerivativeReport report = finite_difference_derivative(map_id, base, direction, steps);
    std::string text = derivative_report_to_json(report) + "\n";
    if (!out_path.empty())
        spit(out_path, text);
    else
        std::cout << text;
    if (!report.has_analytic) return 0;
    double best = report.relative_errors.empty() ? 1.0 : report.relative_errors[0];
    for (double e : report.relative_errors) best = std::min(best, e);
    return best <= tol ? 0 : 1;
}

int cmd_kernel(const std::string& table, int n, int i, int m, int L, double tol) {
    MultiplierTable t = table == "dy" ? MultiplierTable::dy(n, i, L)
                                      : MultiplierTable::dx(n, i, m, L);
    std::printf("%lld\n", kernel_dimension(t, L, tol));
    return 0;
}

int cmd_resolvent(const std::string& which, int n, int i, int m, int L, std::uint64_t seed,
                  const std::string& out_path) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int low = which == "y" && i == n - 1 ? 2 : 1;
    HarmonicSpectrum h(n, L);
    for (int k = low + 1; k <= L; ++k)
        for (int l = 1; l <= static_cast<int>(h.degree_dimension(k)); ++l) h.at(k, l) = gauss(rng);
    HarmonicSpectrum g = which == "y" ? solve_resolvent_y(h, i) : solve_resolvent_x(h, i, m);
    // apply the operator back and measure the residual
    double w = unit_ball_volume(n - 1);
    HarmonicSpectrum applied = g;
    for (int k = 0; k <= L; ++k) {
        double v = radon_eigenvalue(n, k), c = cosine_eigenvalue(n, k);
        double mult = which == "y"
                          ? 1.0 - i * i * (n + 1.0) * (n + 1.0) / (4.0 * w * w) * v * v * c * c
                          : 1.0 - std::pow(i * v, 2 * m);
        applied.scale_degree(k, mult);
    }
    double residual = (applied - h).l2_norm();
    json out;
    out["residual"] = residual;
    out["solution_norm"] = g.l2_norm();
    std::cout << out.dump(2) << "\n";
    if (!out_path.empty()) spit(out_path, spectrum_to_json(g) + "\n");
    return residual <= 1e-12 ? 0 : 1;
}

int cmd_iterate(const std::string& config_path, const std::string& outdir) {
    json cfg = json::parse(slurp(config_path));
    json runs = cfg.is_array() ? cfg : json::array({cfg});
    json manifest = json::array();
    bool ok = true;
    for (std::size_t idx = 0; idx < runs.size(); ++idx) {
        json run = runs[idx];
        std::string output = run.value("output", "trajectory_" + std::to_string(idx) + ".csv");
        run.erase("output");
        IterationConfig ic = iteration_config_from_json(run.dump());
        Trajectory traj = iterate(ic);
        std::string path = outdir + "/" + output;
        std::ostringstream csv;
        write_trajectory_csv(csv, traj);
        spit(path, csv.str());
        json entry;
        entry["config"] = json::parse(iteration_config_to_json(ic));
        entry["output"] = output;
        entry["completed"] = traj.completed;
        if (!traj.completed) {
            entry["diagnostic"] = traj.diagnostic;
            ok = false;
        }
        manifest.push_back(std::move(entry));
    }
    spit(outdir + "/manifest.json", manifest.dump(2) + "\n");
    return ok ? 0 : 1;
}

int cmd_identity2d(double radius, int count, double amplitude, std::uint64_t seed, int resolution,
                   double tol) {
    auto grid = SphereGrid::make(2, resolution);
    // disk instance with the closed-form value
    SupportField disk = SupportField::certify(ScalarField(grid, radius));
    auto both_sides = [&](const SupportField& body) {
        SupportField pi = project_i(body, 1);
        SupportField gamma = centroid_body(RadialField(reciprocal(pi.field())));
        SupportField lambda = curvature_image_2d(body);
        return std::make_pair(gamma, lambda);
    };
    auto [dg, dl] = both_sides(disk);
    double disk_value = dg.field()[0];
    double max_err = sup_distance(dg.field(), dl.field() * 0.5);
    for (int c = 0; c < count; ++c) {
        BodySpec spec;
        spec.kind = BodySpec::Kind::random_smooth;
        spec.seed = seed + c;
        spec.amplitude = amplitude;
        spec.even_only = true;
        SupportField body = realize(spec, grid);
        auto [gamma, lambda] = both_sides(body);
        max_err = std::max(max_err, sup_distance(gamma.field(), lambda.field() * 0.5));
    }
    json out;
    out["disk_value"] = disk_value;
    out["disk_expected"] = 0.5 / (radius * radius * radius);
    out["bodies"] = count;
    out["max_sup_error"] = max_err;
    bool pass = max_err <= tol && std::abs(disk_value - 0.5 / (radius * radius * radius)) <= 1e-8;
    out["status"] = pass ? "pass" : "fail";
    std::cout << out.dump(2) << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for convex-geometric operator experiments"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may trail the subcommand
    int threads = 0;
    app.add_option("--threads", threads, "worker thread count (default: all cores)");

    std::string json_out;
    auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
    selftest->add_option("--json", json_out, "write the JSON report to a file");

    int n = 3, i = 1, m = 1, L = 16, resolution = 48, degree = 2, count = 50;
    std::uint64_t seed = 1;
    double tol = 1e-3, radius = 1.3, amplitude = 0.01;
    std::string out_path, kind = "radon", backend = "spectral", body_path, map_id = "pi2";
    std::string table = "dx", which = "x", config_path, outdir = ".";
    std::vector<double> steps{1e-3, 1e-4};
    bool compare = false;

    auto* mult = app.add_subcommand("multipliers", "derivative multiplier tables");
    mult->add_option("--n", n)->check(CLI::Range(3, 16));
    mult->add_option("--i", i)->check(CLI::Range(1, 15));
    mult->add_option("--m", m)->check(CLI::Range(1, 8));
    mult->add_option("--L", L)->check(CLI::Range(0, 200));
    mult->add_option("-o,--output", out_path);

    auto* tr = app.add_subcommand("transform", "apply a transform to a body's support function");
    tr->add_option("--kind", kind)->check(CLI::IsMember({"radon", "cosine"}));
    tr->add_option("--backend", backend)->check(CLI::IsMember({"spectral", "quadrature"}));
    tr->add_option("--resolution", resolution)->check(CLI::Range(8, 128));
    tr->add_option("--body", body_path)->required();
    tr->add_option("-o,--output", out_path);
    tr->add_flag("--compare", compare, "print the sup difference between backends");

    auto* dc = app.add_subcommand("derivcheck", "finite-difference derivative validation");
    dc->add_option("--map", map_id)
        ->check(CLI::IsMember({"q1", "q2", "pi1", "pi2", "pi1_sq", "pi2_sq", "x1", "x2", "y1", "y2"}));
    dc->add_option("--resolution", resolution)->check(CLI::Range(8, 128));
    dc->add_option("--degree", degree)->check(CLI::Range(0, 30));
    dc->add_option("--seed", seed);
    dc->add_option("--steps", steps);
    dc->add_option("--tol", tol);
    dc->add_option("-o,--output", out_path);

    auto* kr = app.add_subcommand("kernel", "kernel dimension of a multiplier table");
    kr->add_option("--table", table)->check(CLI::IsMember({"dx", "dy"}));
    kr->add_option("--n", n)->check(CLI::Range(3, 16));
    kr->add_option("--i", i)->check(CLI::Range(1, 15));
    kr->add_option("--m", m)->check(CLI::Range(1, 8));
    kr->add_option("--L", L)->check(CLI::Range(6, 200));
    double ktol = 1e-8;
    kr->add_option("--tol", ktol);

    auto* rs = app.add_subcommand("resolvent", "solve the diagonal resolvent equations");
    rs->add_option("--which", which)->check(CLI::IsMember({"x", "y"}));
    rs->add_option("--n", n)->check(CLI::Range(3, 16));
    rs->add_option("--i", i)->check(CLI::Range(1, 15));
    rs->add_option("--m", m)->check(CLI::Range(1, 8));
    rs->add_option("--L", L)->check(CLI::Range(2, 200));
    rs->add_option("--seed", seed);
    rs->add_option("-o,--output", out_path);

    auto* it = app.add_subcommand("iterate", "run fixed-point iteration trajectories");
    it->add_option("--config", config_path)->required()->check(CLI::ExistingFile);
    it->add_option("--outdir", outdir);

    double id_tol = 1e-6;
    auto* id = app.add_subcommand("identity2d", "verify Gamma Pi* = (1/2) Lambda on S^1");
    id->add_option("--radius", radius);
    id->add_option("--count", count)->check(CLI::Range(0, 1000));
    id->add_option("--amplitude", amplitude)->check(CLI::Range(0.0, 0.05));
    id->add_option("--seed", seed);
    id->add_option("--resolution", resolution)->check(CLI::Range(8, 128));
    id->add_option("--tol", id_tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (threads > 0) set_thread_count(threads);

    try {
        if (*selftest) return cmd_selftest(json_out);
        if (*mult) return cmd_multipliers(n, i, m, L, out_path);
        if (*tr) return cmd_transform(kind, backend, resolution, body_path, out_path, compare);
        if (*dc) return cmd_derivcheck(map_id, resolution, degree, seed, steps, tol, out_path);
        if (*kr) return cmd_kernel(table, n, i, m, L, ktol);
        if (*rs) return cmd_resolvent(which, n, i, m, L, seed, out_path);
        if (*it) return cmd_iterate(config_path, outdir);
        if (*id) return cmd_identity2d(radius, count, amplitude, seed, resolution, id_tol);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
