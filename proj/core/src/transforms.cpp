#include "cspectra/transforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cspectra/parallel.hpp"

namespace cspectra {

namespace {

HarmonicSpectrum apply_multiplier(HarmonicSpectrum spec, double (*eig)(int, int)) {
    for (int k = 0; k <= spec.max_degree(); ++k)
        spec.scale_degree(k, eig(spec.ambient_dim(), k));
    return spec;
}

// Smallest degree keeping all but a sliver of the energy; trims the cost of
// pointwise evaluation on great circles.
int effective_degree(const HarmonicSpectrum& spec, double rel = 1e-22) {
    double total = 0.0;
    for (int k = 0; k <= spec.max_degree(); ++k) total += spec.degree_energy(k);
    if (total == 0.0) return 0;
    double tail = 0.0;
    for (int k = spec.max_degree(); k >= 1; --k) {
        tail += spec.degree_energy(k);
        if (tail > rel * total) return k;
    }
    return 0;
}

}  // namespace

HarmonicSpectrum cosine_transform(const HarmonicSpectrum& spec) {
    return apply_multiplier(spec, &cosine_eigenvalue);
}

HarmonicSpectrum radon_transform(const HarmonicSpectrum& spec) {
    if (spec.ambient_dim() < 3)
        throw std::invalid_argument("radon_transform: needs ambient dimension >= 3");
    return apply_multiplier(spec, &radon_eigenvalue);
}

ScalarField cosine_transform(const ScalarField& f, TransformBackend backend) {
    const auto& grid = f.grid();
    if (backend == TransformBackend::spectral) {
        HarmonicSpectrum spec = analyze(f, grid->max_analysis_degree());
        return synthesize(cosine_transform(spec), grid);
    }
    const auto& nodes = grid->nodes();
    const auto& w = grid->weights();
    ScalarField out(grid);
    parallel_for(grid->size(), [&](std::size_t b, std::size_t e) {
        std::vector<double> terms(grid->size());
        for (std::size_t i = b; i < e; ++i) {
            for (std::size_t j = 0; j < grid->size(); ++j)
                terms[j] = w[j] * std::abs(dot(nodes[i], nodes[j])) * f[j];
            out[i] = pairwise_sum(terms);
        }
    });
    return out;
}

ScalarField radon_transform(const ScalarField& f, TransformBackend backend, int circle_points) {
    const auto& grid = f.grid();
    if (grid->ambient_dim() != 3)
        throw std::invalid_argument("radon_transform: field backend needs n=3");
    HarmonicSpectrum spec = analyze(f, grid->max_analysis_degree());
    if (backend == TransformBackend::spectral)
        return synthesize(radon_transform(spec), grid);

    if (circle_points < 256)
        throw std::invalid_argument("radon_transform: great-circle rule needs >= 256 points");
    HarmonicSpectrum trimmed = spec.truncated(effective_degree(spec));
    const auto& nodes = grid->nodes();
    ScalarField out(grid);
    parallel_for(grid->size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            Vec3 u = nodes[i];
            // fixed deterministic completion of u to an orthonormal frame
            Vec3 a = std::abs(u.z) < 0.9 ? normalized(cross(u, Vec3{0, 0, 1}))
                                         : normalized(cross(u, Vec3{1, 0, 0}));
            Vec3 bvec = cross(u, a);
            double s = 0.0;
            for (int t = 0; t < circle_points; ++t) {
                double ang = 2.0 * std::numbers::pi * t / circle_points;
                double ca = std::cos(ang), sa = std::sin(ang);
                Vec3 x{ca * a.x + sa * bvec.x, ca * a.y + sa * bvec.y, ca * a.z + sa * bvec.z};
                s += evaluate(trimmed, x);
            }
            out[i] = s / circle_points;
        }
    });
    return out;
}

double self_adjointness_defect(const ScalarField& f, const ScalarField& g, TransformKind kind) {
    if (f.grid() != g.grid())
        throw std::invalid_argument("self_adjointness_defect: fields on different grids");
    auto apply = [&](const ScalarField& h) {
        return kind == TransformKind::radon ? radon_transform(h) : cosine_transform(h);
    };
    ScalarField tf = apply(f), tg = apply(g);
    return std::abs(inner_product(f, tg) - inner_product(g, tf));
}

}  // namespace cspectra
