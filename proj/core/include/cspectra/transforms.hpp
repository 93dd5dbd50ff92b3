#pragma once

#include "cspectra/grid.hpp"
#include "cspectra/harmonics.hpp"

namespace cspectra {

enum class TransformBackend { spectral, quadrature };
enum class TransformKind { radon, cosine };

// Cf(u) = int |u.x| f(x) dx. Spectral: multiply degree k by w_{k,n}.
HarmonicSpectrum cosine_transform(const HarmonicSpectrum& spec);
ScalarField cosine_transform(const ScalarField& f,
                             TransformBackend backend = TransformBackend::spectral);

// Rf(u) = mean of f over the great subsphere orthogonal to u. Quadrature
// backend is n=3 only (trapezoid rule on the great circle).
HarmonicSpectrum radon_transform(const HarmonicSpectrum& spec);
ScalarField radon_transform(const ScalarField& f,
                            TransformBackend backend = TransformBackend::spectral,
                            int circle_points = 512);

// |int f.Tg - int g.Tf| for T in {R, C}.
double self_adjointness_defect(const ScalarField& f, const ScalarField& g, TransformKind kind);

}  // namespace cspectra
