#pragma once

#include <random>

#include <cspectra/grid.hpp>
#include <cspectra/harmonics.hpp>

namespace testutil {

inline cspectra::HarmonicSpectrum random_spectrum(int n, int max_degree, std::uint64_t seed,
                                                  int min_degree = 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    cspectra::HarmonicSpectrum s(n, max_degree);
    for (int k = min_degree; k <= max_degree; ++k)
        for (int l = 1; l <= static_cast<int>(s.degree_dimension(k)); ++l)
            s.at(k, l) = gauss(rng);
    return s;
}

inline cspectra::HarmonicSpectrum unit_mode(int n, int k, int l, int max_degree) {
    cspectra::HarmonicSpectrum s(n, max_degree);
    s.at(k, l) = 1.0;
    return s;
}

}  // namespace testutil
