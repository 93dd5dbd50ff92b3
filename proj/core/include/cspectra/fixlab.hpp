#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cspectra/bodycalc.hpp"
#include "cspectra/grid.hpp"

namespace cspectra {

struct TrajectoryRecord {
    int step = 0;
    double scale = 1.0;  // normalization factor applied this step
    double c2_proxy = 0.0;
    double l2 = 0.0;
    std::array<double, 4> even_energy{};  // degree 2,4,6,8 energies of h
    double ellipse_dist = 0.0;            // 2-D runs only
};

struct IterationConfig {
    enum class Map { pi_sq, theta_sq, pgc_2d };
    enum class Normalization { mean_width, volume };

    Map map = Map::pi_sq;
    int i = 1;  // unused for pgc_2d
    int n = 3;
    int resolution = 48;
    int steps = 20;
    Normalization normalization = Normalization::mean_width;
    BodySpec body;
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    bool completed = true;
    std::string diagnostic;  // set when certification was lost mid-run
    bool has_ellipse = false;
};

// Runs the composite map (Pi_i twice, Theta_i twice, or one (Pi Gamma K)^*
// step), recentering and rescaling each iterate. Truncates with a diagnostic
// if an iterate fails certification.
Trajectory iterate(const IterationConfig& cfg);

// (C^2 proxy, L^2) distance to the nearest ball after least-squares
// scaling/centering.
std::pair<double, double> ball_distance(const SupportField& f);

// One 2-D step K -> (Pi Gamma K)^*, no normalization.
SupportField pgc_step_2d(const SupportField& f);

// Ball distance after whitening by the inverse square root of the
// (determinant-normalized) second-moment matrix.
double ellipse_distance_2d(const SupportField& f);

// header: step,scale,c2_proxy,l2,e2,e4,e6,e8[,ellipse_dist]
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

// Strict JSON schema; unknown keys rejected.
IterationConfig iteration_config_from_json(const std::string& text);
std::string iteration_config_to_json(const IterationConfig& cfg);

}  // namespace cspectra
