#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "treewalk/dynamics.hpp"
#include "treewalk/graph.hpp"

namespace treewalk {

/// Per-column leak rates Gamma_j = (W^2 / (12 gamma)) (1 - 1/N_j) out of the
/// column space.
struct DecayGenerator {
  int depth = 0;
  Variant variant = Variant::SGT;
  double width = 0.0;
  double gamma = 1.0;
  std::vector<double> rates;
};

DecayGenerator decay_generator(int d, double width, double gamma = 1.0, Variant variant = Variant::SGT);

/// H_col - i Gamma / 2.
Eigen::MatrixXcd local_decay_operator(const DecayGenerator& gen);

/// Decayed column-space walk. Returns the column amplitudes at each time.
std::vector<Eigen::VectorXcd> evolve_local_decay(const DecayGenerator& gen, const Eigen::VectorXcd& psi0,
                                                 std::span<const double> times);

/// Model predictions from |col 0>: p_hit = |psi_last|^2, p_col = ||psi||^2,
/// depth = sum_j j |psi_j|^2 (not renormalized by the surviving weight).
WalkSeries local_decay_series(int d, double width, std::span<const double> times, double gamma = 1.0,
                              Variant variant = Variant::SGT, int j0 = 0);

/// Leading-order disorder average 1 - t^2 W^2 (1 - 1/N_j0) / 12.
double short_time_pcol(double t, double width, double column_size);

}  // namespace treewalk
