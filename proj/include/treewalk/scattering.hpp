#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "treewalk/graph.hpp"
#include "treewalk/hamiltonian.hpp"

namespace treewalk {

/// Plane wave e^{ikn} incident from the left tail on a graph whose roots are
/// attached to clean semi-infinite tails (gamma = 1, E = -2 cos k).
struct Transmission {
  double k = 0.0;
  cdouble amplitude;    // transmitted amplitude
  cdouble reflection;   // reflected amplitude
  double probability() const { return std::norm(amplitude); }
  double reflectance() const { return std::norm(reflection); }
};

/// One complex linear solve (E - H_eff) x = |root_L>; the amplitudes are
/// 2i sin k <root_R|x> e^{-ikL} (L = index of the last column) and
/// 2i sin k <root_L|x> - 1.
Transmission transmission(const Graph& g, std::span<const double> eps, double k);

/// Clean-graph amplitude at k = pi/2: 8 / (9 + (-1)^d) for the MGT, 1 for
/// the SGT. At this momentum it is real and positive up to a phase, so the
/// transmission probability is its square.
double analytic_t_halfpi(int d, Variant variant);

/// Clean transmission from the plane-wave ansatz in the column space:
/// tails e^{ikn} + R e^{-ikn} and T e^{ikn}, and A e^{i q n} + B e^{-i q n}
/// (plus C, D on the second tree of the MGT) inside, with
/// -2 cos k = -2 sqrt2 cos q. Matching at the roots and the leaf columns
/// gives a 6x6 (MGT) or 4x4 (SGT) linear system.
Transmission clean_transmission_general_k(int d, Variant variant, double k);

struct TransmissionCell {
  double k;
  double width;
  double mean;
  double stderr_of_mean;
  std::int64_t realizations;
  std::int64_t excluded;
};

struct TransmissionSweepOptions {
  int depth = 5;
  std::vector<double> momenta;
  std::vector<double> widths;
  int realizations = 250;
  std::uint64_t seed = 0;
  Variant variant = Variant::MGTRandom;
  unsigned workers = 0;
};

/// Ensemble-mean T on a (k, W) grid. Every realization (graph and disorder)
/// is shared across the k grid. A singular solve is retried once with a
/// fresh disorder draw and otherwise counted in `excluded`.
std::vector<TransmissionCell> transmission_sweep(const TransmissionSweepOptions& opt);

/// T0 / (1 + c W^2).
std::vector<double> classical_fit_overlay(std::span<const double> widths, double t0 = 0.8, double c = 0.2);

/// Weighted least-squares fit of T0 / (1 + c W^2) (Gauss-Newton on two
/// parameters). Weights are 1/sigma^2; pass an empty span for unit weights.
std::pair<double, double> fit_classical_form(std::span<const double> widths, std::span<const double> values,
                                             std::span<const double> sigma, double t0_guess = 0.8,
                                             double c_guess = 0.2);

}  // namespace treewalk
