#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "treewalk/graph.hpp"
#include "treewalk/numerics.hpp"

namespace treewalk {

struct Level {
  double energy;
  std::int64_t multiplicity;
};

/// Clean SGT spectrum assembled from column-space spectra of the nested
/// subgraphs: sigma_d plus 2^(nu-1) copies of sigma_(d-nu), nu = 1..d.
struct ClosedFormSpectrum {
  std::vector<Level> levels;  // ascending, coinciding energies merged

  std::int64_t total() const;
  std::int64_t multiplicity_of(double energy, double tol = 1e-9) const;
  /// Expanded ascending eigenvalue list.
  std::vector<double> sorted_values() const;
};

/// E_{k,m} = -2 sqrt(2) gamma cos(k pi / (2(m+1))).
double column_energy(int k, int m, double gamma = 1.0);

ClosedFormSpectrum closed_form_spectrum(int d, double gamma = 1.0);

/// Sum of |psi_j|^4 for a normalized state; throws std::domain_error when
/// the norm is off by more than 1e-9.
double ipr(std::span<const double> psi);
double ipr(const Eigen::VectorXd& psi);
double ipr(const Eigen::VectorXcd& psi);

/// IPR of every eigenvector in the spectrum.
std::vector<double> eigenstate_iprs(const Spectrum& s);

/// Mean IPR over eigenstates with |E_j - E| < half_width; nullopt when the
/// window is empty.
std::optional<double> averaged_ipr(const Spectrum& s, double energy, double half_width);
std::optional<double> averaged_ipr(std::span<const double> energies, std::span<const double> iprs, double energy,
                                   double half_width);

/// Mean IPR of the `count` eigenstates in the middle of the spectrum by rank
/// (all states when the spectrum is smaller than `count`).
double band_center_ipr(std::span<const double> iprs, std::int64_t count = 100);

struct IprCell {
  double energy;
  double width;
  double mean;        // NaN when no realization had states in the window
  double stderr_of_mean;
  std::int64_t realizations;
};

struct IprTable {
  int depth = 0;
  double half_width = 0.0;
  std::vector<IprCell> cells;  // ordered by W, then E
};

struct IprPhaseOptions {
  int depth = 8;
  std::vector<double> widths;
  double half_width = 0.15;
  int realizations = 500;
  std::uint64_t seed = 0;
  Variant variant = Variant::MGTRandom;
  double gamma = 1.0;
  unsigned workers = 0;
};

/// Energy bin centres spanning [-3 sqrt2 gamma - W/2, 3 sqrt2 gamma + W/2]
/// with spacing `spacing`.
std::vector<double> energy_bins(double width, double spacing, double gamma = 1.0);

IprTable ipr_phase_diagram(const IprPhaseOptions& opt);

struct BandCenterRow {
  int depth;
  double width;
  double mean;
  double stderr_of_mean;
  std::int64_t realizations;
};

struct BandCenterOptions {
  std::vector<int> depths;
  std::vector<double> widths;
  std::vector<int> realizations;  // one per depth
  std::uint64_t seed = 0;
  std::int64_t window = 100;
  Variant variant = Variant::MGTRandom;
  unsigned workers = 0;
};

std::vector<BandCenterRow> band_center_ipr_sweep(const BandCenterOptions& opt);

/// First crossing of two curves sampled on the same ascending grid, located
/// by linear interpolation of their difference. nullopt if they never cross.
std::optional<double> curve_crossing(std::span<const double> x, std::span<const double> a,
                                     std::span<const double> b);

/// Mean ratio min(s_i, s_{i+1}) / max(s_i, s_{i+1}) of adjacent level gaps
/// over the middle half of a sorted spectrum. Pairs of zero gaps are
/// skipped. Poisson ~ 0.386, GOE ~ 0.531.
double gap_ratio(std::span<const double> sorted_eigenvalues);

}  // namespace treewalk
