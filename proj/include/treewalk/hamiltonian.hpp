#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "treewalk/graph.hpp"

namespace treewalk {

using cdouble = std::complex<double>;
using SparseReal = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SparseComplex = Eigen::SparseMatrix<cdouble, Eigen::RowMajor>;

/// On-site energies drawn i.i.d. uniform on [-W/2, W/2].
struct DisorderSpec {
  double width = 0.0;          // W, in units of gamma
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
  std::int64_t count = 0;
};

std::vector<double> sample_disorder(const DisorderSpec& spec);

/// Real-symmetric walk Hamiltonian -gamma*A + diag(eps).
struct Hamiltonian {
  SparseReal matrix;
  double gamma = 1.0;
  double disorder_width = 0.0;  // only used for spectral bounds
  int max_degree = 0;

  std::int64_t dim() const { return matrix.rows(); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix); }
  /// Upper bound on the spectral radius: gamma*max_degree + max|eps|.
  double spectral_bound() const;
};

Hamiltonian assemble_h0(const Graph& g, double gamma = 1.0);
Hamiltonian assemble_h(const Graph& g, double gamma, std::span<const double> eps);

/// Column-space Hamiltonian: tridiagonal with -sqrt(2)*gamma hops, except the
/// MGT leaf-to-leaf hop, which is -2*gamma.
Eigen::MatrixXd column_hamiltonian(int d, Variant variant, double gamma = 1.0);

/// Projection <col i| H |col j> of a full Hamiltonian onto the column states.
Eigen::MatrixXd project_to_columns(const Graph& g, const Hamiltonian& h);

/// Effective operator for the graph with semi-infinite clean tails attached
/// to both roots, at tail momentum k in (0, pi):
///
///   H_eff = H - e^{ik} (|root_L><root_L| + |root_R><root_R|),
///
/// with tail dispersion E = -2 cos k (gamma = 1). The boundary term is the
/// self-energy of a tail with hopping -1, matching H = -A + diag(eps).
struct ScatteringHamiltonian {
  SparseComplex matrix;
  double k = 0.0;
  std::int64_t left = 0;
  std::int64_t right = 0;
};

ScatteringHamiltonian scattering_hamiltonian(const Graph& g, std::span<const double> eps, double k);

/// Coordinate text export, one "row col value" triple per stored entry.
void write_coordinates(std::ostream& os, const Hamiltonian& h);

}  // namespace treewalk
