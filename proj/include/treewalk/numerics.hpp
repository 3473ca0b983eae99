#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "treewalk/hamiltonian.hpp"

namespace treewalk {

/// Raised when a numerical kernel cannot deliver its contract
/// (singular system, unreachable tolerance, norm growth).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full spectrum of a real-symmetric matrix, eigenvalues ascending,
/// orthonormal eigenvectors in the columns.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  Eigen::Index size() const { return values.size(); }
};

Spectrum eigh(const Eigen::MatrixXd& h);
Spectrum eigh(const Hamiltonian& h);
/// Eigenvalues only.
Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& h);

/// Dense complex solve with partial pivoting. Fails with NumericalError when
/// the reciprocal condition estimate is below 1e-12 or the result is not
/// finite.
Eigen::VectorXcd solve_complex(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b);
/// Sparse LU variant for large scattering systems.
Eigen::VectorXcd solve_complex(const SparseComplex& a, const Eigen::VectorXcd& b);
/// Minimum-norm solution of a singular but consistent system by complete
/// orthogonal decomposition; fails when the residual exceeds tol * |b|.
Eigen::VectorXcd solve_consistent(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, double tol = 1e-9);

struct PropagateOptions {
  double tol = 1e-8;
  /// Dimensions at or below this use a dense eigendecomposition; larger
  /// ones use the Chebyshev expansion.
  Eigen::Index dense_threshold = 1024;
  int max_terms = 200000;
};

/// psi(t) = exp(-i H t) psi0.
Eigen::VectorXcd propagate(const Hamiltonian& h, const Eigen::VectorXcd& psi0, double t,
                           const PropagateOptions& opt = {});

/// Evolves psi0 through an ascending time grid, calling `observe(i, psi)`
/// at each grid time. Reuses one eigendecomposition (dense path) or steps
/// between grid times (Chebyshev path).
void propagate_series(const Hamiltonian& h, const Eigen::VectorXcd& psi0,
                      std::span<const double> times,
                      const std::function<void(std::size_t, const Eigen::VectorXcd&)>& observe,
                      const PropagateOptions& opt = {});

/// Same for a small dense Hermitian matrix (column-space walks).
void propagate_series(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi0,
                      std::span<const double> times,
                      const std::function<void(std::size_t, const Eigen::VectorXcd&)>& observe);

/// Chebyshev expansion of exp(-i H t) applied to psi, for any H whose
/// spectrum lies in [center - radius, center + radius].
Eigen::VectorXcd chebyshev_propagate(const SparseReal& h, double center, double radius,
                                     const Eigen::VectorXcd& psi, double t, double tol,
                                     int max_terms = 200000);

/// Evolution under a dissipative generator K = H - i*Gamma/2 (anti-Hermitian
/// part negative semidefinite). Dense eigendecomposition of K; throws
/// NumericalError if the norm grows by more than `tol` between grid times.
void propagate_nonhermitian_series(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& psi0,
                                   std::span<const double> times,
                                   const std::function<void(std::size_t, const Eigen::VectorXcd&)>& observe,
                                   double tol = 1e-10);

Eigen::VectorXcd propagate_nonhermitian(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& psi0,
                                        double t, double tol = 1e-10);

}  // namespace treewalk
