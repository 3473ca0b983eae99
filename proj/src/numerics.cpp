#include "treewalk/numerics.hpp"

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace treewalk {

namespace {

void require_symmetric(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw std::domain_error("eigh: matrix is not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::domain_error("eigh: matrix is not symmetric");
}

}  // namespace

Spectrum eigh(const Eigen::MatrixXd& h) {
  require_symmetric(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: eigensolver did not converge");
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

Spectrum eigh(const Hamiltonian& h) { return eigh(h.dense()); }

Eigen::VectorXd eigvalsh(const Eigen::MatrixXd& h) {
  require_symmetric(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: eigensolver did not converge");
  return solver.eigenvalues();
}

Eigen::VectorXcd solve_complex(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw std::domain_error("solve_complex: shape mismatch");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  // rcond() misreports exactly zero pivots, so check them directly as well
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double rcond = pivots.size() && pivots.minCoeff() <= 1e-14 * pivots.maxCoeff() ? 0.0 : lu.rcond();
  if (!(rcond > 1e-12))
    throw NumericalError("solve_complex: matrix is singular to working precision (rcond=" +
                         std::to_string(rcond) + ")");
  Eigen::VectorXcd x = lu.solve(b);
  if (!x.allFinite()) throw NumericalError("solve_complex: non-finite solution");
  return x;
}

Eigen::VectorXcd solve_complex(const SparseComplex& a, const Eigen::VectorXcd& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw std::domain_error("solve_complex: shape mismatch");
  Eigen::SparseMatrix<cdouble, Eigen::ColMajor> colmajor = a;
  Eigen::SparseLU<Eigen::SparseMatrix<cdouble, Eigen::ColMajor>> lu;
  lu.analyzePattern(colmajor);
  lu.factorize(colmajor);
  if (lu.info() != Eigen::Success) throw NumericalError("solve_complex: sparse factorization failed");
  Eigen::VectorXcd x = lu.solve(b);
  if (!x.allFinite()) throw NumericalError("solve_complex: non-finite solution");
  const double residual = (a * x - b).norm();
  if (residual > 1e-9 * std::max(b.norm(), 1e-300))
    throw NumericalError("solve_complex: residual " + std::to_string(residual) + " too large");
  return x;
}

Eigen::VectorXcd solve_consistent(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, double tol) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw std::domain_error("solve_consistent: shape mismatch");
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
  Eigen::VectorXcd x = cod.solve(b);
  if (!x.allFinite()) throw NumericalError("solve_consistent: non-finite solution");
  const double residual = (a * x - b).norm();
  if (residual > tol * std::max(b.norm(), 1e-300))
    throw NumericalError("solve_consistent: inconsistent system (residual " + std::to_string(residual) + ")");
  return x;
}

namespace {

// Coefficients a_n = c_n (-i)^n J_n(radius * t), c_0 = 1, c_n = 2, truncated
// once n exceeds the Bessel argument and the tail falls below tol.
std::vector<cdouble> chebyshev_coefficients(double radius, double t, double tol, int max_terms) {
  const double x = radius * t;
  std::vector<cdouble> coef;
  const cdouble minus_i{0.0, -1.0};
  cdouble phase{1.0, 0.0};
  int small = 0;
  for (int n = 0;; ++n) {
    if (n >= max_terms)
      throw NumericalError("chebyshev_propagate: tolerance not reached within " + std::to_string(max_terms) +
                           " terms");
    const double jn = x == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::cyl_bessel_j(static_cast<double>(n), x);
    coef.push_back((n == 0 ? 1.0 : 2.0) * jn * phase);
    phase *= minus_i;
    if (n > x && 2.0 * std::abs(jn) < 0.1 * tol) {
      if (++small >= 2) break;
    } else {
      small = 0;
    }
  }
  return coef;
}

Eigen::VectorXcd apply_chebyshev(const SparseReal& h, double center, double radius,
                                 const std::vector<cdouble>& coef, double t, const Eigen::VectorXcd& psi) {
  // Scaled operator (H - center) / radius applied through the recurrence.
  auto apply = [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    return (h * v - center * v) / radius;
  };
  Eigen::VectorXcd prev = psi;
  Eigen::VectorXcd result = coef[0] * prev;
  if (coef.size() > 1) {
    Eigen::VectorXcd curr = apply(prev);
    result += coef[1] * curr;
    for (std::size_t n = 2; n < coef.size(); ++n) {
      Eigen::VectorXcd next = 2.0 * apply(curr) - prev;
      result += coef[n] * next;
      prev.swap(curr);
      curr.swap(next);
    }
  }
  return result * std::polar(1.0, -center * t);
}

}  // namespace

Eigen::VectorXcd chebyshev_propagate(const SparseReal& h, double center, double radius,
                                     const Eigen::VectorXcd& psi, double t, double tol, int max_terms) {
  if (t < 0.0) throw std::domain_error("propagate: t must be >= 0");
  if (!(radius > 0.0)) throw std::domain_error("chebyshev_propagate: radius must be positive");
  if (t == 0.0) return psi;
  const auto coef = chebyshev_coefficients(radius, t, tol, max_terms);
  return apply_chebyshev(h, center, radius, coef, t, psi);
}

Eigen::VectorXcd propagate(const Hamiltonian& h, const Eigen::VectorXcd& psi0, double t,
                           const PropagateOptions& opt) {
  Eigen::VectorXcd out;
  const double times[] = {t};
  propagate_series(h, psi0, times, [&](std::size_t, const Eigen::VectorXcd& psi) { out = psi; }, opt);
  return out;
}

void propagate_series(const Hamiltonian& h, const Eigen::VectorXcd& psi0, std::span<const double> times,
                      const std::function<void(std::size_t, const Eigen::VectorXcd&)>& observe,
                      const PropagateOptions& opt) {
  if (psi0.size() != h.dim()) throw std::domain_error("propagate: state dimension mismatch");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0) throw std::domain_error("propagate: t must be >= 0");
    if (i > 0 && times[i] < times[i - 1]) throw std::domain_error("propagate: time grid must be ascending");
  }
  if (h.dim() <= opt.dense_threshold) {
    const Spectrum s = eigh(h);
    const Eigen::VectorXcd coeff = s.vectors.transpose().cast<cdouble>() * psi0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (times[i] == 0.0) {
        observe(i, psi0);
        continue;
      }
      Eigen::VectorXcd rotated(coeff.size());
      for (Eigen::Index m = 0; m < coeff.size(); ++m) rotated[m] = coeff[m] * std::polar(1.0, -s.values[m] * times[i]);
      observe(i, s.vectors.cast<cdouble>() * rotated);
    }
    return;
  }
  // Spectrum lies in [-bound, bound]; a small margin keeps the scaled
  // operator strictly inside [-1, 1].
  const double radius = 1.01 * h.spectral_bound();
  const double step_tol = opt.tol / static_cast<double>(std::max<std::size_t>(1, times.size()));
  Eigen::VectorXcd psi = psi0;
  double now = 0.0;
  double cached_dt = -1.0;
  std::vector<cdouble> coef;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double dt = times[i] - now;
    if (dt > 0.0) {
      if (dt != cached_dt) {
        coef = chebyshev_coefficients(radius, dt, step_tol, opt.max_terms);
        cached_dt = dt;
      }
      psi = apply_chebyshev(h.matrix, 0.0, radius, coef, dt, psi);
      now = times[i];
    }
    observe(i, psi);
  }
}

void propagate_series(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi0, std::span<const double> times,
                      const std::function<void(std::size_t, const Eigen::VectorXcd&)>& observe) {
  if (psi0.size() != h.rows()) throw std::domain_error("propagate: state dimension mismatch");
  const Spectrum s = eigh(h);
  const Eigen::VectorXcd coeff = s.vectors.transpose().cast<cdouble>() * psi0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0) throw std::domain_error("propagate: t must be >= 0");
    Eigen::VectorXcd rotated(coeff.size());
    for (Eigen::Index m = 0; m < coeff.size(); ++m) rotated[m] = coeff[m] * std::polar(1.0, -s.values[m] * times[i]);
    observe(i, s.vectors.cast<cdouble>() * rotated);
  }
}

void propagate_nonhermitian_series(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& psi0,
                                   std::span<const double> times,
                                   const std::function<void(std::size_t, const Eigen::VectorXcd&)>& observe,
                                   double tol) {
  if (k.rows() != k.cols() || psi0.size() != k.rows())
    throw std::domain_error("propagate_nonhermitian: shape mismatch");
  const Eigen::MatrixXcd antiherm = (k - k.adjoint()) / cdouble(0.0, 2.0);
  const Eigen::VectorXd decay = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(antiherm, Eigen::EigenvaluesOnly)
                                    .eigenvalues();
  if (decay.maxCoeff() > tol)
    throw NumericalError("propagate_nonhermitian: generator has a growing mode (sign error?)");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(k);
  if (solver.info() != Eigen::Success) throw NumericalError("propagate_nonhermitian: eigensolver failed");
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  const Eigen::VectorXcd& lambda = solver.eigenvalues();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
  if (!(lu.rcond() > 1e-12)) throw NumericalError("propagate_nonhermitian: generator is not diagonalizable");
  const Eigen::VectorXcd coeff = lu.solve(psi0);

  double last_norm = psi0.norm();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < 0.0) throw std::domain_error("propagate: t must be >= 0");
    Eigen::VectorXcd rotated(coeff.size());
    for (Eigen::Index m = 0; m < coeff.size(); ++m) rotated[m] = coeff[m] * std::exp(cdouble(0.0, -1.0) * lambda[m] * t);
    Eigen::VectorXcd psi = t == 0.0 ? psi0 : Eigen::VectorXcd(v * rotated);
    const double norm = psi.norm();
    if (i > 0 && times[i] >= times[i - 1] && norm > last_norm + tol)
      throw NumericalError("propagate_nonhermitian: norm increased from " + std::to_string(last_norm) + " to " +
                           std::to_string(norm));
    last_norm = norm;
    observe(i, psi);
  }
}

Eigen::VectorXcd propagate_nonhermitian(const Eigen::MatrixXcd& k, const Eigen::VectorXcd& psi0, double t,
                                        double tol) {
  Eigen::VectorXcd out;
  const double times[] = {t};
  propagate_nonhermitian_series(k, psi0, times, [&](std::size_t, const Eigen::VectorXcd& psi) { out = psi; }, tol);
  return out;
}

}  // namespace treewalk
