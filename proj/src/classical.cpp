#include "treewalk/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "treewalk/numerics.hpp"

namespace treewalk {

MasterSystem build_master(int d, double hop, double escape_left, double escape_right, double injection) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  if (!(hop > 0.0 && escape_left > 0.0 && escape_right > 0.0 && injection > 0.0))
    throw std::domain_error("master equation rates must be positive");
  const int n = 2 * d + 2;
  MasterSystem sys{d, hop, escape_left, escape_right, injection, Eigen::MatrixXd::Zero(n, n),
                   Eigen::VectorXd::Zero(n)};
  auto& l = sys.rates;
  // A column-j walker hops to the column with more vertices at rate 2*lambda
  // and to the one with fewer at rate lambda; the leaf columns of the MGT
  // feed each other at 2*lambda through the leaf cycle.
  for (int j = 0; j < n; ++j) {
    if (j == 0) {
      l(0, 0) = -(2.0 * hop + escape_left);
      l(0, 1) = hop;
    } else if (j == n - 1) {
      l(j, j - 1) = hop;
      l(j, j) = -(2.0 * hop + escape_right);
    } else if (j < d) {
      l(j, j - 1) = 2.0 * hop, l(j, j) = -3.0 * hop, l(j, j + 1) = hop;
    } else if (j == d || j == d + 1) {
      l(j, j - 1) = 2.0 * hop, l(j, j) = -3.0 * hop, l(j, j + 1) = 2.0 * hop;
    } else {
      l(j, j - 1) = hop, l(j, j) = -3.0 * hop, l(j, j + 1) = 2.0 * hop;
    }
  }
  sys.source[0] = injection;
  return sys;
}

Eigen::VectorXd steady_state(const MasterSystem& sys) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.rates);
  if (!(lu.rcond() > 1e-14)) throw NumericalError("steady_state: rate matrix is singular");
  Eigen::VectorXd p = -lu.solve(sys.source);
  if (!p.allFinite()) throw NumericalError("steady_state: non-finite solution");
  return p;
}

double transmitted_fraction(const MasterSystem& sys, const Eigen::VectorXd& p) {
  return sys.escape_right * p[p.size() - 1] / sys.injection;
}

double analytic_tc(int d, double hop, double escape_left, double escape_right) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  if (!(hop > 0.0 && escape_left > 0.0 && escape_right > 0.0))
    throw std::domain_error("master equation rates must be positive");
  const double leaf_factor = 1.0 - 3.0 * std::ldexp(1.0, -d - 2);
  return 1.0 / (1.0 + escape_left / escape_right + 2.0 * leaf_factor * escape_left / hop);
}

double tc_of_disorder(int d, double width, double gamma) {
  if (width < 0.0) throw std::domain_error("disorder width must be >= 0");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  if (width == 0.0) return 0.5;
  return analytic_tc(d, gamma * gamma * gamma / (width * width), gamma, gamma);
}

std::vector<double> tc_of_disorder(int d, std::span<const double> widths, double gamma) {
  std::vector<double> out;
  out.reserve(widths.size());
  for (double w : widths) out.push_back(tc_of_disorder(d, w, gamma));
  return out;
}

}  // namespace treewalk
