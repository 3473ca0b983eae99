#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace treewalk {

/// Column-reduced classical master equation on the MGT,
/// dp/dt = L p + b, with particles injected at the left root and leaking
/// out through both roots.
struct MasterSystem {
  int depth = 0;
  double hop = 1.0;         // lambda
  double escape_left = 1.0;
  double escape_right = 1.0;
  double injection = 1.0;   // Gamma
  Eigen::MatrixXd rates;    // L, (2d+2) x (2d+2)
  Eigen::VectorXd source;   // b = Gamma e_0
};

MasterSystem build_master(int d, double hop, double escape_left, double escape_right, double injection = 1.0);

/// p_ss = -L^{-1} b.
Eigen::VectorXd steady_state(const MasterSystem& sys);

/// Outgoing flux through the right tail over the injected flux.
double transmitted_fraction(const MasterSystem& sys, const Eigen::VectorXd& p);

/// 1 / (1 + l_left/l_right + 2 (1 - 3 * 2^(-d-2)) l_left / lambda).
double analytic_tc(int d, double hop, double escape_left, double escape_right);

/// T_c(W) with l_left = l_right = gamma and lambda = gamma^3 / W^2; W = 0
/// maps to the free-diffusion limit 1/2.
double tc_of_disorder(int d, double width, double gamma = 1.0);
std::vector<double> tc_of_disorder(int d, std::span<const double> widths, double gamma = 1.0);

}  // namespace treewalk
