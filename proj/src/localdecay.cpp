#include "treewalk/localdecay.hpp"

#include <stdexcept>

#include "treewalk/hamiltonian.hpp"
#include "treewalk/numerics.hpp"

namespace treewalk {

DecayGenerator decay_generator(int d, double width, double gamma, Variant variant) {
  if (width < 0.0) throw std::domain_error("disorder width must be >= 0");
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  DecayGenerator gen{d, variant, width, gamma, {}};
  const int cols = column_count(d, variant);
  gen.rates.resize(cols);
  for (int j = 0; j < cols; ++j)
    gen.rates[j] = width * width / (12.0 * gamma) * (1.0 - 1.0 / static_cast<double>(column_size(j, d, variant)));
  return gen;
}

Eigen::MatrixXcd local_decay_operator(const DecayGenerator& gen) {
  Eigen::MatrixXcd k = column_hamiltonian(gen.depth, gen.variant, gen.gamma).cast<cdouble>();
  for (std::size_t j = 0; j < gen.rates.size(); ++j) k(j, j) -= cdouble(0.0, 0.5 * gen.rates[j]);
  return k;
}

std::vector<Eigen::VectorXcd> evolve_local_decay(const DecayGenerator& gen, const Eigen::VectorXcd& psi0,
                                                 std::span<const double> times) {
  if (psi0.size() != static_cast<Eigen::Index>(gen.rates.size()))
    throw std::domain_error("evolve_local_decay: initial state must live in the column space");
  std::vector<Eigen::VectorXcd> out(times.size());
  propagate_nonhermitian_series(local_decay_operator(gen), psi0, times,
                                [&](std::size_t i, const Eigen::VectorXcd& psi) { out[i] = psi; });
  return out;
}

WalkSeries local_decay_series(int d, double width, std::span<const double> times, double gamma, Variant variant,
                              int j0) {
  const DecayGenerator gen = decay_generator(d, width, gamma, variant);
  const auto cols = static_cast<Eigen::Index>(gen.rates.size());
  if (j0 < 0 || j0 >= cols) throw std::domain_error("column index out of range");
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(cols);
  psi0[j0] = 1.0;
  const auto states = evolve_local_decay(gen, psi0, times);
  WalkSeries s;
  s.times.assign(times.begin(), times.end());
  for (const auto& psi : states) {
    double depth = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) depth += static_cast<double>(j) * std::norm(psi[j]);
    s.p_hit.push_back(std::norm(psi[cols - 1]));
    s.p_col.push_back(psi.squaredNorm());
    s.depth.push_back(depth);
  }
  return s;
}

double short_time_pcol(double t, double width, double column_size) {
  if (!(column_size >= 1.0)) throw std::domain_error("column size must be >= 1");
  return 1.0 - t * t * width * width * (1.0 - 1.0 / column_size) / 12.0;
}

}  // namespace treewalk
