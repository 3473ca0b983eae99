#include "treewalk/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "treewalk/random.hpp"

namespace treewalk {

std::vector<double> sample_disorder(const DisorderSpec& spec) {
  if (spec.width < 0.0) throw std::domain_error("disorder width must be >= 0");
  std::vector<double> eps(spec.count, 0.0);
  if (spec.width == 0.0) return eps;
  StreamRng rng(spec.seed, spec.realization, Stream::Disorder);
  const double half = 0.5 * spec.width;
  for (auto& e : eps) e = rng.uniform(-half, half);
  return eps;
}

double Hamiltonian::spectral_bound() const {
  double diag = 0.0;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) diag = std::max(diag, std::abs(matrix.coeff(i, i)));
  return gamma * max_degree + diag;
}

namespace {

Hamiltonian build(const Graph& g, double gamma, std::span<const double> eps) {
  const auto n = g.size();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(2 * g.edge_count() + n));
  for (std::int64_t u = 0; u < n; ++u) {
    bool diagonal_done = eps.empty();
    for (auto v : g.neighbors(u)) {
      if (!diagonal_done && v > u) {
        entries.emplace_back(u, u, eps[u]);
        diagonal_done = true;
      }
      entries.emplace_back(u, v, -gamma);
    }
    if (!diagonal_done) entries.emplace_back(u, u, eps[u]);
  }
  Hamiltonian h;
  h.matrix.resize(n, n);
  h.matrix.setFromTriplets(entries.begin(), entries.end());
  h.matrix.makeCompressed();
  h.gamma = gamma;
  h.max_degree = g.max_degree();
  if (!eps.empty()) {
    auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
    h.disorder_width = *hi - *lo;
  }
  return h;
}

}  // namespace

Hamiltonian assemble_h0(const Graph& g, double gamma) { return build(g, gamma, {}); }

Hamiltonian assemble_h(const Graph& g, double gamma, std::span<const double> eps) {
  if (static_cast<std::int64_t>(eps.size()) != g.size())
    throw std::domain_error("disorder vector length " + std::to_string(eps.size()) +
                            " does not match vertex count " + std::to_string(g.size()));
  return build(g, gamma, eps);
}

Eigen::MatrixXd column_hamiltonian(int d, Variant variant, double gamma) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  const int n = column_count(d, variant);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    const double hop = (is_mgt(variant) && j == d) ? -2.0 * gamma : -std::numbers::sqrt2 * gamma;
    h(j, j + 1) = h(j + 1, j) = hop;
  }
  return h;
}

Eigen::MatrixXd project_to_columns(const Graph& g, const Hamiltonian& h) {
  const int cols = g.columns();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(g.size(), cols);
  for (int j = 0; j < cols; ++j) {
    const auto psi = column_state(g, j);
    basis.col(j) = Eigen::Map<const Eigen::VectorXd>(psi.data(), g.size());
  }
  return basis.transpose() * (h.matrix * basis);
}

ScatteringHamiltonian scattering_hamiltonian(const Graph& g, std::span<const double> eps, double k) {
  if (!(k > 0.0 && k < std::numbers::pi)) throw std::domain_error("momentum k must lie in (0, pi)");
  const Hamiltonian h = eps.empty() ? assemble_h0(g) : assemble_h(g, 1.0, eps);
  ScatteringHamiltonian s;
  s.k = k;
  s.left = g.left_root();
  s.right = g.right_root();
  s.matrix = h.matrix.cast<cdouble>();
  const cdouble boundary = std::polar(1.0, k);
  s.matrix.coeffRef(s.left, s.left) -= boundary;
  s.matrix.coeffRef(s.right, s.right) -= boundary;
  s.matrix.makeCompressed();
  return s;
}

void write_coordinates(std::ostream& os, const Hamiltonian& h) {
  os.precision(17);
  for (Eigen::Index r = 0; r < h.matrix.outerSize(); ++r)
    for (SparseReal::InnerIterator it(h.matrix, r); it; ++it)
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

}  // namespace treewalk
