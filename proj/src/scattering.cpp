#include "treewalk/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "treewalk/ensemble.hpp"
#include "treewalk/numerics.hpp"

namespace treewalk {

namespace {

constexpr Eigen::Index kDenseLimit = 256;
constexpr Eigen::Index kConsistentLimit = 4096;
// Resampled draws use realization indices far above any ensemble size.
constexpr std::uint64_t kResampleOffset = std::uint64_t{1} << 40;

void check_momentum(double k) {
  if (!(k > 0.0 && k < std::numbers::pi)) throw std::domain_error("momentum k must lie in (0, pi)");
}

}  // namespace

Transmission transmission(const Graph& g, std::span<const double> eps, double k) {
  const ScatteringHamiltonian sh = scattering_hamiltonian(g, eps, k);
  const double energy = -2.0 * std::cos(k);
  const auto n = sh.matrix.rows();
  SparseComplex system(n, n);
  system.setIdentity();
  system *= cdouble(energy);
  system -= sh.matrix;
  Eigen::VectorXcd source = Eigen::VectorXcd::Zero(n);
  source[sh.left] = 1.0;
  Eigen::VectorXcd x;
  try {
    x = n <= kDenseLimit ? solve_complex(Eigen::MatrixXcd(system), source) : solve_complex(system, source);
  } catch (const NumericalError&) {
    // Real-energy eigenvectors of H_eff vanish on both roots, so a singular
    // system is still consistent and the root amplitudes are unique.
    if (n > kConsistentLimit) throw;
    x = solve_consistent(Eigen::MatrixXcd(system), source);
  }
  const cdouble flux(0.0, 2.0 * std::sin(k));
  // tail convention T e^{ikn}, n counted in columns from the left root
  const double last = static_cast<double>(g.columns() - 1);
  return Transmission{k, flux * x[sh.right] * std::polar(1.0, -k * last), flux * x[sh.left] - 1.0};
}

double analytic_t_halfpi(int d, Variant variant) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  if (!is_mgt(variant)) return 1.0;
  return 8.0 / (9.0 + (d % 2 == 0 ? 1.0 : -1.0));
}

Transmission clean_transmission_general_k(int d, Variant variant, double k) {
  check_momentum(k);
  if (d < 1) throw std::domain_error("depth must be >= 1");
  const double energy = -2.0 * std::cos(k);
  const double q = std::acos(std::cos(k) / std::numbers::sqrt2);
  const double s2 = std::numbers::sqrt2;
  auto up = [&](int n) { return std::polar(1.0, q * n); };
  auto down = [&](int n) { return std::polar(1.0, -q * n); };
  auto tail = [&](int n) { return std::polar(1.0, k * n); };
  const cdouble eik = tail(1), emik = std::conj(eik);

  if (!is_mgt(variant)) {
    // unknowns A, B, R, T; interior n = 0..2d
    const int last = 2 * d;
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    Eigen::Vector4cd rhs = Eigen::Vector4cd::Zero();
    m(0, 0) = 1.0, m(0, 1) = 1.0, m(0, 2) = -1.0, rhs[0] = 1.0;
    m(1, 0) = s2 * up(1), m(1, 1) = s2 * down(1), m(1, 2) = energy + eik, rhs[1] = -energy - emik;
    m(2, 0) = up(last), m(2, 1) = down(last), m(2, 3) = -tail(last);
    m(3, 0) = s2 * up(last - 1), m(3, 1) = s2 * down(last - 1), m(3, 3) = energy * tail(last) + tail(last + 1);
    const Eigen::VectorXcd x = solve_complex(Eigen::MatrixXcd(m), Eigen::VectorXcd(rhs));
    return Transmission{k, x[3], x[2]};
  }

  // unknowns A, B, C, D, R, T; first tree n = 0..d, second n = d+1..2d+1
  const int last = 2 * d + 1;
  Eigen::Matrix<cdouble, 6, 6> m = Eigen::Matrix<cdouble, 6, 6>::Zero();
  Eigen::Matrix<cdouble, 6, 1> rhs = Eigen::Matrix<cdouble, 6, 1>::Zero();
  // continuity at the left root
  m(0, 0) = 1.0, m(0, 1) = 1.0, m(0, 4) = -1.0, rhs[0] = 1.0;
  // left root: E psi_0 = -psi_{-1} - sqrt2 psi_1
  m(1, 0) = s2 * up(1), m(1, 1) = s2 * down(1), m(1, 4) = energy + eik, rhs[1] = -energy - emik;
  // left leaves: E psi_d = -sqrt2 psi_{d-1} - 2 psi_{d+1}
  m(2, 0) = energy * up(d) + s2 * up(d - 1), m(2, 1) = energy * down(d) + s2 * down(d - 1);
  m(2, 2) = 2.0 * up(d + 1), m(2, 3) = 2.0 * down(d + 1);
  // right leaves: E psi_{d+1} = -2 psi_d - sqrt2 psi_{d+2}
  m(3, 0) = 2.0 * up(d), m(3, 1) = 2.0 * down(d);
  m(3, 2) = energy * up(d + 1) + s2 * up(d + 2), m(3, 3) = energy * down(d + 1) + s2 * down(d + 2);
  // continuity at the right root
  m(4, 2) = up(last), m(4, 3) = down(last), m(4, 5) = -tail(last);
  // right root: E psi_last = -sqrt2 psi_{last-1} - psi_{last+1}
  m(5, 2) = s2 * up(last - 1), m(5, 3) = s2 * down(last - 1), m(5, 5) = energy * tail(last) + tail(last + 1);
  const Eigen::VectorXcd x = solve_complex(Eigen::MatrixXcd(m), Eigen::VectorXcd(rhs));
  return Transmission{k, x[5], x[4]};
}

std::vector<TransmissionCell> transmission_sweep(const TransmissionSweepOptions& opt) {
  if (opt.momenta.empty() || opt.widths.empty()) throw std::invalid_argument("transmission_sweep: empty grid");
  if (opt.realizations < 1) throw std::invalid_argument("transmission_sweep: need at least one realization");
  for (double k : opt.momenta) check_momentum(k);
  const std::size_t nk = opt.momenta.size(), nw = opt.widths.size();
  const auto nr = static_cast<std::size_t>(opt.realizations);
  // per (w, r): T per k, NaN when excluded
  std::vector<std::vector<double>> value(nw * nr);
  parallel_for(nw * nr, opt.workers, [&](std::size_t task) {
    const std::size_t w = task / nr, r = task % nr;
    const Graph g = realization_graph(opt.depth, opt.variant, opt.seed, r);
    const auto eps = sample_disorder({opt.widths[w], opt.seed, r, g.size()});
    auto& out = value[task];
    out.resize(nk);
    for (std::size_t ki = 0; ki < nk; ++ki) {
      try {
        out[ki] = transmission(g, eps, opt.momenta[ki]).probability();
      } catch (const NumericalError&) {
        try {
          const auto again = sample_disorder({opt.widths[w], opt.seed, r + kResampleOffset, g.size()});
          out[ki] = transmission(g, again, opt.momenta[ki]).probability();
        } catch (const NumericalError&) {
          out[ki] = std::nan("");
        }
      }
    }
  });
  std::vector<TransmissionCell> cells;
  for (std::size_t w = 0; w < nw; ++w)
    for (std::size_t ki = 0; ki < nk; ++ki) {
      RunningStats acc;
      std::int64_t excluded = 0;
      for (std::size_t r = 0; r < nr; ++r) {
        const double v = value[w * nr + r][ki];
        if (std::isnan(v))
          ++excluded;
        else
          acc.add(v);
      }
      cells.push_back({opt.momenta[ki], opt.widths[w], acc.mean(), acc.stderr_of_mean(), acc.n, excluded});
    }
  return cells;
}

std::vector<double> classical_fit_overlay(std::span<const double> widths, double t0, double c) {
  std::vector<double> out;
  out.reserve(widths.size());
  for (double w : widths) out.push_back(t0 / (1.0 + c * w * w));
  return out;
}

std::pair<double, double> fit_classical_form(std::span<const double> widths, std::span<const double> values,
                                             std::span<const double> sigma, double t0_guess, double c_guess) {
  if (widths.size() != values.size() || (!sigma.empty() && sigma.size() != values.size()))
    throw std::invalid_argument("fit_classical_form: size mismatch");
  if (widths.size() < 2) throw std::invalid_argument("fit_classical_form: need at least two points");
  auto weight = [&](std::size_t i) { return sigma.empty() || sigma[i] <= 0.0 ? 1.0 : 1.0 / (sigma[i] * sigma[i]); };
  auto cost = [&](double t0, double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const double r = values[i] - t0 / (1.0 + c * widths[i] * widths[i]);
      s += weight(i) * r * r;
    }
    return s;
  };
  double wmax2 = 0.0;
  for (double w : widths) wmax2 = std::max(wmax2, w * w);
  double t0 = t0_guess, c = c_guess, current = cost(t0, c);
  for (int it = 0; it < 200; ++it) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < widths.size(); ++i) {
      const double w2 = widths[i] * widths[i], den = 1.0 + c * w2;
      const Eigen::Vector2d grad(1.0 / den, -t0 * w2 / (den * den));
      const double r = values[i] - t0 / den;
      jtj += weight(i) * grad * grad.transpose();
      jtr += weight(i) * grad * r;
    }
    const Eigen::Vector2d step = jtj.ldlt().solve(jtr);
    double scale = 1.0;
    bool improved = false;
    for (int h = 0; h < 40; ++h, scale *= 0.5) {
      const double nt0 = t0 + scale * step[0], nc = c + scale * step[1];
      if (1.0 + nc * wmax2 <= 0.0) continue;
      const double trial = cost(nt0, nc);
      if (trial < current) {
        t0 = nt0, c = nc, current = trial;
        improved = true;
        break;
      }
    }
    if (!improved || step.norm() < 1e-14) break;
  }
  return {t0, c};
}

}  // namespace treewalk
