#include "treewalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "treewalk/ensemble.hpp"
#include "treewalk/hamiltonian.hpp"

namespace treewalk {

double column_energy(int k, int m, double gamma) {
  return -2.0 * std::numbers::sqrt2 * gamma * std::cos(k * std::numbers::pi / (2.0 * (m + 1)));
}

ClosedFormSpectrum closed_form_spectrum(int d, double gamma) {
  if (d < 1) throw std::domain_error("depth must be >= 1");
  // sigma_m has 2m+1 levels; copies: sigma_d once, sigma_(d-nu) 2^(nu-1) times.
  std::vector<Level> raw;
  auto add_sigma = [&](int m, std::int64_t copies) {
    for (int k = 1; k <= 2 * m + 1; ++k) raw.push_back({column_energy(k, m, gamma), copies});
  };
  add_sigma(d, 1);
  for (int nu = 1; nu <= d; ++nu) add_sigma(d - nu, std::int64_t{1} << (nu - 1));
  std::sort(raw.begin(), raw.end(), [](const Level& a, const Level& b) { return a.energy < b.energy; });
  ClosedFormSpectrum out;
  for (const auto& l : raw) {
    if (!out.levels.empty() && std::abs(out.levels.back().energy - l.energy) < 1e-12 * std::max(1.0, gamma)) {
      out.levels.back().multiplicity += l.multiplicity;
    } else {
      out.levels.push_back(l);
    }
  }
  // cos(pi/2) is not exactly zero in floating point
  for (auto& l : out.levels)
    if (std::abs(l.energy) < 1e-12) l.energy = 0.0;
  return out;
}

std::int64_t ClosedFormSpectrum::total() const {
  std::int64_t n = 0;
  for (const auto& l : levels) n += l.multiplicity;
  return n;
}

std::int64_t ClosedFormSpectrum::multiplicity_of(double energy, double tol) const {
  std::int64_t n = 0;
  for (const auto& l : levels)
    if (std::abs(l.energy - energy) <= tol) n += l.multiplicity;
  return n;
}

std::vector<double> ClosedFormSpectrum::sorted_values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(total()));
  for (const auto& l : levels) out.insert(out.end(), static_cast<std::size_t>(l.multiplicity), l.energy);
  return out;
}

namespace {

template <class Abs2>
double ipr_impl(std::size_t n, Abs2 abs2) {
  double norm = 0.0, fourth = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = abs2(i);
    norm += p;
    fourth += p * p;
  }
  if (std::abs(norm - 1.0) > 1e-9) throw std::domain_error("ipr: state is not normalized");
  return fourth;
}

}  // namespace

double ipr(std::span<const double> psi) {
  return ipr_impl(psi.size(), [&](std::size_t i) { return psi[i] * psi[i]; });
}

double ipr(const Eigen::VectorXd& psi) {
  return ipr_impl(static_cast<std::size_t>(psi.size()), [&](std::size_t i) { return psi[i] * psi[i]; });
}

double ipr(const Eigen::VectorXcd& psi) {
  return ipr_impl(static_cast<std::size_t>(psi.size()), [&](std::size_t i) { return std::norm(psi[i]); });
}

std::vector<double> eigenstate_iprs(const Spectrum& s) {
  std::vector<double> out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index m = 0; m < s.size(); ++m) out[m] = ipr(Eigen::VectorXd(s.vectors.col(m)));
  return out;
}

std::optional<double> averaged_ipr(std::span<const double> energies, std::span<const double> iprs, double energy,
                                   double half_width) {
  if (!(half_width > 0.0)) throw std::domain_error("averaged_ipr: window half-width must be positive");
  double sum = 0.0;
  std::int64_t n = 0;
  for (std::size_t m = 0; m < energies.size(); ++m) {
    if (std::abs(energies[m] - energy) < half_width) {
      sum += iprs[m];
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

std::optional<double> averaged_ipr(const Spectrum& s, double energy, double half_width) {
  const auto iprs = eigenstate_iprs(s);
  return averaged_ipr(std::span<const double>(s.values.data(), s.values.size()), iprs, energy, half_width);
}

double band_center_ipr(std::span<const double> iprs, std::int64_t count) {
  const auto n = static_cast<std::int64_t>(iprs.size());
  if (n == 0) throw std::domain_error("band_center_ipr: empty spectrum");
  const std::int64_t take = std::min(count, n);
  const std::int64_t first = (n - take) / 2;
  double sum = 0.0;
  for (std::int64_t m = first; m < first + take; ++m) sum += iprs[m];
  return sum / static_cast<double>(take);
}

std::vector<double> energy_bins(double width, double spacing, double gamma) {
  if (!(spacing > 0.0)) throw std::domain_error("energy bin spacing must be positive");
  const double edge = 3.0 * std::numbers::sqrt2 * gamma + 0.5 * width;
  const auto half = static_cast<std::int64_t>(std::floor(edge / spacing + 1e-9));
  std::vector<double> bins;
  for (std::int64_t i = -half; i <= half; ++i) bins.push_back(static_cast<double>(i) * spacing);
  return bins;
}

IprTable ipr_phase_diagram(const IprPhaseOptions& opt) {
  if (opt.widths.empty()) throw std::invalid_argument("ipr_phase_diagram: empty disorder grid");
  if (opt.realizations < 1) throw std::invalid_argument("ipr_phase_diagram: need at least one realization");
  const std::size_t nw = opt.widths.size();
  const auto nr = static_cast<std::size_t>(opt.realizations);
  std::vector<std::vector<double>> bins(nw);
  for (std::size_t w = 0; w < nw; ++w) bins[w] = energy_bins(opt.widths[w], opt.half_width, opt.gamma);

  // per (w, r): per-bin window mean, NaN when empty
  std::vector<std::vector<double>> cell(nw * nr);
  parallel_for(nw * nr, opt.workers, [&](std::size_t task) {
    const std::size_t w = task / nr, r = task % nr;
    const Graph g = realization_graph(opt.depth, opt.variant, opt.seed, r);
    const auto eps = sample_disorder({opt.widths[w], opt.seed, r, g.size()});
    const Spectrum s = eigh(assemble_h(g, opt.gamma, eps));
    const auto iprs = eigenstate_iprs(s);
    const std::span<const double> energies(s.values.data(), s.values.size());
    auto& out = cell[task];
    out.resize(bins[w].size());
    for (std::size_t b = 0; b < bins[w].size(); ++b)
      out[b] = averaged_ipr(energies, iprs, bins[w][b], opt.half_width).value_or(std::nan(""));
  });

  IprTable table;
  table.depth = opt.depth;
  table.half_width = opt.half_width;
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t b = 0; b < bins[w].size(); ++b) {
      RunningStats acc;
      for (std::size_t r = 0; r < nr; ++r) {
        const double v = cell[w * nr + r][b];
        if (!std::isnan(v)) acc.add(v);
      }
      table.cells.push_back({bins[w][b], opt.widths[w], acc.mean(), acc.stderr_of_mean(), acc.n});
    }
  }
  return table;
}

std::vector<BandCenterRow> band_center_ipr_sweep(const BandCenterOptions& opt) {
  if (opt.depths.empty() || opt.widths.empty()) throw std::invalid_argument("band_center_ipr_sweep: empty grid");
  if (opt.realizations.size() != opt.depths.size())
    throw std::invalid_argument("band_center_ipr_sweep: need one realization count per depth");
  struct Task {
    std::size_t depth_index, width_index, realization;
  };
  std::vector<Task> tasks;
  for (std::size_t di = 0; di < opt.depths.size(); ++di)
    for (std::size_t wi = 0; wi < opt.widths.size(); ++wi)
      for (int r = 0; r < opt.realizations[di]; ++r) tasks.push_back({di, wi, static_cast<std::size_t>(r)});
  std::vector<double> value(tasks.size());
  parallel_for(tasks.size(), opt.workers, [&](std::size_t i) {
    const Task& t = tasks[i];
    const int d = opt.depths[t.depth_index];
    const Graph g = realization_graph(d, opt.variant, opt.seed, t.realization);
    const auto eps = sample_disorder({opt.widths[t.width_index], opt.seed, t.realization, g.size()});
    const Spectrum s = eigh(assemble_h(g, 1.0, eps));
    value[i] = band_center_ipr(eigenstate_iprs(s), opt.window);
  });
  std::map<std::pair<std::size_t, std::size_t>, RunningStats> acc;
  for (std::size_t i = 0; i < tasks.size(); ++i) acc[{tasks[i].depth_index, tasks[i].width_index}].add(value[i]);
  std::vector<BandCenterRow> rows;
  for (std::size_t di = 0; di < opt.depths.size(); ++di)
    for (std::size_t wi = 0; wi < opt.widths.size(); ++wi) {
      const auto& a = acc[{di, wi}];
      rows.push_back({opt.depths[di], opt.widths[wi], a.mean(), a.stderr_of_mean(), a.n});
    }
  return rows;
}

std::optional<double> curve_crossing(std::span<const double> x, std::span<const double> a,
                                     std::span<const double> b) {
  if (x.size() != a.size() || x.size() != b.size()) throw std::invalid_argument("curve_crossing: size mismatch");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d0 = a[i] - b[i], d1 = a[i + 1] - b[i + 1];
    if (d0 == 0.0) return x[i];
    if ((d0 > 0.0) != (d1 > 0.0) && d1 != 0.0) return x[i] + (x[i + 1] - x[i]) * d0 / (d0 - d1);
    if (d1 == 0.0) return x[i + 1];
  }
  return std::nullopt;
}

double gap_ratio(std::span<const double> e) {
  std::size_t distinct = e.empty() ? 0 : 1;
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (e[i] < e[i - 1]) throw std::domain_error("gap_ratio: eigenvalues must be sorted");
    if (e[i] != e[i - 1]) ++distinct;
  }
  if (distinct < 3) throw std::domain_error("gap_ratio: need at least three distinct levels");
  const std::size_t n = e.size();
  std::size_t lo = n / 4, hi = n - n / 4;  // middle half of the levels
  if (hi - lo < 3) {
    lo = 0;
    hi = n;
  }
  double sum = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = lo; i + 2 < hi; ++i) {
    const double s0 = e[i + 1] - e[i], s1 = e[i + 2] - e[i + 1];
    const double big = std::max(s0, s1);
    if (big == 0.0) continue;
    sum += std::min(s0, s1) / big;
    ++count;
  }
  if (count == 0) throw std::domain_error("gap_ratio: no usable gaps in the middle of the spectrum");
  return sum / static_cast<double>(count);
}

}  // namespace treewalk
