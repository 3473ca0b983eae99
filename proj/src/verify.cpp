#include "treewalk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "treewalk/classical.hpp"
#include "treewalk/dynamics.hpp"
#include "treewalk/hamiltonian.hpp"
#include "treewalk/localdecay.hpp"
#include "treewalk/numerics.hpp"
#include "treewalk/random.hpp"
#include "treewalk/scattering.hpp"
#include "treewalk/spectral.hpp"

namespace treewalk {

namespace {

constexpr std::uint64_t kVerifySeed = 20100601;

void check(std::vector<CheckResult>& out, std::string name, double tol, double dev) {
  out.push_back({std::move(name), tol, dev, std::isfinite(dev) && dev <= tol});
}

void spectrum_checks(std::vector<CheckResult>& out, bool corrupt) {
  for (int d = 1; d <= 6; ++d) {
    const Graph g = build_sgt(d);
    Eigen::MatrixXd h = assemble_h0(g).dense();
    if (corrupt) h(0, g.size() - 1) = h(g.size() - 1, 0) = -1.0;
    const Eigen::VectorXd ev = eigvalsh(h);
    const auto expected = closed_form_spectrum(d).sorted_values();
    double dev = ev.size() == static_cast<Eigen::Index>(expected.size()) ? 0.0 : INFINITY;
    for (std::size_t i = 0; std::isfinite(dev) && i < expected.size(); ++i)
      dev = std::max(dev, std::abs(ev[static_cast<Eigen::Index>(i)] - expected[i]));
    check(out, "spectrum_sgt_d" + std::to_string(d), 1e-9, dev);
    const auto zeros = std::count_if(ev.data(), ev.data() + ev.size(), [](double e) { return std::abs(e) < 1e-9; });
    check(out, "zero_multiplicity_sgt_d" + std::to_string(d), 0.0,
          std::abs(static_cast<double>(zeros) - std::ldexp(1.0, d)));
  }
}

void scattering_checks(std::vector<CheckResult>& out) {
  const double half_pi = std::numbers::pi / 2;
  for (Variant v : {Variant::MGTRegular, Variant::SGT}) {
    double dev = 0.0, flux = 0.0;
    for (int d = 3; d <= 8; ++d) {
      const Graph g = build_graph(d, v);
      const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
      const Transmission t = transmission(g, eps, half_pi);
      dev = std::max(dev, std::abs(std::abs(t.amplitude) - analytic_t_halfpi(d, v)));
      flux = std::max(flux, std::abs(t.probability() + t.reflectance() - 1.0));
    }
    check(out, "transmission_halfpi_" + to_string(v), 1e-8, dev);
    check(out, "flux_halfpi_" + to_string(v), 1e-9, flux);
  }
  for (Variant v : {Variant::MGTRegular, Variant::SGT}) {
    const int d = 4;
    const Graph g = build_graph(d, v);
    const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
    double dev = 0.0;
    for (int i = 1; i <= 50; ++i) {
      const double k = std::numbers::pi * i / 51.0;
      const Transmission a = transmission(g, eps, k);
      const Transmission b = clean_transmission_general_k(d, v, k);
      dev = std::max({dev, std::abs(a.amplitude - b.amplitude), std::abs(a.reflection - b.reflection)});
    }
    check(out, "resolvent_vs_ansatz_" + to_string(v), 1e-8, dev);
  }
}

void classical_checks(std::vector<CheckResult>& out) {
  StreamRng rng(kVerifySeed, 0, Stream::Test);
  double dev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + static_cast<int>(rng.below(10));
    const double hop = rng.uniform(0.05, 5.0), left = rng.uniform(0.05, 5.0), right = rng.uniform(0.05, 5.0);
    const MasterSystem sys = build_master(d, hop, left, right);
    dev = std::max(dev, std::abs(analytic_tc(d, hop, left, right) - transmitted_fraction(sys, steady_state(sys))));
  }
  check(out, "classical_tc_closed_form_vs_solve", 1e-10, dev);
}

// Leakage out of the column space from the middle column (2^d vertices). The law is the
// t^2 term of a short-time expansion, so the ensemble check stays at t <= 0.1;
// per realization the t^2 coefficient is the column variance of eps.
void short_time_checks(std::vector<CheckResult>& out) {
  const int d = 6, j0 = d;
  const double w = 1.0;
  WalkEnsembleOptions opt;
  opt.depth = d;
  opt.width = w;
  opt.realizations = 40;
  opt.seed = kVerifySeed;
  opt.start_column = j0;
  opt.times = {0.05, 0.1};
  const WalkEnsemble e = walk_ensemble(opt);
  const double nj = static_cast<double>(column_size(j0, d, Variant::SGT));
  double worst = 0.0;
  for (std::size_t i = 0; i < opt.times.size(); ++i) {
    const double se = e.p_col.stderr_of_mean[i];
    worst = std::max(worst, std::abs(e.p_col.mean[i] - short_time_pcol(opt.times[i], w, nj)) / se);
  }
  check(out, "short_time_pcol_sigmas", 2.0, worst);

  const Graph g = build_sgt(d);
  const auto eps = sample_disorder({w, kVerifySeed, 0, g.size()});
  const double t = 0.01;
  const std::vector<double> ts = {t};
  const double leak = 1.0 - p_col_series(g, eps, ts, j0)[0];
  double mean = 0.0, var = 0.0;
  const auto off = g.column_offset(j0);
  for (std::int64_t i = 0; i < g.column_size(j0); ++i) mean += eps[static_cast<std::size_t>(off + i)];
  mean /= nj;
  for (std::int64_t i = 0; i < g.column_size(j0); ++i) {
    const double x = eps[static_cast<std::size_t>(off + i)] - mean;
    var += x * x;
  }
  var /= nj;
  check(out, "short_time_pcol_coefficient", 1e-3, std::abs(leak / (t * t) - var) / var);
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  spectrum_checks(out, opt.corrupt_adjacency);
  scattering_checks(out);
  classical_checks(out);
  short_time_checks(out);
  return out;
}

bool print_report(std::ostream& os, const std::vector<CheckResult>& results) {
  bool ok = true;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-36s %12s %12s  %s\n", "check", "tolerance", "deviation", "status");
  os << buf;
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%-36s %12.3g %12.3g  %s\n", r.name.c_str(), r.tolerance, r.deviation,
                  r.passed ? "PASS" : "FAIL");
    os << buf;
    ok = ok && r.passed;
  }
  os << (ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok;
}

}  // namespace treewalk
