// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run one
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli.hpp"
#include "treewalk/classical.hpp"
#include "treewalk/dynamics.hpp"
#include "treewalk/hamiltonian.hpp"
#include "treewalk/localdecay.hpp"
#include "treewalk/numerics.hpp"
#include "treewalk/random.hpp"
#include "treewalk/scattering.hpp"
#include "treewalk/spectral.hpp"

namespace fs = std::filesystem;
using namespace treewalk;

namespace {

constexpr std::uint64_t kSeed = 20100601;

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    passed = passed && ok;
    notes.push_back((ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome criterion1() {
  Outcome o;
  for (int d = 1; d <= 7; ++d) {
    const Eigen::VectorXd ev = eigvalsh(assemble_h0(build_sgt(d)).dense());
    const auto expected = closed_form_spectrum(d).sorted_values();
    double dev = ev.size() == static_cast<Eigen::Index>(expected.size()) ? 0.0 : INFINITY;
    for (std::size_t i = 0; std::isfinite(dev) && i < expected.size(); ++i)
      dev = std::max(dev, std::abs(ev[static_cast<Eigen::Index>(i)] - expected[i]));
    const auto zeros = std::count_if(ev.data(), ev.data() + ev.size(), [](double e) { return std::abs(e) < 1e-9; });
    o.require(dev < 1e-9, fmt("d=%d max deviation %.3g < 1e-9", d, dev));
    o.require(zeros == (1 << d), fmt("d=%d E=0 multiplicity %ld == %d", d, static_cast<long>(zeros), 1 << d));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (std::int64_t n : {1, 7, 64, 1000}) {
    std::vector<double> site(static_cast<std::size_t>(n), 0.0), flat(static_cast<std::size_t>(n), 1.0 / std::sqrt(n));
    site[static_cast<std::size_t>(n / 2)] = 1.0;
    o.require(ipr(site) == 1.0, fmt("N=%ld single-site ipr %.17g", static_cast<long>(n), ipr(site)));
    o.require(std::abs(ipr(flat) - 1.0 / static_cast<double>(n)) <= 1e-15,
              fmt("N=%ld uniform ipr %.17g vs %.17g", static_cast<long>(n), ipr(flat), 1.0 / static_cast<double>(n)));
  }
  BandCenterOptions opt;
  opt.depths = {6};
  opt.widths = {1.0, 30.0};
  opt.realizations = {50};
  opt.seed = kSeed;
  const auto rows = band_center_ipr_sweep(opt);
  o.require(rows[0].mean < 0.05, fmt("W=1 band-center ipr %.4f +- %.4f < 0.05", rows[0].mean, rows[0].stderr_of_mean));
  o.require(rows[1].mean >= 0.4 && rows[1].mean <= 0.6,
            fmt("W=30 band-center ipr %.4f +- %.4f in [0.4, 0.6]", rows[1].mean, rows[1].stderr_of_mean));
  return o;
}

Outcome criterion3() {
  Outcome o;
  BandCenterOptions opt;
  opt.depths = {5, 6, 7};
  opt.realizations = {125, 60, 30};
  for (int w = 10; w <= 24; ++w) opt.widths.push_back(w);
  opt.seed = kSeed;
  const auto rows = band_center_ipr_sweep(opt);
  std::vector<std::vector<double>> curve(3);
  for (const auto& r : rows) curve[static_cast<std::size_t>(r.depth - 5)].push_back(r.mean);
  for (std::size_t i = 0; i < opt.widths.size(); ++i)
    o.notes.push_back(fmt("     W=%4.1f  d5 %.4f  d6 %.4f  d7 %.4f", opt.widths[i], curve[0][i], curve[1][i], curve[2][i]));
  for (std::size_t p = 0; p + 1 < 3; ++p) {
    const auto x = curve_crossing(opt.widths, curve[p], curve[p + 1]);
    const std::string pair = fmt("d=%zu/%zu", p + 5, p + 6);
    if (!x)
      o.require(false, pair + " curves do not cross on W in [10, 24]");
    else
      o.require(*x >= 14.0 && *x <= 20.0, pair + fmt(" crossing at W=%.3f in [14, 20]", *x));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const int d = 10;
  const double th = hitting_time(d);
  const auto [tpeak, ppeak] = clean_hit_peak(d);
  o.require(std::abs(tpeak - th) <= 0.05 * th, fmt("argmax p_hit %.4f vs t_hit %.4f (%.2f%%)", tpeak, th,
                                                   100 * std::abs(tpeak - th) / th));
  const Graph g = build_sgt(d);
  const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
  const auto ts = default_time_grid(d);
  const WalkSeries full = walk_series(g, eps, ts);
  const WalkSeries col = column_walk_series(d, Variant::SGT, ts);
  double dhit = 0.0, dcol = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    dhit = std::max(dhit, std::abs(full.p_hit[i] - col.p_hit[i]));
    dcol = std::max(dcol, std::abs(full.p_col[i] - 1.0));
  }
  o.require(dhit <= 1e-7, fmt("full vs column p_hit max deviation %.3g <= 1e-7 (peak p_d %.4f)", dhit, ppeak));
  o.require(dcol <= 1e-7, fmt("p_col max deviation from 1: %.3g <= 1e-7", dcol));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const int d = 10;
  const auto [tpeak, pd] = clean_hit_peak(d);
  for (double w : {0.4, 0.8, 1.2}) {
    WalkEnsembleOptions opt;
    opt.depth = d;
    opt.width = w;
    opt.realizations = 20;
    opt.seed = kSeed;
    opt.times = {tpeak};
    const WalkEnsemble e = walk_ensemble(opt);
    const double ratio = e.p_hit.mean[0] / pd, se = e.p_hit.stderr_of_mean[0] / pd;
    const double pred = hit_decay_prediction(d, w, 1.0);
    o.require(std::abs(ratio - pred) <= 2 * se,
              fmt("W=%.1f p_hit(t*)/p_d %.4f +- %.4f vs %.4f (%.2f SE)", w, ratio, se, pred, std::abs(ratio - pred) / se));
  }
  const int j0 = d;
  const double nj = static_cast<double>(column_size(j0, d, Variant::SGT));
  for (double w : {0.4, 0.8, 1.2}) {
    WalkEnsembleOptions opt;
    opt.depth = d;
    opt.width = w;
    opt.realizations = 20;
    opt.seed = kSeed;
    opt.start_column = j0;
    for (int i = 1; i <= 10; ++i) opt.times.push_back(0.05 * i);
    const WalkEnsemble e = walk_ensemble(opt);
    double worst = 0.0, tworst = 0.0, tgood = 0.0;
    for (std::size_t i = 0; i < opt.times.size(); ++i) {
      const double z = std::abs(e.p_col.mean[i] - short_time_pcol(opt.times[i], w, nj)) / e.p_col.stderr_of_mean[i];
      if (z > worst) worst = z, tworst = opt.times[i];
      if (worst <= 2.0) tgood = opt.times[i];
    }
    o.notes.push_back(fmt("     W=%.1f law holds within 2 SE up to t=%.2f", w, tgood));
    o.require(worst <= 2.0, fmt("W=%.1f j0=%d short-time p_col worst %.2f SE at t=%.2f (t <= 0.5)", w, j0, worst, tworst));
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const int d = 10;
  for (double w : {0.4, 0.8, 1.2}) {
    WalkEnsembleOptions opt;
    opt.depth = d;
    opt.width = w;
    opt.realizations = 20;
    opt.seed = kSeed;
    const WalkEnsemble e = walk_ensemble(opt);
    const WalkSeries m = local_decay_series(d, w, e.times);
    std::size_t in_col = 0, in_hit = 0;
    for (std::size_t i = 0; i < e.times.size(); ++i) {
      in_col += std::abs(m.p_col[i] - e.p_col.mean[i]) <= e.p_col.stddev[i];
      in_hit += std::abs(m.p_hit[i] - e.p_hit.mean[i]) <= e.p_hit.stddev[i];
    }
    const double n = static_cast<double>(e.times.size());
    o.require(in_col >= 0.95 * n, fmt("W=%.1f model p_col within 1 SD at %.1f%% of %zu times", w, 100 * in_col / n,
                                      e.times.size()));
    o.require(in_hit >= 0.95 * n, fmt("W=%.1f model p_hit within 1 SD at %.1f%% of %zu times", w, 100 * in_hit / n,
                                      e.times.size()));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const double half_pi = std::numbers::pi / 2;
  for (Variant v : {Variant::MGTRegular, Variant::MGTRandom, Variant::SGT}) {
    double dev = 0.0, flux = 0.0, ans = 0.0;
    for (int d = 3; d <= 8; ++d) {
      const Graph g = build_graph(d, v, kSeed);
      const std::vector<double> eps(static_cast<std::size_t>(g.size()), 0.0);
      const Transmission t = transmission(g, eps, half_pi);
      dev = std::max(dev, std::abs(std::abs(t.amplitude) - analytic_t_halfpi(d, v)));
      for (int i = 1; i <= 50; ++i) {
        const double k = std::numbers::pi * i / 51.0;
        const Transmission a = transmission(g, eps, k);
        const Transmission b = clean_transmission_general_k(d, v, k);
        ans = std::max({ans, std::abs(a.amplitude - b.amplitude), std::abs(a.reflection - b.reflection)});
        flux = std::max(flux, std::abs(a.probability() + a.reflectance() - 1.0));
      }
    }
    const std::string name = to_string(v);
    o.require(dev <= 1e-8, fmt("%s |T(pi/2)| vs closed form, d=3..8: %.3g", name.c_str(), dev));
    o.require(ans <= 1e-8, fmt("%s resolvent vs ansatz on 50 momenta, d=3..8: %.3g", name.c_str(), ans));
    o.require(flux <= 1e-9, fmt("%s |T|^2+|R|^2-1, d=3..8: %.3g", name.c_str(), flux));
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  const int d = 7;
  const double half_pi = std::numbers::pi / 2;
  TransmissionSweepOptions opt;
  opt.depth = d;
  opt.realizations = 100;
  opt.seed = kSeed;
  for (int i = -6; i <= 6; ++i) opt.momenta.push_back(half_pi + 0.05 * i);
  for (int i = 0; i <= 12; ++i) opt.widths.push_back(0.5 * i);
  const auto cells = transmission_sweep(opt);
  const std::size_t nk = opt.momenta.size();
  auto at = [&](std::size_t w, std::size_t k) -> const TransmissionCell& {
    for (const auto& c : cells)
      if (c.width == opt.widths[w] && c.k == opt.momenta[k]) return c;
    throw std::logic_error("missing sweep cell");
  };
  auto spread = [&](std::size_t w) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t k = 0; k < nk; ++k) lo = std::min(lo, at(w, k).mean), hi = std::max(hi, at(w, k).mean);
    return hi - lo;
  };
  // Washout: at W = 2 no k structure is resolvable, i.e. every ensemble mean in the
  // momentum window lies within 2 SE of the window average.
  double avg = 0.0, worst_k = 0.0;
  for (std::size_t k = 0; k < nk; ++k) avg += at(4, k).mean / static_cast<double>(nk);
  for (std::size_t k = 0; k < nk; ++k) worst_k = std::max(worst_k, std::abs(at(4, k).mean - avg) / at(4, k).stderr_of_mean);
  o.require(worst_k <= 2.0, fmt("W=2 T(k) flat over |k-pi/2|<=0.3: worst %.2f SE from the mean "
                                "(k-spread W=0 %.4f, W=2 %.4f)", worst_k, spread(0), spread(4)));

  const std::size_t kc = 6;
  std::vector<double> ws, ts, ses;
  for (std::size_t w = 4; w < opt.widths.size(); ++w) {
    ws.push_back(opt.widths[w]);
    ts.push_back(at(w, kc).mean);
    ses.push_back(at(w, kc).stderr_of_mean);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < ts.size(); ++i) monotone = monotone && ts[i] < ts[i - 1];
  o.require(monotone, "T(pi/2) decreases monotonically over W = 2..6");
  const auto [t0, c] = fit_classical_form(ws, ts, ses);
  o.require(t0 >= 0.4 && t0 <= 1.2 && c >= 0.1 && c <= 0.3, fmt("fit T0=%.4f c=%.4f within 50%% of (0.8, 0.2)", t0, c));
  const auto fitted = classical_fit_overlay(ws, t0, c);
  double worst = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    worst = std::max(worst, std::abs(ts[i] - fitted[i]) / ses[i]);
    o.notes.push_back(fmt("     W=%.1f  T=%.4f +- %.4f  fit %.4f", ws[i], ts[i], ses[i], fitted[i]));
  }
  o.require(worst <= 2.0, fmt("all W in [2, 6] within 2 SE of the fitted curve (worst %.2f SE)", worst));
  return o;
}

Outcome criterion9() {
  Outcome o;
  StreamRng rng(kSeed, 1, Stream::Test);
  double dev = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int d = 1 + static_cast<int>(rng.below(12));
    const double hop = rng.uniform(0.05, 5.0), left = rng.uniform(0.05, 5.0), right = rng.uniform(0.05, 5.0);
    const MasterSystem sys = build_master(d, hop, left, right);
    dev = std::max(dev, std::abs(analytic_tc(d, hop, left, right) - transmitted_fraction(sys, steady_state(sys))));
  }
  o.require(dev <= 1e-10, fmt("closed form vs linear solve on 20 tuples: %.3g <= 1e-10", dev));
  double wdev = 0.0;
  for (int d = 1; d <= 15; ++d)
    for (double gamma : {0.5, 1.0, 2.0})
      for (int i = 0; i <= 40; ++i) {
        const double w = 0.25 * i;
        const double r = w / gamma;
        const double expect = 0.5 / (1.0 + (1.0 - 3.0 * std::ldexp(1.0, -d - 2)) * r * r);
        wdev = std::max(wdev, std::abs(tc_of_disorder(d, w, gamma) - expect) / expect);
      }
  o.require(wdev <= 1e-14, fmt("W formula relative deviation %.3g (round-off only)", wdev));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome criterion10() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "treewalk_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> commands = {
      {"spectrum", "--d", "3", "--widths", "0,2", "--realizations", "3", "--variant", "mgt-random"},
      {"ipr-phase", "--d", "4", "--widths", "1:3:1", "--realizations", "6"},
      {"ipr-center", "--d", "3,4", "--widths", "5,15", "--realizations", "8,4", "--window", "10"},
      {"dynamics", "--d", "5", "--widths", "0,0.8", "--realizations", "5", "--t-points", "40"},
      {"local-decay", "--d", "5", "--widths", "0.4,1.2", "--realizations", "5", "--t-points", "40"},
      {"max-depth", "--d", "3,4", "--widths", "0,4", "--realizations", "4,3", "--t-points", "40"},
      {"scattering", "--d", "4", "--widths", "0,2", "--realizations", "6", "--momenta", "1.0,1.5707963267948966"},
      {"classical", "--d", "4", "--widths", "0:2:0.5"},
  };
  for (const auto& base : commands) {
    std::vector<std::vector<std::string>> runs;
    for (const char* workers : {"1", "3", "1"}) {
      auto args = base;
      const fs::path out = root / (base[0] + "_" + std::to_string(runs.size()));
      args.insert(args.begin(), "treewalk");
      args.insert(args.end(), {"--seed", "77", "--workers", workers, "--out", out.string()});
      std::ostringstream so, se;
      if (run_cli(args, so, se) != 0) {
        o.require(false, base[0] + " failed: " + se.str());
        runs.push_back({});
        continue;
      }
      std::vector<std::string> csvs;
      std::vector<fs::path> names;
      for (const auto& f : fs::directory_iterator(out))
        if (f.path().extension() == ".csv") names.push_back(f.path());
      std::sort(names.begin(), names.end());
      for (const auto& p : names) csvs.push_back(p.filename().string() + "\n" + slurp(p));
      runs.push_back(csvs);
    }
    const bool same = !runs[0].empty() && runs[0] == runs[1] && runs[0] == runs[2];
    o.require(same, fmt("%s: %zu CSVs identical across workers 1, 3 and a rerun", base[0].c_str(), runs[0].size()));
  }
  fs::remove_all(root);
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria = {
    {"closed-form SGT spectrum", criterion1},
    {"IPR limits and phase-diagram smoke test", criterion2},
    {"localization crossing of band-center IPR curves", criterion3},
    {"clean dynamics", criterion4},
    {"hitting-probability decay law and short-time column leakage", criterion5},
    {"local decay model fidelity", criterion6},
    {"clean scattering oracles", criterion7},
    {"disordered transmission", criterion8},
    {"classical transport", criterion9},
    {"determinism across worker counts", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (std::size_t i = 0; i < kCriteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome res;
    try {
      res = kCriteria[i].second();
    } catch (const std::exception& e) {
      res.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& n : res.notes) std::cout << "  " << n << "\n";
    std::cout << (res.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << kCriteria[i].first
              << fmt(" (%.1f s)", secs) << std::endl;
    all = all && res.passed;
  }
  return all ? 0 : 1;
}
