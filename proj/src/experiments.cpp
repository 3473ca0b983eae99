#include "treewalk/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>

#include "json.hpp"

#include "treewalk/classical.hpp"
#include "treewalk/dynamics.hpp"
#include "treewalk/ensemble.hpp"
#include "treewalk/hamiltonian.hpp"
#include "treewalk/localdecay.hpp"
#include "treewalk/numerics.hpp"
#include "treewalk/output.hpp"
#include "treewalk/scattering.hpp"
#include "treewalk/spectral.hpp"

#ifndef TREEWALK_VERSION
#define TREEWALK_VERSION "unknown"
#endif

namespace treewalk {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<ExperimentKind, std::string>> kKindNames = {
    {ExperimentKind::Spectrum, "spectrum"},     {ExperimentKind::IprPhase, "ipr-phase"},
    {ExperimentKind::IprCenter, "ipr-center"},  {ExperimentKind::Dynamics, "dynamics"},
    {ExperimentKind::LocalDecay, "local-decay"}, {ExperimentKind::MaxDepth, "max-depth"},
    {ExperimentKind::Scattering, "scattering"}, {ExperimentKind::Classical, "classical"},
};

// ---- token parsing ----

const std::string& single(const RawConfig& raw, const std::string& key) {
  const auto& v = raw.at(key);
  if (v.size() != 1) throw ConfigError(key, "expected a single value");
  return v[0];
}

template <class T>
T parse_number(const std::string& key, const std::string& token) {
  T value{};
  const char* first = token.data();
  const char* last = first + token.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  if (first < last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    throw ConfigError(key, "cannot parse '" + token + "' as a number");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(value)) throw ConfigError(key, "value must be finite");
  return value;
}

// Expands comma-separated tokens, each a number or an inclusive a:b:step range.
template <class T>
std::vector<T> parse_list(const std::string& key, const std::vector<std::string>& tokens) {
  std::vector<T> out;
  for (const auto& tok : tokens) {
    if (tok.find(':') == std::string::npos) {
      out.push_back(parse_number<T>(key, tok));
      continue;
    }
    const auto c1 = tok.find(':'), c2 = tok.find(':', c1 + 1);
    if (c2 == std::string::npos || tok.find(':', c2 + 1) != std::string::npos)
      throw ConfigError(key, "range '" + tok + "' must have the form start:stop:step");
    const T a = parse_number<T>(key, tok.substr(0, c1));
    const T b = parse_number<T>(key, tok.substr(c1 + 1, c2 - c1 - 1));
    const T s = parse_number<T>(key, tok.substr(c2 + 1));
    if (!(s > 0) || b < a) throw ConfigError(key, "range '" + tok + "' needs step > 0 and stop >= start");
    const auto n = static_cast<std::int64_t>(std::floor(static_cast<double>(b - a) / static_cast<double>(s) + 1e-9));
    if (n > 1000000) throw ConfigError(key, "range '" + tok + "' is too long");
    for (std::int64_t i = 0; i <= n; ++i) out.push_back(static_cast<T>(a + static_cast<T>(i) * s));
  }
  if (out.empty()) throw ConfigError(key, "list must not be empty");
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    if constexpr (std::is_floating_point_v<T>)
      s += format_double(v[i]);
    else
      s += std::to_string(v[i]);
  }
  return s;
}

struct Defaults {
  std::vector<int> depths;
  std::vector<double> widths;
  std::vector<int> realizations;
  Variant variant;
};

Defaults defaults_for(ExperimentKind k) {
  auto range = [](double a, double b, double s) {
    std::vector<double> v;
    for (int i = 0; a + i * s <= b + 1e-9; ++i) v.push_back(a + i * s);
    return v;
  };
  switch (k) {
    case ExperimentKind::Spectrum: return {{4}, {0.0}, {1}, Variant::SGT};
    case ExperimentKind::IprPhase: return {{8}, range(1, 30, 1), {500}, Variant::MGTRandom};
    case ExperimentKind::IprCenter: return {{5, 6, 7, 8}, range(1, 30, 1), {500, 250, 125, 50}, Variant::MGTRandom};
    case ExperimentKind::Dynamics:
    case ExperimentKind::LocalDecay: return {{10}, {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2}, {10}, Variant::SGT};
    case ExperimentKind::MaxDepth: return {{5, 10}, range(0, 20, 1), {100, 10}, Variant::SGT};
    case ExperimentKind::Scattering: return {{5}, range(0, 8, 0.5), {250}, Variant::MGTRandom};
    case ExperimentKind::Classical: return {{6}, range(0, 10, 0.25), {1}, Variant::MGTRandom};
  }
  return {};
}

bool uses_sgt_walk(ExperimentKind k) {
  return k == ExperimentKind::Dynamics || k == ExperimentKind::LocalDecay || k == ExperimentKind::MaxDepth;
}

// ---- run helpers ----

class Bundle {
 public:
  explicit Bundle(fs::path dir) : dir_(std::move(dir)) {}
  void csv(const std::string& name, const Table& t) {
    write_csv(dir_ / name, t);
    files_.push_back(name);
  }
  void plot(const std::string& name, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    write_line_plot(dir_ / name, spec, series);
    files_.push_back(name);
  }
  void heatmap(const std::string& name, const PlotSpec& spec, const std::vector<double>& xs,
               const std::vector<double>& ys, const std::vector<std::vector<double>>& z) {
    write_heatmap(dir_ / name, spec, xs, ys, z);
    files_.push_back(name);
  }
  void text(const std::string& name, const std::string& body) {
    std::ofstream os(dir_ / name, std::ios::binary);
    os << body;
    if (!os) throw std::runtime_error("write failed: " + (dir_ / name).string());
    files_.push_back(name);
  }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

Table make_table(const ExperimentConfig& cfg, std::string what, std::vector<std::string> columns) {
  Table t;
  t.meta = {{"experiment", to_string(cfg.kind)},
            {"content", std::move(what)},
            {"variant", to_string(cfg.variant)},
            {"gamma", format_double(cfg.gamma)},
            {"seed", std::to_string(cfg.seed)}};
  t.columns = std::move(columns);
  return t;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string suffix(int d) { return "_d" + std::to_string(d); }

std::vector<double> time_grid(const ExperimentConfig& cfg, int d) {
  return uniform_grid(cfg.t_max > 0.0 ? cfg.t_max : 3.0 * hitting_time(d, cfg.gamma), cfg.t_points);
}

void run_spectrum(const ExperimentConfig& cfg, Bundle& out) {
  Table spec = make_table(cfg, "eigenvalues and eigenstate IPR of realization 0",
                          {"depth", "width", "index", "energy", "ipr", "closed_form"});
  Table ratio = make_table(cfg, "mean adjacent-gap ratio over realizations",
                           {"depth", "width", "gap_ratio_mean", "gap_ratio_stderr", "realizations", "excluded"});
  std::vector<PlotSeries> series;
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
    const int d = cfg.depths[di];
    const int nr = cfg.realizations_for(di);
    for (double w : cfg.widths) {
      std::vector<double> ratios(static_cast<std::size_t>(nr));
      Spectrum first;
      parallel_for(ratios.size(), cfg.workers, [&](std::size_t r) {
        const Graph g = realization_graph(d, cfg.variant, cfg.seed, r);
        const auto eps = sample_disorder({w, cfg.seed, r, g.size()});
        Spectrum s = eigh(assemble_h(g, cfg.gamma, eps));
        const std::vector<double> ev(s.values.data(), s.values.data() + s.values.size());
        try {
          ratios[r] = gap_ratio(ev);
        } catch (const std::exception&) {
          ratios[r] = std::nan("");
        }
        if (r == 0) first = std::move(s);
      });
      RunningStats acc;
      std::int64_t excluded = 0;
      for (double x : ratios) std::isnan(x) ? void(++excluded) : acc.add(x);
      ratio.add_row({double(d), w, acc.mean(), acc.stderr_of_mean(), double(acc.n), double(excluded)});

      std::vector<double> closed;
      if (w == 0.0 && cfg.variant == Variant::SGT) closed = closed_form_spectrum(d, cfg.gamma).sorted_values();
      const auto iprs = eigenstate_iprs(first);
      PlotSeries ps{"d=" + std::to_string(d) + " W=" + fmt(w), {}, {}, {}, false};
      for (Eigen::Index i = 0; i < first.values.size(); ++i) {
        const auto u = static_cast<std::size_t>(i);
        spec.add_row({double(d), w, double(i), first.values[i], iprs[u], closed.empty() ? std::nan("") : closed[u]});
        ps.x.push_back(first.values[i]);
        ps.y.push_back(iprs[u]);
      }
      series.push_back(std::move(ps));
    }
  }
  out.csv("spectrum.csv", spec);
  out.csv("gap_ratio.csv", ratio);
  out.plot("spectrum_ipr.svg", {"Eigenstate IPR (realization 0)", "energy E", "I2", true}, series);
}

void run_ipr_phase(const ExperimentConfig& cfg, Bundle& out) {
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
    IprPhaseOptions opt;
    opt.depth = cfg.depths[di];
    opt.widths = cfg.widths;
    opt.half_width = cfg.delta_e;
    opt.realizations = cfg.realizations_for(di);
    opt.seed = cfg.seed;
    opt.variant = cfg.variant;
    opt.gamma = cfg.gamma;
    opt.workers = cfg.workers;
    const IprTable table = ipr_phase_diagram(opt);
    Table t = make_table(cfg, "window-averaged IPR I2(E) per disorder width",
                         {"depth", "width", "energy", "ipr_mean", "ipr_stderr", "realizations"});
    t.meta.push_back({"delta_e", format_double(cfg.delta_e)});
    for (const auto& c : table.cells)
      t.add_row({double(opt.depth), c.width, c.energy, c.mean, c.stderr_of_mean, double(c.realizations)});
    out.csv("ipr_phase" + suffix(opt.depth) + ".csv", t);

    // widest energy range covers every W's bins
    const double wmax = *std::max_element(cfg.widths.begin(), cfg.widths.end());
    const auto es = energy_bins(wmax, cfg.delta_e, cfg.gamma);
    const double spacing = cfg.delta_e;
    std::vector<std::vector<double>> z(cfg.widths.size(), std::vector<double>(es.size(), std::nan("")));
    for (const auto& c : table.cells) {
      const auto wi = static_cast<std::size_t>(std::find(cfg.widths.begin(), cfg.widths.end(), c.width) -
                                               cfg.widths.begin());
      const auto ei = static_cast<std::size_t>(std::llround((c.energy - es.front()) / spacing));
      if (wi < z.size() && ei < es.size()) z[wi][ei] = c.mean;
    }
    std::vector<double> ys = cfg.widths;
    std::vector<std::size_t> order(ys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ys[a] < ys[b]; });
    std::vector<double> ys_sorted;
    std::vector<std::vector<double>> z_sorted;
    for (auto i : order) ys_sorted.push_back(ys[i]), z_sorted.push_back(z[i]);
    out.heatmap("ipr_phase" + suffix(opt.depth) + ".svg",
                {"I2(E), d=" + std::to_string(opt.depth), "energy E", "disorder W", false}, es, ys_sorted,
                z_sorted);
  }
}

void run_ipr_center(const ExperimentConfig& cfg, Bundle& out) {
  BandCenterOptions opt;
  opt.depths = cfg.depths;
  opt.widths = cfg.widths;
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) opt.realizations.push_back(cfg.realizations_for(di));
  opt.seed = cfg.seed;
  opt.window = cfg.window;
  opt.variant = cfg.variant;
  opt.workers = cfg.workers;
  const auto rows = band_center_ipr_sweep(opt);
  Table t = make_table(cfg, "band-centre IPR (middle states by rank)",
                       {"depth", "width", "ipr_mean", "ipr_stderr", "realizations"});
  t.meta.push_back({"window", std::to_string(cfg.window)});
  std::vector<PlotSeries> series;
  std::map<int, std::vector<double>> curve;
  for (const auto& r : rows) {
    t.add_row({double(r.depth), r.width, r.mean, r.stderr_of_mean, double(r.realizations)});
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const PlotSeries& s) { return s.label == "d=" + std::to_string(r.depth); });
    if (it == series.end()) {
      series.push_back({"d=" + std::to_string(r.depth), {}, {}, {}, false});
      it = series.end() - 1;
    }
    it->x.push_back(r.width), it->y.push_back(r.mean), it->err.push_back(r.stderr_of_mean);
    curve[r.depth].push_back(r.mean);
  }
  out.csv("band_center.csv", t);

  Table cross = make_table(cfg, "first crossing of consecutive-depth curves (linear interpolation)",
                           {"depth_a", "depth_b", "crossing_width"});
  std::vector<double> ws = cfg.widths;
  const bool ascending = std::is_sorted(ws.begin(), ws.end());
  for (std::size_t i = 0; i + 1 < cfg.depths.size(); ++i) {
    const int a = cfg.depths[i], b = cfg.depths[i + 1];
    std::optional<double> x;
    if (ascending) x = curve_crossing(ws, curve[a], curve[b]);
    cross.add_row({double(a), double(b), x.value_or(std::nan(""))});
  }
  out.csv("crossings.csv", cross);
  out.plot("band_center.svg", {"Band-centre IPR", "disorder W", "I2", false}, series);
}

WalkEnsembleOptions walk_options(const ExperimentConfig& cfg, int d, double w, int nr, std::vector<double> times) {
  WalkEnsembleOptions opt;
  opt.depth = d;
  opt.variant = Variant::SGT;
  opt.width = w;
  opt.realizations = nr;
  opt.seed = cfg.seed;
  opt.times = std::move(times);
  opt.start_column = cfg.start_column;
  opt.gamma = cfg.gamma;
  opt.workers = cfg.workers;
  return opt;
}

void run_dynamics(const ExperimentConfig& cfg, Bundle& out) {
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
    const int d = cfg.depths[di];
    const int nr = cfg.realizations_for(di);
    const auto times = time_grid(cfg, d);
    Table t = make_table(cfg, "ensemble walk observables from the left root",
                         {"depth", "width", "time", "p_hit_mean", "p_hit_sd", "p_hit_se", "p_col_mean", "p_col_sd",
                          "p_col_se", "r_mean", "r_sd", "r_se"});
    t.meta.push_back({"realizations", std::to_string(nr)});
    t.meta.push_back({"start_column", std::to_string(cfg.start_column)});
    Table decay = make_table(cfg, "p_hit at the clean peak time over the clean peak",
                             {"depth", "width", "t_peak", "ratio_mean", "ratio_se", "predicted"});
    const auto [t_peak, p_peak] = clean_hit_peak(d, cfg.gamma);
    std::vector<PlotSeries> phit, pcol, depth;
    for (double w : cfg.widths) {
      const WalkEnsemble e = walk_ensemble(walk_options(cfg, d, w, nr, times));
      for (std::size_t i = 0; i < times.size(); ++i)
        t.add_row({double(d), w, times[i], e.p_hit.mean[i], e.p_hit.stddev[i], e.p_hit.stderr_of_mean[i],
                   e.p_col.mean[i], e.p_col.stddev[i], e.p_col.stderr_of_mean[i], e.depth.mean[i],
                   e.depth.stddev[i], e.depth.stderr_of_mean[i]});
      const std::string label = "d=" + std::to_string(d) + " W=" + fmt(w);
      phit.push_back({label, times, e.p_hit.mean, {}, false});
      pcol.push_back({label, times, e.p_col.mean, e.p_col.stddev, false});
      depth.push_back({label, times, e.depth.mean, {}, false});

      if (cfg.start_column == 0) {
        const WalkEnsemble at = walk_ensemble(walk_options(cfg, d, w, nr, {t_peak}));
        RunningStats acc;
        for (const auto& s : at.samples) acc.add(s.p_hit[0] / p_peak);
        decay.add_row({double(d), w, t_peak, acc.mean(), acc.stderr_of_mean(),
                       hit_decay_prediction(d, w, p_peak) / p_peak});
      }
    }
    out.csv("dynamics" + suffix(d) + ".csv", t);
    if (!decay.rows.empty()) out.csv("hit_decay" + suffix(d) + ".csv", decay);
    out.plot("p_hit" + suffix(d) + ".svg", {"Hitting probability", "time t", "p_hit", false}, phit);
    out.plot("p_col" + suffix(d) + ".svg", {"Column-space probability", "time t", "p_col", false}, pcol);
    out.plot("depth" + suffix(d) + ".svg", {"Average depth r(t)", "time t", "r", false}, depth);
  }
}

void run_local_decay(const ExperimentConfig& cfg, Bundle& out) {
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
    const int d = cfg.depths[di];
    const int nr = cfg.realizations_for(di);
    const auto times = time_grid(cfg, d);
    Table t = make_table(cfg, "full simulation against the local decay model",
                         {"depth", "width", "time", "sim_p_hit_mean", "sim_p_hit_sd", "model_p_hit", "sim_p_col_mean",
                          "sim_p_col_sd", "model_p_col"});
    t.meta.push_back({"realizations", std::to_string(nr)});
    t.meta.push_back({"start_column", std::to_string(cfg.start_column)});
    Table summary = make_table(cfg, "fraction of grid times where the model lies within one ensemble SD",
                               {"depth", "width", "p_hit_within_sd", "p_col_within_sd"});
    std::vector<PlotSeries> phit, pcol;
    for (double w : cfg.widths) {
      const WalkEnsemble e = walk_ensemble(walk_options(cfg, d, w, nr, times));
      const WalkSeries m = local_decay_series(d, w, times, cfg.gamma, Variant::SGT, cfg.start_column);
      std::size_t hit_ok = 0, col_ok = 0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        t.add_row({double(d), w, times[i], e.p_hit.mean[i], e.p_hit.stddev[i], m.p_hit[i], e.p_col.mean[i],
                   e.p_col.stddev[i], m.p_col[i]});
        hit_ok += std::abs(m.p_hit[i] - e.p_hit.mean[i]) <= e.p_hit.stddev[i] + 1e-12;
        col_ok += std::abs(m.p_col[i] - e.p_col.mean[i]) <= e.p_col.stddev[i] + 1e-12;
      }
      const double n = static_cast<double>(times.size());
      summary.add_row({double(d), w, double(hit_ok) / n, double(col_ok) / n});
      const std::string label = "W=" + fmt(w);
      phit.push_back({label, times, e.p_hit.mean, e.p_hit.stddev, false});
      phit.push_back({label + " model", times, m.p_hit, {}, true});
      pcol.push_back({label, times, e.p_col.mean, e.p_col.stddev, false});
      pcol.push_back({label + " model", times, m.p_col, {}, true});
    }
    out.csv("local_decay" + suffix(d) + ".csv", t);
    out.csv("local_decay_summary" + suffix(d) + ".csv", summary);
    out.plot("local_decay_p_hit" + suffix(d) + ".svg", {"p_hit: simulation and model", "time t", "p_hit", false},
             phit);
    out.plot("local_decay_p_col" + suffix(d) + ".svg", {"p_col: simulation and model", "time t", "p_col", true},
             pcol);
  }
}

void run_max_depth(const ExperimentConfig& cfg, Bundle& out) {
  MaxDepthOptions opt;
  opt.depths = cfg.depths;
  opt.widths = cfg.widths;
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) opt.realizations.push_back(cfg.realizations_for(di));
  opt.seed = cfg.seed;
  opt.time_points = cfg.t_points;
  opt.workers = cfg.workers;
  const auto rows = max_depth_sweep(opt);
  Table t = make_table(cfg, "ensemble mean of max r(t) for t < 3 t_hit",
                       {"depth", "width", "max_r_mean", "max_r_sd", "max_r_se", "realizations"});
  std::map<int, PlotSeries> series;
  for (const auto& r : rows) {
    t.add_row({double(r.depth), r.width, r.mean, r.stddev, r.stderr_of_mean, double(r.realizations)});
    auto& s = series[r.depth];
    s.label = "d=" + std::to_string(r.depth);
    s.x.push_back(r.width), s.y.push_back(r.mean), s.err.push_back(r.stderr_of_mean);
  }
  out.csv("max_depth.csv", t);
  std::vector<PlotSeries> list;
  for (auto& [d, s] : series) list.push_back(std::move(s));
  out.plot("max_depth.svg", {"Maximum average depth", "disorder W", "max r", false}, list);
}

void run_scattering(const ExperimentConfig& cfg, Bundle& out) {
  for (std::size_t di = 0; di < cfg.depths.size(); ++di) {
    const int d = cfg.depths[di];
    TransmissionSweepOptions opt;
    opt.depth = d;
    opt.momenta = cfg.momenta;
    opt.widths = cfg.widths;
    opt.realizations = cfg.realizations_for(di);
    opt.seed = cfg.seed;
    opt.variant = cfg.variant;
    opt.workers = cfg.workers;
    const auto cells = transmission_sweep(opt);
    Table t = make_table(cfg, "ensemble-mean transmission probability",
                         {"depth", "k", "width", "t_mean", "t_stderr", "realizations", "excluded"});
    for (const auto& c : cells)
      t.add_row({double(d), c.k, c.width, c.mean, c.stderr_of_mean, double(c.realizations), double(c.excluded)});
    out.csv("transmission" + suffix(d) + ".csv", t);

    // heatmap over sorted axes
    std::vector<double> ks = cfg.momenta, ws = cfg.widths;
    std::sort(ks.begin(), ks.end());
    std::sort(ws.begin(), ws.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
    std::vector<std::vector<double>> z(ws.size(), std::vector<double>(ks.size(), std::nan("")));
    for (const auto& c : cells) {
      const auto wi = std::lower_bound(ws.begin(), ws.end(), c.width) - ws.begin();
      const auto ki = std::lower_bound(ks.begin(), ks.end(), c.k) - ks.begin();
      z[static_cast<std::size_t>(wi)][static_cast<std::size_t>(ki)] = c.mean;
    }
    out.heatmap("transmission" + suffix(d) + ".svg",
                {"Transmission T(k, W), d=" + std::to_string(d), "momentum k", "disorder W", false}, ks, ws, z);

    // cut at the momentum closest to pi/2, against the classical forms
    const double half_pi = std::numbers::pi / 2;
    const double kc = *std::min_element(ks.begin(), ks.end(), [&](double a, double b) {
      return std::abs(a - half_pi) < std::abs(b - half_pi);
    });
    Table cut = make_table(cfg, "transmission cut at the momentum nearest pi/2 with classical overlays",
                           {"depth", "k", "width", "t_mean", "t_stderr", "fit_overlay", "tc_master_equation"});
    PlotSeries q{"quantum, k=" + fmt(kc), {}, {}, {}, false}, fit{"0.8/(1+0.2 W^2)", {}, {}, {}, true},
        tc{"classical T_c", {}, {}, {}, true};
    for (const auto& c : cells) {
      if (c.k != kc) continue;
      const double fo = classical_fit_overlay(std::span<const double>(&c.width, 1))[0];
      const double tcv = tc_of_disorder(d, c.width);
      cut.add_row({double(d), c.k, c.width, c.mean, c.stderr_of_mean, fo, tcv});
      q.x.push_back(c.width), q.y.push_back(c.mean), q.err.push_back(c.stderr_of_mean);
      fit.x.push_back(c.width), fit.y.push_back(fo);
      tc.x.push_back(c.width), tc.y.push_back(tcv);
    }
    out.csv("transmission_cut" + suffix(d) + ".csv", cut);
    out.plot("transmission_cut" + suffix(d) + ".svg", {"Transmission near k = pi/2", "disorder W", "T", false},
             {q, fit, tc});
  }
}

void run_classical(const ExperimentConfig& cfg, Bundle& out) {
  Table t = make_table(cfg, "classical transmission T_c(W) with lambda = gamma^3/W^2",
                       {"depth", "width", "tc_closed_form", "tc_linear_solve", "fit_overlay"});
  std::vector<PlotSeries> series;
  const auto overlay = classical_fit_overlay(cfg.widths);
  for (int d : cfg.depths) {
    PlotSeries s{"T_c, d=" + std::to_string(d), {}, {}, {}, false};
    for (std::size_t i = 0; i < cfg.widths.size(); ++i) {
      const double w = cfg.widths[i];
      const double closed = tc_of_disorder(d, w, cfg.gamma);
      double solved = 0.5;
      if (w > 0.0) {
        const MasterSystem sys = build_master(d, cfg.gamma * cfg.gamma * cfg.gamma / (w * w), cfg.gamma, cfg.gamma);
        solved = transmitted_fraction(sys, steady_state(sys));
      }
      t.add_row({double(d), w, closed, solved, overlay[i]});
      s.x.push_back(w), s.y.push_back(closed);
    }
    series.push_back(std::move(s));
  }
  series.push_back({"0.8/(1+0.2 W^2)", cfg.widths, overlay, {}, true});
  out.csv("classical.csv", t);
  out.plot("classical.svg", {"Classical transmission", "disorder W", "T_c", false}, series);
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument("invalid config field '" + field + "': " + message), field_(std::move(field)) {}

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  throw std::logic_error("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (const auto& [kind, n] : kKindNames)
    if (n == name) return kind;
  throw ConfigError("kind", "unknown experiment '" + name + "'");
}

std::vector<std::string> experiment_kind_names() {
  std::vector<std::string> out;
  for (const auto& [kind, n] : kKindNames) out.push_back(n);
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"kind",    "d",       "widths",   "realizations", "seed",
                                                "variant", "gamma",   "delta-e",  "window",       "t-max",
                                                "t-points", "momenta", "start-column", "out",     "workers"};
  return keys;
}

int ExperimentConfig::realizations_for(std::size_t depth_index) const {
  return realizations.size() == 1 ? realizations[0] : realizations.at(depth_index);
}

ExperimentConfig resolve_config(const RawConfig& raw) {
  for (const auto& [key, tokens] : raw)
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
      throw ConfigError(key, "unknown key");
  auto has = [&](const char* key) { return raw.count(key) > 0 && !raw.at(key).empty(); };

  if (!has("kind")) throw ConfigError("kind", "missing experiment kind");
  ExperimentConfig cfg;
  cfg.kind = experiment_kind_from_string(single(raw, "kind"));
  const Defaults def = defaults_for(cfg.kind);

  if (!has("seed")) throw ConfigError("seed", "a seed is required");
  cfg.seed = parse_number<std::uint64_t>("seed", single(raw, "seed"));

  cfg.depths = has("d") ? parse_list<int>("d", raw.at("d")) : def.depths;
  for (int d : cfg.depths)
    if (d < 1 || d > 20) throw ConfigError("d", "depth must lie in 1..20");
  cfg.widths = has("widths") ? parse_list<double>("widths", raw.at("widths")) : def.widths;
  for (double w : cfg.widths)
    if (w < 0.0) throw ConfigError("widths", "disorder widths must be >= 0");
  if (has("realizations")) {
    cfg.realizations = parse_list<int>("realizations", raw.at("realizations"));
  } else {
    cfg.realizations = def.realizations;
    if (cfg.realizations.size() != 1 && cfg.realizations.size() != cfg.depths.size())
      cfg.realizations = {cfg.realizations.back()};
  }
  if (cfg.realizations.size() != 1 && cfg.realizations.size() != cfg.depths.size())
    throw ConfigError("realizations", "give one count, or one per depth");
  for (int r : cfg.realizations)
    if (r < 1) throw ConfigError("realizations", "counts must be >= 1");

  try {
    cfg.variant = has("variant") ? variant_from_string(single(raw, "variant")) : def.variant;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("variant", e.what());
  }
  if (uses_sgt_walk(cfg.kind) && cfg.variant != Variant::SGT)
    throw ConfigError("variant", "walk experiments run on the sgt");

  if (has("gamma")) cfg.gamma = parse_number<double>("gamma", single(raw, "gamma"));
  if (!(cfg.gamma > 0.0)) throw ConfigError("gamma", "must be positive");
  if (has("delta-e")) cfg.delta_e = parse_number<double>("delta-e", single(raw, "delta-e"));
  if (!(cfg.delta_e > 0.0)) throw ConfigError("delta-e", "must be positive");
  if (has("window")) cfg.window = parse_number<std::int64_t>("window", single(raw, "window"));
  if (cfg.window < 1) throw ConfigError("window", "must be >= 1");
  if (has("t-max")) cfg.t_max = parse_number<double>("t-max", single(raw, "t-max"));
  if (cfg.t_max < 0.0) throw ConfigError("t-max", "must be >= 0 (0 selects 3 t_hit)");
  if (has("t-points")) cfg.t_points = parse_number<std::size_t>("t-points", single(raw, "t-points"));
  if (cfg.t_points < 2) throw ConfigError("t-points", "need at least two time points");
  if (has("start-column")) cfg.start_column = parse_number<int>("start-column", single(raw, "start-column"));
  for (int d : cfg.depths)
    if (cfg.start_column < 0 || cfg.start_column > 2 * d)
      throw ConfigError("start-column", "column index outside 0..2d");

  if (has("momenta")) {
    cfg.momenta = parse_list<double>("momenta", raw.at("momenta"));
  } else if (cfg.kind == ExperimentKind::Scattering) {
    for (int i = 1; i < 50; ++i) cfg.momenta.push_back(std::numbers::pi * i / 50.0);
  }
  for (double k : cfg.momenta)
    if (!(k > 0.0 && k < std::numbers::pi)) throw ConfigError("momenta", "momenta must lie in (0, pi)");

  if (has("out")) cfg.out = single(raw, "out");
  if (has("workers")) cfg.workers = parse_number<unsigned>("workers", single(raw, "workers"));

  // dense eigensolves and full-space walks grow as 2^d
  const int dmax = *std::max_element(cfg.depths.begin(), cfg.depths.end());
  const bool dense = cfg.kind == ExperimentKind::Spectrum || cfg.kind == ExperimentKind::IprPhase ||
                     cfg.kind == ExperimentKind::IprCenter;
  if (dense && dmax > 11) throw ConfigError("d", "eigensolver experiments are limited to d <= 11");
  return cfg;
}

std::string to_config_text(const ExperimentConfig& cfg) {
  std::string s;
  auto line = [&](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
  line("kind", to_string(cfg.kind));
  line("d", join(cfg.depths));
  line("widths", join(cfg.widths));
  line("realizations", join(cfg.realizations));
  line("seed", std::to_string(cfg.seed));
  line("variant", to_string(cfg.variant));
  line("gamma", format_double(cfg.gamma));
  line("delta-e", format_double(cfg.delta_e));
  line("window", std::to_string(cfg.window));
  line("t-max", format_double(cfg.t_max));
  line("t-points", std::to_string(cfg.t_points));
  if (!cfg.momenta.empty()) line("momenta", join(cfg.momenta));
  line("start-column", std::to_string(cfg.start_column));
  if (!cfg.out.empty()) line("out", cfg.out);
  return s;
}

std::string version_string() { return TREEWALK_VERSION; }

fs::path output_directory(const ExperimentConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv("TREEWALK_OUT"); env && *env) return fs::path(env) / to_string(cfg.kind);
  return fs::path("results") / to_string(cfg.kind);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir = output_directory(cfg);
  if (fs::exists(dir) && !(fs::is_directory(dir) && (fs::is_empty(dir) || fs::exists(dir / "manifest.json"))))
    throw ConfigError("out", dir.string() + " exists and is not a previous result directory");
  fs::path staging = dir;
  staging += ".partial";
  fs::remove_all(staging);
  fs::create_directories(staging);
  Bundle out(staging);
  try {
    out.text("config.txt", to_config_text(cfg));
    switch (cfg.kind) {
      case ExperimentKind::Spectrum: run_spectrum(cfg, out); break;
      case ExperimentKind::IprPhase: run_ipr_phase(cfg, out); break;
      case ExperimentKind::IprCenter: run_ipr_center(cfg, out); break;
      case ExperimentKind::Dynamics: run_dynamics(cfg, out); break;
      case ExperimentKind::LocalDecay: run_local_decay(cfg, out); break;
      case ExperimentKind::MaxDepth: run_max_depth(cfg, out); break;
      case ExperimentKind::Scattering: run_scattering(cfg, out); break;
      case ExperimentKind::Classical: run_classical(cfg, out); break;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json manifest = {{"version", version_string()},
                               {"experiment", to_string(cfg.kind)},
                               {"seed", cfg.seed},
                               {"workers", cfg.workers ? cfg.workers : default_workers()},
                               {"wall_time_seconds", wall},
                               {"files", out.files()}};
    out.text("manifest.json", manifest.dump(2) + "\n");
    fs::remove_all(dir);
    if (dir.has_parent_path()) fs::create_directories(dir.parent_path());
    fs::rename(staging, dir);
    return {dir, out.files(), wall};
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
}

}  // namespace treewalk
