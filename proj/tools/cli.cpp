#include "cli.hpp"

#include <fstream>
#include <map>

#include "CLI11.hpp"

#include "treewalk/ensemble.hpp"
#include "treewalk/experiments.hpp"
#include "treewalk/graph.hpp"
#include "treewalk/hamiltonian.hpp"
#include "treewalk/verify.hpp"

namespace treewalk {

namespace {

const std::vector<std::string> kListKeys = {"d", "widths", "realizations", "momenta"};

const std::map<std::string, std::string> kHelp = {
    {"kind", "experiment kind"},
    {"d", "tree depths"},
    {"widths", "disorder widths W"},
    {"realizations", "disorder realizations, one value or one per depth"},
    {"seed", "master seed (required for ensemble runs)"},
    {"variant", "sgt, mgt-regular or mgt-random"},
    {"gamma", "hopping strength"},
    {"delta-e", "half width of the energy window for IPR averages"},
    {"window", "number of band-center eigenstates averaged"},
    {"t-max", "last time point; 0 means three hitting times"},
    {"t-points", "number of time points"},
    {"momenta", "incident momenta k in (0, pi)"},
    {"start-column", "column the walker starts in"},
    {"out", "output directory"},
    {"workers", "worker threads; 0 uses all cores"},
};

struct ExperimentCommand {
  CLI::App* app = nullptr;
  std::string fixed_kind;  // empty for `run`
  std::string positional_kind;
  std::string config_path;
  std::map<std::string, std::vector<std::string>> values;
};

void add_experiment_options(ExperimentCommand& cmd) {
  auto* app = cmd.app;
  app->add_option("--config", cmd.config_path, "flat key = value file; command-line flags override it");
  for (const auto& key : config_keys()) {
    auto& slot = cmd.values[key];
    auto* opt = app->add_option("--" + key, slot, kHelp.at(key));
    if (std::find(kListKeys.begin(), kListKeys.end(), key) != kListKeys.end())
      opt->delimiter(',')->description(kHelp.at(key) + "; comma list, a:b:step ranges allowed");
    else
      opt->expected(1);
  }
}

RawConfig collect(const ExperimentCommand& cmd) {
  RawConfig raw;
  for (const auto& [key, vals] : cmd.values)
    if (!vals.empty()) raw[key] = vals;
  if (!cmd.config_path.empty()) {
    std::ifstream in(cmd.config_path);
    if (!in) throw ConfigError("config", "cannot read " + cmd.config_path);
    for (const auto& item : CLI::ConfigBase().from_config(in)) {
      if (item.name == "++" || item.name == "--") continue;  // section markers
      const std::string key = item.fullname();
      if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end())
        throw ConfigError(key, "unknown key in " + cmd.config_path);
      if (raw.count(key)) continue;
      std::vector<std::string> tokens;
      for (const auto& v : item.inputs) {
        const auto parts = CLI::detail::split(v, ',');
        tokens.insert(tokens.end(), parts.begin(), parts.end());
      }
      raw[key] = tokens;
    }
  }
  std::string kind = cmd.fixed_kind.empty() ? cmd.positional_kind : cmd.fixed_kind;
  if (auto it = raw.find("kind"); it != raw.end()) {
    if (it->second.size() != 1) throw ConfigError("kind", "expected a single value");
    if (!kind.empty() && kind != it->second[0])
      throw ConfigError("kind", "'" + it->second[0] + "' conflicts with the subcommand '" + kind + "'");
    kind = it->second[0];
  }
  if (kind.empty()) throw ConfigError("kind", "name an experiment: " + CLI::detail::join(experiment_kind_names()));
  raw["kind"] = {kind};
  return raw;
}

int run_experiment_command(const ExperimentCommand& cmd, std::ostream& out) {
  const ExperimentConfig cfg = resolve_config(collect(cmd));
  const RunResult res = run_experiment(cfg);
  out << "wrote " << res.files.size() << " files to " << res.directory.string() << " in " << res.wall_seconds
      << " s\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum walks on disordered glued binary trees"};
  app.name("treewalk");
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  std::vector<ExperimentCommand> commands;
  commands.reserve(experiment_kind_names().size() + 1);
  {
    ExperimentCommand run;
    run.app = app.add_subcommand("run", "run an experiment: treewalk run <kind> [--key value]...");
    commands.push_back(std::move(run));
    auto& cmd = commands.back();
    cmd.app->add_option("experiment", cmd.positional_kind, "experiment kind")
        ->check(CLI::IsMember(experiment_kind_names()));
    add_experiment_options(cmd);
  }
  for (const auto& name : experiment_kind_names()) {
    ExperimentCommand cmd;
    cmd.app = app.add_subcommand(name, "run the " + name + " experiment");
    cmd.fixed_kind = name;
    commands.push_back(std::move(cmd));
    add_experiment_options(commands.back());
  }

  bool inject_fault = false;
  auto* verify = app.add_subcommand("verify", "run the fast oracle suite");
  verify->add_flag("--inject-fault", inject_fault, "corrupt the adjacency used by the spectrum checks")
      ->group("");

  int gd = 4;
  std::string gvariant = "sgt", gformat = "edges", gout;
  std::uint64_t gseed = 0;
  double gwidth = 0.0, ggamma = 1.0;
  auto* graph = app.add_subcommand("graph", "export a graph as an edge list or Hamiltonian triplets");
  graph->add_option("--d", gd, "depth")->check(CLI::Range(1, 20));
  graph->add_option("--variant", gvariant)->check(CLI::IsMember({"sgt", "mgt", "mgt-regular", "mgt-random"}));
  graph->add_option("--seed", gseed, "gluing and disorder seed");
  graph->add_option("--width", gwidth, "disorder width W (hamiltonian format)")->check(CLI::NonNegativeNumber);
  graph->add_option("--gamma", ggamma)->check(CLI::PositiveNumber);
  graph->add_option("--format", gformat)->check(CLI::IsMember({"edges", "hamiltonian"}));
  graph->add_option("--out", gout, "output file (default stdout)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    for (auto& cmd : commands)
      if (cmd.app->parsed()) return run_experiment_command(cmd, out);
    if (verify->parsed()) {
      VerifyOptions opt;
      opt.corrupt_adjacency = inject_fault;
      return print_report(out, run_verify(opt)) ? 0 : 1;
    }
    if (graph->parsed()) {
      const Graph g = build_graph(gd, variant_from_string(gvariant), gseed);
      std::ofstream file;
      if (!gout.empty()) {
        file.open(gout);
        if (!file) throw std::runtime_error("cannot open " + gout);
      }
      std::ostream& os = gout.empty() ? out : file;
      if (gformat == "edges") {
        write_edge_list(os, g);
      } else {
        const auto eps = sample_disorder({gwidth, gseed, 0, g.size()});
        write_coordinates(os, assemble_h(g, ggamma, eps));
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "treewalk: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "treewalk: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace treewalk
