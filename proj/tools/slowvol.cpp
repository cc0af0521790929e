// Command line front end: runs experiment configs and single experiments.
#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <cmath>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "slowvol/errors.hpp"
#include "slowvol/experiment.hpp"
#include "slowvol/gamma_catalog.hpp"

namespace {

using slowvol::SummaryRow;
using slowvol::Verdict;

// "key=value" overrides from --set.
std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw slowvol::ConfigError("--set expects key=value, got '" + item + "'");
    }
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

int finish(const std::vector<SummaryRow>& rows) {
  slowvol::write_summary(std::cout, rows);
  for (const auto& r : rows) {
    if (r.verdict != Verdict::pass) return 1;
  }
  return 0;
}

std::vector<SummaryRow> run_single(slowvol::ExperimentConfig e, const std::string& out) {
  slowvol::RunConfig run;
  run.out_dir = out;
  run.experiments.push_back(std::move(e));
  return slowvol::run(run);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slow volume growth experiments"};
  app.require_subcommand(1);

  std::string out_dir;
  std::vector<std::string> sets;

  auto* run_cmd = app.add_subcommand("run", "run every experiment of a config file");
  std::string config_path;
  run_cmd->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "output directory (overrides [run] out)");
  run_cmd->add_option("--set", sets, "override key=value in every experiment");

  auto* gamma_cmd = app.add_subcommand("gamma", "evaluate gamma of a manifold descriptor");
  std::string descriptor;
  gamma_cmd->add_option("descriptor", descriptor, "e.g. \"T(2) x S(2)\"")->required();

  auto* growth_cmd = app.add_subcommand("growth", "ball growth of a matrix generator set");
  std::string generators;
  std::size_t m_max = 20;
  growth_cmd->add_option("generators", generators, "generator file or catalog:NAME [ARG]")->required();
  growth_cmd->add_option("--mmax", m_max, "maximal word length")->check(CLI::PositiveNumber);
  growth_cmd->add_option("--out", out_dir, "output directory");
  growth_cmd->add_option("--set", sets, "extra key=value");

  auto* flow_cmd = app.add_subcommand("flow", "volume growth of the fiber sphere under a model flow");
  std::string model;
  std::vector<double> times;
  flow_cmd->add_option("model", model, "flat_torus, round_sphere, nil, sol, randers, starshaped")
      ->required();
  flow_cmd->add_option("--times", times, "sample times (default 1 2 4 ... 1024)");
  flow_cmd->add_option("--out", out_dir, "output directory");
  flow_cmd->add_option("--set", sets, "extra key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto overrides = parse_overrides(sets);
    if (*run_cmd) {
      slowvol::RunConfig run = slowvol::load_run_config(config_path);
      if (!out_dir.empty()) run.out_dir = out_dir;
      for (auto& e : run.experiments) {
        for (const auto& [k, v] : overrides) e.params[k] = v;
      }
      return finish(slowvol::run(run));
    }
    if (*gamma_cmd) {
      const auto d = slowvol::parse_descriptor(descriptor);
      const auto g = slowvol::gamma(*d);
      std::cout << "descriptor     " << d->to_string() << '\n'
                << "dimension      " << g.dimension << '\n'
                << "gamma(pi_1)    " << g.gamma_pi1 << '\n'
                << "gamma(loops)   " << g.gamma_loop << '\n'
                << "gamma          " << g.gamma_total << '\n'
                << "theorem bound  " << g.theorem_bound << '\n'
                << "slow           " << (g.slow ? "yes" : "no") << '\n'
                << "dim bound ok   " << (slowvol::cross_check_dimension_bound(*d) ? "yes" : "no")
                << '\n';
      return 0;
    }
    if (*growth_cmd) {
      slowvol::ExperimentConfig e;
      e.id = "growth";
      e.kind = "group_growth";
      e.base_dir = ".";
      e.params = overrides;
      e.params["generators"] = generators;
      e.params["m_max"] = std::to_string(m_max);
      return finish(run_single(std::move(e), out_dir.empty() ? "results" : out_dir));
    }
    if (*flow_cmd) {
      slowvol::ExperimentConfig e;
      e.id = "flow_" + model;
      e.kind = "flow_growth";
      e.base_dir = ".";
      e.params = overrides;
      e.params["model"] = model;
      if (!times.empty()) {
        std::string text;
        for (double t : times) text += (text.empty() ? "" : " ") + std::to_string(t);
        e.params["times"] = text;
      }
      return finish(run_single(std::move(e), out_dir.empty() ? "results" : out_dir));
    }
  } catch (const slowvol::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
