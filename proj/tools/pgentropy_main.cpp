// Command-line front end: entropy / pseudo-entropy / verify / bundles.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "pgentropy/pipeline.hpp"

namespace {

void write_outputs(const pge::RunOutput& out, const std::string& json_path,
                   const std::string& csv_path) {
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw std::runtime_error("cannot write " + json_path);
    f << out.summary.dump(2) << "\n";
  } else {
    std::cout << out.summary.dump(2) << "\n";
  }
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    if (!f) throw std::runtime_error("cannot write " + csv_path);
    f << out.csv;
  }
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"separated-orbit and pseudo-orbit entropy estimation for "
               "finitely generated pseudogroups of the circle and interval"};
  app.require_subcommand(1);

  std::string system, eps_list = "0.0078125", out_json, out_csv, cache_dir;
  int n_min = 0, n_max = 10, grid = 65536, threads = 1;
  uint64_t seed = 1;

  auto add_common = [&](CLI::App* cmd, bool with_system) {
    if (with_system)
      cmd->add_option("system", system,
                      "gallery:<name> or a JSON config path")
          ->required();
    cmd->add_option("--n-min", n_min, "smallest word length");
    cmd->add_option("--n-max", n_max, "largest word length");
    cmd->add_option("--eps", eps_list, "comma-separated eps grid");
    cmd->add_option("--grid", grid, "candidate grid size");
    cmd->add_option("--seed", seed, "64-bit seed");
    cmd->add_option("--threads", threads, "worker count (outputs identical)");
    cmd->add_option("--out", out_json, "JSON summary path (default stdout)");
    cmd->add_option("--csv", out_csv, "CSV table path");
    cmd->add_option("--cache-dir", cache_dir,
                    "content-addressed result cache directory");
  };

  auto* entropy = app.add_subcommand("entropy", "separated-orbit entropy table");
  add_common(entropy, true);

  std::string schedule = "theorem1";
  auto* pseudo = app.add_subcommand("pseudo-entropy",
                                    "separated pseudo-orbit entropy table");
  add_common(pseudo, true);
  pseudo->add_option("--schedule", schedule,
                     "theorem1 | remark | const:<alpha> | list:<csv>");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "invariant suites");
  verify->add_option("--suite", suite, "metrics | orbits | section6 | all");
  verify->add_option("--seed", seed, "64-bit seed");
  verify->add_option("--threads", threads, "worker count");
  verify->add_option("--out", out_json, "JSON report path (default stdout)");
  verify->add_option("--csv", out_csv, "CSV report path");

  std::string lengths_list, m_list = "10", fiber;
  double entropy_value = -1.0;
  auto* bundles = app.add_subcommand("bundles", "foliated-bundle entropy sandwich");
  bundles->add_option("--lengths", lengths_list,
                      "comma-separated homotopy class lengths")
      ->required();
  bundles->add_option("--entropy", entropy_value, "holonomy entropy h(H,H1)");
  bundles->add_option("--fiber", fiber, "attached fiber action (system spec)");
  bundles->add_option("--m", m_list, "comma-separated rescaling exponents");
  bundles->add_option("--n-max", n_max, "fiber estimation depth");
  bundles->add_option("--eps", eps_list, "fiber estimation eps");
  bundles->add_option("--grid", grid, "fiber estimation grid");
  bundles->add_option("--out", out_json, "JSON report path (default stdout)");
  bundles->add_option("--csv", out_csv, "CSV report path");
  bundles->add_option("--cache-dir", cache_dir, "result cache directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (entropy->parsed()) {
      pge::EntropyOptions opt;
      opt.system = system;
      opt.n_min = n_min;
      opt.n_max = n_max;
      opt.eps_grid = parse_double_list(eps_list);
      opt.grid = grid;
      opt.seed = seed;
      opt.threads = threads;
      opt.cache_dir = cache_dir;
      write_outputs(pge::run_entropy(opt), out_json, out_csv);
    } else if (pseudo->parsed()) {
      pge::PseudoEntropyOptions opt;
      opt.system = system;
      opt.n_min = n_min;
      opt.n_max = n_max;
      opt.eps_grid = parse_double_list(eps_list);
      opt.grid = grid;
      opt.seed = seed;
      opt.threads = threads;
      opt.cache_dir = cache_dir;
      opt.schedule = schedule;
      write_outputs(pge::run_pseudo_entropy(opt), out_json, out_csv);
    } else if (verify->parsed()) {
      pge::VerifyOptions opt;
      opt.suite = suite;
      opt.seed = seed;
      opt.threads = threads;
      auto out = pge::run_verify(opt);
      write_outputs(out, out_json, out_csv);
      if (!out.summary["ok"].get<bool>()) {
        std::cerr << "verify: some checks failed\n";
        return 2;
      }
    } else if (bundles->parsed()) {
      pge::BundlesOptions opt;
      opt.lengths = parse_double_list(lengths_list);
      if (entropy_value >= 0) opt.entropy = entropy_value;
      opt.fiber_system = fiber;
      opt.m_list = parse_int_list(m_list);
      opt.n_max = n_max;
      opt.eps = parse_double_list(eps_list).front();
      opt.grid = grid;
      opt.cache_dir = cache_dir;
      write_outputs(pge::run_bundles(opt), out_json, out_csv);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
