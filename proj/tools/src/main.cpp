#include "sodw/acceptance.hpp"
#include "sodw/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>

namespace {

using namespace sodw::cli;

// --key flags for every config key, applied after the config file.
struct Overrides {
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    for (const auto& key : known_keys()) {
      if (key == "out") continue;
      cmd->add_option("--" + key, values[key], "override '" + key + "'");
    }
  }

  KeyValues merged_with(KeyValues kv) const {
    for (const auto& key : known_keys()) {
      const auto it = values.find(key);
      if (it != values.end() && !it->second.empty()) kv.emplace_back(key, it->second);
    }
    return kv;
  }
};

std::optional<std::string> out_dir(const std::string& flag, const KeyValues& kv) {
  if (!flag.empty()) return flag;
  for (auto it = kv.rbegin(); it != kv.rend(); ++it) {
    if (it->first == "out") return it->second;
  }
  return std::nullopt;
}

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numerical dynamics of a spin-orbit-coupled double well"};
  app.require_subcommand(1);

  auto* figure = app.add_subcommand("figure", "Reproduce a figure as CSV plus plot description");
  std::string fig_id;
  std::string fig_out;
  sodw::FigureOptions fig_opt;
  std::string fig_T;
  figure->add_option("--id", fig_id, "figure id or 'all'")->required();
  figure->add_option("--out", fig_out, "output directory (default $SODW_OUT or .)");
  figure->add_option("--samples", fig_opt.samples, "time samples per trajectory")
      ->check(CLI::PositiveNumber);
  figure->add_option("--scan-points", fig_opt.scan_points, "grid points per scan")
      ->check(CLI::PositiveNumber);
  figure->add_option("--T", fig_T, "horizon standing in for +/-inf");
  figure->add_option("--rel-tol", fig_opt.integrator.rel_tol, "oracle relative tolerance");
  figure->add_option("--abs-tol", fig_opt.integrator.abs_tol, "oracle absolute tolerance");

  auto* evolve = app.add_subcommand("evolve", "Evolve one initial state");
  std::string evo_config;
  std::string evo_out;
  Overrides evo_over;
  evolve->add_option("--config", evo_config, "key=value config file");
  evolve->add_option("--out", evo_out, "output directory");
  evo_over.attach(evolve);

  auto* scan = app.add_subcommand("scan", "Scan asymptotic imbalances over one parameter");
  std::string scan_config;
  std::string scan_out;
  Overrides scan_over;
  scan->add_option("--config", scan_config, "key=value config file");
  scan->add_option("--out", scan_out, "output directory");
  scan_over.attach(scan);

  auto* classify = app.add_subcommand("classify", "Report which transfer conditions hold");
  std::map<std::string, std::string> cls;
  for (const char* key : {"beta", "V", "Omega", "epsilon", "upsilon", "chi", "gamma", "tol"}) {
    classify->add_option(std::string("--") + key, cls[key]);
  }

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*figure) {
      if (!fig_T.empty()) fig_opt.horizon = evaluate(fig_T);
      const auto& ids = sodw::figure_ids();
      if (fig_id != "all" && std::find(ids.begin(), ids.end(), fig_id) == ids.end()) {
        std::string known;
        for (const auto& id : ids) known += " " + id;
        throw std::invalid_argument("unknown figure id '" + fig_id + "' (known:" + known + ", all)");
      }
      report(run_figure(fig_id, resolve_output_dir(fig_out.empty() ? std::nullopt
                                                                    : std::optional(fig_out)),
                        fig_opt));
    } else if (*evolve || *scan) {
      const bool is_evolve = evolve->parsed();
      const std::string& path = is_evolve ? evo_config : scan_config;
      KeyValues kv = path.empty() ? KeyValues{} : read_config_file(path);
      kv = (is_evolve ? evo_over : scan_over).merged_with(std::move(kv));
      const std::string stem = path.empty() ? (is_evolve ? "evolve" : "scan")
                                            : std::filesystem::path(path).stem().string();
      const RunConfig cfg = build_run_config(kv, stem);
      const auto dir = resolve_output_dir(out_dir(is_evolve ? evo_out : scan_out, kv));
      if (is_evolve) {
        report(run_evolve(cfg, dir));
      } else {
        std::size_t failed = 0;
        report(run_scan_command(cfg, dir, &failed));
        if (failed > 0) {
          std::cerr << "sodw: " << failed << " scan point(s) failed; see the meta file\n";
          return 1;
        }
      }
    } else if (*classify) {
      ClassifyInput in;
      const auto take = [&](const char* key) -> std::optional<double> {
        const std::string& v = cls[key];
        if (v.empty()) return std::nullopt;
        return evaluate(v);
      };
      in.beta = take("beta");
      in.V = take("V");
      in.Omega = take("Omega");
      in.epsilon = take("epsilon");
      in.upsilon = take("upsilon");
      in.chi = take("chi");
      in.gamma = take("gamma");
      if (auto tol = take("tol")) in.tol = *tol;
      std::cout << classify_report(in);
    } else if (*verify) {
      int failed = 0;
      for (const auto& r : sodw::run_acceptance()) {
        std::cout << sodw::format_result(r) << '\n';
        if (!r.passed) ++failed;
      }
      std::cout << failed << " of " << sodw::acceptance_criteria().size() << " criteria failed\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "sodw: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
