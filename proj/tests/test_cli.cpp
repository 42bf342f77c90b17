#include "sodw/cli/commands.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace sodw;
using namespace sodw::cli;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sodw_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  [[nodiscard]] std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  Csv csv;
  std::string line;
  std::getline(in, line);
  csv.header = split(line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    for (const auto& cell : split(line)) row.push_back(std::strtod(cell.c_str(), nullptr));
    csv.rows.push_back(std::move(row));
  }
  return csv;
}

std::string meta_value(const fs::path& p, const std::string& key) {
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

}  // namespace

TEST_CASE("expression evaluation") {
  CHECK(evaluate("pi/2") == doctest::Approx(1.5707963267948966).epsilon(1e-15));
  CHECK(evaluate("sqrt(0.21)") == doctest::Approx(std::sqrt(0.21)));
  CHECK(evaluate("-1 + 2*3") == 7.0 - 2.0);
  CHECK(evaluate("(1+2)/4") == 0.75);
  CHECK(evaluate("--2") == 2.0);
  CHECK(evaluate(" 1e-3 ") == 1e-3);
  CHECK(std::isinf(evaluate("inf")));
  CHECK_THROWS_AS(evaluate("1+"), std::invalid_argument);
  CHECK_THROWS_AS(evaluate("sqrt(-1)"), std::invalid_argument);
  CHECK_THROWS_AS(evaluate("pie"), std::invalid_argument);
  CHECK_THROWS_AS(evaluate("(1"), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(""), std::invalid_argument);
}

TEST_CASE("amplitudes parse as re,im pairs") {
  const cplx a = parse_amplitude("sqrt(1/10), -0.5");
  CHECK(a.real() == doctest::Approx(std::sqrt(0.1)));
  CHECK(a.imag() == -0.5);
  CHECK(parse_amplitude("0.5") == cplx(0.5, 0.0));
}

TEST_CASE("config text: comments, unknown keys, malformed lines") {
  const KeyValues kv = parse_config_text("# comment\n\n beta = 0.5 \nV=pi/2\n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0] == std::pair<std::string, std::string>{"beta", "0.5"});
  CHECK(kv[1].second == "pi/2");
  CHECK_THROWS_WITH_AS(parse_config_text("bogus = 1\n", "f.cfg"), doctest::Contains("f.cfg:1"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("beta 0.5\n"), std::invalid_argument);
}

TEST_CASE("run config defaults, inference and overrides") {
  const RunConfig def = build_run_config({}, "run");
  CHECK(def.name == "run");
  CHECK(std::holds_alternative<SyncSech2>(def.protocol));
  CHECK(def.initial[2] == cplx(1.0));
  CHECK(def.samples == 2001);

  const RunConfig async = build_run_config({{"chi", "2"}, {"upsilon", "1"}}, "run");
  REQUIRE(std::holds_alternative<AsyncTanhSech>(async.protocol));
  CHECK(std::get<AsyncTanhSech>(async.protocol).chi == 2.0);

  // Later entries (command-line flags) win over earlier ones (the file).
  const RunConfig over = build_run_config({{"beta", "0.1"}, {"beta", "0.5"}, {"t0", "-inf"}}, "run");
  CHECK(std::get<SyncSech2>(over.protocol).beta == 0.5);
  CHECK(std::isinf(over.t0));
  CHECK(over.t0 < 0);

  CHECK_THROWS_AS(build_run_config({{"protocol", "other"}}, "run"), std::invalid_argument);
  CHECK_THROWS_AS(build_run_config({{"Omega", "0"}}, "run"), std::invalid_argument);
  CHECK_THROWS_AS(build_run_config({{"samples", "0"}}, "run"), std::invalid_argument);
  CHECK_THROWS_AS(build_run_config({{"t0", "inf"}}, "run"), std::invalid_argument);
}

TEST_CASE("initial amplitudes must be normalized within 1e-6") {
  CHECK_NOTHROW(build_run_config({{"a1", "sqrt(0.5)"}, {"a2", "0,sqrt(0.5)"}}, "run"));
  CHECK_NOTHROW(build_run_config({{"a1", "1.0000004"}}, "run"));
  CHECK_THROWS_WITH_AS(build_run_config({{"a1", "0.5"}, {"a3", "0.5"}}, "run"),
                       doctest::Contains("normalized"), std::invalid_argument);
}

TEST_CASE("observable lists") {
  const auto obs = parse_observables("31, LR, P4-P1");
  REQUIRE(obs.size() == 3);
  CHECK(obs[0] == std::pair{Level::P3, Level::P1});
  CHECK(obs[1] == std::pair{Level::L, Level::R});
  CHECK(obs[2] == std::pair{Level::P4, Level::P1});
  CHECK(observable_tag(Level::P4, Level::P1) == "41");
  CHECK(observable_tag(Level::L, Level::R) == "LR");
  CHECK_THROWS_AS(parse_observables("33"), std::invalid_argument);
  CHECK_THROWS_AS(parse_observables("31,"), std::invalid_argument);
  CHECK_THROWS_AS(parse_observables("315"), std::invalid_argument);
}

TEST_CASE("numbers are written with 17 significant digits") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("classify reports") {
  ClassifyInput sync;
  sync.beta = 0.0;
  sync.V = std::numbers::pi / 2;
  sync.Omega = 1.0;
  CHECK(classify_report(sync).find("CCPC n=1") != std::string::npos);

  ClassifyInput ccpi;
  ccpi.V = std::numbers::pi / 4;
  CHECK(classify_report(ccpi).find("CCPI n=0") != std::string::npos);

  ClassifyInput async;
  async.upsilon = 1.0;
  async.chi = 2.0;
  CHECK(classify_report(async).find("CCPI (async, spin-conserving)") != std::string::npos);

  ClassifyInput flip;
  flip.epsilon = std::sqrt(0.21);
  flip.upsilon = 0.5;
  flip.chi = 0.4;
  CHECK(classify_report(flip).find("flip-constraint satisfied, residual 0\n") != std::string::npos);
  flip.epsilon = 1.0;
  CHECK(classify_report(flip).find("flip-constraint violated, residual 0.79") != std::string::npos);

  ClassifyInput g;
  g.gamma = 0.5;
  CHECK(classify_report(g).find("spin-flipping only") != std::string::npos);
  CHECK(classify_report({}).find("nothing to classify") != std::string::npos);
}

TEST_CASE("output directory resolution") {
  const fs::path base = scratch_dir("outdir");
  const fs::path nested = base / "a" / "b";
  CHECK(resolve_output_dir(nested.string()) == nested);
  CHECK(fs::is_directory(nested));

  ::setenv("SODW_OUT", (base / "env").c_str(), 1);
  CHECK(resolve_output_dir(std::nullopt) == base / "env");
  ::unsetenv("SODW_OUT");
  CHECK(resolve_output_dir(std::nullopt) == fs::path("."));

  // A regular file where a directory is expected cannot be used.
  std::ofstream(base / "file") << "x";
  CHECK_THROWS_AS(resolve_output_dir((base / "file" / "sub").string()), std::runtime_error);
}

TEST_CASE("figure 1d writes a deterministic file set") {
  const fs::path d1 = scratch_dir("fig1d_a");
  const fs::path d2 = scratch_dir("fig1d_b");
  const auto files = run_figure("1d", d1);
  run_figure("1d", d2);
  REQUIRE(files.size() == 3);
  for (const char* name : {"1d_data.csv", "1d_plot.json", "1d_meta.txt"}) {
    REQUIRE(fs::exists(d1 / name));
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }

  const Csv csv = read_csv(d1 / "1d_data.csv");
  CHECK(csv.header.size() == 17);
  CHECK(csv.header[0] == "t");
  CHECK(csv.header[9] == "P1_num");
  CHECK(csv.rows.size() == 2001);
  const auto& last = csv.rows.back();
  CHECK(last[csv.column("Z32")] == doctest::Approx(-0.5456).epsilon(2e-3 / 0.5456));
  CHECK(last[csv.column("Z31")] == doctest::Approx(0.2272).epsilon(2e-3 / 0.2272));
  CHECK(std::abs(last[csv.column("Z32")] - last[csv.column("Z32_num")]) < 1e-6);

  const std::string plot = slurp(d1 / "1d_plot.json");
  CHECK(plot.find("\"x_label\": \"t\"") != std::string::npos);
  CHECK(plot.find("\"1d_data.csv\"") != std::string::npos);
  CHECK(meta_value(d1 / "1d_meta.txt", "engine") == "sync-exact");
  CHECK(std::strtod(meta_value(d1 / "1d_meta.txt", "max_deviation").c_str(), nullptr) < 1e-6);
}

TEST_CASE("figure 2b writes one CSV per caption initial condition") {
  const fs::path dir = scratch_dir("fig2b");
  FigureOptions opt;
  opt.samples = 401;
  run_figure("2b", dir, opt);
  for (int k = 1; k <= 5; ++k) {
    const fs::path p = dir / ("2b_ic" + std::to_string(k) + "_data.csv");
    REQUIRE(fs::exists(p));
    const Csv csv = read_csv(p);
    const std::size_t zlr = csv.column("ZLR");
    CHECK(std::abs(csv.rows.back()[zlr] + csv.rows.front()[zlr]) < 1e-6);
  }
}

TEST_CASE("scan and surface figures") {
  const fs::path dir = scratch_dir("scans");
  FigureOptions opt;
  opt.scan_points = 11;
  run_figure("1a", dir, opt);
  const Csv scan = read_csv(dir / "1a_data.csv");
  CHECK(scan.header == std::vector<std::string>{"param", "Z31_inf", "Z32_inf", "engine"});
  CHECK(scan.rows.size() == 11);

  run_figure("3c", dir, opt);
  const Csv surf = read_csv(dir / "3c_data.csv");
  CHECK(surf.header == std::vector<std::string>{"chi", "epsilon", "upsilon"});
  for (const auto& r : surf.rows) CHECK(check_flip_constraint(r[1], r[2], r[0]) == doctest::Approx(0.0));

  CHECK_THROWS_AS(run_figure("9z", dir), std::invalid_argument);
}

TEST_CASE("evolve with both engines records max_deviation") {
  const fs::path dir = scratch_dir("evolve_both");
  const RunConfig cfg = build_run_config(
      {{"name", "sync"}, {"beta", "0.5"}, {"gamma", "0.5"}, {"samples", "301"}, {"engine", "both"}},
      "x");
  run_evolve(cfg, dir);
  const std::string dev = meta_value(dir / "sync_meta.txt", "max_deviation");
  REQUIRE(!dev.empty());
  CHECK(std::strtod(dev.c_str(), nullptr) < 1e-6);
  CHECK(meta_value(dir / "sync_meta.txt", "engine") == "sync-exact");
  CHECK(read_csv(dir / "sync_data.csv").header.back() == "norm2_num");
}

TEST_CASE("exact engine off the flip constraint surface is refused") {
  const fs::path dir = scratch_dir("refuse");
  const RunConfig cfg = build_run_config(
      {{"gamma", "0.5"}, {"epsilon", "1"}, {"upsilon", "1"}, {"chi", "1"}, {"engine", "exact"}},
      "off");
  CHECK_THROWS_WITH_AS(run_evolve(cfg, dir), doctest::Contains("residual 0.25"),
                       std::invalid_argument);
  CHECK_FALSE(fs::exists(dir / "off_data.csv"));
}

TEST_CASE("evolve without tunneling keeps populations constant") {
  const fs::path dir = scratch_dir("frozen");
  const RunConfig cfg = build_run_config({{"name", "frozen"},
                                          {"gamma", "0.3"},
                                          {"epsilon", "1"},
                                          {"upsilon", "0"},
                                          {"chi", "1"},
                                          {"a1", "sqrt(0.2)"},
                                          {"a3", "0,sqrt(0.8)"},
                                          {"samples", "201"}},
                                         "x");
  run_evolve(cfg, dir);
  CHECK(meta_value(dir / "frozen_meta.txt", "engine") == "oracle");
  const Csv csv = read_csv(dir / "frozen_data.csv");
  for (const auto& row : csv.rows) {
    CHECK(row[csv.column("P1")] == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(row[csv.column("P3")] == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(row[csv.column("P2")] == doctest::Approx(0.0));
  }
}

TEST_CASE("scan command honours observables") {
  const fs::path dir = scratch_dir("scan_cmd");
  const RunConfig cfg = build_run_config({{"name", "betas"},
                                          {"gamma", "0.5"},
                                          {"scan_parameter", "beta"},
                                          {"scan_min", "0"},
                                          {"scan_max", "2"},
                                          {"scan_points", "5"},
                                          {"observables", "31,LR"}},
                                         "x");
  std::size_t failed = 99;
  run_scan_command(cfg, dir, &failed);
  CHECK(failed == 0);
  const Csv csv = read_csv(dir / "betas_data.csv");
  CHECK(csv.header == std::vector<std::string>{"param", "Z31_inf", "ZLR_inf", "engine"});
  CHECK(csv.rows.size() == 5);
}
