#include "sodw/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sodw::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  double parse() {
    const double v = sum();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  double sum() {
    double v = product();
    for (;;) {
      if (accept('+')) v += product();
      else if (accept('-')) v -= product();
      else return v;
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      if (accept('*')) v *= unary();
      else if (accept('/')) v /= unary();
      else return v;
    }
  }

  double unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double v = sum();
      expect(')');
      return v;
    }
    if (word("sqrt")) {
      expect('(');
      const double v = sum();
      expect(')');
      if (v < 0.0) error("sqrt of a negative number");
      return std::sqrt(v);
    }
    if (word("pi")) return std::numbers::pi;
    if (word("inf")) return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) error("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }

  bool word(std::string_view w) {
    skip_space();
    if (text_.substr(pos_, w.size()) != w) return false;
    const std::size_t end = pos_ + w.size();
    if (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) return false;
    pos_ = end;
    return true;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void error(const std::string& what) const {
    throw std::invalid_argument("bad expression '" + std::string(text_) + "': " + what +
                                " at position " + std::to_string(pos_));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::size_t parse_count(const std::string& key, const std::string& value) {
  const double v = evaluate(value);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e8) {
    throw std::invalid_argument(key + " must be a positive integer, got '" + value + "'");
  }
  return static_cast<std::size_t>(v);
}

Level parse_level_token(std::string_view s) {
  s = trim(s);
  if (s.size() == 2 && (s[0] == 'P' || s[0] == 'p')) s.remove_prefix(1);
  return parse_level(s);
}

}  // namespace

double evaluate(std::string_view text) { return ExpressionParser(trim(text)).parse(); }

cplx parse_amplitude(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return {evaluate(text), 0.0};
  return {evaluate(text.substr(0, comma)), evaluate(text.substr(comma + 1))};
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "name",      "protocol",       "gamma",       "beta",          "V",
      "Omega",     "epsilon",        "upsilon",     "chi",           "a1",
      "a2",        "a3",             "a4",          "t0",            "T",
      "t_min",     "samples",        "engine",      "rel_tol",       "abs_tol",
      "max_step",  "method",         "condition_tol", "scan_parameter", "scan_min",
      "scan_max",  "scan_points",    "observables", "out"};
  return keys;
}

KeyValues parse_config_text(std::string_view text, std::string_view origin) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    const std::string where = std::string(origin) + ":" + std::to_string(number);
    if (eq == std::string_view::npos) throw std::invalid_argument(where + ": expected key = value");
    std::string key(trim(body.substr(0, eq)));
    std::string value(trim(body.substr(eq + 1)));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
    }
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

std::string observable_tag(Level s, Level q) {
  const auto tag = [](Level l) {
    std::string n(level_name(l));
    return n.size() == 2 && n[0] == 'P' ? n.substr(1) : n;
  };
  return tag(s) + tag(q);
}

std::vector<std::pair<Level, Level>> parse_observables(std::string_view text) {
  std::vector<std::pair<Level, Level>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string_view item =
        trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                 : comma - start));
    if (item.empty()) throw std::invalid_argument("empty observable in '" + std::string(text) + "'");
    const auto dash = item.find('-');
    if (dash != std::string_view::npos) {
      out.emplace_back(parse_level_token(item.substr(0, dash)),
                       parse_level_token(item.substr(dash + 1)));
    } else if (item.size() == 2) {
      out.emplace_back(parse_level_token(item.substr(0, 1)), parse_level_token(item.substr(1, 1)));
    } else {
      throw std::invalid_argument("bad observable '" + std::string(item) +
                                  "' (use e.g. 31, LR or P4-P1)");
    }
    if (out.back().first == out.back().second) {
      throw std::invalid_argument("observable '" + std::string(item) + "' compares a level with itself");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

RunConfig build_run_config(const KeyValues& kv, std::string_view default_name) {
  // Last assignment of each key wins.
  std::vector<std::pair<std::string, std::string>> merged;
  for (const auto& [k, v] : kv) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const auto& e) { return e.first == k; });
    if (it == merged.end()) merged.emplace_back(k, v);
    else it->second = v;
  }
  const auto get = [&](const std::string& k) -> const std::string* {
    for (const auto& e : merged) {
      if (e.first == k) return &e.second;
    }
    return nullptr;
  };
  const auto number = [&](const std::string& k, double fallback) {
    const std::string* v = get(k);
    return v ? evaluate(*v) : fallback;
  };

  RunConfig cfg;
  cfg.name = get("name") ? *get("name") : std::string(default_name);
  cfg.gamma = number("gamma", 0.0);

  std::string protocol;
  if (const auto* p = get("protocol")) {
    protocol = *p;
  } else {
    protocol = (get("epsilon") || get("upsilon") || get("chi")) ? "async" : "sync";
  }
  if (protocol == "sync") {
    cfg.protocol = SyncSech2{number("beta", 0.0), number("V", std::numbers::pi / 2),
                             number("Omega", 1.0)};
  } else if (protocol == "async") {
    cfg.protocol = AsyncTanhSech{number("epsilon", 0.0), number("upsilon", 1.0), number("chi", 1.0)};
  } else {
    throw std::invalid_argument("protocol must be 'sync' or 'async', got '" + protocol + "'");
  }
  validate(cfg.protocol);

  if (get("a1") || get("a2") || get("a3") || get("a4")) {
    std::array<cplx, 4> a{};
    for (std::size_t m = 0; m < 4; ++m) {
      const std::string* v = get("a" + std::to_string(m + 1));
      a[m] = v ? parse_amplitude(*v) : cplx(0.0);
    }
    cfg.initial = AmplitudeVector(a[0], a[1], a[2], a[3]);
  }
  if (!cfg.initial.is_finite() || std::abs(cfg.initial.norm2() - 1.0) > 1e-6) {
    throw std::invalid_argument("initial amplitudes must be normalized within 1e-6 (norm^2 = " +
                                std::to_string(cfg.initial.norm2()) + ")");
  }

  if (const auto* v = get("t0")) {
    const std::string_view t = trim(*v);
    cfg.t0 = (t == "-inf" || t == "-infinity") ? -std::numeric_limits<double>::infinity()
                                                 : evaluate(t);
    if (std::isnan(cfg.t0) || cfg.t0 == std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("t0 must be finite or -inf");
    }
  }
  cfg.horizon = number("T", 0.0);
  if (cfg.horizon < 0.0 || !std::isfinite(cfg.horizon)) {
    throw std::invalid_argument("T must be a finite positive horizon");
  }
  if (get("t_min")) cfg.t_min = number("t_min", 0.0);
  if (const auto* v = get("samples")) cfg.samples = parse_count("samples", *v);
  if (const auto* v = get("engine")) cfg.engine = parse_engine_choice(trim(*v));

  cfg.integrator.rel_tol = number("rel_tol", cfg.integrator.rel_tol);
  cfg.integrator.abs_tol = number("abs_tol", cfg.integrator.abs_tol);
  cfg.integrator.max_step = number("max_step", cfg.integrator.max_step);
  if (const auto* v = get("method")) {
    if (*v == "dopri54") cfg.integrator.method = IntegratorMethod::DormandPrince54;
    else if (*v == "rk4") cfg.integrator.method = IntegratorMethod::ClassicalRK4;
    else throw std::invalid_argument("method must be 'dopri54' or 'rk4'");
  }
  IntegratorConfig probe = cfg.integrator;
  probe.t_start = 0.0;
  probe.t_end = 1.0;
  validate(probe);

  cfg.condition_tol = number("condition_tol", cfg.condition_tol);
  if (!(cfg.condition_tol > 0.0)) throw std::invalid_argument("condition_tol must be > 0");

  if (const auto* v = get("scan_parameter")) cfg.scan_parameter = parse_scan_parameter(trim(*v));
  cfg.scan_min = number("scan_min", cfg.scan_min);
  cfg.scan_max = number("scan_max", cfg.scan_max);
  if (const auto* v = get("scan_points")) cfg.scan_points = parse_count("scan_points", *v);
  if (const auto* v = get("observables")) cfg.observables = parse_observables(*v);
  return cfg;
}

}  // namespace sodw::cli
