#include "sodw/acceptance.hpp"

#include "sodw/analysis.hpp"
#include "sodw/figures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace sodw {

namespace {

constexpr double pi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Accumulates named checks; the criterion passes when every check does.
class Ledger {
 public:
  explicit Ledger(std::string& detail) : detail_(detail) {}

  void within(const std::string& what, double value, double target, double tol) {
    const bool ok = std::abs(value - target) <= tol;
    if (!ok) fail(what + " = " + num(value) + ", expected " + num(target) + " +/- " + num(tol));
    else note(what + " = " + num(value));
  }

  void below(const std::string& what, double value, double bound) {
    if (!(value < bound)) fail(what + " = " + num(value) + " not < " + num(bound));
    else worst(what, value);
  }

  void require(const std::string& what, bool ok) {
    if (!ok) fail(what);
  }

  bool finish() {
    for (const auto& [what, v] : worst_) note("max " + what + " = " + num(v));
    return ok_;
  }

 private:
  void fail(const std::string& s) {
    ok_ = false;
    note("FAIL " + s);
  }
  void note(const std::string& s) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += s;
  }
  void worst(const std::string& what, double v) {
    for (auto& [w, x] : worst_) {
      if (w == what) {
        x = std::max(x, v);
        return;
      }
    }
    worst_.emplace_back(what, v);
  }

  std::string& detail_;
  bool ok_ = true;
  std::vector<std::pair<std::string, double>> worst_;
};

IntegratorConfig tight() {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  return cfg;
}

double z(const PopulationSnapshot& s, Level a, Level b) { return imbalance(s, a, b); }

PopulationSnapshot oracle_final(double gamma, const ModulationProtocol& p, const AmplitudeVector& a0,
                                double t0, double t1, const IntegratorConfig& base = {}) {
  return populations(propagate(SOCoupling(gamma), p, a0, t0, t1, base), t1);
}

// Both engines from a state prepared before the pulse; returns the -T and
// +T snapshots of each.
struct EndPoints {
  PopulationSnapshot exact_lo, exact_hi, num_lo, num_hi;
};

EndPoints endpoints(double gamma, const ModulationProtocol& p, const AmplitudeVector& a0) {
  const double T = default_horizon(p);
  const InitialCondition ic{a0, -kInf};
  const auto eval = exact_evaluator(SOCoupling(gamma), p, ic, T);
  EndPoints e;
  e.exact_lo = populations(eval(-T), -T);
  e.exact_hi = populations(eval(T), T);
  e.num_lo = populations(a0, -T);
  e.num_hi = oracle_final(gamma, p, a0, -T, T);
  return e;
}

bool fig1_case(std::string& detail, double beta, double gamma, double V, double z32_expected,
               double z31_expected, bool oracle_tight) {
  Ledger l(detail);
  const SyncSech2 p{beta, V, 1.0};
  const auto a0 = AmplitudeVector::basis(3);
  const double z32 = asymptotic_imbalance_sync(p, SOCoupling(gamma), a0, 0.0, Level::P3, Level::P2);
  const double z31 = asymptotic_imbalance_sync(p, SOCoupling(gamma), a0, 0.0, Level::P3, Level::P1);
  l.within("Z32(+inf)", z32, z32_expected, 2e-3);
  l.within("Z31(+inf)", z31, z31_expected, 2e-3);
  if (oracle_tight) {
    const auto fin = oracle_final(gamma, p, a0, 0.0, default_horizon(p), tight());
    l.below("|Z32 exact - oracle|", std::abs(z32 - z(fin, Level::P3, Level::P2)), 1e-9);
    l.below("|Z31 exact - oracle|", std::abs(z31 - z(fin, Level::P3, Level::P1)), 1e-9);
  }
  if (beta == 0.0 && gamma == 0.35) l.below("|Z31 + Z32 + 1|", std::abs(z31 + z32 + 1.0), 1e-9);
  return l.finish();
}

bool complete_transfer(std::string& detail) {
  Ledger l(detail);
  for (int n = 0; n < 3; ++n) {
    const SyncSech2 p{0.0, (n + 0.5) * pi, 1.0};
    const auto a0 = AmplitudeVector::basis(3);
    const double ex = asymptotic_imbalance_sync(p, SOCoupling(1.0), a0, 0.0, Level::P3, Level::P1);
    const auto fin = oracle_final(1.0, p, a0, 0.0, default_horizon(p));
    l.below("|Z31 exact + 1|", std::abs(ex + 1.0), 1e-9);
    l.below("|Z31 oracle + 1|", std::abs(z(fin, Level::P3, Level::P1) + 1.0), 1e-6);
  }
  return l.finish();
}

bool sync_ccpc(std::string& detail) {
  Ledger l(detail);
  const auto e = endpoints(0.15, SyncSech2{0.0, pi / 2, 1.0}, caption_state_2a());
  for (std::size_t m = 0; m < 4; ++m) {
    l.below("|dP| exact", std::abs(e.exact_hi.P[m] - e.exact_lo.P[m]), 1e-6);
    l.below("|dP| oracle", std::abs(e.num_hi.P[m] - e.num_lo.P[m]), 1e-6);
  }
  return l.finish();
}

bool sync_ccpi(std::string& detail) {
  Ledger l(detail);
  for (const auto& a0 : caption_states_2b()) {
    const auto e = endpoints(0.15, SyncSech2{0.0, pi / 4, 1.0}, a0);
    l.below("|ZLR(+T) + ZLR(-T)| exact",
            std::abs(z(e.exact_hi, Level::L, Level::R) + z(e.exact_lo, Level::L, Level::R)), 1e-6);
    l.below("|ZLR(+T) + ZLR(-T)| oracle",
            std::abs(z(e.num_hi, Level::L, Level::R) + z(e.num_lo, Level::L, Level::R)), 1e-6);
  }
  return l.finish();
}

bool equal_split(std::string& detail) {
  Ledger l(detail);
  const SyncSech2 p{0.0, pi / 4, 1.0};
  const SyncSolution sol(p, SOCoupling(0.25), AmplitudeVector::basis(3), -kInf);
  const auto fin = populations(sol.at(kInf));
  l.within("P1(+inf)", fin.P[0], 0.5, 1e-6);
  l.within("P2(+inf)", fin.P[1], 0.5, 1e-6);
  const double T = default_horizon(p);
  const auto num = oracle_final(0.25, p, AmplitudeVector::basis(3), -T, T);
  l.within("P1 oracle", num.P[0], 0.5, 1e-6);
  l.within("P2 oracle", num.P[1], 0.5, 1e-6);
  return l.finish();
}

bool async_ccpc(std::string& detail) {
  Ledger l(detail);
  const double caption_z[] = {1.0, 0.5, 0.0, -0.5, -1.0};
  const auto states = caption_states_3ab();
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto e = endpoints(2.0, AsyncTanhSech{1.0, 1.0, 1.0}, states[k]);
    const double lo = z(e.exact_lo, Level::P3, Level::P1);
    l.below("|Z31(+T) - Z31(-T)| exact", std::abs(z(e.exact_hi, Level::P3, Level::P1) - lo), 1e-6);
    l.below("|Z31(+T) - Z31(-T)| oracle",
            std::abs(z(e.num_hi, Level::P3, Level::P1) - z(e.num_lo, Level::P3, Level::P1)), 1e-6);
    l.below("|Z31(-T) - caption|", std::abs(lo - caption_z[k]), 1e-12);
  }
  return l.finish();
}

bool async_ccpi(std::string& detail) {
  Ledger l(detail);
  const AsyncTanhSech p{1.0, 1.0, 2.0};
  const auto states = caption_states_3ab();
  for (const auto& a0 : states) {
    const auto e = endpoints(2.0, p, a0);
    l.below("|Z31(+T) + Z31(-T)| exact",
            std::abs(z(e.exact_hi, Level::P3, Level::P1) + z(e.exact_lo, Level::P3, Level::P1)), 1e-6);
    l.below("|Z31(+T) + Z31(-T)| oracle",
            std::abs(z(e.num_hi, Level::P3, Level::P1) + z(e.num_lo, Level::P3, Level::P1)), 1e-6);
  }
  const double T = default_horizon(p);
  const auto eval = exact_evaluator(SOCoupling(2.0), p, {states[2], -kInf}, T);
  double worst = 0.0;
  for (double t : uniform_grid(-T, T, 2001)) {
    worst = std::max(worst, std::abs(z(populations(eval(t)), Level::P3, Level::P1)));
  }
  l.below("CDT |Z31(t)|", worst, 1e-9);
  return l.finish();
}

bool flip_ccpi(std::string& detail) {
  Ledger l(detail);
  const AsyncTanhSech p{std::sqrt(0.21), 0.5, 0.4};
  const double T = default_horizon(p);
  for (const auto& a0 : caption_states_3d()) {
    const auto e = endpoints(0.5, p, a0);
    const auto z41 = [](const PopulationSnapshot& s) { return s.P[3] - s.P[0]; };
    l.below("|Z41(+T) + Z41(-T)| exact", std::abs(z41(e.exact_hi) + z41(e.exact_lo)), 1e-6);
    l.below("|Z41(+T) + Z41(-T)| oracle", std::abs(z41(e.num_hi) + z41(e.num_lo)), 1e-6);
    const AsyncSolution sol(p, SOCoupling(0.5), a0, -T);
    const auto& c = sol.first();
    l.below("|P4(+T) - 2|C+|^2|", std::abs(e.exact_hi.P[3] - 2 * std::norm(c.plus)), 1e-6);
    l.below("|P1(+T) - 2|C-|^2|", std::abs(e.exact_hi.P[0] - 2 * std::norm(c.minus)), 1e-6);
  }
  return l.finish();
}

AmplitudeVector random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector4c v;
  for (int i = 0; i < 4; ++i) v(i) = cplx(g(rng), g(rng));
  return AmplitudeVector(Vector4c(v / v.norm()));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double sweep_case(const SOCoupling& g, const ModulationProtocol& p, const AmplitudeVector& a0,
                  double t0) {
  const double T = default_horizon(p);
  const auto grid = uniform_grid(-T, T, 201);
  const InitialCondition ic{a0, t0};
  const auto eval = exact_evaluator(g, p, ic, T);
  const auto rec = oracle_trajectory(g, p, ic, T, grid);
  return compare_to_analytic(rec, eval);
}

bool oracle_sweep(std::string& detail) {
  Ledger l(detail);
  std::mt19937_64 rng(20240611);
  constexpr int kCases = 50;
  for (int i = 0; i < kCases; ++i) {
    const double omega = uniform(rng, 0.5, 2.0);
    const SyncSech2 p{uniform(rng, -2, 2), uniform(rng, 0.01, 3) * omega, omega};
    const double t0 = i % 2 ? 0.0 : -default_horizon(p);
    l.below("sync distance", sweep_case(SOCoupling(uniform(rng, 0, 2)), p, random_state(rng), t0),
            1e-6);
  }
  for (int i = 0; i < kCases; ++i) {
    const AsyncTanhSech p{uniform(rng, 0.01, 2), uniform(rng, 0.01, 2), uniform(rng, 0.2, 2)};
    const SOCoupling g(static_cast<double>(i % 4));
    l.below("async-conserving distance", sweep_case(g, p, random_state(rng), -kInf), 1e-6);
  }
  for (int i = 0; i < kCases; ++i) {
    const double chi = uniform(rng, 0.2, 2.0);
    const double eps = uniform(rng, -1.5, 1.5);
    const AsyncTanhSech p{eps, std::sqrt(0.25 * chi * chi + eps * eps), chi};
    const SOCoupling g(i % 2 ? 0.5 : 1.5);
    l.below("async-flip distance", sweep_case(g, p, random_state(rng), -kInf), 1e-6);
  }
  return l.finish();
}

bool structural(std::string& detail) {
  Ledger l(detail);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const double beta = uniform(rng, -3, 3);
    double gv = uniform(rng, -2, 2);
    if (std::abs(std::sin(pi * gv)) < 1e-6) gv += 0.01;
    const SOCoupling g(gv);
    const EigenSystem eig = eigen_sync(beta, g);
    const Matrix4c H = sync_frame_matrix(beta, g);
    l.require("Hermitian H_tau", H == H.adjoint());
    const Matrix4c Ht = hamiltonian_matrix(g, uniform(rng, -5, 5), uniform(rng, -5, 5));
    l.require("Hermitian H(t)", Ht == Ht.adjoint());
    for (std::size_t m = 0; m < 4; ++m) {
      const Vector4c v = eig.vec[m].cast<cplx>();
      l.below("eigen residual", (H * v - eig.lambda[m] * v).norm(), 1e-12);
    }
    l.below("|lambda1 + lambda2|", std::abs(eig.lambda[0] + eig.lambda[1]), 1e-12);
    l.below("|lambda3 + lambda4|", std::abs(eig.lambda[2] + eig.lambda[3]), 1e-12);
    const AmplitudeVector a0 = random_state(rng);
    const auto s = superposition_from_initial(eig, a0, uniform(rng, -2, 2));
    l.below("analytic norm error", std::abs(evolve_sync(eig, s, uniform(rng, -5, 5)).norm2() - 1.0),
            1e-9);
  }
  for (int i = 0; i < 20; ++i) {
    const AsyncTanhSech p{uniform(rng, -2, 2), uniform(rng, 0.01, 2), uniform(rng, 0.2, 2)};
    const AsyncSolution sol(p, SOCoupling(i % 2 ? 1.0 : 0.0), random_state(rng), -25.0 / p.chi);
    l.below("analytic norm error", std::abs(sol.at(uniform(rng, -30, 30)).norm2() - 1.0), 1e-9);
  }
  const std::vector<std::pair<double, ModulationProtocol>> shipped{
      {0.5, SyncSech2{0.5, pi / 2, 1.0}}, {0.15, SyncSech2{0.0, pi / 4, 1.0}},
      {2.0, AsyncTanhSech{1.0, 1.0, 1.0}}, {0.5, AsyncTanhSech{std::sqrt(0.21), 0.5, 0.4}}};
  for (const auto& [g, p] : shipped) {
    IntegratorConfig cfg;
    const double T = default_horizon(p);
    cfg.t_start = -T;
    cfg.t_end = T;
    const auto rec = integrate(SOCoupling(g), p, random_state(rng), cfg, uniform_grid(-T, T, 101));
    l.below("numeric norm drift", rec.norm_drift_max, 1e-8);
  }
  return l.finish();
}

bool peak_counts(std::string& detail) {
  Ledger l(detail);
  const auto series = [](double gamma, const ModulationProtocol& p, const AmplitudeVector& a0,
                         auto&& pick) {
    const double T = default_horizon(p);
    const auto grid = uniform_grid(-T, T, 2001);
    const auto rec = sample_trajectory(exact_evaluator(SOCoupling(gamma), p, {a0, -kInf}, T), grid,
                                       p, "exact");
    std::vector<double> v;
    for (const auto& s : rec.snapshots) v.push_back(pick(s));
    return std::make_pair(rec.times, v);
  };
  const auto z31 = [](const PopulationSnapshot& s) { return s.P[2] - s.P[0]; };

  const auto [t2a, p1] =
      series(0.15, SyncSech2{0.0, pi / 2, 1.0}, caption_state_2a(),
             [](const PopulationSnapshot& s) { return s.P[0]; });
  const int n2a = count_peaks(t2a, p1, -5, 5);
  l.require("fig 2(a) P1 peaks = " + std::to_string(n2a) + ", expected 1", n2a == 1);

  // Non-CDT initial condition: Z31(-T) away from zero.
  const AmplitudeVector a0{0.5, 0.0, std::sqrt(3.0) / 2, 0.0};
  const auto [t3a, v3a] = series(2.0, AsyncTanhSech{1.0, 1.0, 1.0}, a0, z31);
  l.require("fig 3(a) initial imbalance nonzero", std::abs(v3a.front()) >= 1e-6);
  const int n3a = count_extrema(t3a, v3a, -5, 5);
  l.require("fig 3(a) Z31 extrema = " + std::to_string(n3a) + ", expected 1", n3a == 1);

  const auto [t3b, v3b] = series(2.0, AsyncTanhSech{1.0, 1.0, 2.0}, a0, z31);
  const int n3b = count_extrema(t3b, v3b, -5, 5);
  l.require("fig 3(b) Z31 extrema = " + std::to_string(n3b) + ", expected 0", n3b == 0);
  const bool ok = l.finish();
  detail += std::string(detail.empty() ? "" : "; ") + "counts 2a=" + std::to_string(n2a) + " 3a=" + std::to_string(n3a) +
            " 3b=" + std::to_string(n3b);
  return ok;
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all{
      {1, "fig 1(d) asymptotic imbalances", 1.0,
       [](std::string& d) { return fig1_case(d, 0.5, 0.5, pi / 2, -0.5456, 0.2272, true); }},
      {2, "fig 1(e) asymptotic imbalances", 1.0,
       [](std::string& d) { return fig1_case(d, 0.0, 1.0, 2.0, 0.1732, -0.6536, false); }},
      {3, "fig 1(f) asymptotic imbalances", 1.0,
       [](std::string& d) { return fig1_case(d, 0.0, 0.35, pi / 2, -0.7939, -0.2061, false); }},
      {4, "complete transfer at half-integer pulse area", 2.0, complete_transfer},
      {5, "synchronous CCPC (fig 2(a))", 2.0, sync_ccpc},
      {6, "synchronous CCPI (fig 2(b))", 5.0, sync_ccpi},
      {7, "equal split (fig 2(c))", 1.0, equal_split},
      {8, "asynchronous CCPC (fig 3(a))", 5.0, async_ccpc},
      {9, "asynchronous CCPI and CDT (fig 3(b))", 5.0, async_ccpi},
      {10, "spin-flip CCPI (fig 3(d))", 5.0, flip_ccpi},
      {11, "oracle equivalence sweep", 60.0, oracle_sweep},
      {12, "structural invariants", 5.0, structural},
      {13, "peak counts", 2.0, peak_counts},
  };
  return all;
}

CriterionResult run_criterion(const Criterion& c) {
  CriterionResult r;
  r.id = c.id;
  r.name = c.name;
  r.budget_seconds = c.budget_seconds;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.passed = c.check(r.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.seconds > r.budget_seconds) {
    r.passed = false;
    r.detail += "; over budget (" + num(r.budget_seconds) + " s)";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  for (const auto& c : acceptance_criteria()) out.push_back(run_criterion(c));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] %02d %s (%.3f s)", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return std::string(head) + (r.detail.empty() ? "" : " " + r.detail);
}

}  // namespace sodw
