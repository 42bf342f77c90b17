#include "reference.hpp"
#include "sodw/figures.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sodw;

namespace {

FigureOptions quick() {
  FigureOptions opt;
  opt.samples = 201;
  opt.scan_points = 21;
  return opt;
}

std::string meta(const FigureDataset& fig, const std::string& key) {
  for (const auto& [k, v] : fig.meta) {
    if (k == key) return v;
  }
  return {};
}

double zlr(const PopulationSnapshot& s) { return s.PL - s.PR; }

}  // namespace

TEST_CASE("every figure id builds") {
  CHECK(figure_ids().size() == 13);
  for (const auto& id : figure_ids()) {
    const FigureDataset fig = build_figure(id, quick());
    CHECK(fig.id == id);
    CHECK_FALSE(fig.series.empty());
    CHECK(meta(fig, "figure") == id);
  }
  CHECK_THROWS_AS(build_figure("4a"), std::invalid_argument);
}

TEST_CASE("fig 1(d) final row") {
  const FigureDataset fig = build_figure("1d", quick());
  REQUIRE(fig.trajectories.size() == 1);
  const auto& run = fig.trajectories[0];
  REQUIRE(run.exact);
  REQUIRE(run.numeric);
  CHECK(run.exact->times.front() == 0.0);
  const auto& last = run.exact->snapshots.back();
  CHECK(std::abs(last.P[2] - last.P[1] + 0.5456) < 2e-3);
  CHECK(std::abs(last.P[2] - last.P[0] - 0.2272) < 2e-3);
  CHECK(run.max_deviation < 1e-6);
  CHECK(meta(fig, "engine") == "sync-exact");
  CHECK(meta(fig, "epoch") == "0");
}

TEST_CASE("fig 2(b) has five inverting trajectories") {
  const FigureDataset fig = build_figure("2b", quick());
  REQUIRE(fig.trajectories.size() == 5);
  for (const auto& run : fig.trajectories) {
    const auto& rec = run.primary_record();
    CHECK(std::abs(zlr(rec.snapshots.front()) + zlr(rec.snapshots.back())) < 1e-6);
    CHECK(run.max_deviation < 1e-6);
    CHECK_FALSE(run.label.empty());
  }
  CHECK(meta(fig, "ic3.a1") == "0.5,0");
}

TEST_CASE("fig 3(d) trajectories invert Z41") {
  const FigureDataset fig = build_figure("3d", quick());
  REQUIRE(fig.trajectories.size() == 5);
  for (const auto& run : fig.trajectories) {
    const auto& s = run.primary_record().snapshots;
    CHECK(std::abs((s.front().P[3] - s.front().P[0]) + (s.back().P[3] - s.back().P[0])) < 1e-6);
    CHECK(run.primary == Engine::AsyncExact);
    CHECK(run.max_deviation < 1e-6);
  }
  CHECK(fig.series[0].column == "P4-P1");
}

TEST_CASE("scan figures") {
  const FigureDataset fig = build_figure("1c", quick());
  CHECK(fig.kind == FigureKind::Scan);
  CHECK(fig.scan.rows.size() == 21);
  for (const auto& row : fig.scan.rows) {
    CHECK(row.error.empty());
    CHECK(std::abs(row.imbalances[0] + row.imbalances[1] + 1.0) < 1e-9);
  }
  CHECK(meta(fig, "scan_parameter") == "gamma");
}

TEST_CASE("surface figure samples the constraint") {
  const FigureDataset fig = build_figure("3c", quick());
  CHECK(fig.kind == FigureKind::Surface);
  CHECK(fig.surface.size() == 16);
  for (const auto& [chi, eps, ups] : fig.surface) {
    CHECK(std::abs(check_flip_constraint(eps, ups, chi)) < 1e-12);
  }
}

TEST_CASE("run_trajectory engine choices") {
  const auto grid = uniform_grid(-5, 5, 11);
  const AsyncTanhSech off{1.0, 1.0, 1.0};
  const InitialCondition ic{AmplitudeVector::basis(4), -std::numeric_limits<double>::infinity()};
  const auto autorun = run_trajectory(SOCoupling(0.5), off, ic, grid, EngineChoice::Auto, 25.0);
  CHECK(autorun.primary == Engine::Oracle);
  CHECK_FALSE(autorun.exact);
  CHECK(std::isnan(autorun.max_deviation));
  CHECK_THROWS_AS(run_trajectory(SOCoupling(0.5), off, ic, grid, EngineChoice::Exact, 25.0),
                  FlipConstraintError);
  const auto ex = run_trajectory(SOCoupling(2.0), off, ic, grid, EngineChoice::Exact, 25.0);
  CHECK(ex.exact);
  CHECK_FALSE(ex.numeric);
  CHECK(parse_engine_choice("both") == EngineChoice::Both);
  CHECK_THROWS_AS(parse_engine_choice("fast"), std::invalid_argument);
}

TEST_CASE("figures are deterministic") {
  const auto a = build_figure("2a", quick());
  const auto b = build_figure("2a", quick());
  CHECK(a.meta == b.meta);
  const auto& ra = a.trajectories[0].numeric->states;
  const auto& rb = b.trajectories[0].numeric->states;
  REQUIRE(ra.size() == rb.size());
  for (std::size_t k = 0; k < ra.size(); ++k) CHECK(distance(ra[k], rb[k]) == 0.0);
}
