#include "reference.hpp"
#include "sodw/model.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace sodw;

TEST_CASE("hamiltonian with coupling off is the Zeeman diagonal") {
  for (double g : {0.0, 0.3, 1.7}) {
    const Matrix4c H = hamiltonian_matrix(SOCoupling(g), 0.0, 1.0);
    Matrix4c expected = Matrix4c::Zero();
    expected.diagonal() << 1.0, -1.0, 1.0, -1.0;
    CHECK(H == expected);
  }
}

TEST_CASE("hamiltonian at gamma = 1/2 has only spin-flip couplings") {
  const Matrix4c H = hamiltonian_matrix(SOCoupling(0.5), 1.0, 0.0);
  Matrix4c expected = Matrix4c::Zero();
  expected(0, 3) = expected(3, 0) = -1.0;
  expected(1, 2) = expected(2, 1) = 1.0;
  CHECK(H == expected);
}

TEST_CASE("hamiltonian at gamma = 2 decouples into spin-conserving blocks") {
  const Matrix4c H = hamiltonian_matrix(SOCoupling(2.0), 1.0, 1.0);
  Matrix4c expected = Matrix4c::Zero();
  expected.diagonal() << 1.0, -1.0, 1.0, -1.0;
  expected(0, 2) = expected(2, 0) = -1.0;
  expected(1, 3) = expected(3, 1) = -1.0;
  CHECK(H == expected);
}

TEST_CASE("hamiltonian matches the amplitude equations row by row") {
  // i da1/dt = eps a1 - ups (sin a4 + cos a3), etc.
  const double g = 0.37, u = 0.8, e = -0.45;
  const SOCoupling gam(g);
  const double s = std::sin(std::numbers::pi * g), c = std::cos(std::numbers::pi * g);
  const AmplitudeVector a{cplx(0.1, 0.2), cplx(-0.3, 0.4), cplx(0.5, -0.1), cplx(0.2, 0.6)};
  const Vector4c lhs = hamiltonian_matrix(gam, u, e) * a.to_eigen();
  CHECK(std::abs(lhs(0) - (e * a[0] - u * (s * a[3] + c * a[2]))) < 1e-15);
  CHECK(std::abs(lhs(1) - (-e * a[1] + u * (s * a[2] - c * a[3]))) < 1e-15);
  CHECK(std::abs(lhs(2) - (e * a[2] + u * (s * a[1] - c * a[0]))) < 1e-15);
  CHECK(std::abs(lhs(3) - (-e * a[3] - u * (s * a[0] + c * a[1]))) < 1e-15);
}

TEST_CASE("hamiltonian is exactly Hermitian for random inputs") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const Matrix4c H = hamiltonian_matrix(SOCoupling(testing::uniform(rng, -3, 3)),
                                          testing::uniform(rng, -5, 5),
                                          testing::uniform(rng, -5, 5));
    CHECK(H == H.adjoint());
  }
}

TEST_CASE("hamiltonian rejects non-finite input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(hamiltonian_matrix(SOCoupling(0.1), nan, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(hamiltonian_matrix(SOCoupling(0.1), 1.0, INFINITY), std::invalid_argument);
  CHECK_THROWS_AS(SOCoupling{nan}, std::invalid_argument);
}

TEST_CASE("SO coupling trig values are exact on the branch points") {
  CHECK(SOCoupling(0.5).cos_pg() == 0.0);
  CHECK(SOCoupling(0.5).sin_pg() == 1.0);
  CHECK(SOCoupling(1.5).sin_pg() == -1.0);
  CHECK(SOCoupling(1.0).sin_pg() == 0.0);
  CHECK(SOCoupling(1.0).cos_pg() == -1.0);
  CHECK(SOCoupling(2.0).cos_pg() == 1.0);
  CHECK(SOCoupling(-0.5).sin_pg() == -1.0);
  CHECK(SOCoupling(2.0).spin_conserving());
  CHECK(SOCoupling(0.5).spin_flipping());
  CHECK_FALSE(SOCoupling(0.35).spin_conserving());

  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double g = testing::uniform(rng, -10, 10);
    const SOCoupling c(g);
    CHECK(std::abs(c.sin_pg() * c.sin_pg() + c.cos_pg() * c.cos_pg() - 1.0) < 1e-15);
    CHECK(std::abs(c.sin_pg() - std::sin(std::numbers::pi * g)) < 1e-13);
    CHECK(std::abs(c.cos_pg() - std::cos(std::numbers::pi * g)) < 1e-13);
  }
}

TEST_CASE("populations of basis and uniform states") {
  const auto s3 = populations(AmplitudeVector::basis(3), 1.5);
  CHECK(s3.t == 1.5);
  CHECK(s3.P[2] == 1.0);
  CHECK(s3.P[0] == 0.0);
  CHECK(s3.PL == 1.0);
  CHECK(s3.PR == 0.0);

  const auto u = populations({0.5, 0.5, 0.5, 0.5});
  for (double p : u.P) CHECK(p == 0.25);
  CHECK(u.PL == 0.5);
  CHECK(u.PR == 0.5);
}

TEST_CASE("populations of the CCPC caption state") {
  const auto snap =
      populations({std::sqrt(0.1), std::sqrt(0.2), std::sqrt(0.3), std::sqrt(0.4)});
  CHECK(snap.P[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(snap.P[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(snap.P[2] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(snap.P[3] == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(imbalance(snap, Level::L, Level::R) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("imbalance contract") {
  CHECK(imbalance(populations(AmplitudeVector::basis(3)), Level::P3, Level::P1) == 1.0);
  const auto snap = populations({std::sqrt(0.5), std::sqrt(0.5), 0.0, 0.0});
  CHECK(imbalance(snap, Level::P3, Level::P2) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(imbalance(snap, Level::L, Level::L), std::invalid_argument);
}

TEST_CASE("population sum and imbalance antisymmetry for random states") {
  std::mt19937_64 rng(11);
  const Level all[] = {Level::P1, Level::P2, Level::P3, Level::P4, Level::L, Level::R};
  for (int i = 0; i < 300; ++i) {
    AmplitudeVector a = testing::random_state(rng);
    const double scale = testing::uniform(rng, 0.5, 2.0);
    for (std::size_t m = 0; m < 4; ++m) a[m] *= scale;
    const auto snap = populations(a);
    CHECK(std::abs(snap.P[0] + snap.P[1] + snap.P[2] + snap.P[3] - a.norm2()) < 1e-12);
    for (Level s : all) {
      for (Level q : all) {
        if (s == q) continue;
        CHECK(imbalance(snap, s, q) == -imbalance(snap, q, s));
      }
    }
  }
}

TEST_CASE("normalization flag and level parsing") {
  CHECK(AmplitudeVector(1.0, 0.0, 0.0, 1e-6).is_normalized());
  CHECK_FALSE(AmplitudeVector(1.0, 0.0, 0.0, 1e-4).is_normalized());
  CHECK(parse_level("L") == Level::L);
  CHECK(parse_level("4") == Level::P4);
  CHECK_THROWS_AS(parse_level("5"), std::invalid_argument);
  CHECK_THROWS_AS(AmplitudeVector::basis(0), std::invalid_argument);
}

TEST_CASE("protocols evaluate their drive shapes and validate") {
  const ModulationProtocol sync = SyncSech2{0.5, 2.0, 1.5};
  CHECK(upsilon_at(sync, 0.0) == 2.0);
  CHECK(epsilon_at(sync, 0.0) == 1.0);
  CHECK(upsilon_at(sync, 0.7) == doctest::Approx(2.0 / std::pow(std::cosh(1.05), 2)));
  CHECK(upsilon_at(sync, 1e4) == 0.0);

  const ModulationProtocol async = AsyncTanhSech{1.0, 0.5, 2.0};
  CHECK(upsilon_at(async, 0.3) == doctest::Approx(0.5 / std::cosh(0.6)));
  CHECK(epsilon_at(async, 0.3) == doctest::Approx(std::tanh(0.6)));

  CHECK_THROWS_AS(validate(ModulationProtocol{SyncSech2{0.0, 1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(ModulationProtocol{AsyncTanhSech{0.0, 1.0, -1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(ModulationProtocol{CustomDrive{}}), std::invalid_argument);
  CHECK_NOTHROW(validate(ModulationProtocol{CustomDrive{[](double) { return 0.0; },
                                                        [](double) { return 1.0; }}}));
}
