#pragma once

// Domain types for a single spin-1/2 boson in a driven double well with
// synthetic spin-orbit coupling.
//
// Basis order is fixed everywhere as
//   a1 = |0,up>, a2 = |0,down>, a3 = |up,0>, a4 = |down,0>
// (right well first, then left well). Every matrix, vector and file in the
// project uses this order.

#include <Eigen/Core>

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <variant>

namespace sodw {

using cplx = std::complex<double>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;

/// |norm^2 - 1| below this counts as a normalized state.
inline constexpr double kNormalizedTol = 1e-9;

/// |sin(pi*gamma)| or |cos(pi*gamma)| below this selects a decoupled branch.
inline constexpr double kBranchTol = 1e-9;

/// Four complex probability amplitudes in the fixed Fock basis.
class AmplitudeVector {
 public:
  AmplitudeVector() = default;
  AmplitudeVector(cplx a1, cplx a2, cplx a3, cplx a4) : a_{a1, a2, a3, a4} {}
  explicit AmplitudeVector(const Vector4c& v) : a_{v(0), v(1), v(2), v(3)} {}

  /// Zero-based access: index 0 is a1.
  cplx operator[](std::size_t i) const { return a_[i]; }
  cplx& operator[](std::size_t i) { return a_[i]; }

  [[nodiscard]] Vector4c to_eigen() const { return {a_[0], a_[1], a_[2], a_[3]}; }
  [[nodiscard]] double norm2() const;
  [[nodiscard]] bool is_normalized(double tol = kNormalizedTol) const;
  [[nodiscard]] bool is_finite() const;

  /// Unit vector on one basis state; `level` is 1-based (1..4).
  static AmplitudeVector basis(int level);

 private:
  std::array<cplx, 4> a_{};
};

/// Euclidean distance between two amplitude vectors.
double distance(const AmplitudeVector& x, const AmplitudeVector& y);

/// sin(pi*x) and cos(pi*x) with exact values at multiples of 1/2.
double sin_pi(double x);
double cos_pi(double x);

/// Effective spin-orbit coupling strength gamma with sin(pi*gamma) and
/// cos(pi*gamma) evaluated once.
class SOCoupling {
 public:
  SOCoupling() : SOCoupling(0.0) {}
  explicit SOCoupling(double gamma);

  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] double sin_pg() const { return sin_pg_; }
  [[nodiscard]] double cos_pg() const { return cos_pg_; }

  /// Only spin-conserving tunneling is active (sin(pi*gamma) = 0).
  [[nodiscard]] bool spin_conserving(double tol = kBranchTol) const;
  /// Only spin-flipping tunneling is active (cos(pi*gamma) = 0).
  [[nodiscard]] bool spin_flipping(double tol = kBranchTol) const;

 private:
  double gamma_;
  double sin_pg_;
  double cos_pg_;
};

/// Synchronous drive: upsilon(t) = V sech^2(Omega t), epsilon(t) = beta upsilon(t).
struct SyncSech2 {
  double beta = 0.0;
  double V = 0.0;
  double Omega = 1.0;
};

/// Asynchronous drive: upsilon(t) = upsilon sech(chi t), epsilon(t) = epsilon tanh(chi t).
struct AsyncTanhSech {
  double epsilon = 0.0;
  double upsilon = 0.0;
  double chi = 1.0;
};

/// Arbitrary drive; only the numerical integrator accepts it.
struct CustomDrive {
  std::function<double(double)> upsilon;
  std::function<double(double)> epsilon;
  std::string label = "custom";
};

using ModulationProtocol = std::variant<SyncSech2, AsyncTanhSech, CustomDrive>;

/// Throws std::invalid_argument when Omega/chi are not positive, a parameter
/// is non-finite, or a custom drive is missing a function.
void validate(const ModulationProtocol& protocol);

double upsilon_at(const ModulationProtocol& protocol, double t);
double epsilon_at(const ModulationProtocol& protocol, double t);

/// Short tag used in metadata: "sync-sech2", "async-tanh-sech" or the custom label.
std::string protocol_name(const ModulationProtocol& protocol);

/// Coefficient matrix H with i da/dt = H a for tunneling amplitude
/// `upsilon_val` and Zeeman field `epsilon_val`. Real symmetric.
Matrix4c hamiltonian_matrix(const SOCoupling& gamma, double upsilon_val,
                            double epsilon_val);

struct PopulationSnapshot {
  double t = 0.0;
  std::array<double, 4> P{};
  double PL = 0.0;  // P3 + P4
  double PR = 0.0;  // P1 + P2
  double norm2 = 0.0;
};

PopulationSnapshot populations(const AmplitudeVector& state, double t = 0.0);

/// Population index for imbalances: a single level 1..4 or a well total.
enum class Level { P1, P2, P3, P4, L, R };

Level parse_level(std::string_view s);
std::string_view level_name(Level level);

double population_of(const PopulationSnapshot& snap, Level level);

/// Z_sq = P_s - P_q. Throws std::invalid_argument when s == q.
double imbalance(const PopulationSnapshot& snap, Level s, Level q);

}  // namespace sodw
