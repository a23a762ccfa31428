#pragma once

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "contactline/u2_algebra.hpp"

namespace contactline {

/// Either representation of a contact interaction. Transfer matrices are
/// solved in transfer form, unitaries through the connection condition.
using Interaction = std::variant<UnitaryU2, TransferMatrix>;

/// Left incidence with the outgoing wave normalized on the right:
///   phi(x) = A e^{ikx} + B e^{-ikx}  (x < 0),   phi(x) = e^{ikx}  (x > 0).
struct ScatteringResult {
  double k = 0.0;
  cplx A{1.0, 0.0};
  cplx B{0.0, 0.0};
  double T = 1.0;
  double R = 0.0;
  /// Sides decoupled: nothing is transmitted. A = 1 and B is the left
  /// reflection amplitude in that case.
  bool total_reflection = false;
};

enum class Statistics { boson, fermion };

std::string_view statistics_name(Statistics s);

/// Relative-coordinate scattering of two identical particles:
///   phi(x) = e^{ikx} + C e^{-ikx}  (x < 0),  phi(x) = +-(e^{-ikx} + C e^{ikx})  (x > 0)
/// with + for bosons and - for fermions.
struct ExchangeResult {
  double k = 0.0;
  Statistics statistics = Statistics::boson;
  cplx C{1.0, 0.0};
};

ScatteringResult scatter_single(const Interaction& interaction, double k, double L0 = kDefaultL0);
ExchangeResult scatter_exchange(const Interaction& interaction, Statistics statistics, double k,
                                double L0 = kDefaultL0);

/// Closed forms for the two one-parameter families.
double delta_transmission(double v, double k);
double delta_reflection(double v, double k);
double epsilon_transmission(double u, double k);
double epsilon_reflection(double u, double k);

/// n log-spaced points over [k_min, k_max].
std::vector<double> log_grid(double k_min, double k_max, int n);
/// 33 log-spaced points over [1e-2, 1e2].
std::vector<double> default_k_grid();

inline constexpr double kDualityTol = 1e-10;

struct DualityReport {
  double max_deviation = 0.0;
  std::size_t points = 0;
  bool condition_satisfied = true;
  double v = 0.0;
  double u = 0.0;
  bool passed() const { return condition_satisfied && max_deviation < kDualityTol; }
};

/// T_delta(k; v) against T_eps(1/k; u) and the same for R. The relation
/// needs u = v; a report with condition_satisfied = false is returned otherwise.
DualityReport check_kinematic_duality(double v, double u, std::span<const double> k_grid);

/// Fermions with eps(u) against bosons with delta(4/u). Throws ZeroCoupling for u = 0.
DualityReport check_statistics_duality(double u, std::span<const double> k_grid);

}  // namespace contactline
