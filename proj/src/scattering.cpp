#include "contactline/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "contactline/error.hpp"

namespace contactline {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kSingularTol = 1e-14;
constexpr double kConsistencyTol = 1e-10;

void require_positive_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorKind::InvalidArgument, "wavenumber must be positive and finite");
  }
}

ScatteringResult finish(double k, cplx a, cplx b) {
  ScatteringResult r;
  r.k = k;
  r.A = a;
  r.B = b;
  r.T = 1.0 / std::norm(a);
  r.R = std::norm(b / a);
  return r;
}

Vec2 solve2(const Mat2& m, const Vec2& rhs) {
  const cplx det = m.determinant();
  const double scale = m.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > kSingularTol * scale * scale)) {
    throw Error(ErrorKind::SingularSystem, "scattering system is rank-deficient");
  }
  return m.fullPivLu().solve(rhs);
}

ScatteringResult scatter_transfer(const TransferMatrix& lam, double k) {
  lam.validate();
  Mat2 waves;
  waves << 1.0, 1.0, kI * k, -kI * k;
  const Vec2 rhs(1.0, kI * k);
  const Vec2 ab = solve2(lam.matrix() * waves, rhs);
  return finish(k, ab(0), ab(1));
}

ScatteringResult scatter_unitary(const UnitaryU2& u, double k, double L0) {
  const Mat2& m = u.matrix();
  const Mat2 id = Mat2::Identity();
  const Mat2 minus = m - id;
  const Mat2 plus = L0 * k * (m + id);

  if (u.decoupled()) {
    // Only the left half-line sees the incoming wave.
    const cplx um = minus(1, 1);
    const cplx up = plus(1, 1);
    ScatteringResult r;
    r.k = k;
    r.A = 1.0;
    r.B = -(um + up) / (um - up);
    r.T = 0.0;
    r.R = 1.0;
    r.total_reflection = true;
    return r;
  }

  // Phi = (1, A + B), Phi' = (ik, -ik (A - B)).
  Mat2 sys;
  sys.col(0) = minus.col(1) + plus.col(1);
  sys.col(1) = minus.col(1) - plus.col(1);
  const Vec2 rhs = -(minus.col(0) - plus.col(0));
  const Vec2 ab = solve2(sys, rhs);
  return finish(k, ab(0), ab(1));
}

// Minimizes |a C + b| and insists the minimum is zero.
cplx solve_exchange(const Vec2& a, const Vec2& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > kSingularTol * std::max(1.0, nb))) {
    throw Error(ErrorKind::SingularSystem, "exchange system is rank-deficient");
  }
  const cplx c = -a.dot(b) / (na * na);
  const double res = (a * c + b).norm();
  if (res > kConsistencyTol * std::max(na, nb)) {
    throw Error(ErrorKind::NotExchangeSymmetric,
                "interaction does not preserve the exchange symmetry of the pair");
  }
  return c;
}

}  // namespace

std::string_view statistics_name(Statistics s) {
  return s == Statistics::boson ? "boson" : "fermion";
}

ScatteringResult scatter_single(const Interaction& interaction, double k, double L0) {
  require_positive_k(k);
  if (const auto* lam = std::get_if<TransferMatrix>(&interaction)) return scatter_transfer(*lam, k);
  return scatter_unitary(std::get<UnitaryU2>(interaction), k, L0);
}

ExchangeResult scatter_exchange(const Interaction& interaction, Statistics statistics, double k,
                                double L0) {
  require_positive_k(k);
  const double sign = statistics == Statistics::boson ? 1.0 : -1.0;
  ExchangeResult out;
  out.k = k;
  out.statistics = statistics;

  if (const auto* lam = std::get_if<TransferMatrix>(&interaction)) {
    lam->validate();
    // Lambda (1 + C, ik (1 - C)) = sign (1 + C, ik (C - 1)).
    const Mat2 m = lam->matrix();
    const Vec2 a = m * Vec2(1.0, -kI * k) - sign * Vec2(1.0, kI * k);
    const Vec2 b = m * Vec2(1.0, kI * k) - sign * Vec2(1.0, -kI * k);
    out.C = solve_exchange(a, b);
    return out;
  }

  // Phi = (1 + C) e, Phi' = ik (C - 1) e with e = (sign, 1) / sqrt 2.
  const Mat2& m = std::get<UnitaryU2>(interaction).matrix();
  const Mat2 id = Mat2::Identity();
  const Vec2 e = Vec2(sign, 1.0) / std::sqrt(2.0);
  const Vec2 minus = (m - id) * e;
  const Vec2 plus = L0 * k * ((m + id) * e);
  out.C = solve_exchange(minus - plus, minus + plus);
  return out;
}

double delta_transmission(double v, double k) {
  const double h = 0.5 * v;
  return k * k / (k * k + h * h);
}

double delta_reflection(double v, double k) {
  const double h = 0.5 * v;
  return h * h / (k * k + h * h);
}

double epsilon_transmission(double u, double k) {
  if (u == 0.0) return 1.0;
  const double g = 2.0 / u;
  return g * g / (k * k + g * g);
}

double epsilon_reflection(double u, double k) {
  if (u == 0.0) return 0.0;
  const double g = 2.0 / u;
  return k * k / (k * k + g * g);
}

std::vector<double> log_grid(double k_min, double k_max, int n) {
  if (!(k_min > 0.0) || !(k_max >= k_min) || n < 1 || (n == 1 && k_max != k_min)) {
    throw Error(ErrorKind::InvalidArgument, "log grid needs 0 < k_min <= k_max and n >= 1");
  }
  std::vector<double> grid(static_cast<std::size_t>(n));
  if (n == 1) {
    grid[0] = k_min;
    return grid;
  }
  const double lo = std::log(k_min);
  const double step = (std::log(k_max) - lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = std::exp(lo + step * i);
  grid.front() = k_min;
  grid.back() = k_max;
  return grid;
}

std::vector<double> default_k_grid() { return log_grid(1e-2, 1e2, 33); }

DualityReport check_kinematic_duality(double v, double u, std::span<const double> k_grid) {
  DualityReport rep;
  rep.v = v;
  rep.u = u;
  rep.points = k_grid.size();
  rep.condition_satisfied = (u == v);
  const Interaction delta = delta_transfer(v);
  const Interaction eps = epsilon_transfer(u);
  for (double k : k_grid) {
    const ScatteringResult lo = scatter_single(delta, k);
    const ScatteringResult hi = scatter_single(eps, 1.0 / k);
    rep.max_deviation = std::max({rep.max_deviation, std::abs(lo.T - hi.T), std::abs(lo.R - hi.R)});
  }
  return rep;
}

DualityReport check_statistics_duality(double u, std::span<const double> k_grid) {
  if (u == 0.0) throw Error(ErrorKind::ZeroCoupling, "statistics duality needs u != 0 (v = 4/u)");
  DualityReport rep;
  rep.u = u;
  rep.v = 4.0 / u;
  rep.points = k_grid.size();
  const Interaction eps = epsilon_transfer(u);
  const Interaction delta = delta_transfer(rep.v);
  for (double k : k_grid) {
    const cplx cf = scatter_exchange(eps, Statistics::fermion, k).C;
    const cplx cb = scatter_exchange(delta, Statistics::boson, k).C;
    rep.max_deviation = std::max(rep.max_deviation, std::abs(cf - cb));
  }
  return rep;
}

}  // namespace contactline
