#include "contactline/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>

#include "contactline/error.hpp"

namespace contactline {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kThresholdSnap = 1e-12;

double nearest(const std::vector<double>& sorted, double x) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  double best = 1e300;
  if (it != sorted.end()) best = *it;
  if (it != sorted.begin() && std::abs(*std::prev(it) - x) < std::abs(best - x)) best = *std::prev(it);
  return best;
}

}  // namespace

void BoxConfig::validate() const {
  if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::InvalidArgument, "box half-length l must be positive");
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw Error(ErrorKind::InvalidArgument, "L0 must be positive");
  if (grid_density < 8) throw Error(ErrorKind::InvalidArgument, "grid_density must be at least 8");
  if (!(k_max > kPi / (2.0 * l)) || !std::isfinite(k_max)) {
    throw Error(ErrorKind::NoRoots, "k_max must exceed pi / (2 l)");
  }
}

const char* channel_name(Channel c) { return c == Channel::plus ? "plus" : "minus"; }

std::vector<double> SpectrumResult::wavenumbers() const {
  std::vector<double> ks;
  for (const auto& r : roots) {
    for (int m = 0; m < r.multiplicity; ++m) ks.push_back(r.k);
  }
  return ks;
}

double channel_residual(double theta, double k, const BoxConfig& cfg) {
  const double kl = k * cfg.l;
  return std::sin(kl) * std::sin(0.5 * theta) - k * cfg.L0 * std::cos(kl) * std::cos(0.5 * theta);
}

double threshold_residual(double theta, const BoxConfig& cfg) {
  return cfg.l * std::sin(0.5 * theta) - cfg.L0 * std::cos(0.5 * theta);
}

cplx quantization_det(const UnitaryU2& u, double k, const BoxConfig& cfg) {
  const Mat2& m = u.matrix();
  const Mat2 id = Mat2::Identity();
  const double kl = k * cfg.l;
  const Mat2 sys = (m - id) * std::sin(kl) - kI * cfg.L0 * k * std::cos(kl) * (m + id);
  return sys.determinant();
}

double polish_root(double theta, double lo, double hi, const BoxConfig& cfg) {
  auto f = [&](double k) { return channel_residual(theta, k, cfg); };
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw Error(ErrorKind::NoRoots, "bracket does not straddle a root");
  }
  std::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (bracket.first + bracket.second);
}

std::vector<double> channel_roots(double theta, const BoxConfig& cfg) {
  cfg.validate();
  const double step = kPi / (cfg.l * cfg.grid_density);
  const double k0 = kGuardBand / cfg.l;
  const auto n = static_cast<std::size_t>(std::ceil((cfg.k_max - k0) / step));

  std::vector<double> roots;
  double k_prev = k0;
  double f_prev = channel_residual(theta, k_prev, cfg);
  for (std::size_t j = 1; j <= n; ++j) {
    const double k = std::min(cfg.k_max, k0 + static_cast<double>(j) * step);
    const double fk = channel_residual(theta, k, cfg);
    if (fk == 0.0) {
      roots.push_back(k);
    } else if (f_prev != 0.0 && (f_prev < 0.0) != (fk < 0.0)) {
      roots.push_back(polish_root(theta, k_prev, k, cfg));
    }
    k_prev = k;
    f_prev = fk;
  }
  // On threshold to rounding, k = 0 is a triple zero and the tiny root
  // beside it is an artifact of the last bit of theta.
  if (std::abs(threshold_residual(theta, cfg)) < kThresholdSnap * (cfg.l + cfg.L0)) {
    std::erase_if(roots, [&](double k) { return k < 1e-5 / cfg.l; });
  }
  return roots;
}

SpectrumResult solve_spectrum(double theta_plus, double theta_minus, const BoxConfig& cfg) {
  cfg.validate();
  std::vector<SpectralRoot> all;
  for (double k : channel_roots(theta_plus, cfg)) all.push_back({k, Channel::plus, 1});
  for (double k : channel_roots(theta_minus, cfg)) all.push_back({k, Channel::minus, 1});
  std::sort(all.begin(), all.end(), [](const SpectralRoot& a, const SpectralRoot& b) {
    if (a.k != b.k) return a.k < b.k;
    return a.channel == Channel::plus && b.channel == Channel::minus;
  });

  SpectrumResult out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i + 1 < all.size() && all[i].channel != all[i + 1].channel &&
        std::abs(all[i + 1].k - all[i].k) <= kMultiplicityTol * all[i].k) {
      out.roots.push_back({all[i].k, Channel::plus, 2});
      ++i;
    } else {
      out.roots.push_back(all[i]);
    }
  }
  if (out.roots.empty()) throw Error(ErrorKind::NoRoots, "no eigen-wavenumber below k_max");
  return out;
}

SpectrumResult solve_spectrum(const SpectralCoordinates& sc, const BoxConfig& cfg) {
  return solve_spectrum(sc.theta_plus, sc.theta_minus, cfg);
}

SpectrumResult solve_spectrum(const UnitaryU2& u, const BoxConfig& cfg) {
  return solve_spectrum(eigen_decompose(u), cfg);
}

MonotonicityReport monotonicity_check(std::span<const double> theta_grid, const BoxConfig& cfg,
                                      int levels, double step) {
  if (levels < 1 || !(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "levels >= 1 and step > 0 required");
  BoxConfig wide = cfg;
  wide.k_max = std::max(cfg.k_max, (levels + 2) * kPi / cfg.l);

  MonotonicityReport rep;
  for (double theta : theta_grid) {
    const auto mid = channel_roots(theta, wide);
    const auto lo = channel_roots(theta - step, wide);
    const auto hi = channel_roots(theta + step, wide);
    const auto count = std::min<std::size_t>(mid.size(), static_cast<std::size_t>(levels));
    for (std::size_t j = 0; j < count; ++j) {
      const double gap = j + 1 < mid.size() ? mid[j + 1] - mid[j] : mid[j] - (j > 0 ? mid[j - 1] : 0.0);
      const double k_lo = nearest(lo, mid[j]);
      const double k_hi = nearest(hi, mid[j]);
      if (std::abs(k_lo - mid[j]) > 0.25 * gap || std::abs(k_hi - mid[j]) > 0.25 * gap) {
        throw Error(ErrorKind::TrackingLost, "root not simple or crossing threshold near sampled theta");
      }
      const double slope = (k_hi - k_lo) / (2.0 * step);
      ++rep.samples;
      if (slope > rep.max_slope) {
        rep.max_slope = slope;
        rep.worst_theta = theta;
        rep.worst_level = static_cast<int>(j);
      }
    }
  }
  return rep;
}

}  // namespace contactline
