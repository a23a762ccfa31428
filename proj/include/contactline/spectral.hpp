#pragma once

// Dirichlet box x in [-l, l] with the contact interaction at the origin.
//
// The connection condition splits into two independent channels, one per
// eigenphase theta of U. With phi = A+ sin k(x - l) (x > 0) and
// phi = A- sin k(x + l) (x < 0) the boundary vectors are
//   Phi = sin(kl) Phi0,  Phi' = -k cos(kl) Phi0,
// so each channel quantizes as
//   sin(kl) sin(theta/2) - k L0 cos(kl) cos(theta/2) = 0,
// which is free of the poles of the cotangent form.

#include <span>
#include <vector>

#include "contactline/u2_algebra.hpp"

namespace contactline {

struct BoxConfig {
  double l = 1.0;
  double L0 = kDefaultL0;
  double k_max = 20.0;
  int grid_density = 16;  // scan points per pi / l

  /// Throws InvalidArgument for non-positive l, L0, grid_density < 8,
  /// or k_max <= pi / (2 l).
  void validate() const;
};

/// Roots below this wavenumber (times 1/l) are never reported.
inline constexpr double kGuardBand = 1e-8;
/// Relative k tolerance for merging the two channels into a double root.
inline constexpr double kMultiplicityTol = 1e-9;

enum class Channel { plus, minus };

const char* channel_name(Channel c);

struct SpectralRoot {
  double k = 0.0;
  Channel channel = Channel::plus;
  int multiplicity = 1;
};

struct SpectrumResult {
  std::vector<SpectralRoot> roots;  // ascending in k

  /// Roots expanded by multiplicity, ascending.
  std::vector<double> wavenumbers() const;
};

double channel_residual(double theta, double k, const BoxConfig& cfg);

/// Reduced residual channel_residual / k, finite at k = 0 where it equals
/// l sin(theta/2) - L0 cos(theta/2). Its sign at k = 0 changes exactly when a
/// level crosses the threshold.
double threshold_residual(double theta, const BoxConfig& cfg);

/// det[(U - I) sin(kl) - i L0 (U + I) k cos(kl)]. Equals
/// -4 e^{i (theta_+ + theta_-)/2} f(theta_+) f(theta_-) for the channel residuals f.
cplx quantization_det(const UnitaryU2& u, double k, const BoxConfig& cfg);

/// All positive roots of one channel in (0, k_max], ascending.
std::vector<double> channel_roots(double theta, const BoxConfig& cfg);

/// Polishes a single bracketed root of one channel.
double polish_root(double theta, double lo, double hi, const BoxConfig& cfg);

SpectrumResult solve_spectrum(double theta_plus, double theta_minus, const BoxConfig& cfg);
SpectrumResult solve_spectrum(const SpectralCoordinates& sc, const BoxConfig& cfg);
SpectrumResult solve_spectrum(const UnitaryU2& u, const BoxConfig& cfg);

struct MonotonicityReport {
  double max_slope = -1e300;  // least negative dk/dtheta observed
  double worst_theta = 0.0;
  int worst_level = -1;
  std::size_t samples = 0;
  bool all_negative() const { return max_slope < 0.0; }
};

/// Central finite differences of the first `levels` channel roots with
/// respect to theta at every sampled theta.
MonotonicityReport monotonicity_check(std::span<const double> theta_grid, const BoxConfig& cfg,
                                      int levels = 10, double step = 1e-5);

}  // namespace contactline
