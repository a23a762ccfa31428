#pragma once

// Continuation of box levels along closed loops on the eigenphase torus.

#include <array>
#include <functional>
#include <vector>

#include "contactline/spectral.hpp"

namespace contactline {

using TorusPath = std::function<std::array<double, 2>(double)>;

/// theta_+(t) = theta_plus0 + 2 pi w_+ t + r sin(2 pi t),
/// theta_-(t) = theta_minus0 + 2 pi w_- t + r (1 - cos(2 pi t)).
/// With both windings zero and r > 0 the loop is a contractible circle.
struct TorusLoop {
  double theta_plus0 = 0.0;
  double theta_minus0 = 0.0;
  int winding_plus = 1;
  int winding_minus = 0;
  double radius = 0.0;

  std::array<double, 2> operator()(double t) const;
};

struct FlowOptions {
  int levels = 6;              // tracked per channel from t = 0
  double max_step = 1.0 / 256;
  double min_step = 1e-6;
};

struct Trajectory {
  Channel channel = Channel::plus;
  /// Index within its channel at t = 0, or -1 when it entered at threshold.
  int start_level = -1;
  /// Index within its channel at t = 1, or -1 when it left through threshold.
  int end_level = -1;
  std::size_t first_sample = 0;
  /// One entry per sample from first_sample on; NaN after leaving.
  std::vector<double> k;
};

struct FlowTrace {
  std::vector<double> t;
  std::vector<std::array<double, 2>> angles;
  /// Tracked wavenumbers alive at each sample, ascending.
  std::vector<std::vector<double>> levels;
  std::vector<Trajectory> tracked;

  int shift_plus = 0;
  int shift_minus = 0;
  int net_shift = 0;
  /// Max |k_end(j) - k_start(j - shift)| over surviving trajectories.
  double closure_error = 0.0;
  /// Max distance between the channel spectra at t = 0 and t = 1.
  double spectrum_mismatch = 0.0;
};

/// Follows each of the lowest `levels` roots of both channels along the
/// path with adaptive steps: a step is accepted only if every level moves
/// less than half its local gap. Levels may leave or enter at k = 0.
/// Throws TrackingLost when the step falls below min_step, InvalidArgument
/// when the path is not closed modulo 2 pi.
FlowTrace trace_flow(const TorusPath& path, const BoxConfig& cfg, const FlowOptions& opts = {});

}  // namespace contactline
