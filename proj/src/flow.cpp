#include "contactline/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "contactline/error.hpp"

namespace contactline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ChannelState {
  Channel channel;
  std::vector<std::size_t> active;  // indices into FlowTrace::tracked, ascending k
  std::vector<double> k;            // current wavenumbers of `active`
};

struct ChannelStep {
  std::vector<double> k;
  bool exited = false;
  std::optional<double> entered;
};

bool opposite(double a, double b) { return (a < 0.0) != (b < 0.0); }

// Moves every active level of one channel from theta_old to theta_new, or
// returns nullopt if the step is too coarse.
std::optional<ChannelStep> advance(const ChannelState& st, double theta_old, double theta_new,
                                   const BoxConfig& cfg, double band) {
  const double guard = kGuardBand / cfg.l;
  auto f = [&](double k) { return channel_residual(theta_new, k, cfg); };
  const bool crossed = opposite(threshold_residual(theta_old, cfg), threshold_residual(theta_new, cfg));

  ChannelStep out;
  const std::size_t n = st.k.size();
  double lowest_window = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ki = st.k[i];
    const double gap_lo = i == 0 ? ki : ki - st.k[i - 1];
    const double gap_hi = i + 1 < n ? st.k[i + 1] - ki : gap_lo;
    const double g = std::min(gap_lo, gap_hi);
    const double lo = std::max(guard, ki - 0.5 * g);
    const double hi = ki + 0.5 * g;
    const double flo = f(lo);
    const double fhi = f(hi);
    if (i == 0) lowest_window = lo;

    if (flo == 0.0 || fhi == 0.0 || opposite(flo, fhi)) {
      out.k.push_back(polish_root(theta_new, lo, hi, cfg));
      continue;
    }
    // The lowest level may have left through k = 0.
    if (i == 0 && crossed && ki < band && !opposite(f(guard), fhi)) {
      out.exited = true;
      lowest_window = hi;
      continue;
    }
    return std::nullopt;
  }

  if (crossed && !out.exited) {
    const double top = n > 0 ? lowest_window : band;
    const double fg = f(guard);
    const double ft = f(top);
    if (!opposite(fg, ft)) return std::nullopt;
    const double k_new = polish_root(theta_new, guard, top, cfg);
    if (k_new >= band) return std::nullopt;
    out.entered = k_new;
  }
  return out;
}

}  // namespace

std::array<double, 2> TorusLoop::operator()(double t) const {
  const double phase = kTwoPi * t;
  return {theta_plus0 + kTwoPi * winding_plus * t + radius * std::sin(phase),
          theta_minus0 + kTwoPi * winding_minus * t + radius * (1.0 - std::cos(phase))};
}

FlowTrace trace_flow(const TorusPath& path, const BoxConfig& cfg, const FlowOptions& opts) {
  cfg.validate();
  if (opts.levels < 1 || !(opts.max_step > 0.0) || !(opts.min_step > 0.0) || opts.min_step > opts.max_step) {
    throw Error(ErrorKind::InvalidArgument, "flow options need levels >= 1 and 0 < min_step <= max_step");
  }
  const auto start = path(0.0);
  const auto finish = path(1.0);
  int windings[2];
  for (int c = 0; c < 2; ++c) {
    const double w = (finish[c] - start[c]) / kTwoPi;
    if (std::abs(w - std::round(w)) > 1e-9) {
      throw Error(ErrorKind::InvalidArgument, "path is not closed modulo 2 pi");
    }
    windings[c] = static_cast<int>(std::lround(w));
  }

  BoxConfig wide = cfg;
  const int max_winding = std::max(std::abs(windings[0]), std::abs(windings[1]));
  wide.k_max = std::max(cfg.k_max, (opts.levels + 2 * max_winding + 3) * kPi / cfg.l);
  const double band = kPi / (cfg.l * cfg.grid_density);

  FlowTrace trace;
  ChannelState states[2] = {{Channel::plus, {}, {}}, {Channel::minus, {}, {}}};
  std::vector<double> initial[2];
  for (int c = 0; c < 2; ++c) {
    initial[c] = channel_roots(start[c], wide);
    const auto count = std::min<std::size_t>(initial[c].size(), static_cast<std::size_t>(opts.levels));
    if (count == 0) throw Error(ErrorKind::NoRoots, "no level to track");
    for (std::size_t j = 0; j < count; ++j) {
      Trajectory tr;
      tr.channel = states[c].channel;
      tr.start_level = static_cast<int>(j);
      tr.k.push_back(initial[c][j]);
      states[c].active.push_back(trace.tracked.size());
      states[c].k.push_back(initial[c][j]);
      trace.tracked.push_back(std::move(tr));
    }
  }

  auto record = [&](double t, const std::array<double, 2>& ang) {
    trace.t.push_back(t);
    trace.angles.push_back(ang);
    std::vector<double> lv;
    for (const auto& st : states) lv.insert(lv.end(), st.k.begin(), st.k.end());
    std::sort(lv.begin(), lv.end());
    trace.levels.push_back(std::move(lv));
  };
  record(0.0, start);

  double t = 0.0;
  double h = opts.max_step;
  auto previous = start;
  while (t < 1.0) {
    h = std::min(h, 1.0 - t);
    double tn = t + h;
    if (1.0 - tn < 1e-12) tn = 1.0;
    const auto next = path(tn);

    std::optional<ChannelStep> steps[2];
    bool ok = true;
    for (int c = 0; c < 2 && ok; ++c) {
      steps[c] = advance(states[c], previous[c], next[c], cfg, band);
      ok = steps[c].has_value();
    }
    if (!ok) {
      h *= 0.5;
      if (h < opts.min_step) {
        throw Error(ErrorKind::TrackingLost, "adaptive step fell below minimum at t = " + std::to_string(t));
      }
      continue;
    }

    const std::size_t sample = trace.t.size();
    for (int c = 0; c < 2; ++c) {
      ChannelState& st = states[c];
      ChannelStep& sp = *steps[c];
      if (sp.exited) {
        trace.tracked[st.active.front()].k.push_back(kNaN);
        st.active.erase(st.active.begin());
        st.k.erase(st.k.begin());
      }
      for (std::size_t i = 0; i < st.active.size(); ++i) {
        st.k[i] = sp.k[i];
        trace.tracked[st.active[i]].k.push_back(sp.k[i]);
      }
      if (sp.entered) {
        Trajectory tr;
        tr.channel = st.channel;
        tr.first_sample = sample;
        tr.k.push_back(*sp.entered);
        st.active.insert(st.active.begin(), trace.tracked.size());
        st.k.insert(st.k.begin(), *sp.entered);
        trace.tracked.push_back(std::move(tr));
      }
    }
    // Trajectories that left earlier stay NaN.
    for (auto& tr : trace.tracked) {
      while (tr.first_sample + tr.k.size() < sample + 1) tr.k.push_back(kNaN);
    }

    t = tn;
    previous = next;
    record(t, next);
    h = std::min(2.0 * h, opts.max_step);
  }

  // Identify where each surviving trajectory ended within its channel.
  for (int c = 0; c < 2; ++c) {
    const auto final_roots = channel_roots(finish[c], wide);
    const std::size_t compare = std::min({initial[c].size(), final_roots.size(),
                                          static_cast<std::size_t>(opts.levels)});
    for (std::size_t j = 0; j < compare; ++j) {
      trace.spectrum_mismatch = std::max(trace.spectrum_mismatch, std::abs(initial[c][j] - final_roots[j]));
    }

    std::optional<int> shift;
    for (std::size_t idx : states[c].active) {
      Trajectory& tr = trace.tracked[idx];
      const double k_end = tr.k.back();
      const auto it = std::min_element(final_roots.begin(), final_roots.end(), [&](double a, double b) {
        return std::abs(a - k_end) < std::abs(b - k_end);
      });
      if (it == final_roots.end() || std::abs(*it - k_end) > 1e-8 * std::max(1.0, k_end)) {
        throw Error(ErrorKind::TrackingLost, "trajectory did not land on a level of the final spectrum");
      }
      tr.end_level = static_cast<int>(it - final_roots.begin());
      if (tr.start_level < 0) continue;
      const int s = tr.start_level - tr.end_level;
      if (shift && *shift != s) {
        throw Error(ErrorKind::TrackingLost, "levels of one channel shifted by different amounts");
      }
      shift = s;
      if (static_cast<std::size_t>(tr.end_level) < initial[c].size()) {
        trace.closure_error = std::max(trace.closure_error, std::abs(k_end - initial[c][tr.end_level]));
      }
    }
    (c == 0 ? trace.shift_plus : trace.shift_minus) = shift.value_or(0);
  }
  trace.net_shift = trace.shift_plus + trace.shift_minus;
  return trace;
}

}  // namespace contactline
