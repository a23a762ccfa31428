// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "contactline/cli.hpp"
#include "contactline/error.hpp"
#include "contactline/flow.hpp"
#include "contactline/scattering.hpp"
#include "contactline/spectral.hpp"

using namespace contactline;
namespace fs = std::filesystem;

namespace {

constexpr cplx kI{0.0, 1.0};

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_s;
  const bool ok = v.pass && in_time;
  if (!ok) ++failures;
  std::printf("criterion %2d %s  %s | %s | %.3f s (budget %.0f s)\n", id, ok ? "PASS" : "FAIL", title.c_str(),
              v.detail.c_str(), dt, budget_s);
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double set_distance(std::vector<double> a, std::vector<double> b) {
  if (a.size() != b.size()) return 1e300;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

std::vector<double> first(std::vector<double> v, std::size_t n) {
  if (v.size() > n) v.resize(n);
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "contactline");
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out;
  std::ostringstream err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

const std::vector<double> kStrengths{0.5, 1.0, 2.0, 4.0};

}  // namespace

int main() {
  const auto grid = default_k_grid();

  criterion(1, "closed-form scattering", 1.0, [&] {
    double dev = 0.0;
    double cons = 0.0;
    for (double s : kStrengths) {
      for (double k : grid) {
        const ScatteringResult d = scatter_single(delta_transfer(s), k);
        const ScatteringResult e = scatter_single(epsilon_transfer(s), k);
        const double td = 4 * k * k / (4 * k * k + s * s);
        const double te = 4.0 / (4.0 + k * k * s * s);
        dev = std::max({dev, std::abs(d.T - td), std::abs(d.R - (1 - td)), std::abs(e.T - te),
                        std::abs(e.R - (1 - te))});
        cons = std::max({cons, std::abs(d.T + d.R - 1), std::abs(e.T + e.R - 1)});
      }
    }
    return Verdict{dev < 1e-10 && cons < 1e-10, "max|dT|,|dR| = " + fmt(dev) + ", max|T+R-1| = " + fmt(cons)};
  });

  criterion(2, "kinematic duality", 1.0, [&] {
    double dev = 0.0;
    for (double s : kStrengths) {
      for (double k : grid) {
        dev = std::max(dev, std::abs(scatter_single(delta_transfer(s), k).T -
                                     scatter_single(epsilon_transfer(s), 1.0 / k).T));
      }
    }
    return Verdict{dev < 1e-10, "max|T_delta(k) - T_eps(1/k)| = " + fmt(dev)};
  });

  criterion(3, "statistics duality", 1.0, [&] {
    double delta_fermion = 0.0;
    double eps_boson = 0.0;
    double dual = 0.0;
    for (double s : kStrengths) {
      for (double k : grid) {
        delta_fermion = std::max(delta_fermion,
                                 std::abs(scatter_exchange(delta_transfer(s), Statistics::fermion, k).C - 1.0));
        eps_boson = std::max(eps_boson, std::abs(scatter_exchange(epsilon_transfer(s), Statistics::boson, k).C - 1.0));
        dual = std::max(dual, std::abs(scatter_exchange(epsilon_transfer(s), Statistics::fermion, k).C -
                                       scatter_exchange(delta_transfer(4.0 / s), Statistics::boson, k).C));
      }
    }
    return Verdict{delta_fermion < 1e-12 && eps_boson < 1e-12 && dual < 1e-10,
                   "max|C_delta,fermion - 1| = " + fmt(delta_fermion) + ", max|C_eps,boson - 1| = " + fmt(eps_boson) +
                       ", max|C_eps,fermion - C_delta,boson| (vu = 4) = " + fmt(dual)};
  });

  criterion(4, "isospectrality", 10.0, [&] {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    BoxConfig cfg;
    cfg.k_max = 40.0;
    double dev = 0.0;
    for (int i = 0; i < 100; ++i) {
      const UnitaryU2 d(oracle::diag(ang(rng), ang(rng)));
      const Mat2 v = oracle::random_su2(rng);
      const UnitaryU2 u(v.adjoint() * d.matrix() * v);
      const auto a = first(solve_spectrum(u, cfg).wavenumbers(), 20);
      const auto b = first(solve_spectrum(d, cfg).wavenumbers(), 20);
      if (a.size() < 20) return Verdict{false, "fewer than 20 roots"};
      dev = std::max(dev, set_distance(a, b));
    }
    return Verdict{dev < 1e-8, "max root deviation over 100 frames = " + fmt(dev)};
  });

  criterion(5, "forced channels theta = pi, 0", 1.0, [&] {
    double dev = 0.0;
    for (double l : {1.0, 0.75}) {
      BoxConfig cfg;
      cfg.l = l;
      cfg.k_max = 21.0 * kPi / l;
      const auto pi_roots = channel_roots(kPi, cfg);
      const auto zero_roots = channel_roots(0.0, cfg);
      if (pi_roots.size() < 20 || zero_roots.size() < 20) return Verdict{false, "fewer than 20 roots"};
      for (int n = 1; n <= 20; ++n) {
        dev = std::max({dev, std::abs(pi_roots[n - 1] - n * kPi / l), std::abs(zero_roots[n - 1] - (n - 0.5) * kPi / l)});
      }
    }
    return Verdict{dev < 1e-10, "max|k_n - closed form| = " + fmt(dev)};
  });

  criterion(6, "monotonicity dk/dtheta < 0", 5.0, [&] {
    std::vector<double> thetas;
    for (int j = 0; j < 32; ++j) thetas.push_back(kTwoPi * (j + 0.5) / 32.0);
    const MonotonicityReport rep = monotonicity_check(thetas, BoxConfig{}, 10, 1e-5);
    return Verdict{rep.samples == 320 && rep.max_slope < -1e-6,
                   "max dk/dtheta = " + fmt(rep.max_slope) + " over " + std::to_string(rep.samples) + " samples"};
  });

  criterion(7, "spiral anholonomy", 30.0, [&] {
    const BoxConfig cfg;
    const FlowTrace once = trace_flow(TorusLoop{0.5, 2.0, 1, 0, 0.0}, cfg);
    bool each_down = true;
    for (const auto& t : once.tracked) {
      if (t.channel != Channel::plus || t.start_level < 0) continue;
      const bool ok = t.end_level < 0 ? t.start_level == 0 : t.end_level == t.start_level - 1;
      each_down = each_down && ok;
    }
    const FlowTrace circle = trace_flow(TorusLoop{1.0, 4.0, 0, 0, 1.0}, cfg);
    const FlowTrace diagonal = trace_flow(TorusLoop{0.5, 0.5 - kPi / 2, 1, 1, 0.0}, cfg);
    const bool pass = once.spectrum_mismatch < 1e-8 && once.shift_plus == 1 && once.shift_minus == 0 && each_down &&
                      circle.net_shift == 0 && diagonal.net_shift == 2;
    return Verdict{pass, "theta_plus winding: shift " + std::to_string(once.net_shift) + ", set distance " +
                             fmt(once.spectrum_mismatch) + (each_down ? ", every level down by one" : ", level mismatch") +
                             "; contractible: " + std::to_string(circle.net_shift) +
                             "; diagonal: " + std::to_string(diagonal.net_shift)};
  });

  criterion(8, "swap symmetry", 5.0, [&] {
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> ang(0.0, kTwoPi);
    const BoxConfig cfg;
    double dev = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double a = ang(rng);
      const double b = ang(rng);
      dev = std::max(dev, set_distance(solve_spectrum(a, b, cfg).wavenumbers(), solve_spectrum(b, a, cfg).wavenumbers()));
    }
    return Verdict{dev < 1e-10, "max set distance over 50 pairs = " + fmt(dev)};
  });

  criterion(9, "representation round trips", 2.0, [&] {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    std::uniform_real_distribution<double> lam(0.0, kPi);
    double transfer_dev = 0.0;
    for (int i = 0; i < 1000; ++i) {
      double s = uni(rng);
      if (std::abs(s) < 0.2) s = std::copysign(0.2, s);
      const double u = uni(rng);
      const double v = uni(rng);
      const TransferMatrix in{lam(rng), s, (1.0 + u * v) / s, u, v};
      const TransferMatrix out = to_transfer(from_transfer(in));
      transfer_dev = std::max({transfer_dev, std::abs(std::exp(kI * out.lambda) - std::exp(kI * in.lambda)),
                               std::abs(out.s - in.s), std::abs(out.t - in.t), std::abs(out.u - in.u),
                               std::abs(out.v - in.v)});
    }
    double recon_dev = 0.0;
    double spin_dev = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const UnitaryU2 u(oracle::random_u2(rng));
      recon_dev = std::max(recon_dev, max_abs_diff(reconstruct(eigen_decompose(u)).matrix(), u.matrix()));
      if (eigen_decompose(u).degenerate) continue;
      const Mat2 s = invariant_spin_matrix(u);
      spin_dev = std::max(spin_dev, max_abs_diff(s * u.matrix() * s, u.matrix()));
    }
    return Verdict{transfer_dev < 1e-10 && recon_dev < 1e-10 && spin_dev < 1e-10,
                   "transfer " + fmt(transfer_dev) + ", reconstruct " + fmt(recon_dev) + ", sigma_S " + fmt(spin_dev)};
  });

  criterion(10, "CLI determinism", 5.0, [&] {
    const fs::path dir = fs::temp_directory_path() / "contactline_acceptance";
    fs::create_directories(dir);
    const std::vector<std::vector<std::string>> commands{
        {"scatter", "--delta", "2"},
        {"scatter", "--epsilon", "0.5", "--exchange", "fermion", "--format", "json"},
        {"scatter", "--delta", "1", "--format", "svg"},
        {"spectrum", "--theta", "0.7", "2.9"},
        {"spectrum", "--delta", "3", "--format", "json"},
        {"flow", "--levels", "4"},
        {"flow", "--levels", "4", "--format", "svg"},
        {"decompose", "--delta", "1.5", "--partner"},
        {"duality-check", "--kinematic", "--v", "2", "--u", "2"},
        {"duality-check", "--statistics", "--u", "0.5", "--format", "json"},
    };
    int identical = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
      std::string files[2];
      for (int rep = 0; rep < 2; ++rep) {
        const fs::path p = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep));
        fs::remove(p);
        auto args = commands[i];
        args.push_back("--out");
        args.push_back(p.string());
        if (run_cli(args) != 0) return Verdict{false, "command " + std::to_string(i) + " failed"};
        files[rep] = slurp(p);
      }
      if (!files[0].empty() && files[0] == files[1]) ++identical;
    }
    return Verdict{identical == static_cast<int>(commands.size()),
                   std::to_string(identical) + "/" + std::to_string(commands.size()) + " output files byte-identical"};
  });

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
