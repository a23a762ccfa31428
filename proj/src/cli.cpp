#include "contactline/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "contactline/error.hpp"
#include "contactline/flow.hpp"
#include "contactline/plot.hpp"
#include "contactline/scattering.hpp"
#include "contactline/serialize.hpp"
#include "contactline/spectral.hpp"

namespace contactline::cli {

namespace {

using nlohmann::json;

class ArgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON numbers carry the same 12 significant digits as the CSV output.
double rounded(double x) { return std::isfinite(x) ? std::stod(format_number(x)) : x; }

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

struct InteractionArgs {
  double delta = 0.0;
  double epsilon = 0.0;
  std::vector<double> transfer;
  std::vector<double> unitary;
  std::vector<double> spectral;
  CLI::Option* o_delta = nullptr;
  CLI::Option* o_epsilon = nullptr;
  CLI::Option* o_transfer = nullptr;
  CLI::Option* o_unitary = nullptr;
  CLI::Option* o_spectral = nullptr;

  void attach(CLI::App* app) {
    o_delta = app->add_option("--delta", delta, "delta interaction of strength v");
    o_epsilon = app->add_option("--epsilon", epsilon, "epsilon interaction of strength u");
    o_transfer = app->add_option("--transfer", transfer, "transfer form: lambda s t u v")->expected(5);
    o_unitary = app->add_option("--unitary", unitary,
                                "U entries: re00 im00 re01 im01 re10 im10 re11 im11")->expected(8);
    o_spectral = app->add_option("--spectral", spectral, "theta_plus theta_minus mu nu")->expected(4);
  }

  int given() const {
    return static_cast<int>(o_delta->count() > 0) + static_cast<int>(o_epsilon->count() > 0) +
           static_cast<int>(o_transfer->count() > 0) + static_cast<int>(o_unitary->count() > 0) +
           static_cast<int>(o_spectral->count() > 0);
  }

  Interaction resolve() const {
    if (given() != 1) {
      throw ArgError("exactly one of --delta, --epsilon, --transfer, --unitary, --spectral is required");
    }
    if (o_delta->count()) return delta_transfer(delta);
    if (o_epsilon->count()) return epsilon_transfer(epsilon);
    if (o_transfer->count()) {
      try {
        return transfer_from_reals(std::span<const double, 5>(transfer.data(), 5));
      } catch (const Error& e) {
        throw ArgError(std::string("--transfer: ") + e.what());
      }
    }
    if (o_unitary->count()) {
      try {
        return unitary_from_reals(std::span<const double, 8>(unitary.data(), 8));
      } catch (const Error& e) {
        throw ArgError(std::string("--unitary: ") + e.what());
      }
    }
    SpectralCoordinates sc{spectral[0], spectral[1], spectral[2], spectral[3], false};
    return reconstruct(sc);
  }
};

UnitaryU2 as_unitary(const Interaction& it, double L0) {
  if (const auto* u = std::get_if<UnitaryU2>(&it)) return *u;
  return from_transfer(std::get<TransferMatrix>(it), L0);
}

struct OutputArgs {
  std::string format;
  std::string path;

  void attach(CLI::App* app, const std::string& default_format, const std::vector<std::string>& allowed) {
    format = default_format;
    app->add_option("--format", format, "output format")->check(CLI::IsMember(allowed));
    app->add_option("--out", path, "output file (default: standard output)");
  }

  void emit(const std::string& content, std::ostream& out) const {
    if (path.empty()) {
      out << content;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot open " + path);
    file << content;
    if (!file) throw Error(ErrorKind::Io, "write failed for " + path);
  }
};

std::vector<double> parse_grid(const std::vector<double>& grid) {
  if (grid.empty()) return default_k_grid();
  const double n = grid[2];
  if (!(grid[0] > 0.0) || !(grid[1] >= grid[0]) || n < 1.0 || n != std::floor(n) ||
      (n == 1.0 && grid[1] != grid[0])) {
    throw ArgError("--kgrid: need 0 < kmin <= kmax and an integer count >= 1");
  }
  return log_grid(grid[0], grid[1], static_cast<int>(n));
}

std::vector<double> k_values(const CLI::Option* o_k, double k, const std::vector<double>& grid) {
  if (o_k->count() && !grid.empty()) throw ArgError("--k and --kgrid are mutually exclusive");
  if (o_k->count()) {
    if (!(k > 0.0)) throw ArgError("--k: wavenumber must be positive");
    return {k};
  }
  return parse_grid(grid);
}

double l0_from_env() {
  const char* raw = std::getenv("CONTACTLINE_L0");
  if (raw == nullptr || *raw == '\0') return kDefaultL0;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
    throw ArgError("CONTACTLINE_L0 must be a positive number");
  }
  return v;
}

BoxConfig box_config(double l, double k_max, int density, double L0) {
  BoxConfig cfg{l, L0, k_max, density};
  if (!(l > 0.0)) throw ArgError("--l: half-length must be positive");
  if (density < 8) throw ArgError("--density: must be at least 8");
  if (!(k_max > kPi / (2.0 * l))) throw ArgError("--kmax: must exceed pi / (2 l)");
  return cfg;
}

// ------------------------------------------------------------------ scatter

std::string scatter_output(const Interaction& it, const std::vector<double>& ks,
                           const std::optional<Statistics>& stats, double L0, const std::string& format) {
  if (stats) {
    std::vector<ExchangeResult> rows;
    for (double k : ks) rows.push_back(scatter_exchange(it, *stats, k, L0));
    if (format == "json") {
      json j{{"command", "scatter"}, {"statistics", std::string(statistics_name(*stats))}, {"rows", json::array()}};
      for (const auto& r : rows) {
        j["rows"].push_back({{"k", rounded(r.k)}, {"C_re", rounded(r.C.real())}, {"C_im", rounded(r.C.imag())}});
      }
      return j.dump(2) + "\n";
    }
    if (format == "svg") {
      PlotSeries re{"Re C", "#1f77b4", {}, {}};
      PlotSeries im{"Im C", "#d62728", {}, {}};
      for (const auto& r : rows) {
        re.x.push_back(r.k);
        re.y.push_back(r.C.real());
        im.x.push_back(r.k);
        im.y.push_back(r.C.imag());
      }
      const std::vector<PlotSeries> series{re, im};
      return render_svg(series, {"Exchange amplitude", "k", "C", true});
    }
    std::string s = join({"k", "C_re", "C_im"});
    for (const auto& r : rows) s += join({format_number(r.k), format_number(r.C.real()), format_number(r.C.imag())});
    return s;
  }

  std::vector<ScatteringResult> rows;
  for (double k : ks) rows.push_back(scatter_single(it, k, L0));
  if (format == "json") {
    json j{{"command", "scatter"}, {"rows", json::array()}};
    for (const auto& r : rows) j["rows"].push_back({{"k", rounded(r.k)}, {"T", rounded(r.T)}, {"R", rounded(r.R)}});
    return j.dump(2) + "\n";
  }
  if (format == "svg") {
    const auto series = scattering_series(rows);
    return render_svg(series, {"Transmission and reflection", "k", "probability", true});
  }
  std::string s = join({"k", "T", "R"});
  for (const auto& r : rows) s += join({format_number(r.k), format_number(r.T), format_number(r.R)});
  return s;
}

// ----------------------------------------------------------------- spectrum

std::string spectrum_output(const SpectrumResult& res, const std::string& format) {
  if (format == "json") {
    json j{{"command", "spectrum"}, {"roots", json::array()}};
    for (const auto& r : res.roots) {
      j["roots"].push_back({{"k", rounded(r.k)}, {"channel", channel_name(r.channel)}, {"multiplicity", r.multiplicity}});
    }
    return j.dump(2) + "\n";
  }
  if (format == "svg") {
    PlotSeries s{"k_n", "#1f77b4", {}, {}};
    const auto ks = res.wavenumbers();
    for (std::size_t i = 0; i < ks.size(); ++i) {
      s.x.push_back(static_cast<double>(i + 1));
      s.y.push_back(ks[i]);
    }
    const std::vector<PlotSeries> series{s};
    return render_svg(series, {"Box spectrum", "level index", "k", false});
  }
  std::string s = join({"k", "channel", "multiplicity"});
  for (const auto& r : res.roots) {
    s += join({format_number(r.k), channel_name(r.channel), std::to_string(r.multiplicity)});
  }
  return s;
}

// --------------------------------------------------------------------- flow

std::string flow_output(const FlowTrace& tr, const std::string& format) {
  if (format == "svg") {
    const auto series = flow_series(tr);
    return render_svg(series, {"Spectral flow along the loop", "loop parameter t", "k", false});
  }
  if (format == "json") {
    json j{{"command", "flow"},
           {"net_shift", tr.net_shift},
           {"shift_plus", tr.shift_plus},
           {"shift_minus", tr.shift_minus},
           {"closure_error", rounded(tr.closure_error)},
           {"samples", json::array()}};
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      json levels = json::array();
      for (double k : tr.levels[i]) levels.push_back(rounded(k));
      j["samples"].push_back({{"t", rounded(tr.t[i])},
                              {"theta_plus", rounded(tr.angles[i][0])},
                              {"theta_minus", rounded(tr.angles[i][1])},
                              {"levels", levels}});
    }
    json trajs = json::array();
    for (const auto& t : tr.tracked) {
      trajs.push_back({{"channel", channel_name(t.channel)}, {"start_level", t.start_level}, {"end_level", t.end_level}});
    }
    j["trajectories"] = trajs;
    return j.dump(2) + "\n";
  }
  std::string s = join({"t", "theta_plus", "theta_minus", "channel", "trajectory", "start_level", "k"});
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    for (std::size_t id = 0; id < tr.tracked.size(); ++id) {
      const Trajectory& traj = tr.tracked[id];
      if (i < traj.first_sample || i - traj.first_sample >= traj.k.size()) continue;
      const double k = traj.k[i - traj.first_sample];
      if (!std::isfinite(k)) continue;
      s += join({format_number(tr.t[i]), format_number(tr.angles[i][0]), format_number(tr.angles[i][1]),
                 channel_name(traj.channel), std::to_string(id), std::to_string(traj.start_level),
                 format_number(k)});
    }
  }
  return s;
}

// ---------------------------------------------------------------- decompose

std::vector<std::string> decompose_row(const std::string& label, const UnitaryU2& u, PhaseOrdering ordering,
                                       double L0, json& j) {
  std::vector<std::string> row{label};
  const auto reals = to_reals(u);
  for (double x : reals) row.push_back(format_number(x));
  const CanonicalParams cp = u.canonical();
  const SpectralCoordinates sc = eigen_decompose(u, ordering);
  row.push_back(format_number(cp.xi));
  row.push_back(format_number(sc.theta_plus));
  row.push_back(format_number(sc.theta_minus));
  row.push_back(format_number(sc.mu));
  row.push_back(format_number(sc.nu));
  row.push_back(sc.degenerate ? "1" : "0");

  json entry{{"point", label},
             {"xi", rounded(cp.xi)},
             {"theta_plus", rounded(sc.theta_plus)},
             {"theta_minus", rounded(sc.theta_minus)},
             {"mu", rounded(sc.mu)},
             {"nu", rounded(sc.nu)},
             {"degenerate", sc.degenerate}};
  json ujson = json::array();
  for (double x : reals) ujson.push_back(rounded(x));
  entry["unitary"] = ujson;
  try {
    const TransferMatrix lam = to_transfer(u, L0);
    for (double x : to_reals(lam)) row.push_back(format_number(x));
    entry["transfer"] = {rounded(lam.lambda), rounded(lam.s), rounded(lam.t), rounded(lam.u), rounded(lam.v)};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoTransferForm) throw;
    for (int i = 0; i < 5; ++i) row.emplace_back();
    entry["transfer"] = nullptr;
  }
  j["points"].push_back(entry);
  return row;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contact interactions on the line: scattering, box spectra and spectral flow", "contactline"};
  app.require_subcommand(1);

  // scatter
  InteractionArgs sc_int;
  OutputArgs sc_out;
  double sc_k = 0.0;
  std::vector<double> sc_grid;
  std::string sc_exchange;
  auto* scatter = app.add_subcommand(
      "scatter",
      "Scattering off the defect. CSV columns: k,T,R; with --exchange: k,C_re,C_im");
  sc_int.attach(scatter);
  auto* sc_k_opt = scatter->add_option("--k", sc_k, "single wavenumber");
  scatter->add_option("--kgrid", sc_grid, "log grid: kmin kmax count")->expected(3);
  scatter->add_option("--exchange", sc_exchange, "identical-particle amplitude for boson|fermion")
      ->check(CLI::IsMember({"boson", "fermion"}));
  sc_out.attach(scatter, "csv", {"csv", "json", "svg"});

  // spectrum
  InteractionArgs sp_int;
  OutputArgs sp_out;
  std::vector<double> sp_theta;
  double sp_l = 1.0;
  double sp_kmax = 20.0;
  int sp_density = 16;
  auto* spectrum = app.add_subcommand(
      "spectrum", "Dirichlet box levels on [-l, l]. CSV columns: k,channel,multiplicity");
  sp_int.attach(spectrum);
  auto* sp_theta_opt = spectrum->add_option("--theta", sp_theta, "eigenphases theta_plus theta_minus")->expected(2);
  spectrum->add_option("--l", sp_l, "box half-length");
  spectrum->add_option("--kmax", sp_kmax, "search ceiling in k");
  spectrum->add_option("--density", sp_density, "scan points per pi/l");
  sp_out.attach(spectrum, "csv", {"csv", "json", "svg"});

  // flow
  OutputArgs fl_out;
  std::vector<double> fl_base{0.5, 2.0};
  std::vector<int> fl_winding{1, 0};
  double fl_radius = 0.0;
  double fl_l = 1.0;
  double fl_kmax = 20.0;
  int fl_density = 16;
  int fl_levels = 6;
  double fl_max_step = 1.0 / 256;
  auto* flow = app.add_subcommand(
      "flow",
      "Track levels around a torus loop. CSV columns: t,theta_plus,theta_minus,channel,trajectory,start_level,k");
  flow->add_option("--base", fl_base, "loop base point theta_plus theta_minus")->expected(2);
  flow->add_option("--winding", fl_winding, "winding numbers w_plus w_minus")->expected(2);
  flow->add_option("--radius", fl_radius, "circle radius added to the loop");
  flow->add_option("--l", fl_l, "box half-length");
  flow->add_option("--kmax", fl_kmax, "search ceiling in k");
  flow->add_option("--density", fl_density, "scan points per pi/l");
  flow->add_option("--levels", fl_levels, "levels tracked per channel");
  flow->add_option("--max-step", fl_max_step, "largest step in the loop parameter");
  fl_out.attach(flow, "csv", {"csv", "json", "svg"});

  // decompose
  InteractionArgs de_int;
  OutputArgs de_out;
  bool de_raw = false;
  bool de_partner = false;
  auto* decompose = app.add_subcommand(
      "decompose",
      "Representations of one interaction. CSV columns: point,u00_re..u11_im,xi,theta_plus,theta_minus,mu,nu,"
      "degenerate,lambda,s,t,u,v (transfer fields empty when no transfer form exists)");
  de_int.attach(decompose);
  decompose->add_flag("--raw", de_raw, "keep raw eigenphase ordering");
  decompose->add_flag("--partner", de_partner, "also decompose the duality partner");
  de_out.attach(decompose, "csv", {"csv", "json"});

  // duality-check
  OutputArgs du_out;
  bool du_kinematic = false;
  bool du_statistics = false;
  double du_v = 0.0;
  double du_u = 0.0;
  std::vector<double> du_grid;
  auto* duality = app.add_subcommand(
      "duality-check",
      "Verify T_delta(k)=T_eps(1/k) (--kinematic, u=v) or C_eps,fermion=C_delta,boson with vu=4 (--statistics)");
  duality->add_flag("--kinematic", du_kinematic, "kinematic k <-> 1/k duality");
  duality->add_flag("--statistics", du_statistics, "fermion-boson duality");
  auto* du_v_opt = duality->add_option("--v", du_v, "delta strength");
  auto* du_u_opt = duality->add_option("--u", du_u, "epsilon strength");
  duality->add_option("--kgrid", du_grid, "log grid: kmin kmax count")->expected(3);
  du_out.attach(duality, "text", {"text", "csv", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 2;
  }

  try {
    const double L0 = l0_from_env();

    if (scatter->parsed()) {
      const Interaction it = sc_int.resolve();
      const auto ks = k_values(sc_k_opt, sc_k, sc_grid);
      std::optional<Statistics> stats;
      if (!sc_exchange.empty()) stats = sc_exchange == "boson" ? Statistics::boson : Statistics::fermion;
      sc_out.emit(scatter_output(it, ks, stats, L0, sc_out.format), out);
      return 0;
    }

    if (spectrum->parsed()) {
      const BoxConfig cfg = box_config(sp_l, sp_kmax, sp_density, L0);
      SpectrumResult res;
      if (sp_theta_opt->count()) {
        if (sp_int.given() != 0) throw ArgError("--theta cannot be combined with an interaction flag");
        res = solve_spectrum(sp_theta[0], sp_theta[1], cfg);
      } else {
        res = solve_spectrum(as_unitary(sp_int.resolve(), L0), cfg);
      }
      sp_out.emit(spectrum_output(res, sp_out.format), out);
      return 0;
    }

    if (flow->parsed()) {
      const BoxConfig cfg = box_config(fl_l, fl_kmax, fl_density, L0);
      if (fl_levels < 1) throw ArgError("--levels: must be at least 1");
      if (!(fl_max_step > 1e-6) || fl_max_step > 1.0) throw ArgError("--max-step: must lie in (1e-6, 1]");
      const TorusLoop loop{fl_base[0], fl_base[1], fl_winding[0], fl_winding[1], fl_radius};
      FlowOptions opts;
      opts.levels = fl_levels;
      opts.max_step = fl_max_step;
      const FlowTrace tr = trace_flow(loop, cfg, opts);
      fl_out.emit(flow_output(tr, fl_out.format), out);
      err << "net_shift=" << tr.net_shift << " shift_plus=" << tr.shift_plus << " shift_minus=" << tr.shift_minus
          << '\n';
      return 0;
    }

    if (decompose->parsed()) {
      const UnitaryU2 u = as_unitary(de_int.resolve(), L0);
      const PhaseOrdering ordering = de_raw ? PhaseOrdering::raw : PhaseOrdering::canonical;
      json j{{"command", "decompose"}, {"points", json::array()}};
      std::string s = join({"point", "u00_re", "u00_im", "u01_re", "u01_im", "u10_re", "u10_im", "u11_re", "u11_im",
                            "xi", "theta_plus", "theta_minus", "mu", "nu", "degenerate", "lambda", "s", "t", "u",
                            "v"});
      s += join(decompose_row("input", u, ordering, L0, j));
      if (de_partner) s += join(decompose_row("partner", duality_partner(u), ordering, L0, j));
      de_out.emit(de_out.format == "json" ? j.dump(2) + "\n" : s, out);
      return 0;
    }

    if (duality->parsed()) {
      if (du_kinematic == du_statistics) throw ArgError("exactly one of --kinematic, --statistics is required");
      const auto ks = parse_grid(du_grid);
      DualityReport rep;
      std::string kind;
      if (du_statistics) {
        if (!du_u_opt->count()) throw ArgError("--u is required with --statistics");
        rep = check_statistics_duality(du_u, ks);
        kind = "statistics";
      } else {
        if (!du_u_opt->count() || !du_v_opt->count()) throw ArgError("--v and --u are required with --kinematic");
        rep = check_kinematic_duality(du_v, du_u, ks);
        kind = "kinematic";
      }
      const std::string status = !rep.condition_satisfied ? "CONDITION_VIOLATED" : rep.passed() ? "PASS" : "FAIL";
      std::string content;
      if (du_out.format == "json") {
        json j{{"command", "duality-check"}, {"check", kind},       {"v", rounded(rep.v)},
               {"u", rounded(rep.u)},         {"points", rep.points}, {"max_dev", rounded(rep.max_deviation)},
               {"tolerance", kDualityTol},    {"status", status}};
        content = j.dump(2) + "\n";
      } else if (du_out.format == "csv") {
        content = join({"check", "v", "u", "points", "max_dev", "tolerance", "status"}) +
                  join({kind, format_number(rep.v), format_number(rep.u), std::to_string(rep.points),
                        format_number(rep.max_deviation), format_number(kDualityTol), status});
      } else {
        std::ostringstream os;
        os << kind << " duality: v=" << format_number(rep.v) << " u=" << format_number(rep.u)
           << " points=" << rep.points << " max_dev=" << format_number(rep.max_deviation) << '\n';
        if (!rep.condition_satisfied) {
          os << "condition u = v violated, CONDITION_VIOLATED\n";
        } else {
          os << "max_dev " << (rep.passed() ? "<" : ">=") << " 1e-10, " << status << '\n';
        }
        content = os.str();
      }
      du_out.emit(content, out);
      return status == "PASS" ? 0 : 1;
    }
  } catch (const ArgError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << e.name() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace contactline::cli
