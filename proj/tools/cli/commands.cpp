#include "cli/commands.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "qbs/floquet.hpp"
#include "qbs/hom.hpp"
#include "qbs/lindblad.hpp"
#include "qbs/single_photon.hpp"
#include "qbs/two_photon.hpp"

namespace qbs::cli {

const std::string& Options::str(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw ConfigError("missing option --" + key);
  return it->second;
}

double Options::freq(const std::string& key) const {
  const double v = num(key);
  return hz ? v / gamma_hz : v;
}

std::vector<double> Options::freq_grid(const std::string& key) const {
  auto v = grid(key);
  if (hz)
    for (double& x : v) x /= gamma_hz;
  return v;
}

long Options::integer(const std::string& key) const {
  const double v = num(key);
  if (v != std::floor(v)) throw ConfigError("--" + key + " must be an integer");
  return static_cast<long>(v);
}

bool Options::flag(const std::string& key) const {
  const std::string& s = str(key);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("--" + key + " must be true or false");
}

namespace {

using Row = std::vector<Cell>;

// Per-point problems are recorded instead of aborting the sweep.
struct Notes {
  std::vector<std::string> messages;
};

template <class Fn>
Cell attempt(Notes& notes, Fn&& fn) {
  try {
    return Cell(fn());
  } catch (const qbs::Error& e) {
    notes.messages.emplace_back(e.what());
    return Cell{};
  }
}

// Runs fn(i, row, notes) for every i on ctx.jobs threads; rows land in index order.
template <class Fn>
void sweep(Table& t, std::size_t n, const RunContext& ctx, Fn&& fn) {
  t.rows.assign(n, Row(t.columns.size()));
  std::vector<Notes> notes(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i, t.rows[i], notes[i]);
      } catch (const qbs::Error& e) {
        notes[i].messages.emplace_back(e.what());
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(ctx.jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& m : notes[i].messages) {
      if (ctx.strict) throw NumericAbort("row " + std::to_string(i) + ": " + m);
      t.errors.push_back({i, std::move(m)});
    }
  }
}

double port_share(const PortProbabilities& pp, Port port) {
  return port == Port::Left ? pp.left_fraction() : pp.right_fraction();
}

Table cmd_scatter(const Options& o, const RunContext& ctx) {
  const double g = o.freq("g");
  const double p = o.freq("p");
  const auto theta = o.grid("theta");
  const auto phi = o.grid("phi");
  Table t;
  t.columns = {"theta", "phi", "R", "T", "re_r", "im_r", "re_t_rr", "im_t_rr", "re_t_ll", "im_t_ll"};
  sweep(t, theta.size() * phi.size(), ctx, [&](std::size_t i, Row& row, Notes&) {
    const double th = theta[i / phi.size()];
    const double ph = phi[i % phi.size()];
    row[0] = th;
    row[1] = ph;
    const auto s = scattering_set(QbsParams(g, ph, th), p);
    row[2] = std::norm(s.r_rl);
    row[3] = std::norm(s.t_rr);
    row[4] = s.r_rl.real();
    row[5] = s.r_rl.imag();
    row[6] = s.t_rr.real();
    row[7] = s.t_rr.imag();
    row[8] = s.t_ll.real();
    row[9] = s.t_ll.imag();
  });
  return t;
}

Table cmd_g2map(const Options& o, const RunContext& ctx) {
  const std::string& plane = o.str("plane");
  const bool delta_plane = plane == "delta-phi";
  if (!delta_plane && plane != "theta-phi") throw ConfigError("--plane must be theta-phi or delta-phi");
  const double g = o.freq("g");
  const auto first = delta_plane ? o.freq_grid("delta") : o.grid("theta");
  const auto phi = o.grid("phi");
  const double theta_fixed = delta_plane ? o.num("theta") : 0.0;
  const double p_fixed = delta_plane ? 0.0 : o.freq("p");
  Table t;
  t.columns = {delta_plane ? "delta" : "theta", "phi", "P_l", "P_r", "g2_l", "g2_r"};
  sweep(t, first.size() * phi.size(), ctx, [&](std::size_t i, Row& row, Notes& notes) {
    const double x = first[i / phi.size()];
    const double ph = phi[i % phi.size()];
    row[0] = x;
    row[1] = ph;
    const QbsParams params(g, ph, delta_plane ? theta_fixed : x);
    const double p = delta_plane ? momentum_from_detuning(x) : p_fixed;
    const auto pp = output_probabilities(params, p);
    row[2] = port_share(pp, Port::Left);
    row[3] = port_share(pp, Port::Right);
    row[4] = attempt(notes, [&] { return g2_zero_coherent(params, p, Port::Left); });
    row[5] = attempt(notes, [&] { return g2_zero_coherent(params, p, Port::Right); });
  });
  return t;
}

Table cmd_g2tau(const Options& o, const RunContext& ctx) {
  const std::string& input = o.str("input");
  if (input != "coherent" && input != "hom") throw ConfigError("--input must be coherent or hom");
  const QbsParams params(o.freq("g"), o.num("phi"), o.num("theta"));
  const double p = momentum_from_detuning(o.freq("delta"));
  std::vector<double> tau;
  if (o.str("tau") == "default") {
    tau = default_tau_grid(600, 60.0);
  } else {
    tau = o.grid("tau");
    if (o.hz)
      for (double& x : tau) x *= o.gamma_hz;
  }
  require_tau_grid(tau);
  Table t;
  t.columns = {"tau", "g2_l", "g2_r"};
  const bool hom = input == "hom";
  sweep(t, tau.size(), ctx, [&](std::size_t i, Row& row, Notes& notes) {
    row[0] = tau[i];
    for (int k = 0; k < 2; ++k) {
      const Port port = k == 0 ? Port::Left : Port::Right;
      row[1 + k] = attempt(notes, [&] {
        return hom ? hom_g2(params, p, tau[i], port) : g2_coherent(params, p, tau[i], port);
      });
    }
  });
  return t;
}

Table cmd_hom(const Options& o, const RunContext& ctx) {
  const double g = o.freq("g");
  const double theta = o.num("theta");
  const double p = o.freq("p");
  const std::string& list = o.str("list");
  std::vector<double> phi;
  if (list == "balanced")
    phi = balanced_phases(g, theta, p);
  else if (list == "sweep")
    phi = o.grid("phi");
  else
    throw ConfigError("--list must be sweep or balanced");
  const double tau_late = o.num("tau-plateau");
  Table t;
  t.columns = {"phi", "R", "P_ll", "P_rr", "P_lr", "g2_l_0", "g2_r_0", "g2_l_late", "g2_r_late"};
  sweep(t, phi.size(), ctx, [&](std::size_t i, Row& row, Notes& notes) {
    row[0] = phi[i];
    const QbsParams params(g, phi[i], theta);
    const auto a = hom_amplitudes(params, p);
    row[1] = std::norm(scattering_set(params, p).r_rl);
    row[2] = std::norm(a.a_ll);
    row[3] = std::norm(a.a_rr);
    row[4] = std::norm(a.a_lr);
    row[5] = attempt(notes, [&] { return hom_g2_zero(params, p, Port::Left); });
    row[6] = attempt(notes, [&] { return hom_g2_zero(params, p, Port::Right); });
    row[7] = attempt(notes, [&] { return hom_g2(params, p, tau_late, Port::Left); });
    row[8] = attempt(notes, [&] { return hom_g2(params, p, tau_late, Port::Right); });
  });
  return t;
}

struct OraclePoint {
  double g, theta, phi, p;
};

Table cmd_oracle(const Options& o, const RunContext& ctx) {
  const double omega = o.freq("omega");
  const auto taus = o.grid("tau");
  const long n_random = o.integer("points");
  if (n_random < 0) throw ConfigError("--points must be >= 0");
  const double rel_tol_rt = o.num("tol-rt");
  const double rel_tol_g2 = o.num("tol-g2");
  std::vector<OraclePoint> points;
  if (o.flag("headline")) points.push_back({1.0, kPi / 8, -0.87 * kPi, momentum_from_detuning(0.2)});
  std::mt19937_64 rng(static_cast<std::uint64_t>(o.integer("seed")));
  std::uniform_real_distribution<double> ug(0.2, 2.0), uth(0.3, 2 * kPi - 0.3), uph(-kPi, kPi),
      up(-1.5, 1.5);
  for (long k = 0; k < n_random; ++k) {
    const double g = ug(rng), th = uth(rng), ph = uph(rng), p = up(rng);
    points.push_back({g, th, ph, p});
  }

  Table t;
  t.columns = {"point", "g", "theta", "phi", "p", "quantity", "tau", "analytic",
               "numeric", "extrapolated", "abs_delta", "rel_delta", "tolerance", "pass"};
  std::vector<std::vector<Row>> blocks(points.size());
  Table per_point;
  per_point.columns = {"point"};
  sweep(per_point, points.size(), ctx, [&](std::size_t i, Row& marker, Notes& notes) {
    marker[0] = static_cast<double>(i);
    const auto& pt = points[i];
    const QbsParams params(pt.g, pt.phi, pt.theta);
    // abs_d is |analytic - compared| (complex difference for r and t)
    auto emit = [&](const std::string& q, Cell tau, double analytic, double numeric, Cell extrap,
                    double abs_d, double tol, bool checked) {
      const double rel_d = abs_d / std::max(std::abs(analytic), 1e-300);
      const bool pass = !checked || rel_d < tol;
      blocks[i].push_back(Row{static_cast<double>(i), pt.g, pt.theta, pt.phi, pt.p, q, tau, analytic,
                              numeric, extrap, abs_d, rel_d, tol, std::string(pass ? "true" : "false")});
    };
    const auto s = scattering_set(params, pt.p);
    const auto ns = numeric_scattering(params, pt.p, Direction::Right, omega);
    const auto ns_half = numeric_scattering(params, pt.p, Direction::Right, omega / 2);
    const double R = std::norm(s.r_rl), T = std::norm(s.t_rr);
    // pass/fail is judged on the raw value; the extrapolated column is for reference
    const double R_ex = (4 * ns_half.reflectance - ns.reflectance) / 3;
    const double T_ex = (4 * ns_half.transmittance - ns.transmittance) / 3;
    emit("R", Cell{}, R, ns.reflectance, R_ex, std::abs(ns.reflectance - R), rel_tol_rt, true);
    emit("T", Cell{}, T, ns.transmittance, T_ex, std::abs(ns.transmittance - T), rel_tol_rt, true);
    emit("r", Cell{}, std::abs(s.r_rl), std::abs(ns.r), Cell{}, std::abs(ns.r - s.r_rl), rel_tol_rt, true);
    emit("t", Cell{}, std::abs(s.t_rr), std::abs(ns.t), Cell{}, std::abs(ns.t - s.t_rr), rel_tol_rt, true);

    std::vector<double> grid{0.0};
    grid.insert(grid.end(), taus.begin(), taus.end());
    for (int k = 0; k < 2; ++k) {
      const Port port = k == 0 ? Port::Left : Port::Right;
      const std::string name = k == 0 ? "g2_l" : "g2_r";
      try {
        const auto raw = numeric_g2(params, DriveSpec::make(omega, omega, pt.p), grid, port);
        const auto rich = numeric_g2_extrapolated(params, pt.p, omega, grid, port);
        for (std::size_t j = 0; j < grid.size(); ++j) {
          const double an = g2_coherent(params, pt.p, grid[j], port);
          emit(name, grid[j], an, raw.g2_values[j], rich.g2_values[j],
               std::abs(rich.g2_values[j] - an), rel_tol_g2, an > 1e-3);
        }
      } catch (const qbs::Error& e) {
        notes.messages.emplace_back(name + ": " + e.what());
      }
    }
  });
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (auto& row : blocks[i]) t.rows.push_back(std::move(row));
  for (auto& e : per_point.errors) t.errors.push_back({e.row, "point " + std::to_string(e.row) + ": " + e.message});
  return t;
}

Table cmd_floquet(const Options& o, const RunContext& ctx) {
  const std::string& mode = o.str("mode");
  Table t;
  if (mode == "map") {
    const double gp = o.num("g-prime");
    const auto a = o.grid("a-ratio");
    const auto phi = o.grid("phi-prime-range");
    t.columns = {"a_ratio", "phi_prime", "g_eff", "phi_eff"};
    sweep(t, a.size() * phi.size(), ctx, [&](std::size_t i, Row& row, Notes&) {
      FloquetParams fp;
      fp.delta_mod = 1.0;
      fp.a_mod = a[i / phi.size()];
      fp.g_prime = gp;
      fp.phi_prime = phi[i % phi.size()];
      row[0] = fp.a_mod;
      row[1] = fp.phi_prime;
      const auto c = effective_coupling(fp);
      row[2] = c.g_eff_mag;
      row[3] = c.phi_eff;
    });
  } else if (mode == "balance") {
    const auto eta = o.grid("eta-ratio");
    t.columns = {"eta_ratio", "a_ratio", "j1"};
    sweep(t, eta.size(), ctx, [&](std::size_t i, Row& row, Notes&) {
      row[0] = eta[i];
      const double x = balance_modulation_depth(eta[i]);
      row[1] = x;
      row[2] = bessel_j(1, x);
    });
  } else if (mode == "rwa") {
    const auto ratios = parse_list(o.str("ratios"));
    const double a_frac = o.num("a-fraction");
    const double t_units = o.num("t-units");
    t.columns = {"delta_over_g", "a_ratio", "g_eff", "t_end", "infidelity", "rwa_regime"};
    sweep(t, ratios.size(), ctx, [&](std::size_t i, Row& row, Notes&) {
      FloquetParams fp;
      fp.g_prime = o.num("g-prime");
      fp.delta_mod = ratios[i] * fp.g_prime;
      fp.a_mod = a_frac * fp.delta_mod;
      fp.phi_prime = o.num("phi-prime");
      const auto c = effective_coupling(fp);
      const double t_end = t_units / c.g_eff_mag;
      row[0] = ratios[i];
      row[1] = a_frac;
      row[2] = c.g_eff_mag;
      row[3] = t_end;
      row[4] = validate_rwa(fp, t_end);
      row[5] = fp.rwa_regime() ? 1.0 : 0.0;
    });
  } else if (mode == "preset") {
    // Hz throughout; only ratios enter the map.
    const double delta_hz = o.num("delta-hz");
    const double target_hz = o.num("g-target-hz");
    const auto a = o.grid("a-ratio");
    const double phip = o.num("phi-prime");
    t.columns = {"a_ratio", "phi_prime", "g_prime_hz", "a_hz", "g_eff_hz", "phi_eff", "rwa_regime"};
    sweep(t, a.size(), ctx, [&](std::size_t i, Row& row, Notes&) {
      FloquetParams fp;
      fp.delta_mod = delta_hz;
      fp.a_mod = a[i] * delta_hz;
      fp.phi_prime = phip;
      fp.g_prime = 1.0;
      const double unit = effective_coupling(fp).g_eff_mag;
      if (unit <= 0.0) throw NoSolution("effective coupling vanishes at this A/Delta");
      fp.g_prime = target_hz / unit;
      const auto c = effective_coupling(fp);
      row[0] = a[i];
      row[1] = phip;
      row[2] = fp.g_prime;
      row[3] = fp.a_mod;
      row[4] = c.g_eff_mag;
      row[5] = c.phi_eff;
      row[6] = fp.rwa_regime() ? 1.0 : 0.0;
    });
  } else {
    throw ConfigError("--mode must be map, balance, rwa or preset");
  }
  return t;
}

}  // namespace

const std::vector<CommandSpec>& command_specs() {
  static const std::vector<CommandSpec> specs = {
      {"scatter",
       "reflection/transmission grid over theta and phi",
       {{"g", "1", "coupling g"},
        {"p", "0", "momentum offset p"},
        {"theta", "0:pi:101", "theta range start:end:count"},
        {"phi", "-pi:pi:101", "phi range"}},
       cmd_scatter},
      {"g2map",
       "port shares and equal-time g2 over theta-phi or delta-phi",
       {{"plane", "theta-phi", "theta-phi or delta-phi"},
        {"g", "1", "coupling g"},
        {"theta", "0:2*pi:101", "theta range (a single value for delta-phi)"},
        {"phi", "-pi:pi:101", "phi range"},
        {"p", "0", "momentum offset p (theta-phi plane)"},
        {"delta", "-1:1:101", "detuning range (delta-phi plane)"}},
       cmd_g2map},
      {"g2tau",
       "g2(tau) of both ports for coherent or two-photon Fock input",
       {{"input", "coherent", "coherent or hom"},
        {"g", "1", "coupling g"},
        {"theta", "pi/8", "theta"},
        {"phi", "-0.87*pi", "phi"},
        {"delta", "0.2", "detuning"},
        {"tau", "default", "tau range, or 'default' for the 600-point grid on [0, 60]"}},
       cmd_g2tau},
      {"hom",
       "two-photon Fock interference over phi, or at the balanced phases",
       {{"g", "1", "coupling g"},
        {"theta", "pi/8", "theta"},
        {"p", "0.5", "momentum offset p"},
        {"phi", "-pi:pi:361", "phi range (sweep mode)"},
        {"list", "sweep", "sweep or balanced"},
        {"tau-plateau", "60", "delay used for the late-time columns"}},
       cmd_hom},
      {"oracle",
       "closed forms against the master-equation oracle",
       {{"omega", "0.01", "drive amplitude"},
        {"points", "0", "random points in addition to the headline point"},
        {"seed", "1", "random seed"},
        {"headline", "true", "include g=1, theta=pi/8, phi=-0.87pi, delta=0.2"},
        {"tau", "0.5:5:10", "tau samples (tau=0 is always added)"},
        {"tol-rt", "1e-3", "relative tolerance on R and T"},
        {"tol-g2", "0.01", "relative tolerance on extrapolated g2"}},
       cmd_oracle},
      {"floquet",
       "modulated-coupler parameter map, balance condition, RWA check",
       {{"mode", "map", "map, balance, rwa or preset"},
        {"g-prime", "1", "bare coupling g'"},
        {"a-ratio", "0:2:21", "A/Delta range (map and preset modes)"},
        {"phi-prime-range", "-pi:pi:73", "phi' range (map mode)"},
        {"phi-prime", "0.7", "phi' (rwa and preset modes)"},
        {"eta-ratio", "0.05:0.55:11", "eta1/eta2 range (balance mode)"},
        {"ratios", "5,15,50", "Delta/g' list (rwa mode)"},
        {"a-fraction", "0.3", "A/Delta (rwa mode)"},
        {"t-units", "10", "simulated time in units of 1/g_eff (rwa mode)"},
        {"delta-hz", "200e6", "modulation frequency in Hz (preset mode)"},
        {"g-target-hz", "3.2e6", "target effective coupling in Hz (preset mode)"}},
       cmd_floquet},
  };
  return specs;
}

}  // namespace qbs::cli
