// rmcycle: computes the attracting limit cycle of the scaled
// Rosenzweig-MacArthur system to high accuracy and checks the closed-form
// bounds and certificates against it.
//
// Exit codes: 0 success, 1 bound/certificate violation, 2 convergence
// failure, 3 invalid parameters or config, 4 I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmc/bounds.hpp"
#include "rmc/certificates.hpp"
#include "rmc/cycle.hpp"
#include "rmc/integrator.hpp"
#include "rmc/model.hpp"
#include "rmc/sweep.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_violation = 1;
constexpr int exit_not_converged = 2;
constexpr int exit_bad_params = 3;
constexpr int exit_io = 4;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ParamArgs {
  double a = -1.0;
  double lambda = -1.0;
  rmc::StandardParams sp{};
  bool has_standard = false;

  rmc::Params resolve() const {
    if (has_standard) return rmc::from_standard(sp);
    return rmc::Params(a, lambda);
  }
};

void add_param_flags(CLI::App* cmd, ParamArgs& pa) {
  auto* a_opt = cmd->add_option("--a", pa.a, "scaled half-saturation a in (0, 0.1)");
  auto* l_opt =
      cmd->add_option("--lambda", pa.lambda, "scaled death rate lambda in (0, 0.1)");
  auto* r = cmd->add_option("--r", pa.sp.r, "prey growth rate (standard form)");
  auto* K = cmd->add_option("--K", pa.sp.K, "prey carrying capacity");
  auto* q = cmd->add_option("--q", pa.sp.q, "max consumption rate");
  auto* H = cmd->add_option("--H", pa.sp.H, "half-saturation prey level");
  auto* p = cmd->add_option("--p", pa.sp.p, "conversion efficiency");
  auto* d = cmd->add_option("--d", pa.sp.d, "predator death rate");
  r->needs(K, q, H, p, d);
  r->excludes(a_opt)->excludes(l_opt);
  cmd->callback([cmd, &pa] {
    pa.has_standard = cmd->count("--r") > 0;
    if (!pa.has_standard && (cmd->count("--a") == 0 || cmd->count("--lambda") == 0)) {
      throw CLI::ValidationError("provide --a and --lambda, or the standard set --r "
                                 "--K --q --H --p --d");
    }
  });
}

int write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return exit_ok;
  }
  std::ofstream os(path, std::ios::binary);
  os << content;
  os.flush();
  if (!os) {
    std::cerr << "error: cannot write " << path << "\n";
    return exit_io;
  }
  return exit_ok;
}

nlohmann::json summary_json(const rmc::LimitCycleSummary& c,
                            const rmc::TauMeasures& tm) {
  return {{"x_max", c.x_max},       {"s_max", c.s_max},
          {"x_min", c.x_min},       {"s_min", c.s_min},
          {"ln_x_min", c.ln_x_min}, {"ln_s_min", c.ln_s_min},
          {"period", c.period},     {"x_star", c.x_star},
          {"iterations", c.iterations}, {"residual", c.residual},
          {"tau_s", tm.tau_s},      {"tau_x", tm.tau_x}};
}

std::string summary_text(const rmc::LimitCycleSummary& c, const rmc::TauMeasures& tm) {
  std::ostringstream os;
  os << "x_max      = " << fmt17(c.x_max) << "\n"
     << "s_max      = " << fmt17(c.s_max) << "\n"
     << "ln_x_min   = " << fmt17(c.ln_x_min) << "  (x_min = " << fmt17(c.x_min) << ")\n"
     << "ln_s_min   = " << fmt17(c.ln_s_min) << "  (s_min = " << fmt17(c.s_min) << ")\n"
     << "period     = " << fmt17(c.period) << "\n"
     << "tau_s      = " << fmt17(tm.tau_s) << "\n"
     << "tau_x      = " << fmt17(tm.tau_x) << "\n"
     << "iterations = " << c.iterations << "  (residual " << fmt17(c.residual) << ")\n";
  return os.str();
}

std::string report_text(const rmc::cert::CertificateReport& rep) {
  std::ostringstream os;
  for (const auto& e : rep.entries) {
    os << (e.passed ? "[pass] " : "[FAIL] ") << e.name
       << "  margin = " << fmt17(e.margin) << "\n        " << e.detail << "\n";
  }
  return os.str();
}

nlohmann::json report_json(const rmc::cert::CertificateReport& rep) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : rep.entries) {
    arr.push_back({{"name", e.name},
                   {"passed", e.passed},
                   {"margin", e.margin},
                   {"detail", e.detail}});
  }
  return arr;
}

nlohmann::json bounds_json(const rmc::bounds::BoundSet& b) {
  return {{"x_max", {b.x_max.lo, b.x_max.hi}},
          {"s_max", {b.s_max.lo, b.s_max.hi}},
          {"ln_x_min", {b.ln_x_min.lo, b.ln_x_min.hi}},
          {"ln_s_min", {b.ln_s_min.lo, b.ln_s_min.hi}},
          {"kappa1", b.kappa1},
          {"kappa2", b.kappa2},
          {"kappa3", b.kappa3},
          {"x_max_used", b.x_max_used}};
}

std::string bounds_text(const rmc::bounds::BoundSet& b) {
  std::ostringstream os;
  os << "x_max    in (" << fmt17(b.x_max.lo) << ", " << fmt17(b.x_max.hi) << ")\n"
     << "s_max    in (" << fmt17(b.s_max.lo) << ", " << fmt17(b.s_max.hi) << ")\n"
     << "ln_x_min in (" << fmt17(b.ln_x_min.lo) << ", " << fmt17(b.ln_x_min.hi) << ")\n"
     << "ln_s_min in (" << fmt17(b.ln_s_min.lo) << ", " << fmt17(b.ln_s_min.hi) << ")\n"
     << "kappa1 = " << fmt17(b.kappa1) << ", kappa2 = " << fmt17(b.kappa2)
     << ", kappa3 = " << fmt17(b.kappa3) << "\n"
     << "x_max_used = " << fmt17(b.x_max_used) << "\n";
  return os.str();
}

std::vector<double> parse_grid(const std::string& spec) {
  // LO:HI:N, N linearly spaced values inclusive.
  double lo = 0.0, hi = 0.0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1) {
    throw rmc::OutOfRangeError("grid spec must be LO:HI:N, got " + spec);
  }
  std::vector<double> vals;
  if (n == 1) {
    vals.push_back(lo);
  } else {
    for (int i = 0; i < n; ++i) vals.push_back(lo + (hi - lo) * i / (n - 1.0));
  }
  return vals;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit-cycle simulator and bound verifier for the scaled "
               "Rosenzweig-MacArthur predator-prey system"};
  app.require_subcommand(1);

  rmc::StepControl ctl;
  app.add_option("--rel-tol", ctl.rel_tol, "integrator relative tolerance");
  app.add_option("--abs-tol", ctl.abs_tol, "integrator absolute tolerance");
  app.fallthrough();  // tolerance flags may follow the subcommand

  // simulate
  auto* sim = app.add_subcommand("simulate", "trace one trajectory from (x0, lambda)");
  ParamArgs sim_pa;
  add_param_flags(sim, sim_pa);
  double sim_x0 = 1.3, sim_duration = 200.0;
  std::size_t sim_max_points = 10000;
  std::string sim_out, sim_format = "csv";
  sim->add_option("--x0", sim_x0, "initial predator value on the section");
  sim->add_option("--duration", sim_duration, "integration time");
  sim->add_option("--max-points", sim_max_points, "decimate trace to at most N samples");
  sim->add_option("--out", sim_out, "output path (default stdout)");
  sim->add_option("--format", sim_format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // cycle
  auto* cyc = app.add_subcommand("cycle", "converge to the limit cycle, print summary");
  ParamArgs cyc_pa;
  add_param_flags(cyc, cyc_pa);
  double cyc_x0 = 1.3;
  int cyc_max_iters = 200;
  std::string cyc_out, cyc_format = "text";
  cyc->add_option("--x0", cyc_x0, "initial section iterate");
  cyc->add_option("--max-iters", cyc_max_iters, "return-map iteration cap");
  cyc->add_option("--out", cyc_out, "output path (default stdout)");
  cyc->add_option("--format", cyc_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  // bounds
  auto* bnd = app.add_subcommand("bounds", "closed-form extrema bounds");
  ParamArgs bnd_pa;
  add_param_flags(bnd, bnd_pa);
  double bnd_xmax_used = 1.6;
  std::string bnd_out, bnd_format = "text";
  bnd->add_option("--x-max-used", bnd_xmax_used,
                  "x_max inserted into the exponential bounds");
  bnd->add_option("--out", bnd_out, "output path (default stdout)");
  bnd->add_option("--format", bnd_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  // certify
  auto* cert_cmd = app.add_subcommand("certify", "run all cycle certificates");
  ParamArgs cert_pa;
  add_param_flags(cert_cmd, cert_pa);
  double cert_x0 = 1.3;
  int cert_max_iters = 200;
  std::string cert_out, cert_format = "text";
  cert_cmd->add_option("--x0", cert_x0, "initial section iterate");
  cert_cmd->add_option("--max-iters", cert_max_iters, "return-map iteration cap");
  cert_cmd->add_option("--out", cert_out, "output path (default stdout)");
  cert_cmd->add_option("--format", cert_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  // sweep
  auto* swp = app.add_subcommand("sweep", "grid sweep, CSV or JSON records");
  std::string swp_grid_a, swp_grid_lambda, swp_mode = "cycle";
  std::string swp_out, swp_format = "csv", swp_config;
  int swp_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (swp_threads < 1) swp_threads = 1;
  int swp_max_iters = 200;
  auto* o_grid_a = swp->add_option("--grid-a", swp_grid_a, "a grid as LO:HI:N");
  auto* o_grid_l =
      swp->add_option("--grid-lambda", swp_grid_lambda, "lambda grid as LO:HI:N");
  auto* o_mode = swp->add_option("--mode", swp_mode, "cycle|bounds|certify|tau")
                     ->check(CLI::IsMember({"cycle", "bounds", "certify", "tau"}));
  auto* o_threads = swp->add_option("--threads", swp_threads, "worker threads");
  auto* o_out = swp->add_option("--out", swp_out, "output path (default stdout)");
  auto* o_format = swp->add_option("--format", swp_format, "csv|json")
                       ->check(CLI::IsMember({"csv", "json"}));
  auto* o_max_iters = swp->add_option("--max-iters", swp_max_iters, "per-cell cap");
  swp->add_option("--config", swp_config, "flat key-value JSON config; flags override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_bad_params;
  }

  try {
    if (*sim) {
      const rmc::Params p = sim_pa.resolve();
      rmc::Integrator ig(p, ctl);
      const rmc::LogState start =
          rmc::LogState::from(rmc::State{sim_x0, p.lambda()});
      const auto pts = ig.trace(start, sim_duration, sim_max_points);
      std::string out;
      if (sim_format == "csv") {
        out = "tau,u,v,x,s\n";
        for (const auto& [tau, ls] : pts) {
          out += fmt17(tau) + ',' + fmt17(ls.u) + ',' + fmt17(ls.v) + ',' +
                 fmt17(std::exp(ls.u)) + ',' + fmt17(std::exp(ls.v)) + '\n';
        }
      } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [tau, ls] : pts) {
          arr.push_back({{"tau", tau}, {"u", ls.u}, {"v", ls.v}});
        }
        out = arr.dump(2) + "\n";
      }
      return write_output(sim_out, out);
    }

    if (*cyc) {
      const rmc::Params p = cyc_pa.resolve();
      const rmc::LimitCycleSummary c = rmc::find_cycle(p, ctl, cyc_max_iters, cyc_x0);
      const rmc::TauMeasures tm = rmc::tau_measures(c, p);
      const std::string out = cyc_format == "json"
                                  ? summary_json(c, tm).dump(2) + "\n"
                                  : summary_text(c, tm);
      return write_output(cyc_out, out);
    }

    if (*bnd) {
      std::string out;
      if (bnd_pa.has_standard) {
        const rmc::bounds::BoundSet b =
            rmc::bounds::standard_unit_bounds(bnd_pa.sp, bnd_xmax_used);
        out = bnd_format == "json" ? bounds_json(b).dump(2) + "\n" : bounds_text(b);
      } else {
        const rmc::Params p = bnd_pa.resolve();
        const rmc::bounds::BoundSet b = rmc::bounds::cycle_bounds(p, bnd_xmax_used);
        out = bnd_format == "json" ? bounds_json(b).dump(2) + "\n" : bounds_text(b);
      }
      return write_output(bnd_out, out);
    }

    if (*cert_cmd) {
      const rmc::Params p = cert_pa.resolve();
      const rmc::CycleResult cy =
          rmc::find_cycle_detailed(p, ctl, cert_max_iters, cert_x0);
      const rmc::cert::CertificateReport rep =
          rmc::cert::certify_cycle(cy.summary, cy.crossings, p);
      const rmc::bounds::BoundSet b = rmc::bounds::cycle_bounds(p, cy.summary.x_max);
      const rmc::cert::CertificateReport brep = rmc::bounds::check_bounds(cy.summary, b);
      std::string out;
      if (cert_format == "json") {
        nlohmann::json j = {{"certificates", report_json(rep)},
                            {"bound_nesting", report_json(brep)}};
        out = j.dump(2) + "\n";
      } else {
        out = report_text(rep) + report_text(brep);
      }
      const int rc = write_output(cert_out, out);
      if (rc != exit_ok) return rc;
      return rep.all_passed() && brep.all_passed() ? exit_ok : exit_violation;
    }

    if (*swp) {
      // Config file supplies defaults for flags not given on the command line.
      if (!swp_config.empty()) {
        std::ifstream is(swp_config);
        if (!is) {
          std::cerr << "error: cannot read config " << swp_config << "\n";
          return exit_io;
        }
        nlohmann::json j;
        try {
          is >> j;
        } catch (const nlohmann::json::exception& e) {
          std::cerr << "error: bad config: " << e.what() << "\n";
          return exit_bad_params;
        }
        const auto merge_str = [&j](CLI::Option* opt, const char* key, std::string& dst) {
          if (opt->count() == 0 && j.contains(key)) dst = j.at(key).get<std::string>();
        };
        const auto merge_int = [&j](CLI::Option* opt, const char* key, int& dst) {
          if (opt->count() == 0 && j.contains(key)) dst = j.at(key).get<int>();
        };
        merge_str(o_grid_a, "grid-a", swp_grid_a);
        merge_str(o_grid_l, "grid-lambda", swp_grid_lambda);
        merge_str(o_mode, "mode", swp_mode);
        merge_str(o_out, "out", swp_out);
        merge_str(o_format, "format", swp_format);
        merge_int(o_threads, "threads", swp_threads);
        merge_int(o_max_iters, "max-iters", swp_max_iters);
        if (j.contains("rel-tol") && app.get_option("--rel-tol")->count() == 0) {
          ctl.rel_tol = j.at("rel-tol").get<double>();
        }
        if (j.contains("abs-tol") && app.get_option("--abs-tol")->count() == 0) {
          ctl.abs_tol = j.at("abs-tol").get<double>();
        }
      }
      rmc::sweep::SweepSpec spec;
      spec.a_values =
          swp_grid_a.empty() ? rmc::sweep::default_grid() : parse_grid(swp_grid_a);
      spec.lambda_values = swp_grid_lambda.empty() ? rmc::sweep::default_grid()
                                                   : parse_grid(swp_grid_lambda);
      spec.mode = rmc::sweep::mode_from_string(swp_mode);
      spec.ctl = ctl;
      spec.max_iters = swp_max_iters;
      spec.threads = swp_threads;
      const auto records = rmc::sweep::run_sweep(spec);
      const std::string out = swp_format == "json" ? rmc::sweep::to_json(records)
                                                   : rmc::sweep::to_csv(records);
      const int rc = write_output(swp_out, out);
      if (rc != exit_ok) return rc;
      bool any_bad = false;
      bool any_cert_fail = false;
      for (const auto& r : records) {
        if (r.status != "ok") any_bad = true;
        if (spec.mode == rmc::sweep::Mode::certify && r.cert_passed != r.cert_total) {
          any_cert_fail = true;
        }
      }
      if (any_bad) return exit_not_converged;
      if (any_cert_fail) return exit_violation;
      return exit_ok;
    }
  } catch (const rmc::NotConvergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_not_converged;
  } catch (const rmc::NoEventError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_not_converged;
  } catch (const rmc::StepSizeUnderflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_not_converged;
  } catch (const rmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_params;
  }
  return exit_ok;
}
