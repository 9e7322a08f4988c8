#include "rmc/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

#include "rmc/bounds.hpp"
#include "rmc/certificates.hpp"
#include "rmc/cycle.hpp"

namespace rmc::sweep {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SweepRecord compute_cell(double a, double lambda, const SweepSpec& spec) {
  SweepRecord r;
  r.a = a;
  r.lambda = lambda;
  r.x_max = r.s_max = r.ln_x_min = r.ln_s_min = nan_v;
  r.tau_s = r.tau_x = r.period = nan_v;
  try {
    const Params p(a, lambda);
    r.xmax_hi_vg = cert::trapping_bound(lambda, a, lambda);
    if (spec.mode == Mode::bounds) {
      const bounds::BoundSet b = bounds::cycle_bounds(p, 1.6);
      r.ln_xmin_lo = b.ln_x_min.lo;
      r.ln_xmin_hi = b.ln_x_min.hi;
      r.ln_smin_lo = b.ln_s_min.lo;
      r.ln_smin_hi = b.ln_s_min.hi;
      r.status = "ok";
      return r;
    }
    const CycleResult cy = find_cycle_detailed(p, spec.ctl, spec.max_iters);
    const LimitCycleSummary& c = cy.summary;
    r.x_max = c.x_max;
    r.s_max = c.s_max;
    r.ln_x_min = c.ln_x_min;
    r.ln_s_min = c.ln_s_min;
    r.period = c.period;
    r.iterations = c.iterations;
    const TauMeasures tm = tau_measures(c, p);
    r.tau_s = tm.tau_s;
    r.tau_x = tm.tau_x;
    const bounds::BoundSet b = bounds::cycle_bounds(p, c.x_max);
    r.ln_xmin_lo = b.ln_x_min.lo;
    r.ln_xmin_hi = b.ln_x_min.hi;
    r.ln_smin_lo = b.ln_s_min.lo;
    r.ln_smin_hi = b.ln_s_min.hi;
    if (spec.mode == Mode::certify) {
      const cert::CertificateReport rep = cert::certify_cycle(c, cy.crossings, p);
      r.cert_passed = rep.passed_count();
      r.cert_total = static_cast<int>(rep.entries.size());
    }
    r.status = "ok";
  } catch (const NotConvergedError&) {
    r.status = "not_converged";
  } catch (const Error&) {
    r.status = "error";
  }
  return r;
}

}  // namespace

Mode mode_from_string(const std::string& s) {
  if (s == "cycle") return Mode::cycle;
  if (s == "bounds") return Mode::bounds;
  if (s == "certify") return Mode::certify;
  if (s == "tau") return Mode::tau;
  throw OutOfRangeError("unknown sweep mode: " + s);
}

const char* to_string(Mode m) noexcept {
  switch (m) {
    case Mode::cycle: return "cycle";
    case Mode::bounds: return "bounds";
    case Mode::certify: return "certify";
    case Mode::tau: return "tau";
  }
  return "cycle";
}

void SweepSpec::validate() const {
  ctl.validate();
  for (const auto* vals : {&a_values, &lambda_values}) {
    if (vals->empty()) throw OutOfRangeError("sweep value list must be non-empty");
    double prev = 0.0;
    for (double v : *vals) {
      if (!(v > 0.0 && v < 0.1)) {
        throw OutOfRangeError("sweep value " + std::to_string(v) + " outside (0, 0.1)");
      }
      if (!(v > prev)) throw OutOfRangeError("sweep values must be strictly increasing");
      prev = v;
    }
  }
  if (max_iters < 1) throw OutOfRangeError("max_iters must be at least 1");
  if (threads < 1) throw OutOfRangeError("threads must be at least 1");
}

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(0.01 * i);
  g.push_back(0.099);
  return g;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t na = spec.a_values.size();
  const std::size_t nl = spec.lambda_values.size();
  const std::size_t n = na * nl;
  std::vector<SweepRecord> records(n);

  const auto work = [&](std::size_t idx) {
    const double a = spec.a_values[idx / nl];
    const double lambda = spec.lambda_values[idx % nl];
    records[idx] = compute_cell(a, lambda, spec);
  };

  const int threads = std::min<int>(spec.threads, static_cast<int>(n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
  std::string out = csv_header;
  out += '\n';
  for (const SweepRecord& r : records) {
    out += fmt17(r.a) + ',' + fmt17(r.lambda) + ',' + r.status + ',' + fmt17(r.x_max) +
           ',' + fmt17(r.s_max) + ',' + fmt17(r.ln_x_min) + ',' + fmt17(r.ln_s_min) +
           ',' + fmt17(r.tau_s) + ',' + fmt17(r.tau_x) + ',' + fmt17(r.period) + ',' +
           std::to_string(r.iterations) + ',' + fmt17(r.ln_xmin_lo) + ',' +
           fmt17(r.ln_xmin_hi) + ',' + fmt17(r.ln_smin_lo) + ',' + fmt17(r.ln_smin_hi) +
           ',' + fmt17(r.xmax_hi_vg) + ',' + std::to_string(r.cert_passed) + ',' +
           std::to_string(r.cert_total) + '\n';
  }
  return out;
}

std::string to_json(const std::vector<SweepRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRecord& r : records) {
    arr.push_back({{"a", r.a},
                   {"lambda", r.lambda},
                   {"status", r.status},
                   {"x_max", r.x_max},
                   {"s_max", r.s_max},
                   {"ln_x_min", r.ln_x_min},
                   {"ln_s_min", r.ln_s_min},
                   {"tau_s", r.tau_s},
                   {"tau_x", r.tau_x},
                   {"period", r.period},
                   {"iterations", r.iterations},
                   {"ln_xmin_lo", r.ln_xmin_lo},
                   {"ln_xmin_hi", r.ln_xmin_hi},
                   {"ln_smin_lo", r.ln_smin_lo},
                   {"ln_smin_hi", r.ln_smin_hi},
                   {"xmax_hi_vg", r.xmax_hi_vg},
                   {"cert_passed", r.cert_passed},
                   {"cert_total", r.cert_total}});
  }
  return arr.dump(2);
}

}  // namespace rmc::sweep
