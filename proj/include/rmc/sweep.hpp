#pragma once

#include <string>
#include <vector>

#include "rmc/integrator.hpp"
#include "rmc/model.hpp"

// Parameter sweeps over (a, lambda) grids with per-cell cycle computation,
// bound evaluation and optional certification. Cells are independent pure
// computations; results are gathered by cell index so the output order is
// row-major (a outer, lambda inner) regardless of execution order.
namespace rmc::sweep {

enum class Mode { cycle, bounds, certify, tau };

Mode mode_from_string(const std::string& s);
const char* to_string(Mode m) noexcept;

struct SweepSpec {
  std::vector<double> a_values;
  std::vector<double> lambda_values;
  Mode mode = Mode::cycle;
  StepControl ctl{};
  int max_iters = 200;
  int threads = 1;

  void validate() const;  // lists non-empty, strictly increasing, inside (0, 0.1)
};

struct SweepRecord {
  double a = 0.0;
  double lambda = 0.0;
  std::string status;  // ok | not_converged | error
  double x_max = 0.0, s_max = 0.0, ln_x_min = 0.0, ln_s_min = 0.0;
  double tau_s = 0.0, tau_x = 0.0;
  double period = 0.0;
  int iterations = 0;
  double ln_xmin_lo = 0.0, ln_xmin_hi = 0.0, ln_smin_lo = 0.0, ln_smin_hi = 0.0;
  double xmax_hi_vg = 0.0;
  int cert_passed = 0;
  int cert_total = 0;
};

/// Default grid: a, lambda in {0.01, ..., 0.09, 0.099}.
std::vector<double> default_grid();

std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

inline constexpr char csv_header[] =
    "a,lambda,status,x_max,s_max,ln_x_min,ln_s_min,tau_s,tau_x,period,iterations,"
    "ln_xmin_lo,ln_xmin_hi,ln_smin_lo,ln_smin_hi,xmax_hi_vg,cert_passed,cert_total";

/// CSV with the exact header above; floating values printed with 17
/// significant digits so repeated runs are byte-identical and round-trip.
std::string to_csv(const std::vector<SweepRecord>& records);

std::string to_json(const std::vector<SweepRecord>& records);

}  // namespace rmc::sweep
