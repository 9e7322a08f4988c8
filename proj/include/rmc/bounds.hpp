#pragma once

#include "rmc/certificates.hpp"
#include "rmc/cycle.hpp"
#include "rmc/model.hpp"

// Closed-form bound sets for the cycle extrema and bound-vs-measurement
// comparison. Minima are carried as logarithms end to end; linear values are
// only materialized where representable.
namespace rmc::bounds {

struct Interval {
  double lo, hi;
};

/// Bounds for all four cycle extrema. x_max/s_max are linear intervals,
/// the minima are intervals on ln x_min and ln s_min. x_max_used records the
/// x_max value inserted into the exponential bounds (the measured cycle value
/// or the a-priori worst case 1.6).
struct BoundSet {
  Interval x_max;
  Interval s_max;
  Interval ln_x_min;
  Interval ln_s_min;
  double kappa1, kappa2, kappa3;
  double x_max_used;
};

/// x_max in (1, min(1.6, V_g(lambda))), s_max in (0.9, 1),
/// ln x_min in (-x/a, -x/(a kappa1)), ln s_min in (-x/(lambda kappa2),
/// -x/(lambda kappa3)) with x = x_max_used in [1, 1.6].
BoundSet cycle_bounds(const Params& p, double x_max_used);

/// The same bounds rescaled to standard units, X = x rK/q and S = s K;
/// the ln intervals then bound ln X_min and ln S_min.
BoundSet standard_unit_bounds(const StandardParams& sp, double x_max_used = 1.6);

/// Log-space approximations ln x_min ~ -x_max/a, ln s_min ~ -x_max/lambda.
struct LogMinApprox {
  double ln_x_min;
  double ln_s_min;
};

LogMinApprox log_min_approximations(const Params& p, double x_max);

/// Compares a converged cycle against a bound set built with the measured
/// x_max, in log space with relative slack 1e-6, one entry per extremum.
/// The signed margin is relative to max(1, |ln value|).
cert::CertificateReport check_bounds(const LimitCycleSummary& c, const BoundSet& b);

}  // namespace rmc::bounds
