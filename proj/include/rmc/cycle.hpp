#pragma once

#include "rmc/integrator.hpp"
#include "rmc/model.hpp"

namespace rmc {

/// Relative tolerance on the Poincare section value for cycle convergence.
inline constexpr double cycle_tol = 1e-9;

/// Point on the Poincare section s = lambda, on the branch with s decreasing
/// and x > h(lambda).
struct SectionPoint {
  double x;
};

/// Converged limit cycle. Linear x_min/s_min may underflow to 0 for small
/// parameters; the ln fields are authoritative.
struct LimitCycleSummary {
  double x_max = 0.0;
  double s_max = 0.0;
  double x_min = 0.0;
  double s_min = 0.0;
  double ln_x_min = 0.0;
  double ln_s_min = 0.0;
  double period = 0.0;
  double x_star = 0.0;  // converged section value (equals x_max)
  int iterations = 0;
  double residual = 0.0;
};

/// Section and isocline crossings recorded along one instrumented cycle pass,
/// in visit order: descending crossings of s = c1*lambda and s = c2*lambda,
/// the minimal-prey isocline crossing, ascending re-crossings, the
/// minimal-predator section crossing, the s = 0.8 ascent, the maximal-prey
/// isocline crossing, and the return to the section.
struct CycleCrossings {
  double x0 = 0.0;  // section start (= x_max)
  double x1 = 0.0;
  double x2 = 0.0;
  double s3 = 0.0;
  double ln_s3 = 0.0;
  double x4 = 0.0;
  double ln_x4 = 0.0;
  double x5 = 0.0;
  double ln_x5 = 0.0;
  double ln_x6 = 0.0;
  double x7 = 0.0;
  double s8 = 0.0;
  double x_return = 0.0;
  // elapsed tau from the section start
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0, t6 = 0.0, t7 = 0.0,
         t8 = 0.0, t_return = 0.0;
};

struct CycleResult {
  LimitCycleSummary summary;
  CycleCrossings crossings;
};

/// Multiplicative correction factors measuring how closely the cycle minima
/// follow exp(-x_max/lambda) and exp(-x_max/a).
struct TauMeasures {
  double tau_s = 0.0;
  double tau_x = 0.0;
};

/// One turn of the return map at the section s = lambda: integrates from
/// (x0, lambda) around the cycle to the next crossing of s = lambda with s
/// decreasing, and returns the x-value there. Requires x0.x > h(lambda).
SectionPoint return_map(SectionPoint x0, const Params& p, const StepControl& ctl);

/// Iterates the return map from x0 until the section value settles to
/// cycle_tol, then runs one instrumented pass recording all crossings and the
/// extrema (x extrema on s = lambda, s extrema on x = h(s), where the
/// respective derivatives change sign).
CycleResult find_cycle_detailed(const Params& p, const StepControl& ctl,
                                int max_iters = 200, double x0 = 1.3);

LimitCycleSummary find_cycle(const Params& p, const StepControl& ctl,
                             int max_iters = 200, double x0 = 1.3);

/// tau_s = -x_max / (lambda ln s_min), tau_x = -x_max / (a ln x_min),
/// computed from the ln fields.
TauMeasures tau_measures(const LimitCycleSummary& c, const Params& p);

}  // namespace rmc
