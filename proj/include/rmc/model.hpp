#pragma once

#include "rmc/errors.hpp"

namespace rmc {

/// Scaled parameter pair of the predator-prey system
///
///   ds/dtau = (h(s) - x) s,   h(s) = (1 - s)(s + a),
///   dx/dtau = (s - lambda) x,
///
/// restricted to 0 < a < 0.1 and 0 < lambda < 0.1, the range on which the
/// system has a unique attracting limit cycle surrounding its positive
/// equilibrium.
class Params {
 public:
  Params(double a, double lambda);  // throws OutOfRangeError outside (0, 0.1)

  double a() const noexcept { return a_; }
  double lambda() const noexcept { return lambda_; }

 private:
  double a_;
  double lambda_;
};

/// Parameters of the system in standard (unscaled) form:
///   dS/dt = r S (1 - S/K) - q X S / (H + S)
///   dX/dt = p X S / (H + S) - d X
struct StandardParams {
  double r;  // prey intrinsic growth rate
  double K;  // prey carrying capacity
  double q;  // maximal consumption rate
  double H;  // half-saturation prey level
  double p;  // conversion efficiency
  double d;  // predator death rate

  void validate() const;  // all fields strictly positive
};

/// Phase point in linear coordinates; the open positive quadrant is invariant.
struct State {
  double x;  // predator density
  double s;  // prey density
};

/// Phase point in log coordinates, u = ln x, v = ln s. All integration happens
/// here: linear coordinates underflow long before the cycle's minima are
/// reached, log coordinates keep every quantity O(100).
struct LogState {
  double u;
  double v;

  static LogState from(const State& st);
  State to_state() const;
};

enum class Region {
  r1,             // x > h(s), s > lambda: x grows, s decreases
  r2,             // x > h(s), s < lambda: both decrease
  r3,             // x < h(s), s < lambda: x decreases, s grows
  r4,             // x < h(s), s > lambda: both grow
  on_isocline_h,  // within tolerance of x = h(s)
  on_isocline_s,  // within tolerance of s = lambda
};

/// Prey isocline h(s) = (1 - s)(s + a).
double isocline_h(double s, double a) noexcept;
double isocline_h(double s, const Params& p) noexcept;

struct Deriv {
  double ds;
  double dx;
};

struct LogDeriv {
  double dv;
  double du;
};

Deriv vector_field(const State& st, const Params& p) noexcept;

/// Log-coordinate field: (dv, du) = (h(e^v) - e^u, e^v - lambda), i.e. the
/// linear field divided componentwise by (s, x).
LogDeriv log_vector_field(const LogState& ls, const Params& p) noexcept;

/// Sign-pattern classification. Boundary tags win inside an absolute
/// tolerance band; at the isocline corner the h-tag takes precedence.
/// Diagnostic only, the dynamics never branch on it.
Region classify_region(const State& st, const Params& p, double tol = 1e-12) noexcept;

/// Unique positive equilibrium ((1 - lambda)(lambda + a), lambda).
State equilibrium(const Params& p) noexcept;

/// 1 - 2 lambda - a. Positive means the equilibrium is a source and the
/// limit cycle attracts the whole open positive quadrant; zero is the Hopf
/// boundary. Under condition a, lambda < 0.1 this is always >= 0.7.
double hopf_margin(double a, double lambda) noexcept;
double hopf_margin(const Params& p) noexcept;

/// Map standard parameters to the scaled pair a = H/K, lambda = dH/(rK).
/// Requires b = (p - d)/r = 1 within relative 1e-9 (ScalingViolationError)
/// and the result to satisfy condition (0, 0.1) strictly (OutOfRangeError).
Params from_standard(const StandardParams& sp);

}  // namespace rmc
