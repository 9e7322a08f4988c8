#include "rmc/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace rmc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b(5th) - b(4th)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double fac_min = 0.2;
constexpr double fac_max = 5.0;

struct Dense {
  double dt = 0.0;
  std::array<double, 5> cu{};  // u-component interpolation coefficients
  std::array<double, 5> cv{};

  LogState eval(double theta) const noexcept {
    const double t1 = 1.0 - theta;
    return LogState{
        cu[0] + theta * (cu[1] + t1 * (cu[2] + theta * (cu[3] + t1 * cu[4]))),
        cv[0] + theta * (cv[1] + t1 * (cv[2] + theta * (cv[3] + t1 * cv[4]))),
    };
  }
};

struct StepAttempt {
  LogState y5{};
  double err = 0.0;
  Dense dense{};
};

StepAttempt attempt_step(const Params& p, const StepControl& ctl, const LogState& y,
                         double dt) {
  const auto f = [&p](double u, double v) { return log_vector_field(LogState{u, v}, p); };

  const LogDeriv k1 = f(y.u, y.v);
  const LogDeriv k2 = f(y.u + dt * a21 * k1.du, y.v + dt * a21 * k1.dv);
  const LogDeriv k3 = f(y.u + dt * (a31 * k1.du + a32 * k2.du),
                        y.v + dt * (a31 * k1.dv + a32 * k2.dv));
  const LogDeriv k4 = f(y.u + dt * (a41 * k1.du + a42 * k2.du + a43 * k3.du),
                        y.v + dt * (a41 * k1.dv + a42 * k2.dv + a43 * k3.dv));
  const LogDeriv k5 =
      f(y.u + dt * (a51 * k1.du + a52 * k2.du + a53 * k3.du + a54 * k4.du),
        y.v + dt * (a51 * k1.dv + a52 * k2.dv + a53 * k3.dv + a54 * k4.dv));
  const LogDeriv k6 =
      f(y.u + dt * (a61 * k1.du + a62 * k2.du + a63 * k3.du + a64 * k4.du + a65 * k5.du),
        y.v + dt * (a61 * k1.dv + a62 * k2.dv + a63 * k3.dv + a64 * k4.dv + a65 * k5.dv));

  const double du5 = dt * (b1 * k1.du + b3 * k3.du + b4 * k4.du + b5 * k5.du + b6 * k6.du);
  const double dv5 = dt * (b1 * k1.dv + b3 * k3.dv + b4 * k4.dv + b5 * k5.dv + b6 * k6.dv);
  const LogState y5{y.u + du5, y.v + dv5};
  const LogDeriv k7 = f(y5.u, y5.v);

  const double eu =
      dt * (e1 * k1.du + e3 * k3.du + e4 * k4.du + e5 * k5.du + e6 * k6.du + e7 * k7.du);
  const double ev =
      dt * (e1 * k1.dv + e3 * k3.dv + e4 * k4.dv + e5 * k5.dv + e6 * k6.dv + e7 * k7.dv);

  const double sc_u = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y.u), std::abs(y5.u));
  const double sc_v = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y.v), std::abs(y5.v));
  const double ru = eu / sc_u;
  const double rv = ev / sc_v;

  StepAttempt out;
  out.y5 = y5;
  out.err = std::sqrt(0.5 * (ru * ru + rv * rv));
  out.dense.dt = dt;
  out.dense.cu = {y.u, du5, dt * k1.du - du5, du5 - dt * k7.du - (dt * k1.du - du5),
                  dt * (d1 * k1.du + d3 * k3.du + d4 * k4.du + d5 * k5.du + d6 * k6.du +
                        d7 * k7.du)};
  out.dense.cv = {y.v, dv5, dt * k1.dv - dv5, dv5 - dt * k7.dv - (dt * k1.dv - dv5),
                  dt * (d1 * k1.dv + d3 * k3.dv + d4 * k4.dv + d5 * k5.dv + d6 * k6.dv +
                        d7 * k7.dv)};
  return out;
}

double next_dt(const StepControl& ctl, double dt, double err) {
  double fac = fac_max;
  if (err > 0.0) fac = std::clamp(ctl.safety * std::pow(err, -0.2), fac_min, fac_max);
  return std::clamp(dt * fac, ctl.dt_min, ctl.dt_max);
}

// Drives adaptive stepping from (y, t=0) until t_end or until the callback
// asks to stop. cb(t_before, dense, y_new, n_accepted) -> keep_going.
template <typename Cb>
void drive(const Params& p, const StepControl& ctl, LogState y, double t_end,
           double& dt_hint, Cb&& cb) {
  double t = 0.0;
  double dt = std::clamp(dt_hint, ctl.dt_min, ctl.dt_max);
  long n_acc = 0;
  while (t < t_end) {
    const bool clamped = dt > t_end - t;
    if (clamped) dt = t_end - t;
    const StepAttempt at = attempt_step(p, ctl, y, dt);
    if (at.err > 1.0) {
      if (dt <= ctl.dt_min * (1.0 + 1e-12)) {
        throw StepSizeUnderflowError("step size underflow at tau = " + std::to_string(t));
      }
      dt = std::max(dt * std::max(0.1, ctl.safety * std::pow(at.err, -0.2)), ctl.dt_min);
      continue;
    }
    ++n_acc;
    const double t_before = t;
    t = clamped ? t_end : t + dt;
    const double dt_taken = dt;
    dt = next_dt(ctl, dt_taken, at.err);
    dt_hint = dt;
    if (!cb(t_before, dt_taken, at.dense, at.y5, n_acc)) return;
    y = at.y5;
  }
}

bool crossed(double g0, double g1, int direction) noexcept {
  return direction > 0 ? (g0 < 0.0 && g1 >= 0.0) : (g0 > 0.0 && g1 <= 0.0);
}

}  // namespace

void StepControl::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(event_tol > 0.0)) {
    throw OutOfRangeError("tolerances must be positive");
  }
  if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max)) {
    throw OutOfRangeError("require 0 < dt_min <= dt_init <= dt_max");
  }
  if (!(safety > 0.0 && safety < 1.0)) {
    throw OutOfRangeError("safety factor must lie in (0, 1)");
  }
}

EventSpec EventSpec::cross_s(double level, int direction) {
  if (!(level > 0.0)) throw OutOfRangeError("event level must be positive");
  if (direction != 1 && direction != -1) throw OutOfRangeError("direction must be +-1");
  return EventSpec{Kind::cross_s, level, direction};
}

EventSpec EventSpec::cross_x(double level, int direction) {
  if (!(level > 0.0)) throw OutOfRangeError("event level must be positive");
  if (direction != 1 && direction != -1) throw OutOfRangeError("direction must be +-1");
  return EventSpec{Kind::cross_x, level, direction};
}

EventSpec EventSpec::cross_isocline_h(int direction) {
  if (direction != 1 && direction != -1) throw OutOfRangeError("direction must be +-1");
  return EventSpec{Kind::cross_isocline_h, 1.0, direction};
}

Integrator::Integrator(const Params& p, const StepControl& ctl) : p_(p), ctl_(ctl) {
  ctl_.validate();
  dt_hint_ = ctl_.dt_init;
}

StepResult Integrator::step(const LogState& ls, double dt) const {
  if (!(dt >= ctl_.dt_min && dt <= ctl_.dt_max)) {
    throw OutOfRangeError("dt outside [dt_min, dt_max]");
  }
  const StepAttempt at = attempt_step(p_, ctl_, ls, dt);
  if (at.err > 1.0 && dt <= ctl_.dt_min * (1.0 + 1e-12)) {
    throw StepSizeUnderflowError("step unacceptable at dt_min");
  }
  return StepResult{at.y5, next_dt(ctl_, dt, at.err), at.err};
}

EventHit Integrator::integrate_until_event(const LogState& ls, const EventSpec& ev,
                                           double tau_max) {
  if (!(tau_max > 0.0)) throw OutOfRangeError("tau_max must be positive");

  const double a = p_.a();
  const double ln_level =
      ev.kind == EventSpec::Kind::cross_isocline_h ? 0.0 : std::log(ev.level);
  const auto g_of = [a, ln_level, kind = ev.kind](const LogState& y) {
    switch (kind) {
      case EventSpec::Kind::cross_s:
        return y.v - ln_level;
      case EventSpec::Kind::cross_x:
        return y.u - ln_level;
      case EventSpec::Kind::cross_isocline_h: {
        const double s = std::exp(y.v);
        const double h = isocline_h(s, a);
        return h > 0.0 ? y.u - std::log(h)
                       : std::numeric_limits<double>::infinity();
      }
    }
    return 0.0;
  };

  const double arm_eps = 10.0 * ctl_.event_tol;
  const double tau_arm = 10.0 * ctl_.dt_min;
  double g_prev = g_of(ls);
  bool armed = std::abs(g_prev) > arm_eps;

  EventHit hit;
  bool found = false;
  drive(p_, ctl_, ls, tau_max, dt_hint_,
        [&](double t0, double dt, const Dense& dense, const LogState& y_new, long n_acc) {
          const double g_new = g_of(y_new);
          if (!armed) {
            if (std::abs(g_new) > arm_eps && t0 + dt > tau_arm) armed = true;
            g_prev = g_new;
            return true;
          }
          if (!crossed(g_prev, g_new, ev.direction)) {
            g_prev = g_new;
            return true;
          }
          // Localize on dense output by bisection in theta.
          double lo = 0.0, hi = 1.0;
          double glo = g_prev;
          double theta = 1.0;
          LogState best = y_new;
          double g_best = g_new;
          for (int i = 0; i < 160 && std::abs(g_best) > ctl_.event_tol; ++i) {
            const double mid = 0.5 * (lo + hi);
            const LogState ym = dense.eval(mid);
            const double gm = g_of(ym);
            if (std::abs(gm) < std::abs(g_best)) {
              g_best = gm;
              best = ym;
              theta = mid;
            }
            if ((gm < 0.0) == (glo < 0.0)) {
              lo = mid;
              glo = gm;
            } else {
              hi = mid;
            }
          }
          hit.state = best;
          hit.time = t0 + theta * dt;
          hit.n_steps = n_acc;
          hit.converged = std::abs(g_best) <= ctl_.event_tol;
          found = true;
          return false;
        });
  if (!found) {
    throw NoEventError("no event before tau_max = " + std::to_string(tau_max));
  }
  return hit;
}

LogState Integrator::integrate_for(const LogState& ls, double duration) {
  if (duration == 0.0) return ls;
  if (!(duration > 0.0)) throw OutOfRangeError("duration must be non-negative");
  LogState out = ls;
  drive(p_, ctl_, ls, duration, dt_hint_,
        [&out](double, double, const Dense&, const LogState& y_new, long) {
          out = y_new;
          return true;
        });
  return out;
}

std::vector<std::pair<double, LogState>> Integrator::trace(const LogState& ls,
                                                           double duration,
                                                           std::size_t max_points) {
  if (duration < 0.0) throw OutOfRangeError("duration must be non-negative");
  std::vector<std::pair<double, LogState>> pts;
  pts.emplace_back(0.0, ls);
  if (duration > 0.0) {
    drive(p_, ctl_, ls, duration, dt_hint_,
          [&pts](double t0, double dt, const Dense&, const LogState& y_new, long) {
            pts.emplace_back(t0 + dt, y_new);
            return true;
          });
  }
  if (max_points >= 2 && pts.size() > max_points) {
    std::vector<std::pair<double, LogState>> dec;
    dec.reserve(max_points);
    const std::size_t n = pts.size();
    const std::size_t stride = (n - 1 + max_points - 2) / (max_points - 1);
    for (std::size_t i = 0; i + 1 < n; i += stride) dec.push_back(pts[i]);
    dec.push_back(pts.back());
    pts.swap(dec);
  }
  return pts;
}

}  // namespace rmc
