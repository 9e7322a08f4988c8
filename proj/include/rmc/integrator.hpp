#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rmc/model.hpp"

namespace rmc {

/// Controls for the adaptive embedded 5(4) stepper.
struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 1.0;
  double safety = 0.9;
  double event_tol = 1e-12;  // localization target for event functions

  void validate() const;  // throws OutOfRangeError
};

/// A directed crossing of a section (s or x level, given in linear
/// coordinates) or of the prey isocline x = h(s). Detection works on the sign
/// of the log-space event function, never on differenced linear values:
///   cross_s:           g = v - ln(level)
///   cross_x:           g = u - ln(level)
///   cross_isocline_h:  g = u - ln(h(e^v))   (positive on the x > h(s) side)
/// direction +1 triggers when g crosses zero increasing, -1 decreasing.
struct EventSpec {
  enum class Kind { cross_s, cross_x, cross_isocline_h };

  Kind kind = Kind::cross_s;
  double level = 1.0;
  int direction = +1;

  static EventSpec cross_s(double level, int direction);
  static EventSpec cross_x(double level, int direction);
  static EventSpec cross_isocline_h(int direction);
};

struct EventHit {
  LogState state{};
  double time = 0.0;    // elapsed tau from the start of the search
  long n_steps = 0;     // accepted steps
  bool converged = false;
};

struct StepResult {
  LogState state{};
  double dt_next = 0.0;
  double err_est = 0.0;  // scaled embedded error; <= 1 means acceptable
};

/// Adaptive Dormand-Prince 5(4) integration of the log-coordinate field with
/// dense output for event localization. An instance owns its step-size hint
/// and is confined to one thread; distinct instances run concurrently.
class Integrator {
 public:
  Integrator(const Params& p, const StepControl& ctl);

  /// One embedded attempt with the given dt (no retry). Throws
  /// StepSizeUnderflowError if the step is unacceptable and dt is already
  /// at dt_min.
  StepResult step(const LogState& ls, double dt) const;

  /// Integrates until the event function changes sign in the specified
  /// direction, then localizes the crossing on dense output to |g| below
  /// event_tol. A start already on the event surface is ignored until the
  /// trajectory has moved away (direction arming).
  EventHit integrate_until_event(const LogState& ls, const EventSpec& ev, double tau_max);

  /// State after exactly `duration` time units.
  LogState integrate_for(const LogState& ls, double duration);

  /// Accepted-step samples over `duration`, strictly increasing in tau,
  /// decimated to at most max_points when max_points > 0.
  std::vector<std::pair<double, LogState>> trace(const LogState& ls, double duration,
                                                 std::size_t max_points = 0);

  const Params& params() const noexcept { return p_; }
  const StepControl& control() const noexcept { return ctl_; }

 private:
  Params p_;
  StepControl ctl_;
  double dt_hint_;
};

}  // namespace rmc
