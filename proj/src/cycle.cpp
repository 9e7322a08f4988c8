#include "rmc/cycle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rmc/certificates.hpp"

namespace rmc {

namespace {

constexpr double tau_max_default = 1e7;

LogState section_state(double x, double lambda) {
  return LogState{std::log(x), std::log(lambda)};
}

double one_turn(Integrator& ig, double x, double lambda) {
  const EventSpec ret = EventSpec::cross_s(lambda, -1);
  const EventHit hit = ig.integrate_until_event(section_state(x, lambda), ret,
                                                tau_max_default);
  return std::exp(hit.state.u);
}

}  // namespace

SectionPoint return_map(SectionPoint x0, const Params& p, const StepControl& ctl) {
  if (!(std::isfinite(x0.x)) || !(x0.x > isocline_h(p.lambda(), p.a()))) {
    throw OutOfDomainError("section point must satisfy x > h(lambda)");
  }
  Integrator ig(p, ctl);
  return SectionPoint{one_turn(ig, x0.x, p.lambda())};
}

CycleResult find_cycle_detailed(const Params& p, const StepControl& ctl, int max_iters,
                                double x0) {
  if (!(hopf_margin(p) > 0.0)) {
    throw OutOfRangeError("hopf margin must be positive");
  }
  if (!(x0 > isocline_h(p.lambda(), p.a()))) {
    throw OutOfDomainError("initial section value must satisfy x > h(lambda)");
  }
  const double lambda = p.lambda();
  Integrator ig(p, ctl);

  double x = x0;
  double rel = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < max_iters) {
    const double xn = one_turn(ig, x, lambda);
    ++it;
    rel = std::abs(xn - x) / xn;
    x = xn;
    if (rel < cycle_tol) break;
  }
  if (rel >= cycle_tol) {
    throw NotConvergedError("return map not converged after " +
                                std::to_string(max_iters) + " iterations",
                            max_iters);
  }

  // Instrumented pass around the converged cycle.
  const double c1 = cert::default_c1;
  const double c2 = cert::default_c2;
  CycleCrossings cr;
  cr.x0 = x;

  LogState y = section_state(x, lambda);
  double t = 0.0;
  const auto advance = [&](const EventSpec& ev) {
    const EventHit hit = ig.integrate_until_event(y, ev, tau_max_default);
    y = hit.state;
    t += hit.time;
    return hit;
  };

  EventHit h = advance(EventSpec::cross_s(c1 * lambda, -1));
  cr.x1 = std::exp(h.state.u);
  cr.t1 = t;
  h = advance(EventSpec::cross_s(c2 * lambda, -1));
  cr.x2 = std::exp(h.state.u);
  cr.t2 = t;
  h = advance(EventSpec::cross_isocline_h(-1));
  cr.ln_s3 = h.state.v;
  cr.s3 = std::exp(h.state.v);
  cr.t3 = t;
  h = advance(EventSpec::cross_s(c2 * lambda, +1));
  cr.ln_x4 = h.state.u;
  cr.x4 = std::exp(h.state.u);
  cr.t4 = t;
  h = advance(EventSpec::cross_s(c1 * lambda, +1));
  cr.ln_x5 = h.state.u;
  cr.x5 = std::exp(h.state.u);
  cr.t5 = t;
  h = advance(EventSpec::cross_s(lambda, +1));
  cr.ln_x6 = h.state.u;
  cr.t6 = t;
  h = advance(EventSpec::cross_s(0.8, +1));
  cr.x7 = std::exp(h.state.u);
  cr.t7 = t;
  h = advance(EventSpec::cross_isocline_h(+1));
  cr.s8 = std::exp(h.state.v);
  cr.t8 = t;
  h = advance(EventSpec::cross_s(lambda, -1));
  cr.x_return = std::exp(h.state.u);
  cr.t_return = t;

  CycleResult out;
  out.crossings = cr;
  LimitCycleSummary& c = out.summary;
  c.x_star = x;
  c.x_max = x;
  c.s_max = cr.s8;
  c.ln_x_min = cr.ln_x6;
  c.ln_s_min = cr.ln_s3;
  c.x_min = std::exp(cr.ln_x6);
  c.s_min = std::exp(cr.ln_s3);
  c.period = cr.t_return;
  c.iterations = it;
  c.residual = std::abs(cr.x_return - x) / x;
  return out;
}

LimitCycleSummary find_cycle(const Params& p, const StepControl& ctl, int max_iters,
                             double x0) {
  return find_cycle_detailed(p, ctl, max_iters, x0).summary;
}

TauMeasures tau_measures(const LimitCycleSummary& c, const Params& p) {
  return TauMeasures{-c.x_max / (p.lambda() * c.ln_s_min),
                     -c.x_max / (p.a() * c.ln_x_min)};
}

}  // namespace rmc
